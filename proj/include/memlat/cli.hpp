#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "memlat/verify.hpp"

namespace memlat::cli {

// Exit-code contract.
inline constexpr int kOk = 0;
inline constexpr int kVerifyFailed = 1;
inline constexpr int kParseError = 2;
inline constexpr int kInvalidInput = 3;
inline constexpr int kNoSteadyState = 4;

/// Model rates as JSON (rad/s and /2pi). Writes to out_path when given.
int cmd_derive(const std::string& config_path, const std::optional<std::string>& out_path,
               std::ostream& out, std::ostream& err);

/// Steady-state occupations and cooling factor; with `analytic` also the
/// weak-coupling formulas and their deviation from the exact result.
int cmd_steady(const std::string& config_path, bool analytic, std::ostream& out,
               std::ostream& err);

/// Occupation trace t,n_at,n_m from the "evolve" block of the config.
int cmd_evolve(const std::string& config_path, const std::optional<std::string>& out_path,
               std::ostream& out, std::ostream& err);

/// (g, gamma_cool) grid as CSV.
int cmd_sweep(const std::string& spec_path, const std::optional<std::string>& out_path,
              std::ostream& out, std::ostream& err);

/// Property suite; prints a table and a JSON summary; exit 0 iff all pass.
int cmd_verify(const VerifyOptions& options, bool json_output, std::ostream& out,
               std::ostream& err);

/// Argument parsing and dispatch for the memlat executable.
int run(int argc, char** argv);

}  // namespace memlat::cli
