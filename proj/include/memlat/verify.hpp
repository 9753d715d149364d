#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "memlat/fock.hpp"
#include "memlat/gaussian.hpp"
#include "memlat/params.hpp"

namespace memlat {

/// Random laboratory parameters over a broad experimentally plausible box
/// (cold alkali atoms, dielectric membranes, 0.1-300 K). Half of the draws
/// pin the trap frequency to the membrane frequency.
PhysicalParams random_physical(std::mt19937_64& rng);

/// Rescaled instances for the Fock/Gaussian cross-check: omega_m = 1, every
/// rate <= omega_m / 5, nbar <= 2, each with a Fock truncation that passes
/// the leak gate.
struct OracleInstance {
  std::string name;
  ModelParams model;
  FockConfig config;
};

std::vector<OracleInstance> oracle_instances();

struct OracleComparison {
  double occupation_at_fock = 0.0, occupation_at_gauss = 0.0;
  double occupation_m_fock = 0.0, occupation_m_gauss = 0.0;
  double occupation_rel_error = 0.0;  // worst of the two modes
  double covariance_error = 0.0;      // max |d sigma_ij| / max |sigma_ij|
  double convergence_change = 0.0;    // occupation change at 1.5x truncation
  double min_eigenvalue = 0.0;        // of the Fock steady state
  double seconds = 0.0;
};

/// Steady state by both solvers plus the truncation-convergence gate.
OracleComparison compare_oracle(const OracleInstance& instance);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  /// Relative perturbation of the cascaded weight in the master-equation
  /// target of the equivalence check (fault injection; 0 = pristine).
  double cascade_fault = 0.0;
  /// Extra truncation for the equivalence check; may exceed the cap.
  std::optional<FockConfig> extra_dims;
  int random_draws = 20;
  std::uint64_t seed = 20090607;
};

/// Property suite: parameter identities, Lyapunov/uncertainty checks,
/// Fock-vs-Gaussian oracle, generator equivalence, weak-coupling comparison.
/// A failing or throwing check is recorded and the suite continues.
std::vector<CheckResult> run_verification(const VerifyOptions& options);

}  // namespace memlat
