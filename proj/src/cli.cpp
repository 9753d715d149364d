#include "memlat/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "memlat/analytic.hpp"
#include "memlat/config.hpp"
#include "memlat/constants.hpp"
#include "memlat/errors.hpp"
#include "memlat/gaussian.hpp"
#include "memlat/sweep.hpp"

namespace memlat::cli {

namespace {

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return kParseError;
    case ErrorCode::NotHurwitz: return kNoSteadyState;
    default: return kInvalidInput;
  }
}

// Runs body, mapping library errors to the exit-code contract.
template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const json::exception& e) {
    err << "error: ParseError: " << e.what() << "\n";
    return kParseError;
  }
}

void emit(const std::string& text, const std::optional<std::string>& out_path, std::ostream& out) {
  if (!out_path) {
    out << text;
    return;
  }
  std::ofstream file(*out_path);
  if (!file) throw Error(ErrorCode::InvalidInput, "cannot write " + *out_path);
  file << text;
}

json matrix_json(const Matrix4& m) {
  json rows = json::array();
  for (int i = 0; i < 4; ++i) {
    json row = json::array();
    for (int j = 0; j < 4; ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

int cmd_derive(const std::string& config_path, const std::optional<std::string>& out_path,
               std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const json config = read_json_file(config_path);
    const PhysicalParams phys = parse_physical(config);
    const ModelParams model = load_model(config);
    json report = to_json(model);
    report["physical"] = to_json(phys);
    report["warnings"] = warnings(phys);
    emit(report.dump(2) + "\n", out_path, out);
    return kOk;
  });
}

int cmd_steady(const std::string& config_path, bool analytic, std::ostream& out,
               std::ostream& err) {
  return guarded(err, [&] {
    const json config = read_json_file(config_path);
    const ModelParams model = load_model(config);
    const DriftDiffusion dd = build_drift_diffusion(model);
    const CoolingResult cooling = cooling_factor(model);

    json report;
    report["nbar"] = model.nbar;
    report["nbar_ss"] = cooling.nbar_ss;
    report["f"] = cooling.factor;
    report["n_at_ss"] = occupation(cooling.state, Mode::Atom);
    report["covariance"] = matrix_json(cooling.state.cov);
    report["quadrature_order"] = {"x_at", "p_at", "x_m", "p_m"};
    report["lyapunov_residual"] = lyapunov_residual(dd, cooling.state.cov);
    report["uncertainty_min_eigenvalue"] = uncertainty_min_eigenvalue(cooling.state);
    const double cp_margin = complete_positivity_margin(dd);
    report["complete_positivity_margin"] = cp_margin;
    report["model"] = to_json(model)["model"];
    json notes = json::array();
    if (cp_margin < 0.0) {
      std::ostringstream os;
      os << "generator is not completely positive (margin " << cp_margin
         << "); diffusion is too weak for the nonreciprocal coupling and the steady state "
            "may violate the uncertainty relation";
      notes.push_back(os.str());
      err << "warning: " << os.str() << "\n";
    }
    report["warnings"] = notes;

    if (analytic) {
      const ComparisonReport cmp = compare_with_exact(model);
      report["weak_coupling"] = {
          {"Gamma_m", cmp.analytic.gamma_eff},
          {"Gamma_m_over_2pi", cmp.analytic.gamma_eff / constants::two_pi},
          {"nbar_ss", cmp.analytic.nbar_ss},
          {"validity_gamma_cool_over_g", cmp.analytic.validity},
          {"nbar_ss_exact", cmp.nbar_ss_exact},
          {"nbar_ss_rel_error", cmp.nbar_ss_rel_error},
          {"Gamma_fit", cmp.gamma_fit},
          {"Gamma_rel_error", cmp.gamma_rel_error},
          {"out_of_regime", cmp.out_of_regime},
          {"warnings", cmp.warnings},
      };
      for (const auto& w : cmp.warnings) err << "warning: " << w << "\n";
    }
    out << report.dump(2) << "\n";
    return kOk;
  });
}

int cmd_evolve(const std::string& config_path, const std::optional<std::string>& out_path,
               std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const json config = read_json_file(config_path);
    const ModelParams model = load_model(config);
    if (!config.contains("evolve") || !config.at("evolve").is_object()) {
      throw Error(ErrorCode::ParseError, "config needs an \"evolve\" object");
    }
    const json& ev = config.at("evolve");
    const DriftDiffusion dd = build_drift_diffusion(model);
    const double t = parse_quantity(ev.at("t"), Dimension::Time, "evolve.t");
    const double dt = ev.contains("dt") ? parse_quantity(ev.at("dt"), Dimension::Time, "evolve.dt")
                                        : max_stable_step(dd);
    const int samples = ev.value("samples", 201);
    double n_at0 = 0.0;
    double n_m0 = model.nbar;
    if (ev.contains("initial")) {
      n_at0 = ev.at("initial").value("n_at", n_at0);
      n_m0 = ev.at("initial").value("n_m", n_m0);
    }

    const auto trace = evolve_trace(dd, GaussianState::thermal(n_at0, n_m0), t, dt, samples);
    std::string csv = "t,n_at,n_m\n";
    char buf[128];
    for (const auto& s : trace) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", s.t, s.n_at, s.n_m);
      csv += buf;
    }
    emit(csv, out_path, out);
    return kOk;
  });
}

int cmd_sweep(const std::string& spec_path, const std::optional<std::string>& out_path,
              std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const SweepSpec spec = parse_sweep_spec(read_json_file(spec_path));
    const SweepResult result = run_sweep(spec, threads_from_env());
    emit(to_csv(result), out_path, out);
    return kOk;
  });
}

int cmd_verify(const VerifyOptions& options, bool json_output, std::ostream& out,
               std::ostream& err) {
  return guarded(err, [&] {
    const auto results = run_verification(options);
    bool all = true;
    json summary = json::array();
    for (const auto& r : results) {
      all = all && r.passed;
      if (json_output) {
        summary.push_back({{"check", r.name}, {"passed", r.passed}, {"detail", r.detail},
                           {"seconds", r.seconds}});
      } else {
        char line[512];
        std::snprintf(line, sizeof line, "%-4s %-36s %8.3fs  %s\n", r.passed ? "PASS" : "FAIL",
                      r.name.c_str(), r.seconds, r.detail.c_str());
        out << line;
      }
    }
    if (json_output) {
      out << json{{"passed", all}, {"checks", summary}}.dump(2) << "\n";
    } else {
      out << (all ? "all checks passed\n" : "some checks FAILED\n");
    }
    return all ? kOk : kVerifyFailed;
  });
}

int run(int argc, char** argv) {
  CLI::App app{"Atom-membrane sympathetic cooling toolkit"};
  app.require_subcommand(1);

  std::string path;
  std::optional<std::string> out_path;
  bool analytic = false;
  bool json_output = false;
  VerifyOptions verify_options;
  std::vector<int> fock_dims;

  auto* derive = app.add_subcommand("derive", "Derive master-equation rates from a config");
  derive->add_option("config", path, "JSON config")->required();
  derive->add_option("-o,--out", out_path, "Write JSON here instead of stdout");

  auto* steady = app.add_subcommand("steady", "Steady-state occupation and cooling factor");
  steady->add_option("config", path, "JSON config")->required();
  steady->add_flag("--analytic", analytic, "Add weak-coupling formulas and deviations");

  auto* evolve = app.add_subcommand("evolve", "Occupation trace t,n_at,n_m as CSV");
  evolve->add_option("config", path, "JSON config with an \"evolve\" block")->required();
  evolve->add_option("-o,--out", out_path, "Write CSV here instead of stdout");

  auto* sweep = app.add_subcommand("sweep", "(g, gamma_cool) cooling-factor grid as CSV");
  sweep->add_option("spec", path, "JSON sweep spec")->required();
  sweep->add_option("-o,--out", out_path, "Write CSV here instead of stdout");

  auto* verify = app.add_subcommand("verify", "Run the property suite");
  verify->add_flag("--json", json_output, "JSON summary instead of a table");
  verify->add_option("--inject-cascade-fault", verify_options.cascade_fault,
                     "Relative error injected into the cascaded weight of the equivalence target");
  verify->add_option("--fock-dims", fock_dims, "Extra truncation n_at n_m for the equivalence check")
      ->expected(2);
  verify->add_option("--draws", verify_options.random_draws, "Random parameter draws per check");
  verify->add_option("--seed", verify_options.seed, "Seed for the random draws");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParseError;
  }

  if (*derive) return cmd_derive(path, out_path, std::cout, std::cerr);
  if (*steady) return cmd_steady(path, analytic, std::cout, std::cerr);
  if (*evolve) return cmd_evolve(path, out_path, std::cout, std::cerr);
  if (*sweep) return cmd_sweep(path, out_path, std::cout, std::cerr);
  if (fock_dims.size() == 2) {
    FockConfig cfg;
    cfg.n_at = fock_dims[0];
    cfg.n_m = fock_dims[1];
    verify_options.extra_dims = cfg;
  }
  return cmd_verify(verify_options, json_output, std::cout, std::cerr);
}

}  // namespace memlat::cli
