// Acceptance suite: one PASS/FAIL line per primary criterion, measured at the
// stated tolerances. Exit status is nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "memlat/analytic.hpp"
#include "memlat/config.hpp"
#include "memlat/errors.hpp"
#include "memlat/gaussian.hpp"
#include "memlat/params.hpp"
#include "memlat/qsse.hpp"
#include "memlat/sweep.hpp"
#include "memlat/verify.hpp"

using namespace memlat;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

bool within(double value, double target, double tol) { return rel(value, target) <= tol; }

bool within_factor(double value, double target, double factor) {
  return value >= target / factor && value <= target * factor;
}

std::filesystem::path config_path(const std::string& name) {
  const char* env = std::getenv("MEMLAT_CONFIG_DIR");
  return std::filesystem::path(env ? env : MEMLAT_DEFAULT_CONFIG_DIR) / name;
}

ModelParams load(const std::string& name) { return load_model(read_json_file(config_path(name))); }

ModelParams resonant_case_study() {
  PhysicalParams p = preset_case_study();
  p.trap_freq_override = p.membrane_freq;
  return derive_full(p);
}

// Mean wall time per call over enough repetitions to resolve microseconds.
template <typename F>
double time_per_call(F&& f, int reps) {
  const auto start = Clock::now();
  for (int i = 0; i < reps; ++i) f();
  return seconds_since(start) / reps;
}

// Increases (weakly) up to a single peak, then decreases (weakly).
bool unimodal(const std::vector<double>& v) {
  std::size_t i = 1;
  while (i < v.size() && v[i] >= v[i - 1]) ++i;
  while (i < v.size() && v[i] <= v[i - 1]) ++i;
  return i >= v.size();
}

struct Criterion {
  std::string name;
  std::function<std::string(bool&)> body;
};

std::string fmt(const char* format, auto... args) {
  char buf[1024];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

std::string parameter_reproduction(bool& passed) {
  PhysicalParams cold = preset_case_study();
  PhysicalParams hot = cold;
  hot.temperature = 295.0;
  const ModelParams m = derive_model(cold);
  const ModelParams m_hot = derive_model(hot);
  const double bath_cold = m.gamma_m * m.nbar;
  const double bath_hot = m_hot.gamma_m * m_hot.nbar;
  const double ratio = m.omega_at / m.omega_m;
  const double per_call = time_per_call([&] { (void)derive_model(cold); }, 10000);

  passed = within(m.g, 4.0e4, 0.05) && within(m.gamma_diff_m, 52.0, 0.05) &&
           within(m.gamma_diff_at, 1.6e4, 0.15) && within(bath_cold, 2.4e4, 0.10) &&
           within(bath_hot, 4.0e6, 0.10) && ratio >= 0.9 && ratio <= 1.1 && per_call < 1e-3;
  return fmt("g %.4g, gamma_m_diff %.4g, gamma_at_diff %.4g, gamma_m*nbar %.4g (2 K) %.4g (295 K), "
             "omega_at/omega_m %.4f, %.2g s/call",
             m.g, m.gamma_diff_m, m.gamma_diff_at, bath_cold, bath_hot, ratio, per_call);
}

std::string cooling_predictions(bool& passed) {
  ModelParams cold = load("case_study.json");
  cold.g = 4.0e4;
  cold.gamma_cool = 2.0e4;
  const ModelParams sub_kelvin = load("case_study_500mK.json");
  const CoolingResult c = cooling_factor(cold);
  const CoolingResult s = cooling_factor(sub_kelvin);
  const double per_point = time_per_call([&] { (void)cooling_factor(cold); }, 1000);

  const bool f_ok = within_factor(c.factor, 2.0e4, 3.0);
  const bool n_ok = std::abs(s.nbar_ss - 0.8) <= 0.25;
  passed = f_ok && n_ok && per_point < 1e-2;
  return fmt("2 K: f = %.4g (target 2e4 within x3: %s); 500 mK: nbar_ss = %.3f "
             "(target 0.8 +- 0.25: %s); %.2g s/point",
             c.factor, f_ok ? "ok" : "no", s.nbar_ss, n_ok ? "ok" : "no", per_point);
}

std::string sweep_reproduction(bool& passed) {
  const SweepSpec spec = parse_sweep_spec(read_json_file(config_path("fig3_sweep.json")));
  const auto start = Clock::now();
  const SweepResult r = run_sweep(spec, threads_from_env());
  const double seconds = seconds_since(start);

  const auto nearest = [](const std::vector<double>& axis, double x) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(axis.size()); ++i) {
      if (std::abs(std::log(axis[i] / x)) < std::abs(std::log(axis[best] / x))) best = i;
    }
    return best;
  };
  const int ig = nearest(spec.g_axis.values(), 4.0e4);
  const int ic = nearest(spec.cool_axis.values(), 2.0e4);
  const SweepRecord& cell = r.at(ig, ic);

  int unimodal_rows = 0, unstable = 0;
  for (int i = 0; i < r.g_points; ++i) {
    std::vector<double> row;
    for (int j = 0; j < r.cool_points; ++j) {
      if (r.at(i, j).ok) row.push_back(r.at(i, j).f);
      else ++unstable;
    }
    if (unimodal(row)) ++unimodal_rows;
  }
  const bool cell_ok = cell.ok && within_factor(cell.f, 1.0e4, 3.0);
  passed = r.g_points == 40 && r.cool_points == 40 && seconds < 5.0 && cell_ok &&
           unimodal_rows == r.g_points;
  return fmt("%dx%d in %.3f s; cell (%.3g, %.3g) f = %.4g; unimodal rows %d/%d; unstable cells %d",
             r.g_points, r.cool_points, seconds, cell.g, cell.gamma_cool, cell.f, unimodal_rows,
             r.g_points, unstable);
}

std::string cross_solver_oracle(bool& passed) {
  const auto instances = oracle_instances();
  passed = instances.size() >= 5;
  std::ostringstream os;
  double worst_occ = 0.0, worst_cov = 0.0, worst_gate = 0.0, slowest = 0.0;
  for (const auto& inst : instances) {
    const ModelParams& m = inst.model;
    const double max_rate = std::max({m.g, m.gamma_cool, m.gamma_m, m.gamma_diff_at, m.gamma_diff_m});
    const bool regime = m.nbar <= 2.0 && max_rate <= m.omega_m / 5.0 + 1e-15 &&
                        inst.config.n_at <= 24 && inst.config.n_m <= 24;
    const OracleComparison c = compare_oracle(inst);
    const bool ok = regime && c.convergence_change < 1e-4 && c.occupation_rel_error <= 1e-3 &&
                    c.covariance_error <= 1e-3 && c.seconds < 60.0;
    passed = passed && ok;
    worst_occ = std::max(worst_occ, c.occupation_rel_error);
    worst_cov = std::max(worst_cov, c.covariance_error);
    worst_gate = std::max(worst_gate, c.convergence_change);
    slowest = std::max(slowest, c.seconds);
    if (!ok) os << "[" << inst.name << " failed] ";
  }
  os << instances.size() << " instances: occupation rel err <= " << worst_occ
     << ", covariance rel err <= " << worst_cov << ", truncation gate change <= " << worst_gate
     << ", slowest " << slowest << " s";
  return os.str();
}

std::string generator_equivalence(bool& passed) {
  const auto start = Clock::now();
  const ModelParams cs = resonant_case_study();
  std::mt19937_64 rng(4242);
  std::vector<ModelParams> draws;
  for (int i = 0; i < 100; ++i) draws.push_back(derive_full(random_physical(rng)));

  double worst = 0.0;
  EquivalenceReport case_report;
  for (const FockConfig cfg : {FockConfig{6, 6}, FockConfig{10, 10}}) {
    const EquivalenceReport rep = verify_equivalence(cs, cfg);
    if (cfg.n_at == 10) case_report = rep;
    worst = std::max(worst, rep.relative_deviation);
    for (const auto& m : draws) {
      worst = std::max(worst, verify_equivalence(m, cfg).relative_deviation);
    }
  }
  const double seconds = seconds_since(start);
  const double asymmetry_error = std::abs(case_report.ito.asymmetry - cs.reflectivity);
  const double diffusion_ratio = case_report.ito.diffusion_at / cs.gamma_diff_at;
  passed = worst <= 1e-10 && seconds < 120.0 && asymmetry_error <= 1e-9 && diffusion_ratio >= 1e2;
  return fmt("max relative deviation %.3g over case study + 100 draws at (6,6),(10,10) in %.1f s; "
             "asymmetry %.6f (r = %.2f); 1D atomic diffusion / gamma_at_diff = %.3g",
             worst, seconds, case_report.ito.asymmetry, cs.reflectivity, diffusion_ratio);
}

std::string weak_coupling_agreement(bool& passed) {
  passed = true;
  std::ostringstream os;
  for (const double ratio : {10.0, 30.0, 50.0}) {
    ModelParams m = resonant_case_study();
    m.gamma_cool = ratio * m.g;
    const ComparisonReport rep = compare_with_exact(m);
    const bool ok = rep.gamma_rel_error <= 0.05 && rep.nbar_ss_rel_error <= 0.05;
    passed = passed && ok;
    os << fmt("%sgamma_cool/g=%g: Gamma %.4g vs fit %.4g (%.1f%%), nbar_ss %.4g vs exact %.4g (%.1f%%)",
              ratio == 10.0 ? "" : "; ", ratio, rep.analytic.gamma_eff, rep.gamma_fit,
              100.0 * rep.gamma_rel_error, rep.analytic.nbar_ss, rep.nbar_ss_exact,
              100.0 * rep.nbar_ss_rel_error);
  }
  return os.str();
}

std::string identity_suite(bool& passed) {
  std::mt19937_64 rng(1337);
  double worst_g = 0.0, worst_rp = 0.0, worst_ratio = 0.0, worst_uncertainty = INFINITY;
  int violations = 0, violations_cp = 0, not_cp = 0, no_steady_state = 0;
  constexpr int kDraws = 1000;
  for (int i = 0; i < kDraws; ++i) {
    const PhysicalParams p = random_physical(rng);
    const ModelParams m = derive_full(p);
    const QsseCouplings& c = *m.qsse;

    // The g identity is stated for a trap pinned to the membrane frequency.
    PhysicalParams pinned = p;
    pinned.trap_freq_override = p.membrane_freq;
    const ModelParams mp = derive_full(pinned);
    worst_g = std::max(worst_g, rel(coupling_from_qsse(*mp.qsse), mp.g));

    worst_rp = std::max(worst_rp, rel(c.g_mR + c.g_mL, m.gamma_diff_m));
    worst_ratio = std::max({worst_ratio,
                            std::abs(c.g_mL * m.reflectivity - c.g_mR * m.transmittivity) / c.g_mR,
                            std::abs(c.g_atL * m.reflectivity - c.g_atR * m.transmittivity) / c.g_atR});

    const DriftDiffusion dd = build_drift_diffusion(m);
    const bool cp = complete_positivity_margin(dd) >= 0.0;
    if (!cp) ++not_cp;
    try {
      const double u = uncertainty_min_eigenvalue(steady_state(dd));
      worst_uncertainty = std::min(worst_uncertainty, u);
      if (u < -1e-10) {
        ++violations;
        if (cp) ++violations_cp;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotHurwitz) throw;
      ++no_steady_state;
    }
  }
  passed = worst_g <= 1e-9 && worst_rp <= 1e-9 && worst_ratio <= 1e-12 && violations == 0 &&
           no_steady_state == 0;
  return fmt("%d draws: g identity %.2g, radiation pressure %.2g, L/R ratio %.2g; uncertainty "
             "violated on %d draws (min eig %.3g), %d of them with a completely positive "
             "generator; %d draws have a negative complete-positivity margin; %d without "
             "steady state",
             kDraws, worst_g, worst_rp, worst_ratio, violations, worst_uncertainty, violations_cp,
             not_cp, no_steady_state);
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"parameter reproduction", parameter_reproduction},
      {"cooling predictions", cooling_predictions},
      {"40x40 cooling-factor sweep", sweep_reproduction},
      {"Fock/Gaussian cross-solver oracle", cross_solver_oracle},
      {"stochastic/master-equation equivalence", generator_equivalence},
      {"weak-coupling agreement", weak_coupling_agreement},
      {"identity suite", identity_suite},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = Clock::now();
    bool passed = false;
    std::string detail;
    try {
      detail = c.body(passed);
    } catch (const std::exception& e) {
      passed = false;
      detail = std::string("threw: ") + e.what();
    }
    if (!passed) ++failures;
    std::printf("%s  %-40s %8.2fs  %s\n", passed ? "PASS" : "FAIL", c.name.c_str(),
                seconds_since(start), detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failures);
  return failures == 0 ? 0 : 1;
}
