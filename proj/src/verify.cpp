#include "memlat/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "memlat/analytic.hpp"
#include "memlat/constants.hpp"
#include "memlat/errors.hpp"
#include "memlat/qsse.hpp"

namespace memlat {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

ModelParams rescaled(double omega_at, double g, double r, double cool, double gamma_m,
                     double nbar, double diff_at, double diff_m) {
  ModelParams m;
  m.omega_m = 1.0;
  m.omega_at = omega_at;
  m.g = g;
  m.set_reflectivity(r);
  m.gamma_cool = cool;
  m.gamma_m = gamma_m;
  m.nbar = nbar;
  m.gamma_diff_at = diff_at;
  m.gamma_diff_m = diff_m;
  return m;
}

ModelParams resonant_case_study() {
  PhysicalParams p = preset_case_study();
  p.trap_freq_override = p.membrane_freq;
  return derive_full(p);
}

CheckResult run_check(const std::string& name, const std::function<std::string(bool&)>& body) {
  CheckResult result;
  result.name = name;
  const auto start = Clock::now();
  try {
    bool passed = false;
    result.detail = body(passed);
    result.passed = passed;
  } catch (const std::exception& e) {
    result.passed = false;
    result.detail = e.what();
  }
  result.seconds = seconds_since(start);
  return result;
}

}  // namespace

PhysicalParams random_physical(std::mt19937_64& rng) {
  using constants::two_pi;
  PhysicalParams p;
  p.laser_wavelength = uniform(rng, 700e-9, 1100e-9);
  p.laser_power = log_uniform(rng, 1e-3, 5e-2);
  p.beam_waist = uniform(rng, 100e-6, 500e-6);
  const double sign = uniform(rng, 0.0, 1.0) < 0.8 ? 1.0 : -1.0;
  p.detuning = sign * two_pi * log_uniform(rng, 5e8, 2e10);
  p.atom_mass = uniform(rng, 1e-26, 2.2e-25);
  p.atom_linewidth = two_pi * log_uniform(rng, 1e6, 4e7);
  p.atom_number = log_uniform(rng, 1e6, 1e9);
  p.membrane_freq = two_pi * log_uniform(rng, 1e5, 5e6);
  p.membrane_mass = log_uniform(rng, 1e-14, 1e-11);
  p.membrane_Q = log_uniform(rng, 1e5, 1e8);
  p.reflectivity = uniform(rng, 0.05, 1.0);
  p.temperature = log_uniform(rng, 0.1, 300.0);
  p.cool_rate = log_uniform(rng, 1e3, 1e6);
  if (uniform(rng, 0.0, 1.0) < 0.5) p.trap_freq_override = p.membrane_freq;
  return p;
}

std::vector<OracleInstance> oracle_instances() {
  // rescaled(omega_at, g, r, gamma_cool, gamma_m, nbar, diff_at, diff_m).
  // Diffusion is large enough that each generator is completely positive.
  return {
      {"resonant r=0.31", rescaled(1.0, 0.08, 0.31, 0.2, 0.1, 0.3, 0.03, 0.03), {10, 14}},
      {"ideal mirror", rescaled(1.05, 0.15, 1.0, 0.2, 0.05, 0.3, 0.02, 0.01), {9, 12}},
      {"strong damping", rescaled(1.0, 0.2, 0.8, 0.2, 0.2, 0.2, 0.02, 0.02), {10, 11}},
      {"one-way r=0", rescaled(1.1, 0.06, 0.0, 0.15, 0.1, 0.1, 0.04, 0.03), {11, 12}},
      {"hot bath nbar=2", rescaled(1.0, 0.15, 0.9, 0.2, 0.005, 2.0, 0.01, 0.005), {10, 12}},
  };
}

OracleComparison compare_oracle(const OracleInstance& instance) {
  const auto start = Clock::now();
  OracleComparison out;

  const GaussianState gauss = steady_state(build_drift_diffusion(instance.model));
  const Liouvillian l = build_liouvillian(instance.model, instance.config);
  const DensityMatrix rho = steady_state_fock(l);
  const GaussianState fock = moments(rho, instance.config);

  out.occupation_at_fock = occupation(rho, instance.config, Mode::Atom);
  out.occupation_m_fock = occupation(rho, instance.config, Mode::Membrane);
  out.occupation_at_gauss = occupation(gauss, Mode::Atom);
  out.occupation_m_gauss = occupation(gauss, Mode::Membrane);
  out.occupation_rel_error = std::max(rel(out.occupation_at_fock, out.occupation_at_gauss),
                                      rel(out.occupation_m_fock, out.occupation_m_gauss));
  out.covariance_error = (fock.cov - gauss.cov).cwiseAbs().maxCoeff() /
                         gauss.cov.cwiseAbs().maxCoeff();

  Eigen::SelfAdjointEigenSolver<DensityMatrix> eig(rho, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = eig.eigenvalues().minCoeff();

  FockConfig bigger = instance.config;
  bigger.n_at = (3 * bigger.n_at + 1) / 2;
  bigger.n_m = (3 * bigger.n_m + 1) / 2;
  const DensityMatrix rho_big = steady_state_fock(build_liouvillian(instance.model, bigger));
  out.convergence_change =
      std::max(std::abs(occupation(rho_big, bigger, Mode::Atom) - out.occupation_at_fock),
               std::abs(occupation(rho_big, bigger, Mode::Membrane) - out.occupation_m_fock));

  out.seconds = seconds_since(start);
  return out;
}

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
  std::vector<CheckResult> results;
  std::mt19937_64 rng(options.seed);

  results.push_back(run_check("params.identities", [&](bool& passed) {
    double worst_g = 0.0, worst_rp = 0.0, worst_ratio = 0.0;
    for (int i = 0; i <= options.random_draws; ++i) {
      PhysicalParams p = i == 0 ? preset_case_study() : random_physical(rng);
      p.trap_freq_override = p.membrane_freq;
      const ModelParams m = derive_full(p);
      const QsseCouplings& c = *m.qsse;
      worst_g = std::max(worst_g, rel(coupling_from_qsse(c), m.g));
      worst_rp = std::max(worst_rp, rel(c.g_mR + c.g_mL, m.gamma_diff_m));
      worst_ratio = std::max({worst_ratio, std::abs(c.g_mL * m.reflectivity - c.g_mR * m.transmittivity) / c.g_mR,
                              std::abs(c.g_atL * m.reflectivity - c.g_atR * m.transmittivity) / c.g_atR});
    }
    passed = worst_g <= 1e-9 && worst_rp <= 1e-9 && worst_ratio <= 1e-12;
    std::ostringstream os;
    os << "g identity " << worst_g << ", radiation pressure " << worst_rp << ", L/R ratio "
       << worst_ratio;
    return os.str();
  }));

  results.push_back(run_check("gaussian.lyapunov", [&](bool& passed) {
    const DriftDiffusion dd = build_drift_diffusion(resonant_case_study());
    const GaussianState kron = steady_state(dd);
    const GaussianState schur = steady_state_schur(dd);
    const double residual = lyapunov_residual(dd, kron.cov) / dd.diffusion.cwiseAbs().maxCoeff();
    const double routes = (kron.cov - schur.cov).cwiseAbs().maxCoeff() / kron.cov.cwiseAbs().maxCoeff();
    const double uncertainty = uncertainty_min_eigenvalue(kron);
    passed = residual <= 1e-10 && routes <= 1e-12 && uncertainty >= -1e-10;
    std::ostringstream os;
    os << "residual " << residual << ", Kronecker vs Schur " << routes
       << ", min eig(sigma + i Omega/2) " << uncertainty;
    return os.str();
  }));

  results.push_back(run_check("fock.drift_extraction", [&](bool& passed) {
    const OracleInstance inst = oracle_instances().front();
    const DriftDiffusion expected = build_drift_diffusion(inst.model);
    const DriftDiffusion extracted = extract_drift_diffusion(build_liouvillian(inst.model, {6, 6}));
    const double err = std::max((expected.drift - extracted.drift).cwiseAbs().maxCoeff(),
                                (expected.diffusion - extracted.diffusion).cwiseAbs().maxCoeff());
    passed = err <= 1e-12;
    return "max |A,D (Fock) - A,D (Gaussian)| = " + std::to_string(err);
  }));

  for (const auto& inst : oracle_instances()) {
    results.push_back(run_check("fock.oracle[" + inst.name + "]", [&](bool& passed) {
      const OracleComparison c = compare_oracle(inst);
      passed = c.occupation_rel_error <= 1e-3 && c.covariance_error <= 1e-3 &&
               c.convergence_change < 1e-4 && c.min_eigenvalue >= -1e-9;
      std::ostringstream os;
      os << "occupation rel err " << c.occupation_rel_error << ", covariance err "
         << c.covariance_error << ", truncation change " << c.convergence_change;
      return os.str();
    }));
  }

  const ModelParams case_study = resonant_case_study();
  LiouvillianOptions fault;
  fault.cascade_scale = 1.0 + options.cascade_fault;

  std::vector<FockConfig> dims = {{6, 6}, {10, 10}};
  if (options.extra_dims) dims.push_back(*options.extra_dims);
  for (const auto& cfg : dims) {
    std::ostringstream name;
    name << "qsse.equivalence(" << cfg.n_at << "," << cfg.n_m << ")";
    results.push_back(run_check(name.str(), [&](bool& passed) {
      const EquivalenceReport rep = verify_equivalence(case_study, cfg, fault);
      double worst = rep.relative_deviation;
      for (int i = 0; i < options.random_draws; ++i) {
        PhysicalParams p = random_physical(rng);
        worst = std::max(worst, verify_equivalence(derive_full(p), cfg, fault).relative_deviation);
      }
      passed = rep.passed && std::abs(rep.ito.asymmetry - case_study.reflectivity) <= 1e-9;
      std::ostringstream os;
      os << "max relative deviation " << worst << ", extracted asymmetry " << rep.ito.asymmetry;
      return os.str();
    }));
  }

  results.push_back(run_check("qsse.operator_identity", [&](bool& passed) {
    const ItoGenerator gen = ito_generator_terms(case_study, {6, 6});
    const double mismatch = deterministic_term_mismatch(gen, *case_study.qsse);
    const double scale = case_study.qsse->g_atL;
    passed = mismatch <= 1e-12 * scale;
    return "|-(1/2) sum c^dag c - stated terms| = " + std::to_string(mismatch);
  }));

  results.push_back(run_check("analytic.weak_coupling", [&](bool& passed) {
    ModelParams m = case_study;
    m.gamma_cool = 50.0 * m.g;
    const ComparisonReport rep = compare_with_exact(m);
    passed = rep.gamma_rel_error < 0.05 && rep.nbar_ss_rel_error < 0.05;
    std::ostringstream os;
    os << "gamma_cool = 50 g: Gamma_m formula " << rep.analytic.gamma_eff << " vs fit "
       << rep.gamma_fit << " (" << 100.0 * rep.gamma_rel_error << "%), nbar_ss formula "
       << rep.analytic.nbar_ss << " vs exact " << rep.nbar_ss_exact << " ("
       << 100.0 * rep.nbar_ss_rel_error << "%)";
    return os.str();
  }));

  return results;
}

}  // namespace memlat
