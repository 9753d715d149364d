#include "memlat/analytic.hpp"

#include <cmath>
#include <sstream>

#include "memlat/errors.hpp"
#include "memlat/gaussian.hpp"

namespace memlat {

namespace {

constexpr int kFitSamples = 200;
constexpr double kFitWindow = 3.0;  // in units of 1 / Gamma_m
constexpr double kRegimeThreshold = 10.0;

}  // namespace

WeakCouplingResult weak_coupling(const ModelParams& m) {
  if (!(m.gamma_cool > 0.0)) {
    throw Error(ErrorCode::ZeroCoolRate, "weak-coupling formulas need gamma_cool > 0");
  }
  WeakCouplingResult wc;
  wc.gamma_eff = m.gamma_m + m.reflectivity * m.g * m.g / (2.0 * m.gamma_cool);
  const double sideband = m.gamma_cool / (4.0 * m.omega_m);
  wc.nbar_ss = m.gamma_m / wc.gamma_eff * m.nbar + sideband * sideband;
  wc.validity = m.g > 0.0 ? m.gamma_cool / m.g : INFINITY;
  return wc;
}

double rate_equation(double n0, const WeakCouplingResult& wc, double t) {
  return wc.nbar_ss + (n0 - wc.nbar_ss) * std::exp(-wc.gamma_eff * t);
}

double fit_decay_rate(std::span<const double> times, std::span<const double> values,
                      double n_ss) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < times.size() && i < values.size(); ++i) {
    const double excess = values[i] - n_ss;
    if (!(excess > 0.0)) continue;
    const double y = std::log(excess);
    sx += times[i];
    sy += y;
    sxx += times[i] * times[i];
    sxy += times[i] * y;
    ++count;
  }
  if (count < 2) {
    throw Error(ErrorCode::InvalidInput, "too few samples above n_ss for a decay fit");
  }
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  return -slope;
}

ComparisonReport compare_with_exact(const ModelParams& m) {
  ComparisonReport report;
  report.analytic = weak_coupling(m);
  if (m.gamma_cool < kRegimeThreshold * m.g) {
    report.out_of_regime = true;
    std::ostringstream os;
    os << "gamma_cool / g = " << m.gamma_cool / m.g << " < " << kRegimeThreshold
       << ": outside the weak-coupling regime";
    report.warnings.push_back(os.str());
  }

  const DriftDiffusion dd = build_drift_diffusion(m);
  const GaussianState ss = steady_state(dd);
  report.nbar_ss_exact = occupation(ss, Mode::Membrane);
  report.nbar_ss_rel_error =
      std::abs(report.analytic.nbar_ss - report.nbar_ss_exact) / report.nbar_ss_exact;

  const double window = kFitWindow / report.analytic.gamma_eff;
  const double dt = max_stable_step(dd);
  const auto trace =
      evolve_trace(dd, GaussianState::thermal(0.0, m.nbar), window, dt, kFitSamples);
  std::vector<double> times, values;
  times.reserve(trace.size());
  values.reserve(trace.size());
  for (const auto& s : trace) {
    times.push_back(s.t);
    values.push_back(s.n_m);
  }
  report.gamma_fit = fit_decay_rate(times, values, report.nbar_ss_exact);
  report.gamma_rel_error =
      std::abs(report.analytic.gamma_eff - report.gamma_fit) / report.gamma_fit;
  return report;
}

}  // namespace memlat
