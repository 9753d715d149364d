#pragma once

#include <span>
#include <string>
#include <vector>

#include "memlat/params.hpp"

namespace memlat {

/// Adiabatic elimination of the atomic COM mode for gamma_cool >> g.
struct WeakCouplingResult {
  double gamma_eff = 0.0;  // effective membrane cooling rate Gamma_m (rad/s)
  double nbar_ss = 0.0;    // predicted final membrane occupation
  double validity = 0.0;   // gamma_cool / g; below 5 the formulas are not trusted

  bool trusted() const { return validity >= 5.0; }
};

/// Gamma_m = gamma_m + r g^2 / (2 gamma_cool),
/// nbar_ss = (gamma_m / Gamma_m) nbar + (gamma_cool / (4 omega_m))^2.
/// Throws ZeroCoolRate when gamma_cool == 0.
WeakCouplingResult weak_coupling(const ModelParams& m);

/// Solution of d<n>/dt = -Gamma_m (<n> - nbar_ss) from n0.
double rate_equation(double n0, const WeakCouplingResult& wc, double t);

/// Least-squares slope of log(n(t) - n_ss) against t, returned as a positive
/// decay rate. Samples with n(t) <= n_ss are skipped.
double fit_decay_rate(std::span<const double> times, std::span<const double> values,
                      double n_ss);

struct ComparisonReport {
  WeakCouplingResult analytic;
  double nbar_ss_exact = 0.0;
  double nbar_ss_rel_error = 0.0;
  double gamma_fit = 0.0;
  double gamma_rel_error = 0.0;
  bool out_of_regime = false;
  std::vector<std::string> warnings;
};

/// Weak-coupling formulas against the exact Gaussian solver. The decay rate
/// is fitted on the membrane occupation for t in [0, 3 / Gamma_m] (200
/// samples), starting from the membrane at the bath occupation and the
/// atoms in their ground state. gamma_cool < 10 g sets out_of_regime and a
/// warning; the comparison still runs.
ComparisonReport compare_with_exact(const ModelParams& m);

}  // namespace memlat
