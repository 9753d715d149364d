#pragma once

#include <complex>
#include <span>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "memlat/gaussian.hpp"
#include "memlat/params.hpp"

namespace memlat {

using cplx = std::complex<double>;
using SparseMatrixC = Eigen::SparseMatrix<cplx>;
using DensityMatrix = Eigen::MatrixXcd;

struct FockConfig {
  int n_at = 8;  // levels kept for the atomic COM mode
  int n_m = 8;   // levels kept for the membrane mode
  double leak_tol = 1e-6;
  int cap = 4096;  // bound on n_at * n_m

  int dim() const { return n_at * n_m; }
};

/// Throws InvalidInput for fewer than 2 levels, CapExceeded above the cap.
void validate(const FockConfig& cfg);

/// Two-mode operators on H_at (x) H_m; basis index = i_at * n_m + i_m.
struct ModeOperators {
  SparseMatrixC identity;
  SparseMatrixC a_at, a_m;
  SparseMatrixC x_at, p_at, x_m, p_m;
};

/// Truncated annihilation operator: a|k> = sqrt(k)|k-1>.
SparseMatrixC ladder(int levels);

ModeOperators mode_operators(const FockConfig& cfg);

// Superoperators in the column-stacking convention vec(X)[col * d + row]:
//   vec(A rho)   = (I (x) A) vec(rho)
//   vec(rho B)   = (B^T (x) I) vec(rho)
//   vec(A rho B) = (B^T (x) A) vec(rho)
SparseMatrixC spre(const SparseMatrixC& a);
SparseMatrixC spost(const SparseMatrixC& b);
SparseMatrixC sprepost(const SparseMatrixC& a, const SparseMatrixC& b);

/// Bare dissipator c rho c^dag - (1/2){c^dag c, rho}. The (gamma/2) D[c]
/// terms of the master equation equal gamma times this.
SparseMatrixC dissipator(const SparseMatrixC& c);

/// -i[H, .] + sum_k dissipator(c_k).
SparseMatrixC lindblad(const SparseMatrixC& h, std::span<const SparseMatrixC> jumps);

struct Liouvillian {
  FockConfig config;
  SparseMatrixC matrix;

  int dim() const { return config.dim(); }
};

/// Test hook: scales the weight of the cascaded term (1 = physical model).
struct LiouvillianOptions {
  double cascade_scale = 1.0;
};

/// Cascaded term (i c)([x_m, x_at rho] - [rho x_at, x_m]) with weight c.
SparseMatrixC cascaded_term(const ModeOperators& ops, double weight);

/// Full master-equation generator on the truncated space:
///   -i[w_at a^dag a + w_m b^dag b + g x_at x_m, .] + C
///   + gd_at Dt[x_at] + gc Dt[a] + gd_m Dt[x_m]
///   + gm (n + 1) Dt[b] + gm n Dt[b^dag]
/// with C weight t g / 2 and Dt the bare dissipator. Jump products are
/// formed in the truncated space, which keeps the generator exactly
/// trace preserving.
Liouvillian build_liouvillian(const ModelParams& m, const FockConfig& cfg,
                              const LiouvillianOptions& options = {});

/// max_j |sum_i L_{ii',j}| over the trace functional, i.e. ||vec(I)^T L||_max.
double trace_defect(const Liouvillian& l);

Eigen::VectorXcd vectorize(const DensityMatrix& rho);
DensityMatrix unvectorize(const Eigen::VectorXcd& v, int dim);

struct TruncationReport {
  double leak_at = 0.0;  // population of the top two atomic levels
  double leak_m = 0.0;   // population of the top two membrane levels
  bool ok = true;
};

TruncationReport truncation_report(const DensityMatrix& rho, const FockConfig& cfg);

/// Unique steady state: the first equation is replaced by the trace
/// constraint and the system solved by ILU-preconditioned GMRES. For
/// dim^2 <= 400 the kernel is also checked to be one dimensional (second-smallest singular value > 1e3 x smallest). Throws
/// DegenerateKernel or TruncationLeak.
DensityMatrix steady_state_fock(const Liouvillian& l);

/// Dense smallest-singular-vector route, for small dimensions only.
DensityMatrix steady_state_svd(const Liouvillian& l);

/// Fixed-step RK4 on vec(rho), Hermitian-symmetrized after every step.
/// Throws StepTooLarge when dt times the Gershgorin bound of L exceeds 2.5.
DensityMatrix evolve_fock(const Liouvillian& l, const DensityMatrix& rho0,
                          double t, double dt);

/// Means and symmetrized covariances of (x_at, p_at, x_m, p_m). Quadratic
/// operators are built with one extra level and cropped, so their matrix
/// elements are exact on the retained space.
GaussianState moments(const DensityMatrix& rho, const FockConfig& cfg);

double occupation(const DensityMatrix& rho, const FockConfig& cfg, Mode mode);

/// Reads A and D off a quadratic generator from its action on low-lying
/// states: columns of A from (|0> + |1>)/sqrt(2) and (|0> + i|1>)/sqrt(2),
/// D from the vacuum. Requires at least 4 levels per mode.
DriftDiffusion extract_drift_diffusion(const Liouvillian& l);

/// |k_at, k_m><k_at, k_m|.
DensityMatrix fock_projector(const FockConfig& cfg, int k_at, int k_m);

/// Product of truncated thermal states (renormalized).
DensityMatrix thermal_density(const FockConfig& cfg, double n_at, double n_m);

}  // namespace memlat
