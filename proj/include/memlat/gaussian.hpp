#pragma once

#include <vector>

#include <Eigen/Dense>

#include "memlat/params.hpp"

namespace memlat {

// Quadrature ordering (x_at, p_at, x_m, p_m) with x = (a + a^dag)/sqrt(2),
// p = -i (a - a^dag)/sqrt(2), [x, p] = i, hbar = 1. Vacuum variance is 1/2.
namespace quad {
inline constexpr int x_at = 0;
inline constexpr int p_at = 1;
inline constexpr int x_m = 2;
inline constexpr int p_m = 3;
}  // namespace quad

enum class Mode { Atom, Membrane };

using Vector4 = Eigen::Vector4d;
using Matrix4 = Eigen::Matrix4d;

/// Linear moment flow d<xi>/dt = A <xi>, d sigma/dt = A sigma + sigma A^T + D.
struct DriftDiffusion {
  Matrix4 drift = Matrix4::Zero();
  Matrix4 diffusion = Matrix4::Zero();
};

struct GaussianState {
  Vector4 mean = Vector4::Zero();
  Matrix4 cov = 0.5 * Matrix4::Identity();

  static GaussianState vacuum() { return {}; }
  /// Product of thermal states with the given mean occupations.
  static GaussianState thermal(double n_at, double n_m);
};

/// Symplectic form for the fixed ordering: blockdiag([[0,1],[-1,0]] x 2).
Matrix4 symplectic_form();

/// Drift and diffusion of the cascaded master equation with interaction
/// H_int = +g x_at x_m. The cascaded term only rescales the back-action of the
/// atoms on the membrane by r; it contributes no diffusion:
///
///   A = [[-gc/2,  w_at,    0,     0   ],
///        [-w_at, -gc/2,   -g,     0   ],
///        [  0,     0,    -gm/2,  w_m  ],
///        [-r g,    0,    -w_m,  -gm/2 ]]
///   D = diag(gc/2, gc/2 + gd_at, gm (n + 1/2), gm (n + 1/2) + gd_m)
DriftDiffusion build_drift_diffusion(const ModelParams& m);

/// Eigenvalue of A with the largest real part.
std::complex<double> slowest_eigenvalue(const Matrix4& drift);

/// Unique solution of A sigma + sigma A^T + D = 0 via the 16x16 Kronecker
/// system. Throws NotHurwitz when some Re(lambda) >= -1e-12 ||A||.
GaussianState steady_state(const DriftDiffusion& dd);

/// Same Lyapunov solution through a complex Schur factorization
/// (Bartels-Stewart). Kept as an independent route for testing.
GaussianState steady_state_schur(const DriftDiffusion& dd);

/// ||A sigma + sigma A^T + D||_max.
double lyapunov_residual(const DriftDiffusion& dd, const Matrix4& cov);

/// Fixed-step RK4 on mean and covariance. The step actually used is t / ceil(t /
/// dt) <= dt. Throws StepTooLarge when dt * rho(A) > 0.1.
GaussianState evolve(const DriftDiffusion& dd, const GaussianState& s0,
                     double t, double dt);

struct TraceSample {
  double t = 0.0;
  double n_at = 0.0;
  double n_m = 0.0;
};

/// Occupations sampled at `samples` equally spaced times in [0, t] (both ends
/// included), integrating with steps no larger than dt.
std::vector<TraceSample> evolve_trace(const DriftDiffusion& dd,
                                      const GaussianState& s0, double t,
                                      double dt, int samples);

/// Largest step allowed by the RK4 stability guard.
double max_stable_step(const DriftDiffusion& dd);

double occupation(const GaussianState& s, Mode mode);

/// Smallest eigenvalue of sigma + (i/2) Omega. Non-negative for physical
/// states.
double uncertainty_min_eigenvalue(const GaussianState& s);

/// Smallest eigenvalue of D + (i/2)(A Omega + Omega A^T). Non-negative iff the
/// moment flow comes from a completely positive (Lindblad) generator.
double complete_positivity_margin(const DriftDiffusion& dd);

struct CoolingResult {
  double nbar_ss = 0.0;
  double factor = 0.0;
  GaussianState state;
};

CoolingResult cooling_factor(const ModelParams& m);

}  // namespace memlat
