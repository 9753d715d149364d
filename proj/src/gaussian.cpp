#include "memlat/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "memlat/errors.hpp"

namespace memlat {

namespace {

using cplx = std::complex<double>;
using Matrix4c = Eigen::Matrix<cplx, 4, 4>;

constexpr double kHurwitzTol = 1e-12;
constexpr double kMaxStepTimesRadius = 0.1;
constexpr int kSchurRefinements = 3;

Eigen::Matrix<cplx, 4, 1> eigenvalues(const Matrix4& a) {
  Eigen::EigenSolver<Matrix4> solver(a, /*computeEigenvectors=*/false);
  return solver.eigenvalues();
}

void require_hurwitz(const Matrix4& a) {
  const auto ev = eigenvalues(a);
  const double scale = a.norm();
  for (int i = 0; i < 4; ++i) {
    if (!(ev(i).real() < -kHurwitzTol * scale)) {
      std::ostringstream os;
      os << "drift matrix has eigenvalue " << ev(i).real() << " + "
         << ev(i).imag() << "i with non-negative real part; no steady state";
      throw Error(ErrorCode::NotHurwitz, os.str());
    }
  }
}

double spectral_radius(const Matrix4& a) {
  return eigenvalues(a).cwiseAbs().maxCoeff();
}

struct Derivative {
  Vector4 mean;
  Matrix4 cov;
};

Derivative flow(const DriftDiffusion& dd, const Vector4& mean,
                const Matrix4& cov) {
  return {dd.drift * mean,
          dd.drift * cov + cov * dd.drift.transpose() + dd.diffusion};
}

void rk4_step(const DriftDiffusion& dd, GaussianState& s, double h) {
  const Derivative k1 = flow(dd, s.mean, s.cov);
  const Derivative k2 =
      flow(dd, s.mean + 0.5 * h * k1.mean, s.cov + 0.5 * h * k1.cov);
  const Derivative k3 =
      flow(dd, s.mean + 0.5 * h * k2.mean, s.cov + 0.5 * h * k2.cov);
  const Derivative k4 = flow(dd, s.mean + h * k3.mean, s.cov + h * k3.cov);
  s.mean += h / 6.0 * (k1.mean + 2.0 * k2.mean + 2.0 * k3.mean + k4.mean);
  s.cov += h / 6.0 * (k1.cov + 2.0 * k2.cov + 2.0 * k3.cov + k4.cov);
  s.cov = 0.5 * (s.cov + s.cov.transpose()).eval();
}

void advance(const DriftDiffusion& dd, GaussianState& s, double t, double dt) {
  if (t <= 0.0) return;
  const auto steps = static_cast<long long>(std::ceil(t / dt));
  const double h = t / static_cast<double>(steps);
  for (long long i = 0; i < steps; ++i) rk4_step(dd, s, h);
}

void check_step(const DriftDiffusion& dd, double t, double dt) {
  if (t < 0.0) throw Error(ErrorCode::InvalidInput, "evolution time must be >= 0");
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidInput, "dt must be > 0");
  const double radius = spectral_radius(dd.drift);
  if (dt * radius > kMaxStepTimesRadius) {
    std::ostringstream os;
    os << "dt * spectral_radius(A) = " << dt * radius << " exceeds "
       << kMaxStepTimesRadius << "; use dt <= " << kMaxStepTimesRadius / radius;
    throw Error(ErrorCode::StepTooLarge, os.str());
  }
}

}  // namespace

GaussianState GaussianState::thermal(double n_at, double n_m) {
  GaussianState s;
  s.cov.diagonal() << n_at + 0.5, n_at + 0.5, n_m + 0.5, n_m + 0.5;
  return s;
}

Matrix4 symplectic_form() {
  Matrix4 omega = Matrix4::Zero();
  omega(0, 1) = 1.0;
  omega(1, 0) = -1.0;
  omega(2, 3) = 1.0;
  omega(3, 2) = -1.0;
  return omega;
}

DriftDiffusion build_drift_diffusion(const ModelParams& m) {
  using namespace quad;
  DriftDiffusion dd;
  Matrix4& a = dd.drift;
  const double half_cool = 0.5 * m.gamma_cool;
  const double half_mech = 0.5 * m.gamma_m;

  a(x_at, x_at) = -half_cool;
  a(x_at, p_at) = m.omega_at;
  a(p_at, x_at) = -m.omega_at;
  a(p_at, p_at) = -half_cool;
  a(p_at, x_m) = -m.g;

  a(x_m, x_m) = -half_mech;
  a(x_m, p_m) = m.omega_m;
  a(p_m, x_m) = -m.omega_m;
  a(p_m, p_m) = -half_mech;
  a(p_m, x_at) = -m.g * m.reflectivity;

  const double thermal = m.gamma_m * (m.nbar + 0.5);
  dd.diffusion.diagonal() << half_cool, half_cool + m.gamma_diff_at, thermal,
      thermal + m.gamma_diff_m;
  return dd;
}

std::complex<double> slowest_eigenvalue(const Matrix4& drift) {
  const auto ev = eigenvalues(drift);
  int best = 0;
  for (int i = 1; i < 4; ++i) {
    if (ev(i).real() > ev(best).real()) best = i;
  }
  return ev(best);
}

GaussianState steady_state(const DriftDiffusion& dd) {
  require_hurwitz(dd.drift);

  // Column-major vec: vec(A S + S A^T) = (I (x) A + A (x) I) vec(S).
  Eigen::Matrix<double, 16, 16> kron = Eigen::Matrix<double, 16, 16>::Zero();
  const Matrix4& a = dd.drift;
  for (int i = 0; i < 4; ++i) {
    kron.block<4, 4>(4 * i, 4 * i) += a;
    for (int j = 0; j < 4; ++j) {
      kron.block<4, 4>(4 * i, 4 * j) += a(i, j) * Matrix4::Identity();
    }
  }
  const Eigen::Matrix<double, 16, 1> rhs =
      -Eigen::Map<const Eigen::Matrix<double, 16, 1>>(dd.diffusion.data());
  const Eigen::Matrix<double, 16, 1> vec = kron.fullPivLu().solve(rhs);

  GaussianState s;
  s.cov = Eigen::Map<const Matrix4>(vec.data());
  s.cov = 0.5 * (s.cov + s.cov.transpose()).eval();
  return s;
}

GaussianState steady_state_schur(const DriftDiffusion& dd) {
  require_hurwitz(dd.drift);

  const Matrix4c a = dd.drift.cast<cplx>();
  Eigen::ComplexSchur<Matrix4c> schur(a);
  const Matrix4c& u = schur.matrixU();
  const Matrix4c& t = schur.matrixT();
  // A = U T U^H, so A X + X A^T = -Q becomes T Y + Y T^H = -U^H Q U with
  // Y = U^H X U, solved by back substitution.
  auto solve = [&](const Matrix4& q) {
    const Matrix4c c = -(u.adjoint() * q.cast<cplx>() * u);
    Matrix4c y = Matrix4c::Zero();
    for (int i = 3; i >= 0; --i) {
      for (int j = 3; j >= 0; --j) {
        cplx acc = c(i, j);
        for (int k = i + 1; k < 4; ++k) acc -= t(i, k) * y(k, j);
        for (int k = j + 1; k < 4; ++k) acc -= y(i, k) * std::conj(t(j, k));
        y(i, j) = acc / (t(i, i) + std::conj(t(j, j)));
      }
    }
    const Matrix4 x = (u * y * u.adjoint()).real();
    return Matrix4(0.5 * (x + x.transpose()));
  };

  GaussianState s;
  s.cov = solve(dd.diffusion);
  // The unitary transform loses digits when the drift spans many orders of
  // magnitude; residual correction recovers them.
  for (int i = 0; i < kSchurRefinements; ++i) {
    const Matrix4 residual = dd.drift * s.cov + s.cov * dd.drift.transpose() + dd.diffusion;
    s.cov += solve(residual);
  }
  return s;
}

double lyapunov_residual(const DriftDiffusion& dd, const Matrix4& cov) {
  return (dd.drift * cov + cov * dd.drift.transpose() + dd.diffusion)
      .cwiseAbs()
      .maxCoeff();
}

double max_stable_step(const DriftDiffusion& dd) {
  return kMaxStepTimesRadius / spectral_radius(dd.drift);
}

GaussianState evolve(const DriftDiffusion& dd, const GaussianState& s0,
                     double t, double dt) {
  check_step(dd, t, dt);
  GaussianState s = s0;
  advance(dd, s, t, dt);
  return s;
}

std::vector<TraceSample> evolve_trace(const DriftDiffusion& dd,
                                      const GaussianState& s0, double t,
                                      double dt, int samples) {
  check_step(dd, t, dt);
  if (samples < 2) throw Error(ErrorCode::InvalidInput, "samples must be >= 2");

  std::vector<TraceSample> trace;
  trace.reserve(static_cast<std::size_t>(samples));
  GaussianState s = s0;
  const double interval = t / static_cast<double>(samples - 1);
  for (int k = 0; k < samples; ++k) {
    if (k > 0) advance(dd, s, interval, dt);
    trace.push_back({interval * k, occupation(s, Mode::Atom),
                     occupation(s, Mode::Membrane)});
  }
  return trace;
}

double occupation(const GaussianState& s, Mode mode) {
  const int x = mode == Mode::Atom ? quad::x_at : quad::x_m;
  const int p = x + 1;
  return 0.5 * (s.cov(x, x) + s.cov(p, p) - 1.0) +
         0.5 * (s.mean(x) * s.mean(x) + s.mean(p) * s.mean(p));
}

double uncertainty_min_eigenvalue(const GaussianState& s) {
  const Matrix4c h =
      s.cov.cast<cplx>() + cplx(0.0, 0.5) * symplectic_form().cast<cplx>();
  Eigen::SelfAdjointEigenSolver<Matrix4c> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double complete_positivity_margin(const DriftDiffusion& dd) {
  const Matrix4 omega = symplectic_form();
  const Matrix4 k = dd.drift * omega + omega * dd.drift.transpose();
  const Matrix4c h = dd.diffusion.cast<cplx>() + cplx(0.0, 0.5) * k.cast<cplx>();
  Eigen::SelfAdjointEigenSolver<Matrix4c> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

CoolingResult cooling_factor(const ModelParams& m) {
  CoolingResult result;
  result.state = steady_state(build_drift_diffusion(m));
  result.nbar_ss = occupation(result.state, Mode::Membrane);
  result.factor = m.nbar / result.nbar_ss;
  return result;
}

}  // namespace memlat
