#include "memlat/fock.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/IterativeLinearSolvers>
#include <unsupported/Eigen/IterativeSolvers>
#include <unsupported/Eigen/KroneckerProduct>

#include "memlat/errors.hpp"

namespace memlat {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kMaxStepTimesBound = 2.5;
constexpr int kSvdCheckMaxSize = 400;
constexpr int kGmresRestart = 200;
constexpr int kGmresMaxIterations = 2000;
constexpr double kGmresTolerance = 1e-13;

SparseMatrixC identity(int n) {
  SparseMatrixC id(n, n);
  id.setIdentity();
  return id;
}

SparseMatrixC kron(const SparseMatrixC& a, const SparseMatrixC& b) {
  SparseMatrixC out = Eigen::kroneckerProduct(a, b);
  out.makeCompressed();
  return out;
}

SparseMatrixC position(const SparseMatrixC& a) {
  const SparseMatrixC ad = a.adjoint();
  return (a + ad) * cplx(1.0 / std::sqrt(2.0));
}

SparseMatrixC momentum(const SparseMatrixC& a) {
  const SparseMatrixC ad = a.adjoint();
  return (a - ad) * cplx(0.0, -1.0 / std::sqrt(2.0));
}

SparseMatrixC product(const SparseMatrixC& a, const SparseMatrixC& b) {
  SparseMatrixC out = a * b;
  out.prune(cplx(0.0));
  return out;
}

// Re Tr(op * rho).
double expectation(const SparseMatrixC& op, const DensityMatrix& rho) {
  cplx acc = 0.0;
  for (int col = 0; col < op.outerSize(); ++col) {
    for (SparseMatrixC::InnerIterator it(op, col); it; ++it) {
      acc += it.value() * rho(it.col(), it.row());
    }
  }
  return acc.real();
}

DensityMatrix apply(const Liouvillian& l, const DensityMatrix& rho) {
  return unvectorize(l.matrix * vectorize(rho), l.dim());
}

DensityMatrix pure_state(const Eigen::VectorXcd& psi) {
  return psi * psi.adjoint();
}

// Quadrature operators of both modes, with products exact on the retained
// space (built one level larger and cropped).
struct QuadratureSet {
  std::array<SparseMatrixC, 4> linear;
  std::array<std::array<SparseMatrixC, 4>, 4> symmetric;
};

QuadratureSet quadrature_set(const FockConfig& cfg) {
  const int na = cfg.n_at;
  const int nm = cfg.n_m;
  const SparseMatrixC a_big = ladder(na + 1);
  const SparseMatrixC b_big = ladder(nm + 1);

  auto crop = [](const SparseMatrixC& m, int n) -> SparseMatrixC {
    return m.topLeftCorner(n, n);
  };
  const std::array<SparseMatrixC, 2> at_big = {position(a_big), momentum(a_big)};
  const std::array<SparseMatrixC, 2> m_big = {position(b_big), momentum(b_big)};
  const SparseMatrixC id_at = identity(na);
  const SparseMatrixC id_m = identity(nm);

  QuadratureSet q;
  for (int i = 0; i < 2; ++i) {
    q.linear[i] = kron(crop(at_big[i], na), id_m);
    q.linear[2 + i] = kron(id_at, crop(m_big[i], nm));
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const bool i_at = i < 2;
      const bool j_at = j < 2;
      if (i_at && j_at) {
        const SparseMatrixC sym = (at_big[i] * at_big[j] + at_big[j] * at_big[i]) * cplx(0.5);
        q.symmetric[i][j] = kron(crop(sym, na), id_m);
      } else if (!i_at && !j_at) {
        const SparseMatrixC sym =
            (m_big[i - 2] * m_big[j - 2] + m_big[j - 2] * m_big[i - 2]) * cplx(0.5);
        q.symmetric[i][j] = kron(id_at, crop(sym, nm));
      } else {
        q.symmetric[i][j] = product(q.linear[i], q.linear[j]);
      }
    }
  }
  return q;
}

double gershgorin_bound(const SparseMatrixC& m) {
  Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(m.rows());
  for (int col = 0; col < m.outerSize(); ++col) {
    for (SparseMatrixC::InnerIterator it(m, col); it; ++it) {
      row_sums(it.row()) += std::abs(it.value());
    }
  }
  return row_sums.maxCoeff();
}

DensityMatrix hermitian_normalized(DensityMatrix rho) {
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  return rho;
}

}  // namespace

void validate(const FockConfig& cfg) {
  if (cfg.n_at < 2 || cfg.n_m < 2) {
    throw Error(ErrorCode::InvalidInput, "Fock truncation needs >= 2 levels per mode");
  }
  if (cfg.dim() > cfg.cap) {
    std::ostringstream os;
    os << "n_at * n_m = " << cfg.dim() << " exceeds cap " << cfg.cap;
    throw Error(ErrorCode::CapExceeded, os.str());
  }
}

SparseMatrixC ladder(int levels) {
  std::vector<Eigen::Triplet<cplx>> entries;
  for (int k = 1; k < levels; ++k) {
    entries.emplace_back(k - 1, k, std::sqrt(static_cast<double>(k)));
  }
  SparseMatrixC a(levels, levels);
  a.setFromTriplets(entries.begin(), entries.end());
  return a;
}

ModeOperators mode_operators(const FockConfig& cfg) {
  validate(cfg);
  const SparseMatrixC id_at = identity(cfg.n_at);
  const SparseMatrixC id_m = identity(cfg.n_m);
  const SparseMatrixC a = ladder(cfg.n_at);
  const SparseMatrixC b = ladder(cfg.n_m);

  ModeOperators ops;
  ops.identity = identity(cfg.dim());
  ops.a_at = kron(a, id_m);
  ops.a_m = kron(id_at, b);
  ops.x_at = kron(position(a), id_m);
  ops.p_at = kron(momentum(a), id_m);
  ops.x_m = kron(id_at, position(b));
  ops.p_m = kron(id_at, momentum(b));
  return ops;
}

SparseMatrixC spre(const SparseMatrixC& a) { return kron(identity(a.rows()), a); }

SparseMatrixC spost(const SparseMatrixC& b) {
  return kron(SparseMatrixC(b.transpose()), identity(b.rows()));
}

SparseMatrixC sprepost(const SparseMatrixC& a, const SparseMatrixC& b) {
  return kron(SparseMatrixC(b.transpose()), a);
}

SparseMatrixC dissipator(const SparseMatrixC& c) {
  const SparseMatrixC cd = c.adjoint();
  const SparseMatrixC cdc = product(cd, c);
  return sprepost(c, cd) - (spre(cdc) + spost(cdc)) * cplx(0.5);
}

SparseMatrixC lindblad(const SparseMatrixC& h, std::span<const SparseMatrixC> jumps) {
  SparseMatrixC l = (spre(h) - spost(h)) * (-kI);
  for (const auto& c : jumps) l += dissipator(c);
  l.prune(cplx(0.0));
  return l;
}

SparseMatrixC cascaded_term(const ModeOperators& ops, double weight) {
  const SparseMatrixC xm_xat = product(ops.x_m, ops.x_at);
  const SparseMatrixC xat_xm = product(ops.x_at, ops.x_m);
  SparseMatrixC c = spre(xm_xat) - sprepost(ops.x_at, ops.x_m) - spost(xat_xm) +
                    sprepost(ops.x_m, ops.x_at);
  return c * (kI * weight);
}

Liouvillian build_liouvillian(const ModelParams& m, const FockConfig& cfg,
                              const LiouvillianOptions& options) {
  const ModeOperators ops = mode_operators(cfg);
  const SparseMatrixC n_at = product(SparseMatrixC(ops.a_at.adjoint()), ops.a_at);
  const SparseMatrixC n_m = product(SparseMatrixC(ops.a_m.adjoint()), ops.a_m);
  const SparseMatrixC h = n_at * cplx(m.omega_at) + n_m * cplx(m.omega_m) +
                          product(ops.x_at, ops.x_m) * cplx(m.g);

  auto scaled = [](const SparseMatrixC& op, double rate) -> SparseMatrixC {
    return op * cplx(std::sqrt(std::max(rate, 0.0)));
  };
  const std::vector<SparseMatrixC> jumps = {
      scaled(ops.x_at, m.gamma_diff_at),
      scaled(ops.a_at, m.gamma_cool),
      scaled(ops.x_m, m.gamma_diff_m),
      scaled(ops.a_m, m.gamma_m * (m.nbar + 1.0)),
      scaled(SparseMatrixC(ops.a_m.adjoint()), m.gamma_m * m.nbar),
  };

  Liouvillian l;
  l.config = cfg;
  l.matrix = lindblad(h, jumps);
  l.matrix += cascaded_term(ops, 0.5 * m.transmittivity * m.g * options.cascade_scale);
  l.matrix.prune(cplx(0.0));
  l.matrix.makeCompressed();
  return l;
}

double trace_defect(const Liouvillian& l) {
  const int d = l.dim();
  Eigen::VectorXcd row = Eigen::VectorXcd::Zero(l.matrix.cols());
  for (int col = 0; col < l.matrix.outerSize(); ++col) {
    for (SparseMatrixC::InnerIterator it(l.matrix, col); it; ++it) {
      const auto r = it.row();
      if (r % d == r / d) row(col) += it.value();
    }
  }
  return row.cwiseAbs().maxCoeff();
}

Eigen::VectorXcd vectorize(const DensityMatrix& rho) {
  return Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size());
}

DensityMatrix unvectorize(const Eigen::VectorXcd& v, int dim) {
  return Eigen::Map<const DensityMatrix>(v.data(), dim, dim);
}

TruncationReport truncation_report(const DensityMatrix& rho, const FockConfig& cfg) {
  TruncationReport report;
  for (int i = 0; i < cfg.n_at; ++i) {
    for (int j = 0; j < cfg.n_m; ++j) {
      const double p = rho(i * cfg.n_m + j, i * cfg.n_m + j).real();
      if (i >= cfg.n_at - 2) report.leak_at += p;
      if (j >= cfg.n_m - 2) report.leak_m += p;
    }
  }
  report.ok = report.leak_at < cfg.leak_tol && report.leak_m < cfg.leak_tol;
  return report;
}

DensityMatrix steady_state_fock(const Liouvillian& l) {
  const int d = l.dim();
  const auto n = static_cast<Eigen::Index>(d) * d;

  if (n <= kSvdCheckMaxSize) {
    const Eigen::MatrixXcd dense(l.matrix);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense.adjoint() * dense,
                                                           Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    if (!(ev(1) > 1e3 * ev(0))) {
      std::ostringstream os;
      os << "Liouvillian kernel is not one dimensional (singular values " << ev(0)
         << ", " << ev(1) << ")";
      throw Error(ErrorCode::DegenerateKernel, os.str());
    }
  }

  // Replace the (0,0) equation by Tr(rho) = 1.
  std::vector<Eigen::Triplet<cplx>> entries;
  entries.reserve(static_cast<std::size_t>(l.matrix.nonZeros() + d));
  for (int col = 0; col < l.matrix.outerSize(); ++col) {
    for (SparseMatrixC::InnerIterator it(l.matrix, col); it; ++it) {
      if (it.row() != 0) entries.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (int i = 0; i < d; ++i) entries.emplace_back(0, i * d + i, 1.0);
  SparseMatrixC system(n, n);
  system.setFromTriplets(entries.begin(), entries.end());
  system.makeCompressed();

  // Direct LU fills in badly on the four-index superoperator lattice, so the
  // constrained system is solved by restarted GMRES with an incomplete-LU
  // preconditioner; a tighter preconditioner is tried once before giving up.
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
  rhs(0) = 1.0;
  Eigen::VectorXcd v;
  bool converged = false;
  for (const auto& [drop, fill] : {std::pair{1e-3, 10}, std::pair{1e-6, 40}}) {
    Eigen::GMRES<SparseMatrixC, Eigen::IncompleteLUT<cplx>> solver;
    solver.preconditioner().setDroptol(drop);
    solver.preconditioner().setFillfactor(fill);
    solver.set_restart(kGmresRestart);
    solver.setTolerance(kGmresTolerance);
    solver.setMaxIterations(kGmresMaxIterations);
    solver.compute(system);
    if (solver.info() != Eigen::Success) continue;
    v = solver.solve(rhs);
    if (solver.info() == Eigen::Success && v.allFinite()) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw Error(ErrorCode::DegenerateKernel, "steady-state solve did not converge");
  }

  DensityMatrix rho = hermitian_normalized(unvectorize(v, d));
  const double residual = (l.matrix * vectorize(rho)).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, l.matrix.coeffs().cwiseAbs().maxCoeff());
  if (residual > 1e-9 * scale) {
    std::ostringstream os;
    os << "steady-state residual " << residual << " exceeds tolerance; kernel "
       << "is ill conditioned";
    throw Error(ErrorCode::DegenerateKernel, os.str());
  }

  const TruncationReport report = truncation_report(rho, l.config);
  if (!report.ok) {
    std::ostringstream os;
    os << "top-level populations (atom " << report.leak_at << ", membrane "
       << report.leak_m << ") exceed leak_tol " << l.config.leak_tol
       << "; increase n_at / n_m";
    throw Error(ErrorCode::TruncationLeak, os.str());
  }
  return rho;
}

DensityMatrix steady_state_svd(const Liouvillian& l) {
  const Eigen::MatrixXcd dense(l.matrix);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(dense, Eigen::ComputeFullV);
  const Eigen::VectorXcd v = svd.matrixV().col(svd.matrixV().cols() - 1);
  DensityMatrix rho = unvectorize(v, l.dim());
  rho /= rho.trace();
  return hermitian_normalized(rho);
}

DensityMatrix evolve_fock(const Liouvillian& l, const DensityMatrix& rho0,
                          double t, double dt) {
  if (t < 0.0) throw Error(ErrorCode::InvalidInput, "evolution time must be >= 0");
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidInput, "dt must be > 0");
  const double bound = gershgorin_bound(l.matrix);
  if (dt * bound > kMaxStepTimesBound) {
    std::ostringstream os;
    os << "dt * ||L||_inf = " << dt * bound << " exceeds " << kMaxStepTimesBound;
    throw Error(ErrorCode::StepTooLarge, os.str());
  }
  if (t == 0.0) return rho0;

  const int d = l.dim();
  const auto steps = static_cast<long long>(std::ceil(t / dt));
  const double h = t / static_cast<double>(steps);
  Eigen::VectorXcd v = vectorize(rho0);
  for (long long s = 0; s < steps; ++s) {
    const Eigen::VectorXcd k1 = l.matrix * v;
    const Eigen::VectorXcd k2 = l.matrix * (v + 0.5 * h * k1);
    const Eigen::VectorXcd k3 = l.matrix * (v + 0.5 * h * k2);
    const Eigen::VectorXcd k4 = l.matrix * (v + h * k3);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    DensityMatrix rho = unvectorize(v, d);
    v = vectorize(0.5 * (rho + rho.adjoint()));
  }
  return unvectorize(v, d);
}

GaussianState moments(const DensityMatrix& rho, const FockConfig& cfg) {
  const QuadratureSet q = quadrature_set(cfg);
  const double norm = rho.trace().real();
  GaussianState s;
  for (int i = 0; i < 4; ++i) s.mean(i) = expectation(q.linear[i], rho) / norm;
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      s.cov(i, j) = expectation(q.symmetric[i][j], rho) / norm - s.mean(i) * s.mean(j);
      s.cov(j, i) = s.cov(i, j);
    }
  }
  return s;
}

double occupation(const DensityMatrix& rho, const FockConfig& cfg, Mode mode) {
  double n = 0.0;
  for (int i = 0; i < cfg.n_at; ++i) {
    for (int j = 0; j < cfg.n_m; ++j) {
      const int k = mode == Mode::Atom ? i : j;
      n += k * rho(i * cfg.n_m + j, i * cfg.n_m + j).real();
    }
  }
  return n / rho.trace().real();
}

DriftDiffusion extract_drift_diffusion(const Liouvillian& l) {
  const FockConfig& cfg = l.config;
  if (cfg.n_at < 4 || cfg.n_m < 4) {
    throw Error(ErrorCode::InvalidInput, "drift extraction needs >= 4 levels per mode");
  }
  const QuadratureSet q = quadrature_set(cfg);
  const int d = cfg.dim();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  DriftDiffusion dd;
  for (int j = 0; j < 4; ++j) {
    // One excitation in the mode carrying quadrature j, phase selecting x or p.
    const bool atom = j < 2;
    const cplx phase = (j % 2 == 0) ? cplx(1.0) : kI;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(d);
    psi(0) = inv_sqrt2;
    psi(atom ? cfg.n_m : 1) = phase * inv_sqrt2;
    const DensityMatrix rho = pure_state(psi);
    const DensityMatrix rate = apply(l, rho);
    const double mean_j = expectation(q.linear[j], rho);
    for (int i = 0; i < 4; ++i) dd.drift(i, j) = expectation(q.linear[i], rate) / mean_j;
  }

  const DensityMatrix vac = fock_projector(cfg, 0, 0);
  const DensityMatrix rate = apply(l, vac);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      dd.diffusion(i, j) = expectation(q.symmetric[i][j], rate) -
                           0.5 * (dd.drift(i, j) + dd.drift(j, i));
    }
  }
  return dd;
}

DensityMatrix fock_projector(const FockConfig& cfg, int k_at, int k_m) {
  DensityMatrix rho = DensityMatrix::Zero(cfg.dim(), cfg.dim());
  const int idx = k_at * cfg.n_m + k_m;
  rho(idx, idx) = 1.0;
  return rho;
}

DensityMatrix thermal_density(const FockConfig& cfg, double n_at, double n_m) {
  auto weights = [](int levels, double n) {
    Eigen::VectorXd w(levels);
    const double ratio = n > 0.0 ? n / (n + 1.0) : 0.0;
    for (int k = 0; k < levels; ++k) w(k) = std::pow(ratio, k);
    return w;
  };
  const Eigen::VectorXd wa = weights(cfg.n_at, n_at);
  const Eigen::VectorXd wm = weights(cfg.n_m, n_m);
  DensityMatrix rho = DensityMatrix::Zero(cfg.dim(), cfg.dim());
  for (int i = 0; i < cfg.n_at; ++i) {
    for (int j = 0; j < cfg.n_m; ++j) {
      const int idx = i * cfg.n_m + j;
      rho(idx, idx) = wa(i) * wm(j);
    }
  }
  return rho / rho.trace();
}

}  // namespace memlat
