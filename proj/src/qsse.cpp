#include "memlat/qsse.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "memlat/errors.hpp"

namespace memlat {

namespace {

constexpr cplx kI{0.0, 1.0};

const QsseCouplings& require_couplings(const ModelParams& m) {
  if (!m.qsse) {
    throw Error(ErrorCode::InvalidInput,
                "model carries no field couplings; use derive_full");
  }
  return *m.qsse;
}

double max_abs(const SparseMatrixC& m) {
  return m.nonZeros() == 0 ? 0.0 : m.coeffs().cwiseAbs().maxCoeff();
}

// "|a_at a_m><b_at b_m|" for a superoperator index.
std::string basis_label(Eigen::Index vec_index, const FockConfig& cfg) {
  const auto d = static_cast<Eigen::Index>(cfg.dim());
  const Eigen::Index row = vec_index % d;
  const Eigen::Index col = vec_index / d;
  std::ostringstream os;
  os << "|" << row / cfg.n_m << "," << row % cfg.n_m << "><" << col / cfg.n_m
     << "," << col % cfg.n_m << "|";
  return os.str();
}

}  // namespace

ItoGenerator ito_generator_terms(const ModelParams& m, const FockConfig& cfg) {
  const QsseCouplings& c = require_couplings(m);
  const ModeOperators ops = mode_operators(cfg);

  ItoGenerator gen;
  gen.config = cfg;
  gen.coupling = 2.0 * std::sqrt(c.g_mR * c.g_atR) + std::sqrt(c.g_mL * c.g_atL);
  const SparseMatrixC n_at = SparseMatrixC(ops.a_at.adjoint()) * ops.a_at;
  const SparseMatrixC n_m = SparseMatrixC(ops.a_m.adjoint()) * ops.a_m;
  const SparseMatrixC xx = ops.x_m * ops.x_at;
  gen.h_eff = n_at * cplx(m.omega_at) + n_m * cplx(m.omega_m) + xx * cplx(gen.coupling);
  gen.c_R = ops.x_m * (kI * std::sqrt(c.g_mR));
  gen.c_L = ops.x_m * cplx(std::sqrt(c.g_mL)) - ops.x_at * (kI * std::sqrt(c.g_atL));
  return gen;
}

double deterministic_term_mismatch(const ItoGenerator& gen, const QsseCouplings& c) {
  const ModeOperators ops = mode_operators(gen.config);
  const SparseMatrixC from_jumps =
      (SparseMatrixC(gen.c_R.adjoint()) * gen.c_R + SparseMatrixC(gen.c_L.adjoint()) * gen.c_L) *
      cplx(-0.5);
  const SparseMatrixC stated = (ops.x_m * ops.x_m) * cplx(-0.5 * (c.g_mR + c.g_mL)) +
                               (ops.x_at * ops.x_at) * cplx(-0.5 * c.g_atL);
  return max_abs(SparseMatrixC(from_jumps - stated));
}

Liouvillian build_ito_generator(const ModelParams& m, const FockConfig& cfg) {
  const ItoGenerator gen = ito_generator_terms(m, cfg);
  const std::vector<SparseMatrixC> jumps = {gen.c_R, gen.c_L};
  Liouvillian l;
  l.config = cfg;
  l.matrix = lindblad(gen.h_eff, jumps);
  l.matrix.makeCompressed();
  return l;
}

ModelParams equivalence_target(const ModelParams& m) {
  const QsseCouplings& c = require_couplings(m);
  ModelParams target = m;
  target.gamma_cool = 0.0;
  target.gamma_m = 0.0;
  target.nbar = 0.0;
  target.g = coupling_from_qsse(c);
  target.gamma_diff_at = c.g_atL;
  target.gamma_diff_m = c.g_mR + c.g_mL;
  return target;
}

GeneratorTerms generator_terms(const Liouvillian& l) {
  const DriftDiffusion dd = extract_drift_diffusion(l);
  GeneratorTerms t;
  t.coupling_on_atoms = -dd.drift(quad::p_at, quad::x_m);
  t.coupling_on_membrane = -dd.drift(quad::p_m, quad::x_at);
  t.asymmetry = t.coupling_on_atoms != 0.0 ? t.coupling_on_membrane / t.coupling_on_atoms : 0.0;
  t.cascaded_weight = 0.5 * (t.coupling_on_atoms - t.coupling_on_membrane);
  t.diffusion_at = dd.diffusion(quad::p_at, quad::p_at);
  t.diffusion_m = dd.diffusion(quad::p_m, quad::p_m);
  return t;
}

EquivalenceReport compare_generators(const ModelParams& m, const FockConfig& cfg,
                                     const LiouvillianOptions& meq_options) {
  const Liouvillian ito = build_ito_generator(m, cfg);
  const Liouvillian meq = build_liouvillian(equivalence_target(m), cfg, meq_options);

  EquivalenceReport report;
  report.config = cfg;
  const SparseMatrixC diff = ito.matrix - meq.matrix;
  report.scale = max_abs(meq.matrix);
  for (int col = 0; col < diff.outerSize(); ++col) {
    for (SparseMatrixC::InnerIterator it(diff, col); it; ++it) {
      if (std::abs(it.value()) > report.max_deviation) {
        report.max_deviation = std::abs(it.value());
        report.location = "L[" + basis_label(it.row(), cfg) + " <- " +
                          basis_label(it.col(), cfg) + "]";
      }
    }
  }
  report.relative_deviation = report.scale > 0.0 ? report.max_deviation / report.scale
                                                 : report.max_deviation;
  report.passed = report.relative_deviation <= kEquivalenceTolerance;

  report.operator_identity_mismatch =
      deterministic_term_mismatch(ito_generator_terms(m, cfg), *m.qsse);

  if (cfg.n_at >= 4 && cfg.n_m >= 4) {
    report.ito = generator_terms(ito);
    report.meq = generator_terms(meq);
    report.hamiltonian_deviation =
        std::abs(report.ito.coupling_on_atoms - report.meq.coupling_on_atoms);
    report.cascaded_deviation =
        std::abs(report.ito.cascaded_weight - report.meq.cascaded_weight);
    report.diffusion_deviation =
        std::max(std::abs(report.ito.diffusion_at - report.meq.diffusion_at),
                 std::abs(report.ito.diffusion_m - report.meq.diffusion_m));
  }
  return report;
}

EquivalenceReport verify_equivalence(const ModelParams& m, const FockConfig& cfg,
                                     const LiouvillianOptions& meq_options) {
  EquivalenceReport report = compare_generators(m, cfg, meq_options);
  if (!report.passed) {
    std::ostringstream os;
    os << "Ito generator differs from the master equation by " << report.max_deviation
       << " (relative " << report.relative_deviation << ") at " << report.location;
    throw Error(ErrorCode::EquivalenceFailed, os.str());
  }
  return report;
}

}  // namespace memlat
