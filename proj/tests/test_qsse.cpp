#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "memlat/qsse.hpp"
#include "memlat/verify.hpp"
#include "test_util.hpp"

using namespace memlat;
using memlat::test::error_of;
using memlat::test::rel;

namespace {

ModelParams case_study() {
  PhysicalParams p = preset_case_study();
  p.trap_freq_override = p.membrane_freq;
  return derive_full(p);
}

double max_abs(const SparseMatrixC& m) {
  return m.nonZeros() == 0 ? 0.0 : m.coeffs().cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("effective Hamiltonian and jump operators") {
  const ModelParams m = case_study();
  const ItoGenerator gen = ito_generator_terms(m, {5, 5});
  CHECK(max_abs(SparseMatrixC(gen.h_eff - SparseMatrixC(gen.h_eff.adjoint()))) <=
        1e-12 * max_abs(gen.h_eff));
  // The left channel contributes half its coupling through h_eff and half as
  // cascaded (one-way) drive, so only the full generator recovers g.
  const QsseCouplings& c = *m.qsse;
  CHECK(rel(gen.coupling, 2.0 * std::sqrt(c.g_mR * c.g_atR) + std::sqrt(c.g_mL * c.g_atL)) < 1e-12);
  CHECK(rel(generator_terms(build_ito_generator(m, {5, 5})).coupling_on_atoms, m.g) < 1e-9);
  CHECK(deterministic_term_mismatch(gen, *m.qsse) <= 1e-12 * m.qsse->g_atL);
}

TEST_CASE("model without field couplings is rejected") {
  ModelParams m = case_study();
  m.qsse.reset();
  CHECK(error_of([&] { build_ito_generator(m, {4, 4}); }) == ErrorCode::InvalidInput);
}

TEST_CASE("case-study equivalence and the collective diffusion artifact") {
  const ModelParams m = case_study();
  const EquivalenceReport rep = verify_equivalence(m, {8, 8});
  CHECK(rep.passed);
  CHECK(rep.relative_deviation <= kEquivalenceTolerance);
  CHECK(rep.operator_identity_mismatch <= 1e-12 * m.qsse->g_atL);
  CHECK(rep.ito.asymmetry == doctest::Approx(m.reflectivity).epsilon(1e-9));
  CHECK(rep.ito.cascaded_weight == doctest::Approx(0.5 * m.transmittivity * m.g).epsilon(1e-9));
  CHECK(rep.ito.diffusion_at == doctest::Approx(m.qsse->g_atL).epsilon(1e-9));
  CHECK(rep.ito.diffusion_at >= 100.0 * m.gamma_diff_at);
  CHECK(rep.ito.diffusion_m == doctest::Approx(m.gamma_diff_m).epsilon(1e-9));
  CHECK(rep.hamiltonian_deviation <= 1e-9 * m.g);
  CHECK(rep.cascaded_deviation <= 1e-9 * m.g);
}

TEST_CASE("ideal mirror has no cascaded part") {
  PhysicalParams p = preset_case_study();
  p.reflectivity = 1.0;
  p.trap_freq_override = p.membrane_freq;
  const ModelParams m = derive_full(p);
  const ItoGenerator gen = ito_generator_terms(m, {5, 5});
  CHECK(max_abs(gen.c_L) == 0.0);
  CHECK(rel(gen.coupling, 2.0 * std::sqrt(m.qsse->g_mR * m.qsse->g_atR)) < 1e-15);
  const EquivalenceReport rep = verify_equivalence(m, {5, 5});
  CHECK(std::abs(rep.ito.cascaded_weight) <= 1e-9 * m.g);
  CHECK(std::abs(rep.ito.diffusion_at) <= 1e-9 * m.g);
}

TEST_CASE("membrane-free couplings act on the atoms only") {
  ModelParams m = case_study();
  m.qsse->g_mR = 0.0;
  m.qsse->g_mL = 0.0;
  const FockConfig cfg{4, 4};
  const ModeOperators ops = mode_operators(cfg);
  const SparseMatrixC h = SparseMatrixC(ops.a_at.adjoint()) * ops.a_at * cplx(m.omega_at) +
                          SparseMatrixC(ops.a_m.adjoint()) * ops.a_m * cplx(m.omega_m);
  const std::vector<SparseMatrixC> jumps = {ops.x_at * cplx(std::sqrt(m.qsse->g_atL))};
  const SparseMatrixC expected = lindblad(h, jumps);
  const SparseMatrixC got = build_ito_generator(m, cfg).matrix;
  CHECK(max_abs(SparseMatrixC(got - expected)) <= 1e-12 * max_abs(expected));
}

TEST_CASE("jump phases do not change the generator") {
  const ModelParams m = case_study();
  const FockConfig cfg{4, 5};
  const ItoGenerator gen = ito_generator_terms(m, cfg);
  const std::vector<SparseMatrixC> phased = {gen.c_R * std::polar(1.0, 0.7),
                                             gen.c_L * std::polar(1.0, -2.1)};
  const SparseMatrixC a = lindblad(gen.h_eff, phased);
  const SparseMatrixC b = build_ito_generator(m, cfg).matrix;
  CHECK(max_abs(SparseMatrixC(a - b)) <= 1e-12 * max_abs(b));
}

TEST_CASE("equivalence does not depend on the truncation") {
  const ModelParams m = case_study();
  for (const FockConfig cfg : {FockConfig{4, 4}, FockConfig{6, 6}, FockConfig{10, 10},
                               FockConfig{4, 9}}) {
    CHECK(compare_generators(m, cfg).passed);
  }
}

TEST_CASE("equivalence over random laboratory parameters") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 50; ++i) {
    const ModelParams m = derive_full(random_physical(rng));
    const EquivalenceReport rep = compare_generators(m, {6, 6});
    CHECK(rep.relative_deviation <= kEquivalenceTolerance);
    CHECK(rep.ito.asymmetry == doctest::Approx(m.reflectivity).epsilon(1e-9));
  }
}

TEST_CASE("a perturbed cascaded weight is detected and located") {
  const ModelParams m = case_study();
  LiouvillianOptions fault;
  fault.cascade_scale = 1.01;
  const EquivalenceReport rep = compare_generators(m, {6, 6}, fault);
  CHECK_FALSE(rep.passed);
  CHECK(rep.location.find("L[|") == 0);
  CHECK(rep.cascaded_deviation > 1e-3 * m.g);
  try {
    verify_equivalence(m, {6, 6}, fault);
    FAIL("expected EquivalenceFailed");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EquivalenceFailed);
    CHECK(std::string(e.what()).find("L[|") != std::string::npos);
  }
}
