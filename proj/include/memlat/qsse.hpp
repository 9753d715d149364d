#pragma once

#include <string>
#include <vector>

#include "memlat/fock.hpp"
#include "memlat/params.hpp"

namespace memlat {

/// Markov-limit Ito form of the delayed stochastic Schroedinger equation:
/// effective Hamiltonian plus the operators multiplying the creation
/// increments dB_R^dag and dB_L^dag.
struct ItoGenerator {
  FockConfig config;
  SparseMatrixC h_eff;  // H_sys + (2 sqrt(g_mR g_atR) + sqrt(g_mL g_atL)) x_m x_at
  SparseMatrixC c_R;    // i sqrt(g_mR) x_m
  SparseMatrixC c_L;    // sqrt(g_mL) x_m - i sqrt(g_atL) x_at
  double coupling = 0.0;  // coefficient of x_m x_at in h_eff
};

/// Throws InvalidInput when m.qsse is missing.
ItoGenerator ito_generator_terms(const ModelParams& m, const FockConfig& cfg);

/// max-norm of -(1/2)(c_R^dag c_R + c_L^dag c_L) minus the deterministic
/// second-order terms -(1/2)(g_mR + g_mL) x_m^2 - (1/2) g_atL x_at^2.
double deterministic_term_mismatch(const ItoGenerator& gen, const QsseCouplings& c);

/// -i[H_eff, .] + Dt[c_R] + Dt[c_L]. No thermal bath and no laser cooling.
Liouvillian build_ito_generator(const ModelParams& m, const FockConfig& cfg);

/// Model with which the master-equation generator must coincide with the Ito
/// generator: cooling and thermal bath removed, g from the field couplings,
/// gamma_diff_at -> g_atL and gamma_diff_m -> g_mR + g_mL.
ModelParams equivalence_target(const ModelParams& m);

/// Mean-flow and diffusion coefficients read off a generator.
struct GeneratorTerms {
  double coupling_on_atoms = 0.0;     // -A[p_at, x_m]
  double coupling_on_membrane = 0.0;  // -A[p_m, x_at]
  double asymmetry = 0.0;             // coupling_on_membrane / coupling_on_atoms
  double cascaded_weight = 0.0;       // (coupling_on_atoms - coupling_on_membrane) / 2
  double diffusion_at = 0.0;          // D[p_at, p_at]
  double diffusion_m = 0.0;           // D[p_m, p_m]
};

GeneratorTerms generator_terms(const Liouvillian& l);

struct EquivalenceReport {
  FockConfig config;
  bool passed = false;
  double max_deviation = 0.0;   // ||L_ito - L_meq||_max
  double scale = 0.0;           // ||L_meq||_max
  double relative_deviation = 0.0;
  std::string location;         // operator-basis location of the largest entry
  double hamiltonian_deviation = 0.0;  // |A_ito - A_meq| on the Hamiltonian part
  double cascaded_deviation = 0.0;
  double diffusion_deviation = 0.0;
  double operator_identity_mismatch = 0.0;
  GeneratorTerms ito;
  GeneratorTerms meq;
};

inline constexpr double kEquivalenceTolerance = 1e-10;

/// Builds both generators and compares them entrywise. Never throws on a
/// mismatch; see verify_equivalence.
EquivalenceReport compare_generators(const ModelParams& m, const FockConfig& cfg,
                                     const LiouvillianOptions& meq_options = {});

/// compare_generators, throwing EquivalenceFailed (with location) on failure.
EquivalenceReport verify_equivalence(const ModelParams& m, const FockConfig& cfg,
                                     const LiouvillianOptions& meq_options = {});

}  // namespace memlat
