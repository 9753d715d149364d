#pragma once

#include <optional>
#include <string>
#include <vector>

namespace memlat {

/// Laboratory inputs, SI units. Every frequency and rate is angular (rad/s).
struct PhysicalParams {
  double laser_wavelength = 0.0;  // m
  double laser_power = 0.0;       // W
  double beam_waist = 0.0;        // m, 1/e^2 intensity radius
  double detuning = 0.0;          // rad/s, laser minus atomic resonance
  double atom_mass = 0.0;         // kg
  double atom_linewidth = 0.0;    // rad/s
  double atom_number = 0.0;
  double membrane_freq = 0.0;     // rad/s
  double membrane_mass = 0.0;     // kg, effective mode mass
  double membrane_Q = 0.0;
  double reflectivity = 0.0;      // power reflectivity in [0, 1]
  double temperature = 0.0;       // K
  double cool_rate = 0.0;         // rad/s, Raman sideband cooling rate
  std::optional<double> trap_freq_override;  // rad/s, replaces derived omega_at
};

/// Couplings of the membrane and atomic COM quadratures to the right- and
/// left-incident field continua. All rad/s except alpha_sq (photon flux
/// normalization, dimensionless in the narrow-band convention).
struct QsseCouplings {
  double alpha_sq = 0.0;
  double g_mR = 0.0;
  double g_mL = 0.0;
  double g_atR = 0.0;
  double g_atL = 0.0;
};

/// Rates entering the master equation (rad/s), plus derived intermediates.
struct ModelParams {
  double omega_m = 0.0;
  double omega_at = 0.0;
  double g = 0.0;
  double reflectivity = 1.0;
  double transmittivity = 0.0;
  double gamma_cool = 0.0;
  double gamma_m = 0.0;
  double gamma_diff_at = 0.0;
  double gamma_diff_m = 0.0;
  double nbar = 0.0;

  // Intermediates; zero when the model was not derived from PhysicalParams.
  double V0 = 0.0;      // J
  double ell_at = 0.0;  // m
  double ell_m = 0.0;   // m
  std::optional<QsseCouplings> qsse;

  /// Sets reflectivity and keeps transmittivity = 1 - reflectivity.
  void set_reflectivity(double r) {
    reflectivity = r;
    transmittivity = 1.0 - r;
  }
};

/// Throws Error(NonPositiveInput) when an invariant of PhysicalParams fails.
void validate(const PhysicalParams& phys);

/// Non-fatal diagnostics: near-resonant detuning, red detuning.
std::vector<std::string> warnings(const PhysicalParams& phys);

/// Lattice depth V0 (J) from the two-level dipole potential of the standing
/// wave. The interference term of I(z) = I0 (1 + r + 2 sqrt(r) cos 2kz) has
/// modulation depth 4 sqrt(r) I0; the detuning enters through |delta|.
double lattice_depth(const PhysicalParams& phys);

ModelParams derive_model(const PhysicalParams& phys);

/// alpha^2 = 2 pi P / (hbar omega_l) and the four field couplings. The
/// left-field couplings are evaluated as explicit r*t products so r = 0 does
/// not produce 0/0 on the membrane side; g_atL has no finite r -> 0 limit
/// and raises ReflectivityZero.
QsseCouplings derive_qsse_couplings(const PhysicalParams& phys,
                                    const ModelParams& model);

/// derive_model followed by derive_qsse_couplings, stored in model.qsse.
ModelParams derive_full(const PhysicalParams& phys);

/// 2 (sqrt(g_mR g_atR) + sqrt(g_mL g_atL)): the Hamiltonian coupling implied
/// by the field couplings. Equals omega_at sqrt(N m_at / m_m) iff
/// omega_at == omega_m.
double coupling_from_qsse(const QsseCouplings& c);

/// Rb-87 / SiN membrane case study at 2 K with gamma_cool = 2e4 rad/s.
PhysicalParams preset_case_study();

}  // namespace memlat
