#include "memlat/params.hpp"

#include <cmath>
#include <sstream>

#include "memlat/constants.hpp"
#include "memlat/errors.hpp"

namespace memlat {

namespace {

using namespace constants;

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream os;
    os << name << " must be positive and finite (got " << value << ")";
    throw Error(ErrorCode::NonPositiveInput, os.str());
  }
}

double laser_angular_frequency(const PhysicalParams& phys) {
  return two_pi * speed_of_light / phys.laser_wavelength;
}

}  // namespace

void validate(const PhysicalParams& phys) {
  require_positive(phys.laser_wavelength, "laser_wavelength");
  require_positive(phys.laser_power, "laser_power");
  require_positive(phys.beam_waist, "beam_waist");
  require_positive(std::abs(phys.detuning), "|detuning|");
  require_positive(phys.atom_mass, "atom_mass");
  require_positive(phys.atom_linewidth, "atom_linewidth");
  require_positive(phys.atom_number, "atom_number");
  require_positive(phys.membrane_freq, "membrane_freq");
  require_positive(phys.membrane_mass, "membrane_mass");
  require_positive(phys.membrane_Q, "membrane_Q");
  require_positive(phys.temperature, "temperature");
  if (!(phys.cool_rate >= 0.0) || !std::isfinite(phys.cool_rate)) {
    throw Error(ErrorCode::NonPositiveInput, "cool_rate must be >= 0");
  }
  if (!(phys.reflectivity >= 0.0 && phys.reflectivity <= 1.0)) {
    throw Error(ErrorCode::NonPositiveInput, "reflectivity must lie in [0, 1]");
  }
  if (phys.trap_freq_override) {
    require_positive(*phys.trap_freq_override, "trap_freq_override");
  }
}

std::vector<std::string> warnings(const PhysicalParams& phys) {
  std::vector<std::string> out;
  if (std::abs(phys.detuning) < 10.0 * phys.atom_linewidth) {
    out.emplace_back(
        "|detuning| < 10 atom_linewidth: dispersive (far-detuned) treatment is "
        "questionable");
  }
  if (phys.detuning < 0.0) {
    out.emplace_back(
        "red detuning: light-assisted collisions favour a blue-detuned lattice");
  }
  return out;
}

double lattice_depth(const PhysicalParams& phys) {
  const double omega_l = laser_angular_frequency(phys);
  const double omega_a = omega_l - phys.detuning;
  const double delta = std::abs(phys.detuning);
  const double peak_intensity =
      2.0 * phys.laser_power / (pi * phys.beam_waist * phys.beam_waist);
  const double dipole_prefactor = 3.0 * pi * speed_of_light * speed_of_light *
                                  phys.atom_linewidth /
                                  (2.0 * omega_a * omega_a * omega_a * delta);
  return dipole_prefactor * 4.0 * std::sqrt(phys.reflectivity) * peak_intensity;
}

ModelParams derive_model(const PhysicalParams& phys) {
  validate(phys);

  const double k_l = two_pi / phys.laser_wavelength;
  const double omega_l = laser_angular_frequency(phys);
  const double delta = std::abs(phys.detuning);

  ModelParams m;
  m.V0 = lattice_depth(phys);
  if (phys.trap_freq_override) {
    m.omega_at = *phys.trap_freq_override;
  } else {
    if (!(m.V0 > 0.0)) {
      throw Error(ErrorCode::TrapFrequencyImaginary,
                  "lattice depth V0 <= 0 (zero reflectivity?); supply "
                  "trap_freq_override");
    }
    m.omega_at = std::sqrt(2.0 * m.V0 * k_l * k_l / phys.atom_mass);
  }
  m.omega_m = phys.membrane_freq;
  m.ell_at = std::sqrt(hbar / (phys.atom_mass * m.omega_at));
  m.ell_m = std::sqrt(hbar / (phys.membrane_mass * phys.membrane_freq));
  m.g = m.omega_at *
        std::sqrt(phys.atom_number * phys.atom_mass / phys.membrane_mass);
  m.set_reflectivity(phys.reflectivity);
  m.gamma_cool = phys.cool_rate;
  m.gamma_m = phys.membrane_freq / phys.membrane_Q;
  m.nbar = boltzmann * phys.temperature / (hbar * phys.membrane_freq);

  const double lamb_dicke = k_l * m.ell_at;
  m.gamma_diff_at =
      lamb_dicke * lamb_dicke * phys.atom_linewidth * m.V0 / (hbar * delta);
  m.gamma_diff_m = 4.0 * phys.reflectivity * phys.laser_power /
                   (phys.membrane_mass * speed_of_light * speed_of_light) *
                   (omega_l / phys.membrane_freq);
  return m;
}

QsseCouplings derive_qsse_couplings(const PhysicalParams& phys,
                                    const ModelParams& model) {
  const double k_l = two_pi / phys.laser_wavelength;
  const double omega_l = laser_angular_frequency(phys);
  const double r = model.reflectivity;
  const double t = model.transmittivity;

  QsseCouplings c;
  c.alpha_sq = two_pi * phys.laser_power / (hbar * omega_l);

  const double mem = c.alpha_sq * k_l * k_l * model.ell_m * model.ell_m;
  c.g_mR = 2.0 * mem * r * r / pi;
  c.g_mL = 2.0 * mem * r * t / pi;

  const double at = model.omega_at / (4.0 * k_l * model.ell_at);
  c.g_atR = two_pi * phys.atom_number * at * at / c.alpha_sq;
  if (r > 0.0) {
    c.g_atL = (t / r) * c.g_atR;
  } else if (c.g_atR > 0.0) {
    throw Error(ErrorCode::ReflectivityZero,
                "g_atL = (t/r) g_atR diverges at reflectivity 0");
  }
  return c;
}

ModelParams derive_full(const PhysicalParams& phys) {
  ModelParams m = derive_model(phys);
  m.qsse = derive_qsse_couplings(phys, m);
  return m;
}

double coupling_from_qsse(const QsseCouplings& c) {
  return 2.0 * (std::sqrt(c.g_mR * c.g_atR) + std::sqrt(c.g_mL * c.g_atL));
}

PhysicalParams preset_case_study() {
  PhysicalParams p;
  p.laser_wavelength = constants::rb87_d2_wavelength;
  p.laser_power = 7e-3;
  p.beam_waist = 230e-6;
  p.detuning = two_pi * 1e9;
  p.atom_mass = constants::rb87_mass;
  p.atom_linewidth = constants::rb87_d2_linewidth;
  p.atom_number = 3e8;
  p.membrane_freq = two_pi * 0.86e6;
  p.membrane_mass = 8e-13;
  p.membrane_Q = 1e7;
  p.reflectivity = 0.31;
  p.temperature = 2.0;
  p.cool_rate = 2e4;
  return p;
}

}  // namespace memlat
