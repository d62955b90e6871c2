#include "pulsetrain/photon_budget.hpp"

#include "pulsetrain/errors.hpp"

namespace pulsetrain {

PhysicalConstants PhysicalConstants::codata(Precision p) {
  return {BigReal("8.8541878128e-12", p), BigReal("1.054571817e-34", p), BigReal("1.602176634e-19", p),
          BigReal("5.29177210903e-11", p), BigReal(299792458L, p),         BigReal("1.66057e-27", p)};
}

namespace {

void require_positive(const BigReal& x, const char* name) {
  if (!(x > 0)) {
    throw ArgumentError(std::string(name) + " must be positive");
  }
}

BigReal rational_power(const BigReal& x, long num, long den) {
  return pow(x, BigReal(num, x.precision()) / den);
}

}  // namespace

void TrapScenario::validate() const {
  require_positive(wavelength, "wavelength");
  require_positive(ion_mass, "ion mass");
  if (!(xi >= 1)) {
    throw ArgumentError("xi must be at least 1");
  }
  if (field) {
    require_positive(*field, "field");
  }
  if (beam_area) {
    require_positive(*beam_area, "beam area");
  }
}

BigReal mass_from_amu(const BigReal& amu_count, const PhysicalConstants& constants) {
  require_positive(amu_count, "ion mass");
  return amu_count * constants.amu;
}

BigReal trap_frequency(const BigReal& mass, const BigReal& z_s, const PhysicalConstants& constants) {
  require_positive(mass, "ion mass");
  require_positive(z_s, "ion separation");
  const BigReal& e = constants.e_charge;
  const BigReal pi = BigReal::pi(mass.precision());
  return sqrt(e * e / (4 * pi * constants.epsilon0 * mass * z_s * z_s * z_s));
}

BigReal scattering_cross_section(const BigReal& wavelength) {
  return 3 * wavelength * wavelength / (8 * BigReal::pi(wavelength.precision()));
}

BigReal effective_photon_number(const PulseArea& k, const BigReal& wavelength, const BigReal& field,
                                const PhysicalConstants& constants) {
  require_positive(wavelength, "wavelength");
  if (field.sign() < 0) {
    throw ArgumentError("field must be non-negative");
  }
  const BigReal sigma = scattering_cross_section(wavelength);
  return k.value(wavelength.precision()) / 4 * (constants.epsilon0 * sigma * wavelength / constants.dipole()) * field;
}

BigReal field_upper_bound(const BigReal& mass, const BigReal& xi, const BigReal& wavelength,
                          const PhysicalConstants& constants) {
  require_positive(xi, "xi");
  require_positive(wavelength, "wavelength");
  const BigReal pi = BigReal::pi(mass.precision());
  const BigReal omega_t = trap_frequency(mass, xi * wavelength, constants);
  const BigReal rabi_max = wavelength / (2 * pi) * sqrt(2 * mass / constants.hbar) * rational_power(omega_t, 3, 2);
  // |Omega| = p E / 4 hbar
  return 4 * constants.hbar * rabi_max / constants.dipole();
}

BigReal nbar_prefactor(const PhysicalConstants& constants) {
  const BigReal pi = BigReal::pi(constants.hbar.precision());
  return 3 * rational_power(constants.epsilon0, 1, 4) * sqrt(constants.hbar / constants.e_charge) /
         (32 * constants.a0 * constants.a0 * rational_power(pi, 11, 4));
}

NbarBound nbar_upper_bound(const BigReal& mass, const PulseArea& k, const BigReal& xi, const BigReal& wavelength,
                           const PhysicalConstants& constants) {
  require_positive(mass, "ion mass");
  require_positive(xi, "xi");
  require_positive(wavelength, "wavelength");
  NbarBound out{BigReal(mass.precision()), nbar_prefactor(constants), BigReal(mass.precision()), kRoundedPrefactor, {}};
  out.coefficient = out.prefactor * k.value(mass.precision()) / rational_power(mass, 1, 4);
  out.value = out.coefficient / rational_power(xi, 9, 4) * rational_power(wavelength, 7, 4);
  if (k.value(mass.precision()).sign() <= 0 || k.value(mass.precision()) > 2) {
    out.warnings.push_back("k = " + k.to_string() + " outside 0 < k <= 2");
  }
  const BigReal in_amu = mass / constants.amu;
  if (in_amu < 9 || in_amu > 200) {
    out.warnings.push_back("M = " + in_amu.to_string(6) + " u outside 9u <= M <= 200u");
  }
  return out;
}

BigReal nbar_continuous_mode(const PulseArea& k, const BigReal& omega_l, const BigReal& coupling, const BigReal& area,
                             const BigReal& power, const PhysicalConstants& constants) {
  require_positive(omega_l, "laser frequency");
  require_positive(coupling, "coupling constant");
  require_positive(area, "beam area");
  require_positive(power, "power");
  const BigReal pi = BigReal::pi(omega_l.precision());
  return k.value(omega_l.precision()) * pi / (omega_l * coupling) *
         sqrt(constants.epsilon0 * constants.c_light * area * power / 2);
}

}  // namespace pulsetrain
