#pragma once

#include "pulsetrain/big_real.hpp"
#include "pulsetrain/series.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pulsetrain {

/// SI constants.  The atomic mass unit is the four-digit value 1.66057e-27 kg.
struct PhysicalConstants {
  BigReal epsilon0;  // F/m
  BigReal hbar;      // J s
  BigReal e_charge;  // C
  BigReal a0;        // m
  BigReal c_light;   // m/s
  BigReal amu;       // kg

  static PhysicalConstants codata(Precision p = Precision());

  /// Dipole moment e a0.
  BigReal dipole() const { return e_charge * a0; }
};

struct TrapScenario {
  BigReal wavelength;  // m
  BigReal xi;          // ion separation z_s = xi * wavelength
  BigReal ion_mass;    // kg
  PulseArea k{2};
  std::optional<BigReal> field;      // V/m
  std::optional<BigReal> beam_area;  // m^2

  /// Throws ArgumentError unless wavelength > 0, xi >= 1 and mass > 0.
  void validate() const;
};

BigReal mass_from_amu(const BigReal& amu_count, const PhysicalConstants& constants);

/// omega_t = sqrt(e^2 / (4 pi eps0 M z_s^3)), rad/s.
BigReal trap_frequency(const BigReal& mass, const BigReal& z_s, const PhysicalConstants& constants);

/// sigma_eff = 3 lambda^2 / (8 pi).
BigReal scattering_cross_section(const BigReal& wavelength);

/// (k/4) (eps0 sigma_eff lambda / p) E with p = e a0.
BigReal effective_photon_number(const PulseArea& k, const BigReal& wavelength, const BigReal& field,
                                const PhysicalConstants& constants);

/// Largest field keeping the Rabi frequency p E / 4 hbar inside the Lamb-Dicke bound
/// (lambda / 2 pi) sqrt(2 M / hbar) omega_t^{3/2}, z_s = xi lambda.
BigReal field_upper_bound(const BigReal& mass, const BigReal& xi, const BigReal& wavelength,
                          const PhysicalConstants& constants);

inline constexpr double kRoundedPrefactor = 6e7;
inline constexpr double kRoundedCoefficient9u = 3.4e14;  // k = 2, M = 9u

struct NbarBound {
  BigReal value;
  /// 3 eps0^{1/4} sqrt(hbar / e) / (32 a0^2 pi^{11/4})
  BigReal prefactor;
  /// prefactor * k * M^{-1/4}, i.e. nbar = coefficient * xi^{-9/4} lambda^{7/4}
  BigReal coefficient;
  double rounded_prefactor = kRoundedPrefactor;
  std::vector<std::string> warnings;
};

BigReal nbar_prefactor(const PhysicalConstants& constants);

/// Warns (does not throw) outside 0 < k <= 2, 9u <= M <= 200u.
NbarBound nbar_upper_bound(const BigReal& mass, const PulseArea& k, const BigReal& xi, const BigReal& wavelength,
                           const PhysicalConstants& constants);

/// (k pi / (omega_L d)) sqrt(eps0 c A P / 2).  Counts all photons, not just the coupled ones.
BigReal nbar_continuous_mode(const PulseArea& k, const BigReal& omega_l, const BigReal& coupling, const BigReal& area,
                             const BigReal& power, const PhysicalConstants& constants);

}  // namespace pulsetrain
