#pragma once

#include "pulsetrain/big_complex.hpp"
#include "pulsetrain/big_real.hpp"
#include "pulsetrain/series.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace pulsetrain {

/// Row-major real 2x2 matrix.
struct Mat2 {
  BigReal a11, a12, a21, a22;

  static Mat2 identity(Precision p);
  static Mat2 zero(Precision p);

  friend Mat2 operator*(const Mat2& x, const Mat2& y);
  friend Mat2 operator+(const Mat2& x, const Mat2& y);
  friend Mat2 operator*(const BigReal& s, const Mat2& x);

  BigReal trace() const { return a11 + a22; }
  BigReal det() const { return a11 * a22 - a12 * a21; }
  std::pair<BigReal, BigReal> apply(const BigReal& y, const BigReal& z) const {
    return {a11 * y + a12 * z, a21 * y + a22 * z};
  }
};

/// Bloch vector r with rho = (I + r.sigma)/2; |1> has r_z = -1.
struct BlochState {
  BigReal x, y, z;

  /// State alpha|0> + beta|1>; requires |alpha|^2 + |beta|^2 = 1 within 10^-20.
  static BlochState from_amplitudes(const BigComplex& alpha, const BigComplex& beta);
  static BlochState excited(Precision p);

  BigReal dot(const BlochState& other) const { return x * other.x + y * other.y + z * other.z; }
  BigReal norm() const { return sqrt(dot(*this)); }
};

/// 2x2 Hermitian density matrix.
struct DensityMatrix {
  BigReal rho00;
  BigComplex rho01;
  BigReal rho11;

  BigComplex rho10() const { return rho01.conj(); }
  BigReal trace() const { return rho00 + rho11; }
  BlochState bloch() const;
};

/// Modulus/argument form of the 2x2 block M1 = [[a, b], [c, d]].
struct PowerDecomposition {
  BigReal a, b, c, d;
  BigReal K;  // d - a
  BigReal delta;
  BigReal det_m1;
  BigReal modulus;  // |lambda| = sqrt(ad - bc)
  BigReal theta;    // atan2(sqrt(-delta), a + d); zero when delta >= 0
  Mat2 J;
  BigReal det_j;

  static PowerDecomposition from_entries(const BigReal& a, const BigReal& b, const BigReal& c,
                                         const BigReal& d);

  /// Complex eigenvalue pair; the trigonometric formulas need this.
  bool oscillatory() const { return delta.sign() < 0; }
  Mat2 m1() const { return Mat2{a, b, c, d}; }
  Precision precision() const { return a.precision(); }
};

/// Affine Bloch channel r -> M r + c for one k pi pulse (beam phase 0).
///
/// M = diag(Mxx, M1), c = (0, S7 - S1, S4 - S6).
struct PulseMap {
  BigReal nbar;
  BigReal tau;
  std::optional<PulseArea> k;
  std::array<BigReal, 7> S;  // S_1..S_7
  BigReal mxx;
  Mat2 m1;
  BigReal shift_y;
  BigReal shift_z;
  PowerDecomposition decomposition;

  BlochState apply(const BlochState& r) const;
  Precision precision() const { return nbar.precision(); }
};

struct MapOptions {
  double phi = 0.0;
  SumOptions sums;
};

PulseMap build_pulse_map(const BigReal& nbar, const PulseArea& k, const MapOptions& options = {});

/// Channel at an arbitrary coupling phase tau, not tied to a pulse area.
PulseMap build_pulse_map_at(const BigReal& nbar, const BigReal& tau, const MapOptions& options = {});

/// Assembles the channel from precomputed S_1..S_7.
PulseMap pulse_map_from_sums(const BigReal& nbar, const BigReal& tau, std::span<const BigReal> s1_to_s7);

/// Reduced density matrix after one pulse on alpha|0> + beta|1>, general beam phase.
DensityMatrix single_pulse_state(const BigComplex& alpha, const BigComplex& beta, const BigReal& nbar,
                                 const PulseArea& k, const BigReal& phi, const SumOptions& options = {});

struct MatrixPower {
  Mat2 value;
  /// False when delta >= 0 and the power came from repeated squaring.
  bool closed_form;
};

/// M1^m = |lambda|^m [cos(m theta) I + sin(m theta) J / sqrt(det J)].
MatrixPower matrix_power(const PowerDecomposition& decomp, long m);

/// Iterated multiplication by squaring; the reference for matrix_power.
Mat2 matrix_power_by_squaring(const Mat2& m1, long m);

/// I + M1 + ... + M1^{m-1} = B1 I + B2 J.
struct GeometricSumCoeffs {
  BigReal B1;
  BigReal B2;
};

GeometricSumCoeffs geometric_sum(const PowerDecomposition& decomp, long m);

/// r^(m) = M^m r0 + (M^{m-1} + ... + I) c.
BlochState evolve(const BlochState& r0, const PulseMap& map, long m);

/// W_m = -r_z^(m) from the excited state.
BigReal inversion_at_pulse(const BigReal& nbar, const PulseArea& k, long m, const SumOptions& options = {});
BigReal inversion_at_pulse(const PulseMap& map, long m);

/// W at each of the given pulse counts, evaluated independently (in parallel).
std::vector<BigReal> inversion_series(const PulseMap& map, std::span<const long> ms);

struct ProfilePoint {
  BigReal tau;
  BigReal W;
};

/// W inside the pulse that follows m completed pulses, on a uniform tau grid
/// over [0, k pi / (2 sqrt(nbar))].
std::vector<ProfilePoint> inversion_profile(const BigReal& nbar, const PulseArea& k, long m, int samples,
                                            const SumOptions& options = {});

/// Profiles for several m; S_8..S_10 on the grid are computed once.
std::vector<std::vector<ProfilePoint>> inversion_profiles(const PulseMap& map, std::span<const long> ms,
                                                          int samples, const SumOptions& options = {});

/// (a - d)^2 + 4bc of the channel block at coupling phase tau.
BigReal discriminant(const BigReal& nbar, const BigReal& tau, const SumOptions& options = {});

/// p_f = (1 - r0 . r^(m)) / 2.
BigReal failure_probability(const BlochState& r0, const PulseMap& map, long m);
BigReal failure_probability(const BlochState& r0, const BigReal& nbar, const PulseArea& k, long m,
                            const SumOptions& options = {});

/// Expanded form of the same overlap in terms of (Mxx, |lambda|, theta, J, B1, B2, c).
BigReal failure_probability_closed_form(const BlochState& r0, const PulseMap& map, long m);

struct MonteCarlo {
  std::uint64_t seed = 0xC0FFEE;
  long count = 100000;
};

struct AverageFailure {
  BigReal value;
  std::optional<BigReal> standard_error;
};

/// Sphere average of p_f.  Without Monte Carlo settings the symmetric average
/// (1 - tr(M^m)/3)/2 is returned.
AverageFailure average_failure_probability(const PulseMap& map, long m,
                                           const std::optional<MonteCarlo>& monte_carlo = std::nullopt);

}  // namespace pulsetrain
