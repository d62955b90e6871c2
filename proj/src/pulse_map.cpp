#include "pulsetrain/pulse_map.hpp"

#include "pulsetrain/errors.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>

namespace pulsetrain {

Mat2 Mat2::identity(Precision p) { return {BigReal(1, p), BigReal(p), BigReal(p), BigReal(1, p)}; }

Mat2 Mat2::zero(Precision p) { return {BigReal(p), BigReal(p), BigReal(p), BigReal(p)}; }

Mat2 operator*(const Mat2& x, const Mat2& y) {
  return {x.a11 * y.a11 + x.a12 * y.a21, x.a11 * y.a12 + x.a12 * y.a22,
          x.a21 * y.a11 + x.a22 * y.a21, x.a21 * y.a12 + x.a22 * y.a22};
}

Mat2 operator+(const Mat2& x, const Mat2& y) {
  return {x.a11 + y.a11, x.a12 + y.a12, x.a21 + y.a21, x.a22 + y.a22};
}

Mat2 operator*(const BigReal& s, const Mat2& x) { return {s * x.a11, s * x.a12, s * x.a21, s * x.a22}; }

BlochState BlochState::from_amplitudes(const BigComplex& alpha, const BigComplex& beta) {
  const Precision p = alpha.re.precision();
  if (abs(alpha.norm2() + beta.norm2() - 1) > pow10(-20, p)) {
    throw ArgumentError("amplitudes must satisfy |alpha|^2 + |beta|^2 = 1");
  }
  const BigComplex coherence = alpha * beta.conj();
  return {2 * coherence.re, -2 * coherence.im, alpha.norm2() - beta.norm2()};
}

BlochState BlochState::excited(Precision p) { return {BigReal(p), BigReal(p), BigReal(-1, p)}; }

BlochState DensityMatrix::bloch() const { return {2 * rho01.re, -2 * rho01.im, rho00 - rho11}; }

PowerDecomposition PowerDecomposition::from_entries(const BigReal& a, const BigReal& b, const BigReal& c,
                                                    const BigReal& d) {
  const BigReal diff = a - d;
  const BigReal delta = diff * diff + 4 * b * c;
  const BigReal det_m1 = a * d - b * c;
  BigReal theta(a.precision());
  if (delta.sign() < 0) {
    theta = atan2(sqrt(-delta), a + d);
  }
  Mat2 J{diff, 2 * b, 2 * c, -diff};
  BigReal det_j = J.det();
  return PowerDecomposition{a,     b,     c, d, d - a, delta, det_m1, sqrt(abs(det_m1)),
                            theta, std::move(J), std::move(det_j)};
}

BlochState PulseMap::apply(const BlochState& r) const {
  auto [y, z] = m1.apply(r.y, r.z);
  return {mxx * r.x, y + shift_y, z + shift_z};
}

PulseMap pulse_map_from_sums(const BigReal& nbar, const BigReal& tau, std::span<const BigReal> s) {
  if (s.size() < 7) {
    throw ArgumentError("a pulse map needs S_1..S_7");
  }
  const BigReal a = s[4] - s[2];
  const BigReal b = -(s[0] + s[6]);
  const BigReal c = 2 * s[1];
  const BigReal d = s[3] + s[5] - 1;
  return PulseMap{nbar,
                  tau,
                  std::nullopt,
                  {s[0], s[1], s[2], s[3], s[4], s[5], s[6]},
                  s[2] + s[4],
                  Mat2{a, b, c, d},
                  s[6] - s[0],
                  s[3] - s[5],
                  PowerDecomposition::from_entries(a, b, c, d)};
}

namespace {

void check_phase(double phi) {
  if (phi != 0.0) {
    throw UnsupportedConfiguration("the Bloch channel is only defined for beam phase 0");
  }
}

void check_pulses(long m) {
  if (m < 0) {
    throw ArgumentError("pulse count must be non-negative");
  }
}

}  // namespace

PulseMap build_pulse_map_at(const BigReal& nbar, const BigReal& tau, const MapOptions& options) {
  check_phase(options.phi);
  const SumArray s = compute_all_sums(nbar, tau, options.sums);
  return pulse_map_from_sums(nbar, tau, std::span<const BigReal>(s.data(), 7));
}

PulseMap build_pulse_map(const BigReal& nbar, const PulseArea& k, const MapOptions& options) {
  check_phase(options.phi);
  PulseMap map = build_pulse_map_at(nbar, pulse_tau(nbar, k), options);
  map.k = k;
  return map;
}

DensityMatrix single_pulse_state(const BigComplex& alpha, const BigComplex& beta, const BigReal& nbar,
                                 const PulseArea& k, const BigReal& phi, const SumOptions& options) {
  const Precision p = nbar.precision();
  if (abs(alpha.norm2() + beta.norm2() - 1) > pow10(-20, p)) {
    throw ArgumentError("amplitudes must satisfy |alpha|^2 + |beta|^2 = 1");
  }
  const SumArray s = compute_all_sums(nbar, pulse_tau(nbar, k), options);
  const BigReal& S1 = s[0];
  const BigReal& S2 = s[1];
  const BigReal& S3 = s[2];
  const BigReal& S4 = s[3];
  const BigReal& S5 = s[4];
  const BigReal& S6 = s[5];
  const BigReal& S7 = s[6];

  const BigComplex phase = BigComplex::polar(BigReal(1, p), phi);
  const BigComplex coherence = alpha * beta.conj();
  const BigReal pa = alpha.norm2();
  const BigReal pb = beta.norm2();

  // i (z - conj z) S2 with z = e^{i phi} alpha beta*
  const BigReal rho00 = pa * S4 + pb * (1 - S6) - 2 * (phase * coherence).im * S2;
  const BigComplex rho01 = S5 * coherence + S3 * (phase.conj() * phase.conj() * coherence.conj()) +
                           (phase.conj() * BigComplex(pa * S1 - pb * S7, BigReal(p))).times_i();
  return DensityMatrix{rho00, rho01, 1 - rho00};
}

Mat2 matrix_power_by_squaring(const Mat2& m1, long m) {
  check_pulses(m);
  Mat2 result = Mat2::identity(m1.a11.precision());
  Mat2 base = m1;
  for (long e = m; e > 0; e >>= 1) {
    if (e & 1) {
      result = result * base;
    }
    if (e > 1) {
      base = base * base;
    }
  }
  return result;
}

MatrixPower matrix_power(const PowerDecomposition& decomp, long m) {
  check_pulses(m);
  if (!decomp.oscillatory()) {
    return {matrix_power_by_squaring(decomp.m1(), m), false};
  }
  const Precision p = decomp.precision();
  const BigReal scale = pow(decomp.modulus, m);
  auto [s, c] = sin_cos(m * decomp.theta);
  const Mat2 value = scale * (c * Mat2::identity(p) + (s / sqrt(decomp.det_j)) * decomp.J);
  return {value, true};
}

GeometricSumCoeffs geometric_sum(const PowerDecomposition& decomp, long m) {
  if (m < 1) {
    throw ArgumentError("geometric sum needs m >= 1");
  }
  if (!decomp.oscillatory()) {
    throw DegenerateChannelError("channel block has real eigenvalues (delta >= 0); no {I, J} form");
  }
  const Precision p = decomp.precision();
  const BigReal& r = decomp.modulus;
  const BigReal& t = decomp.theta;
  const BigReal cos_t = cos(t);
  const BigReal denominator = 1 + r * r - 2 * r * cos_t;
  if (denominator <= pow10(5 - p.digits(), p)) {
    throw DegenerateChannelError("geometric sum denominator 1 + |lambda|^2 - 2|lambda|cos(theta) vanishes");
  }
  const BigReal rm = pow(r, m);
  const BigReal rm1 = rm * r;
  auto [sin_m, cos_m] = sin_cos(m * t);
  auto [sin_m1, cos_m1] = sin_cos((m - 1) * t);
  const BigReal B1 = (1 - r * cos_t - rm * cos_m + rm1 * cos_m1) / denominator;
  const BigReal B2 = (r * sin(t) - rm * sin_m + rm1 * sin_m1) / (denominator * sqrt(decomp.det_j));
  return {B1, B2};
}

namespace {

struct Affine2 {
  Mat2 A;
  BigReal ty, tz;
};

// (A2, t2) after (A1, t1)
Affine2 compose(const Affine2& second, const Affine2& first) {
  auto [y, z] = second.A.apply(first.ty, first.tz);
  return {second.A * first.A, y + second.ty, z + second.tz};
}

Affine2 affine_power(const PulseMap& map, long m) {
  const Precision p = map.precision();
  Affine2 result{Mat2::identity(p), BigReal(p), BigReal(p)};
  Affine2 base{map.m1, map.shift_y, map.shift_z};
  for (long e = m; e > 0; e >>= 1) {
    if (e & 1) {
      result = compose(base, result);
    }
    if (e > 1) {
      base = compose(base, base);
    }
  }
  return result;
}

}  // namespace

BlochState evolve(const BlochState& r0, const PulseMap& map, long m) {
  check_pulses(m);
  if (m == 0) {
    return r0;
  }
  const BigReal x = pow(map.mxx, m) * r0.x;
  if (!map.decomposition.oscillatory()) {
    const Affine2 step = affine_power(map, m);
    auto [y, z] = step.A.apply(r0.y, r0.z);
    return {x, y + step.ty, z + step.tz};
  }
  const MatrixPower power = matrix_power(map.decomposition, m);
  const GeometricSumCoeffs g = geometric_sum(map.decomposition, m);
  const Mat2 sum = g.B1 * Mat2::identity(map.precision()) + g.B2 * map.decomposition.J;
  auto [y, z] = power.value.apply(r0.y, r0.z);
  auto [cy, cz] = sum.apply(map.shift_y, map.shift_z);
  return {x, y + cy, z + cz};
}

BigReal inversion_at_pulse(const PulseMap& map, long m) {
  return -evolve(BlochState::excited(map.precision()), map, m).z;
}

BigReal inversion_at_pulse(const BigReal& nbar, const PulseArea& k, long m, const SumOptions& options) {
  MapOptions map_options;
  map_options.sums = options;
  return inversion_at_pulse(build_pulse_map(nbar, k, map_options), m);
}

std::vector<BigReal> inversion_series(const PulseMap& map, std::span<const long> ms) {
  std::vector<BigReal> out(ms.size(), BigReal(map.precision()));
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::size_t i = 0; i < ms.size(); ++i) {
    try {
      out[i] = inversion_at_pulse(map, ms[i]);
    } catch (...) {
#pragma omp critical
      failure = std::current_exception();
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
  return out;
}

std::vector<std::vector<ProfilePoint>> inversion_profiles(const PulseMap& map, std::span<const long> ms,
                                                          int samples, const SumOptions& options) {
  if (samples < 2) {
    throw ArgumentError("a profile needs at least 2 samples");
  }
  const Precision p = map.precision();
  // the grid is parallel; each point sums serially
  SumOptions inner = options;
  inner.direct.kernel = Kernel::serial;

  std::vector<SumArray> grid(static_cast<std::size_t>(samples), zero_sums(p));
  std::vector<BigReal> taus(static_cast<std::size_t>(samples), BigReal(p));
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (int j = 0; j < samples; ++j) {
    try {
      taus[j] = map.tau * j / (samples - 1);
      grid[j] = compute_all_sums(map.nbar, taus[j], inner);
    } catch (...) {
#pragma omp critical
      failure = std::current_exception();
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }

  std::vector<std::vector<ProfilePoint>> out;
  out.reserve(ms.size());
  for (long m : ms) {
    const BlochState r = evolve(BlochState::excited(p), map, m);
    std::vector<ProfilePoint> profile;
    profile.reserve(samples);
    for (int j = 0; j < samples; ++j) {
      const BigReal& S8 = grid[j][7];
      const BigReal& S9 = grid[j][8];
      const BigReal& S10 = grid[j][9];
      const BigReal p0 = ((S8 + S9) + r.z * (S8 - S9) + r.y * S10) / 2;
      profile.push_back({taus[j], 1 - 2 * p0});
    }
    out.push_back(std::move(profile));
  }
  return out;
}

std::vector<ProfilePoint> inversion_profile(const BigReal& nbar, const PulseArea& k, long m, int samples,
                                            const SumOptions& options) {
  check_pulses(m);
  MapOptions map_options;
  map_options.sums = options;
  const PulseMap map = build_pulse_map(nbar, k, map_options);
  const long ms[] = {m};
  return std::move(inversion_profiles(map, ms, samples, options).front());
}

BigReal discriminant(const BigReal& nbar, const BigReal& tau, const SumOptions& options) {
  if (!(tau > 0)) {
    throw ArgumentError("discriminant needs tau > 0");
  }
  MapOptions map_options;
  map_options.sums = options;
  return build_pulse_map_at(nbar, tau, map_options).decomposition.delta;
}

namespace {

void check_state(const BlochState& r0) {
  const Precision p = r0.x.precision();
  if (r0.dot(r0) > 1 + pow10(-30, p)) {
    throw ArgumentError("Bloch vector must satisfy |r| <= 1");
  }
}

}  // namespace

BigReal failure_probability(const BlochState& r0, const PulseMap& map, long m) {
  check_state(r0);
  return (1 - r0.dot(evolve(r0, map, m))) / 2;
}

BigReal failure_probability(const BlochState& r0, const BigReal& nbar, const PulseArea& k, long m,
                            const SumOptions& options) {
  MapOptions map_options;
  map_options.sums = options;
  return failure_probability(r0, build_pulse_map(nbar, k, map_options), m);
}

BigReal failure_probability_closed_form(const BlochState& r0, const PulseMap& map, long m) {
  check_state(r0);
  check_pulses(m);
  if (m == 0) {
    return (1 - r0.dot(r0)) / 2;
  }
  const PowerDecomposition& dec = map.decomposition;
  if (!dec.oscillatory()) {
    throw DegenerateChannelError("closed-form failure probability needs delta < 0");
  }
  const BigReal& y = r0.y;
  const BigReal& z = r0.z;
  const BigReal& cy = map.shift_y;
  const BigReal& cz = map.shift_z;
  const BigReal diff = dec.a - dec.d;

  const BigReal rm = pow(dec.modulus, m);
  auto [s, c] = sin_cos(m * dec.theta);
  const GeometricSumCoeffs g = geometric_sum(dec, m);

  const BigReal rJr = diff * y * y + 2 * (dec.b + dec.c) * y * z - diff * z * z;
  const BigReal rJc = y * (diff * cy + 2 * dec.b * cz) + z * (2 * dec.c * cy - diff * cz);
  const BigReal overlap = r0.x * r0.x * pow(map.mxx, m) + rm * c * (y * y + z * z) +
                          rm * s / sqrt(dec.det_j) * rJr + g.B1 * (y * cy + z * cz) + g.B2 * rJc;
  return (1 - overlap) / 2;
}

AverageFailure average_failure_probability(const PulseMap& map, long m,
                                           const std::optional<MonteCarlo>& monte_carlo) {
  check_pulses(m);
  const Precision p = map.precision();
  if (!monte_carlo) {
    const BigReal trace = pow(map.mxx, m) + matrix_power(map.decomposition, m).value.trace();
    return {(1 - trace / 3) / 2, std::nullopt};
  }
  if (monte_carlo->count < 2) {
    throw ArgumentError("Monte Carlo average needs at least 2 samples");
  }

  // r^(m) = A r0 + g; A is diagonal in x and block in (y, z)
  const BlochState origin{BigReal(p), BigReal(p), BigReal(p)};
  const BlochState g = evolve(origin, map, m);
  const BigReal ax = pow(map.mxx, m);
  const BlochState ey = evolve(BlochState{BigReal(p), BigReal(1, p), BigReal(p)}, map, m);
  const BlochState ez = evolve(BlochState{BigReal(p), BigReal(p), BigReal(1, p)}, map, m);
  const Mat2 block{ey.y - g.y, ez.y - g.y, ey.z - g.z, ez.z - g.z};

  std::mt19937_64 rng(monte_carlo->seed);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  const double two_pi = 6.283185307179586;

  BigReal sum(p);
  BigReal sum_sq(p);
  for (long i = 0; i < monte_carlo->count; ++i) {
    const double u = 2.0 * uniform() - 1.0;
    const double phi = two_pi * uniform();
    const BigReal z(u, p);
    const BigReal rho = sqrt(1 - z * z);
    auto [s, c] = sin_cos(BigReal(phi, p));
    const BigReal x = rho * c;
    const BigReal y = rho * s;
    auto [my, mz] = block.apply(y, z);
    const BigReal overlap = x * (ax * x) + y * (my + g.y) + z * (mz + g.z);
    const BigReal value = (1 - overlap) / 2;
    sum += value;
    sum_sq += value * value;
  }
  const long n = monte_carlo->count;
  const BigReal mean = sum / n;
  const BigReal variance = (sum_sq - n * mean * mean) / (n - 1);
  return {mean, sqrt(max(variance, BigReal(p)) / n)};
}

}  // namespace pulsetrain
