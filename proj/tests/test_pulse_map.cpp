#include "support.hpp"
#include "table1.hpp"

#include "pulsetrain/errors.hpp"
#include "pulsetrain/poisson.hpp"
#include "pulsetrain/pulse_map.hpp"

#include <cmath>
#include <random>

using namespace pulsetrain;
using namespace testing_support;

namespace {

BlochState random_unit(std::mt19937_64& rng, Precision p) {
  std::normal_distribution<double> gauss;
  const BigReal x(gauss(rng), p);
  const BigReal y(gauss(rng), p);
  const BigReal z(gauss(rng), p);
  const BigReal n = sqrt(x * x + y * y + z * z);
  return {x / n, y / n, z / n};
}

std::pair<BigComplex, BigComplex> random_amplitudes(std::mt19937_64& rng, Precision p) {
  std::normal_distribution<double> gauss;
  BigComplex a(BigReal(gauss(rng), p), BigReal(gauss(rng), p));
  BigComplex b(BigReal(gauss(rng), p), BigReal(gauss(rng), p));
  const BigReal n = sqrt(a.norm2() + b.norm2());
  const BigReal inv = 1 / n;
  return {inv * a, inv * b};
}

// Reduced density matrix of the joint post-pulse state, traced over the field.
DensityMatrix partial_trace_oracle(const BigComplex& alpha, const BigComplex& beta, const BigReal& nbar,
                                   const BigReal& tau, const BigReal& phi, long cutoff) {
  const Precision p = nbar.precision();
  std::vector<BigReal> c;
  for (long n = 0; n <= cutoff + 1; ++n) {
    c.push_back(sqrt(exp(n * log(nbar) - nbar - lgamma(big(n + 1, p)))));
  }
  const BigComplex e_plus = BigComplex::polar(big(1, p), phi);
  const BigComplex e_minus = e_plus.conj();
  const BigComplex minus_i(big(0L, p), big(-1, p));
  BigReal rho00(p);
  BigComplex rho01(p);
  for (long m = 0; m <= cutoff; ++m) {
    const BigReal root_m = sqrt(big(m, p));
    const BigReal root_m1 = sqrt(big(m + 1, p));
    // amplitude of |0, m> and |1, m>
    BigComplex a0 = (c[m] * cos(tau * root_m)) * alpha;
    if (m >= 1) {
      a0 = a0 + (c[m - 1] * sin(tau * root_m)) * (minus_i * e_minus * beta);
    }
    const BigComplex a1 =
        (c[m] * cos(tau * root_m1)) * beta + (c[m + 1] * sin(tau * root_m1)) * (minus_i * e_plus * alpha);
    rho00 += a0.norm2();
    rho01 = rho01 + a0 * a1.conj();
  }
  return {rho00, rho01, 1 - rho00};
}

Mat2 accumulate_powers(const Mat2& m1, long m) {
  const Precision p = m1.a11.precision();
  Mat2 sum = Mat2::zero(p);
  Mat2 power = Mat2::identity(p);
  for (long j = 0; j < m; ++j) {
    sum = sum + power;
    power = power * m1;
  }
  return sum;
}

void check_mat_close(const Mat2& x, const Mat2& y, const BigReal& bound) {
  CHECK_CLOSE(x.a11, y.a11, bound);
  CHECK_CLOSE(x.a12, y.a12, bound);
  CHECK_CLOSE(x.a21, y.a21, bound);
  CHECK_CLOSE(x.a22, y.a22, bound);
}

int count_local_maxima(const std::vector<ProfilePoint>& profile) {
  const std::size_t n = profile.size();
  int count = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const bool left = j == 0 || profile[j].W > profile[j - 1].W;
    const bool right = j + 1 == n || profile[j].W >= profile[j + 1].W;
    count += left && right ? 1 : 0;
  }
  return count;
}

}  // namespace

TEST_SUITE("pulse_map") {

TEST_CASE("zero pulse is the identity channel") {
  const PulseMap map = build_pulse_map(big(10000), PulseArea(0));
  const BigReal eps = tol(-40);
  CHECK_CLOSE(map.mxx, big(1), eps);
  check_mat_close(map.m1, Mat2::identity(map.precision()), eps);
  CHECK(abs(map.shift_y) < eps);
  CHECK(abs(map.shift_z) < eps);
  CHECK_FALSE(map.decomposition.oscillatory());
}

TEST_CASE("channel entries at nbar = 1e4, k = 2") {
  const Precision p(40);
  const PulseMap map = build_pulse_map(big(10000, p), PulseArea(2));
  std::vector<BigReal> s;
  for (const char* v : kTableOrder15) {
    s.push_back(big(v, p));
  }
  const BigReal eps = tol(-20, p);
  CHECK_CLOSE(map.m1.a11, s[4] - s[2], eps);
  CHECK_CLOSE(map.m1.a12, -(s[0] + s[6]), eps);
  CHECK_CLOSE(map.m1.a21, 2 * s[1], eps);
  CHECK_CLOSE(map.m1.a22, s[3] + s[5] - 1, eps);
  CHECK_CLOSE(map.mxx, s[2] + s[4], eps);
  CHECK_CLOSE(map.shift_y, s[6] - s[0], eps);
  CHECK_CLOSE(map.shift_z, s[3] - s[5], eps);
  CHECK(abs(map.m1.a11 - big("0.999506656941120", p)) < tol(-15, p));
  CHECK(abs(map.m1.a12 - big("-0.000078530333354", p)) < tol(-15, p));
  CHECK(abs(map.m1.a22 - big("0.999506632273850", p)) < tol(-15, p));
  CHECK(map.decomposition.oscillatory());
}

TEST_CASE("nonzero beam phase is rejected for the channel") {
  MapOptions options;
  options.phi = 0.3;
  CHECK_THROWS_AS(build_pulse_map(big(100), PulseArea(1), options), UnsupportedConfiguration);
}

TEST_CASE("channel maps the Bloch ball into itself") {
  std::mt19937_64 rng(99);
  const Precision p;
  for (long nbar : {10L, 1000L, 10000L}) {
    for (PulseArea k : {PulseArea(1, 2), PulseArea(1), PulseArea(2)}) {
      const PulseMap map = build_pulse_map(big(nbar, p), k);
      for (int i = 0; i < 1000; ++i) {
        const BlochState r = map.apply(random_unit(rng, p));
        CHECK(r.norm() <= 1 + tol(-20, p));
      }
    }
  }
}

TEST_CASE("single pulse state") {
  const Precision p;
  const BigComplex one(big(1, p), big(0L, p));
  const BigComplex zero(p);
  const DensityMatrix rest = single_pulse_state(one, zero, big(77, p), PulseArea(0), big(0L, p));
  CHECK_CLOSE(rest.rho00, big(1, p), tol(-40));
  CHECK(rest.rho01.norm2() < tol(-80));
  CHECK(abs(rest.rho11) < tol(-40));

  const Precision p40(40);
  const DensityMatrix excited = single_pulse_state(BigComplex(p40), BigComplex(big(1, p40), big(0L, p40)),
                                                   big(10000, p40), PulseArea(2), big(0L, p40));
  CHECK_CLOSE(excited.rho11, big(kTableOrder15[5], p40), tol(-20, p40));

  CHECK_THROWS_AS(single_pulse_state(one, one, big(10, p), PulseArea(1), big(0L, p)), ArgumentError);
}

TEST_CASE("single pulse state equals the partial trace of the joint state") {
  const Precision p(60);
  std::mt19937_64 rng(5);
  const BigReal nbar = big(10, p);
  for (const char* phi_text : {"0", "0.7", "-2.1"}) {
    for (PulseArea k : {PulseArea(1, 2), PulseArea(2), PulseArea(3)}) {
      const auto [alpha, beta] = random_amplitudes(rng, p);
      const BigReal phi = big(phi_text, p);
      const DensityMatrix rho = single_pulse_state(alpha, beta, nbar, k, phi);
      const DensityMatrix oracle = partial_trace_oracle(alpha, beta, nbar, pulse_tau(nbar, k), phi, 250);
      INFO("phi = " << phi_text << ", k = " << k.to_string());
      CHECK_CLOSE(rho.rho00, oracle.rho00, tol(-45, p));
      CHECK_CLOSE(rho.rho01.re, oracle.rho01.re, tol(-45, p));
      CHECK_CLOSE(rho.rho01.im, oracle.rho01.im, tol(-45, p));
      CHECK_CLOSE(rho.trace(), big(1, p), tol(-55, p));
    }
  }
}

TEST_CASE("Bloch vector of the post-pulse state is M r + c") {
  const Precision p;
  std::mt19937_64 rng(11);
  const BigReal nbar = big(10000, p);
  const PulseMap map = build_pulse_map(nbar, PulseArea(2));
  for (int i = 0; i < 100; ++i) {
    const auto [alpha, beta] = random_amplitudes(rng, p);
    const BlochState direct = single_pulse_state(alpha, beta, nbar, PulseArea(2), big(0L, p)).bloch();
    const BlochState mapped = map.apply(BlochState::from_amplitudes(alpha, beta));
    CHECK_CLOSE(direct.x, mapped.x, tol(-20));
    CHECK_CLOSE(direct.y, mapped.y, tol(-20));
    CHECK_CLOSE(direct.z, mapped.z, tol(-20));
  }
}

TEST_CASE("matrix power closed form") {
  const PulseMap map = build_pulse_map(big(10000), PulseArea(2));
  const PowerDecomposition& dec = map.decomposition;
  const Precision p = map.precision();
  check_mat_close(matrix_power(dec, 0).value, Mat2::identity(p), tol(-45));
  check_mat_close(matrix_power(dec, 1).value, dec.m1(), tol(-30));
  CHECK(matrix_power(dec, 1000).closed_form);
  check_mat_close(matrix_power(dec, 1000).value, matrix_power_by_squaring(dec.m1(), 1000), tol(-25));
  CHECK_CLOSE(dec.det_j, -dec.delta, tol(-45));
  CHECK_CLOSE(dec.modulus * dec.modulus, dec.det_m1, tol(-45));
  CHECK_THROWS_AS(matrix_power(dec, -1), ArgumentError);

  // plain iteration for small m, squaring beyond
  for (PulseArea k : {PulseArea(1, 2), PulseArea(1)}) {
    const PowerDecomposition d = build_pulse_map(big(10000), k).decomposition;
    Mat2 iterated = Mat2::identity(p);
    for (long m = 1; m <= 64; ++m) {
      iterated = iterated * d.m1();
      check_mat_close(matrix_power(d, m).value, iterated, tol(15 - p.digits()));
    }
    check_mat_close(matrix_power(d, 10000).value, matrix_power_by_squaring(d.m1(), 10000), tol(15 - p.digits()));
  }
}

TEST_CASE("real eigenvalues fall back to iterated multiplication") {
  const PowerDecomposition dec =
      PowerDecomposition::from_entries(big("0.9"), big("0.05"), big("0.02"), big("0.5"));
  CHECK_FALSE(dec.oscillatory());
  const MatrixPower power = matrix_power(dec, 7);
  CHECK_FALSE(power.closed_form);
  Mat2 iterated = Mat2::identity(Precision());
  for (int i = 0; i < 7; ++i) {
    iterated = iterated * dec.m1();
  }
  check_mat_close(power.value, iterated, tol(-45));
  CHECK_THROWS_AS(geometric_sum(dec, 3), DegenerateChannelError);
}

TEST_CASE("geometric sum coefficients") {
  const PulseMap map = build_pulse_map(big(10000), PulseArea(1));
  const PowerDecomposition& dec = map.decomposition;
  const Precision p = map.precision();
  const GeometricSumCoeffs one = geometric_sum(dec, 1);
  CHECK_CLOSE(one.B1, big(1), tol(-45));
  CHECK(abs(one.B2) < tol(-45));

  const GeometricSumCoeffs two = geometric_sum(dec, 2);
  CHECK_CLOSE(two.B1, 1 + dec.modulus * cos(dec.theta), tol(-40));
  CHECK_CLOSE(two.B2, dec.modulus * sin(dec.theta) / sqrt(dec.det_j), tol(-40));
  // projection of I + M1 onto {I, J}
  const Mat2 direct = Mat2::identity(p) + dec.m1();
  check_mat_close(two.B1 * Mat2::identity(p) + two.B2 * dec.J, direct, tol(-40));

  const GeometricSumCoeffs g500 = geometric_sum(dec, 500);
  check_mat_close(g500.B1 * Mat2::identity(p) + g500.B2 * dec.J, accumulate_powers(dec.m1(), 500), tol(-20));

  for (long m : {1L, 17L, 333L}) {
    const GeometricSumCoeffs now = geometric_sum(dec, m);
    const GeometricSumCoeffs next = geometric_sum(dec, m + 1);
    const Mat2 lhs = next.B1 * Mat2::identity(p) + next.B2 * dec.J;
    const Mat2 rhs = now.B1 * Mat2::identity(p) + now.B2 * dec.J + matrix_power(dec, m).value;
    check_mat_close(lhs, rhs, tol(-35));
  }
  CHECK_THROWS_AS(geometric_sum(dec, 0), ArgumentError);
}

TEST_CASE("evolve") {
  const Precision p;
  const PulseMap map = build_pulse_map(big(10000, p), PulseArea(2));
  std::mt19937_64 rng(3);
  const BlochState r0 = random_unit(rng, p);
  const BlochState same = evolve(r0, map, 0);
  CHECK(same.x == r0.x);
  CHECK(same.z == r0.z);

  const BlochState once = evolve(r0, map, 1);
  const BlochState applied = map.apply(r0);
  CHECK_CLOSE(once.x, applied.x, tol(-40));
  CHECK_CLOSE(once.y, applied.y, tol(-40));
  CHECK_CLOSE(once.z, applied.z, tol(-40));

  const BlochState ex{big(1, p), big(0L, p), big(0L, p)};
  BlochState iterated = ex;
  for (int i = 0; i < 10; ++i) {
    iterated = map.apply(iterated);
  }
  const BlochState closed = evolve(ex, map, 10);
  CHECK_CLOSE(closed.x, pow(map.mxx, 10L), tol(-40));
  CHECK_CLOSE(closed.x, iterated.x, tol(-40));
  CHECK_CLOSE(closed.y, iterated.y, tol(-40));
  CHECK_CLOSE(closed.z, iterated.z, tol(-40));

  // the affine doubling path
  const PulseMap flat = build_pulse_map(big(10000, p), PulseArea(0));
  const BlochState kept = evolve(r0, flat, 25);
  CHECK_CLOSE(kept.y, r0.y, tol(-35));
  CHECK_CLOSE(kept.z, r0.z, tol(-35));
}

TEST_CASE("inversion at pulse boundaries") {
  CHECK_CLOSE(inversion_at_pulse(big(10000), PulseArea(2), 0), big(1), tol(-45));

  const PulseMap map = build_pulse_map(big(10), PulseArea(2));
  BlochState r = BlochState::excited(map.precision());
  for (long m = 1; m <= 50; ++m) {
    r = map.apply(r);
    CHECK_CLOSE(inversion_at_pulse(map, m), -r.z, tol(-20));
  }

  const PulseMap big_map = build_pulse_map(big(10000), PulseArea(2));
  std::vector<long> ms;
  for (long m = 0; m <= 10000; m += 37) {
    ms.push_back(m);
  }
  const std::vector<BigReal> W = inversion_series(big_map, ms);
  for (std::size_t i = 0; i < ms.size(); ++i) {
    CHECK(W[i] >= 0);
    CHECK(W[i] <= 1);
    if (i % 50 == 0) {
      CHECK(W[i] == inversion_at_pulse(big_map, ms[i]));
    }
  }
}

TEST_CASE("intra-pulse profile") {
  const BigReal nbar = big(10);
  const PulseArea k(2);
  const PulseMap map = build_pulse_map(nbar, k);
  const long ms[] = {0, 1, 2, 5};
  const auto profiles = inversion_profiles(map, ms, 41);
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const auto& profile = profiles[i];
    REQUIRE(profile.size() == 41);
    CHECK(profile.front().tau == 0);
    CHECK_CLOSE(profile.back().tau, map.tau, tol(-45));
    // continuity with the boundary values on both sides
    CHECK_CLOSE(profile.front().W, inversion_at_pulse(map, ms[i]), tol(-40));
    CHECK_CLOSE(profile.back().W, inversion_at_pulse(map, ms[i] + 1), tol(-40));
    for (const auto& point : profile) {
      CHECK(abs(point.W) <= 1);
    }
  }

  // mid-window point from separately summed S_8..S_10
  const std::vector<ProfilePoint> single = inversion_profile(nbar, k, 0, 41);
  const BigReal tau = single[20].tau;
  const BigReal S8 = sum_direct(SeriesSpec::from_tau(8, nbar, tau), 12);
  const BigReal S9 = sum_direct(SeriesSpec::from_tau(9, nbar, tau), 12);
  // r^(0) = (0, 0, -1)
  const BigReal expected = 1 - ((S8 + S9) - (S8 - S9));
  CHECK_CLOSE(single[20].W, expected, tol(-11));
  CHECK_THROWS_AS(inversion_profile(nbar, k, 0, 1), ArgumentError);
}

TEST_CASE("two local maxima in each of the first periods") {
  const PulseMap map = build_pulse_map(big(10), PulseArea(2));
  const long ms[] = {0, 1, 2};
  for (const auto& profile : inversion_profiles(map, ms, 200)) {
    CHECK(count_local_maxima(profile) == 2);
  }
}

TEST_CASE("discriminant") {
  const BigReal nbar = big(10);
  CHECK(discriminant(nbar, big("0.5")) < 0);
  CHECK(abs(discriminant(nbar, big("0.001"))) <= tol(-3));
  CHECK(abs(discriminant(nbar, big("0.0001"))) <= tol(-3));
  for (const char* t : {"0.05", "0.2", "0.4", "0.48", "0.5", "0.7", "0.9", "0.99"}) {
    INFO("tau = " << t);
    CHECK(discriminant(nbar, big(t)) < 0);
  }
  // real eigenvalues in a narrow band just below tau = 0.4941
  CHECK(discriminant(nbar, big("0.49")) > 0);
  CHECK_THROWS_AS(discriminant(nbar, big(0L)), ArgumentError);
}

TEST_CASE("failure probability") {
  const Precision p;
  std::mt19937_64 rng(8);
  const BigReal nbar = big(10000, p);
  const PulseMap map = build_pulse_map(nbar, PulseArea(1));
  const BlochState r0 = random_unit(rng, p);
  CHECK(abs(failure_probability(r0, map, 0)) < tol(-45));

  const BlochState ex{big(1, p), big(0L, p), big(0L, p)};
  for (long m : {2L, 10L, 100L}) {
    CHECK_CLOSE(failure_probability(ex, map, m), -(pow(map.mxx, m) - 1) / 2, tol(-40));
  }
  for (int i = 0; i < 20; ++i) {
    const BlochState r = random_unit(rng, p);
    for (long m : {1L, 2L, 7L, 150L}) {
      const BigReal direct = failure_probability(r, map, m);
      CHECK(direct >= 0);
      CHECK(direct <= 1);
      CHECK_CLOSE(failure_probability_closed_form(r, map, m), direct, tol(-35));
    }
  }
  const BlochState outside{big(1, p), big(1, p), big(0L, p)};
  CHECK_THROWS_AS(failure_probability(outside, map, 1), ArgumentError);
}

TEST_CASE("sphere-averaged failure probability") {
  const Precision p;
  const PulseMap map4 = build_pulse_map(big(10000, p), PulseArea(1));
  CHECK(abs(average_failure_probability(map4, 0).value) < tol(-45));
  const AverageFailure mc0 = average_failure_probability(map4, 0, MonteCarlo{1, 1000});
  CHECK(abs(mc0.value) < tol(-40));

  const BigReal at100 = average_failure_probability(map4, 100).value;
  CHECK(at100 > big("0.001"));
  CHECK(at100 < big("0.1"));

  // symmetric average equals -(1/2)[(X^m - 1)/3 + 2(|lambda|^m cos(m theta) - 1)/3]
  const PowerDecomposition& dec = map4.decomposition;
  const long m = 200;
  const BigReal formula =
      -((pow(map4.mxx, m) - 1) / 3 + 2 * (pow(dec.modulus, m) * cos(m * dec.theta) - 1) / 3) / 2;
  const BigReal analytic = average_failure_probability(map4, m).value;
  CHECK_CLOSE(analytic, formula, tol(-40));

  const AverageFailure mc = average_failure_probability(map4, m, MonteCarlo{1, 100000});
  REQUIRE(mc.standard_error.has_value());
  CHECK(abs(mc.value - analytic) <= 3 * *mc.standard_error);

  const PulseMap map6 = build_pulse_map(big(1000000, p), PulseArea(1));
  CHECK(average_failure_probability(map6, 100).value < at100);

  // non-decreasing over whole Rabi periods
  BigReal previous = average_failure_probability(map4, 0).value;
  for (long mm = 2; mm <= 1000; mm += 2) {
    const BigReal now = average_failure_probability(map4, mm).value;
    CHECK(now >= previous - tol(-25));
    CHECK(now <= 1);
    previous = now;
  }
}

}
