#include "support.hpp"

#include "pulsetrain/errors.hpp"
#include "pulsetrain/poisson.hpp"
#include "pulsetrain/series.hpp"

#include <cmath>

using namespace pulsetrain;
using namespace testing_support;

namespace {

// sum_{n=0}^{nbar + 40 sqrt(nbar) + 200} w_n g(n), weights from lgamma
template <typename F>
BigReal weighted_brute_force(const BigReal& nbar, F g) {
  const Precision p = nbar.precision();
  const long cutoff = static_cast<long>(nbar.to_double() + 40 * std::sqrt(nbar.to_double()) + 200);
  BigReal acc(p);
  const BigReal ln_nbar = log(nbar);
  for (long n = 0; n <= cutoff; ++n) {
    const BigReal w = exp(n * ln_nbar - nbar - lgamma(big(n + 1, p)));
    acc += w * g(big(n, p));
  }
  return acc;
}

}  // namespace

TEST_SUITE("poisson") {

TEST_CASE("Stirling table rows") {
  CHECK(stirling2(0, 0) == 1);
  CHECK(stirling2(5, 2) == 15);
  CHECK(stirling2(10, 5) == 42525);
  CHECK(stirling2(64, 64) == 1);
  CHECK_THROWS_AS(stirling2(65, 1), ArgumentError);
}

TEST_CASE("raw moments") {
  const BigReal nbar = big(10);
  CHECK(poisson_raw_moment(nbar, 0) == 1);
  CHECK(poisson_raw_moment(nbar, 1) == 10);
  CHECK(poisson_raw_moment(nbar, 2) == 110);
  CHECK_THROWS_AS(poisson_raw_moment(nbar, -1), ArgumentError);
  CHECK_THROWS_AS(poisson_raw_moment(big(0L), 2), ArgumentError);

  const Precision p(60);
  const BigReal nbar60 = big(10, p);
  const BigReal oracle = weighted_brute_force(nbar60, [](const BigReal& n) { return pow(n, 5L); });
  const BigReal value = poisson_raw_moment(nbar60, 5);
  CHECK(abs(value - oracle) <= abs(oracle) * tol(-40, p));
}

TEST_CASE("central moments") {
  const BigReal nbar = big(10);
  CHECK(poisson_central_moment(nbar, 0) == 1);
  CHECK(poisson_central_moment(nbar, 1) == 0);
  CHECK(poisson_central_moment(nbar, 2) == 10);
  CHECK(poisson_central_moment(nbar, 4) == 310);
  CHECK_THROWS_AS(poisson_central_moment(nbar, -3), ArgumentError);
}

TEST_CASE("central moments satisfy mu_{r+1} = nbar sum_{k<r} C(r,k) mu_k") {
  const Precision p(80);
  for (const char* text : {"0.37", "10", "1234.5", "1e6"}) {
    const BigReal nbar = big(text, p);
    const PoissonMoments m = PoissonMoments::compute(nbar, 40);
    for (int r = 1; r < 40; ++r) {
      BigReal acc(p);
      BigReal binom(1, p);
      for (int k = 0; k < r; ++k) {
        acc += binom * m.central[k];
        binom = binom * (r - k) / (k + 1);
      }
      acc *= nbar;
      CHECK(abs(m.central[r + 1] - acc) <= abs(acc) * tol(-70, p));
    }
  }
}

TEST_CASE("moment table invariants") {
  const BigReal nbar = big("12.5");
  const PoissonMoments m = PoissonMoments::compute(nbar, 12);
  CHECK(m.raw[0] == 1);
  CHECK(m.raw[1] == nbar);
  CHECK(m.central[0] == 1);
  CHECK(m.central[1] == 0);
  CHECK(m.central[2] == nbar);
  // central_j = sum_i C(j,i) (-nbar)^{j-i} raw_i
  for (int j = 0; j <= 12; ++j) {
    BigReal acc(nbar.precision());
    BigReal binom(1, nbar.precision());
    for (int i = 0; i <= j; ++i) {
      acc += binom * pow(-nbar, static_cast<long>(j - i)) * m.raw[i];
      binom = binom * (j - i) / (i + 1);
    }
    CHECK(abs(acc - m.central[j]) <= tol(-30) * (1 + abs(m.raw[j])));
  }
}

TEST_CASE("central moments match brute-force weighted sums") {
  const int d = 50;
  const Precision p(d);
  for (const char* text : {"1", "10", "250", "1000"}) {
    const BigReal nbar = big(text, p);
    for (int j = 0; j <= 16; ++j) {
      const BigReal oracle =
          weighted_brute_force(nbar, [&](const BigReal& n) { return pow(n - nbar, static_cast<long>(j)); });
      const BigReal value = poisson_central_moment(nbar, j);
      const BigReal scale = max(abs(oracle), pow(nbar, static_cast<long>(j / 2)));
      INFO("nbar = " << text << ", j = " << j);
      CHECK(abs(value - oracle) <= scale * tol(10 - d, p));
    }
  }
}

TEST_CASE("tail normalization") {
  for (int d : {30, 50}) {
    const Precision p(d);
    for (const char* text : {"1", "10", "1000", "10000"}) {
      const BigReal total = poisson_tail(big(text, p), 0, std::nullopt);
      CHECK(abs(total - 1) <= tol(5 - d, p));
    }
  }
  CHECK(abs(poisson_tail(big(10), 0, std::nullopt) - 1) <= tol(-40));
}

TEST_CASE("finite tail ranges") {
  const BigReal nbar = big(10);
  CHECK_CLOSE(poisson_tail(nbar, 3, 3), poisson_weight(nbar, 3), tol(-45));
  const BigReal head = poisson_tail(nbar, 0, 9);
  const BigReal rest = poisson_tail(nbar, 10, std::nullopt);
  CHECK_CLOSE(head + rest, big(1), tol(-45));
  CHECK_THROWS_AS(poisson_tail(nbar, 5, 4), ArgumentError);
}

TEST_CASE("tails outside the alpha0 window are below nbar^-2") {
  const BigReal nbar = big(1000);
  const BigReal alpha = window_bound_alpha(nbar, 2);
  const BigReal half_width = alpha * sqrt(nbar);
  const BigReal bound = 1 / (nbar * nbar);
  const BigReal lower = poisson_tail(nbar, 0, (nbar - half_width).ceil_to_long());
  const BigReal upper = poisson_tail(nbar, (nbar + half_width).floor_to_long(), std::nullopt);
  CHECK(lower < bound);
  CHECK(upper < bound);
  CHECK(lower.sign() > 0);
}

}
