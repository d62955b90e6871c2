#include "pulsetrain/poisson.hpp"

#include "pulsetrain/errors.hpp"

#include <string>

namespace pulsetrain {

namespace {

using IntTable = std::vector<std::vector<mpz_class>>;

const IntTable& stirling_table() {
  static const IntTable table = [] {
    IntTable t(kMaxMomentOrder + 1);
    t[0] = {mpz_class(1)};
    for (int j = 1; j <= kMaxMomentOrder; ++j) {
      t[j].assign(j + 1, mpz_class(0));
      for (int k = 1; k <= j; ++k) {
        // S(j, k) = k S(j-1, k) + S(j-1, k-1)
        mpz_class prev_same = k <= j - 1 ? t[j - 1][k] : mpz_class(0);
        t[j][k] = k * prev_same + t[j - 1][k - 1];
      }
    }
    return t;
  }();
  return table;
}

const IntTable& central_table() {
  static const IntTable table = [] {
    const IntTable& s = stirling_table();
    IntTable t(kMaxMomentOrder + 1);
    for (int j = 0; j <= kMaxMomentOrder; ++j) {
      t[j].assign(j + 1, mpz_class(0));
      mpz_class binom(1);  // C(j, i), updated as i increases
      for (int i = 0; i <= j; ++i) {
        if (i > 0) {
          binom = binom * (j - i + 1) / i;
        }
        const int sign = (j - i) % 2 == 0 ? 1 : -1;
        for (int k = 0; k <= i; ++k) {
          const int power = j - i + k;
          t[j][power] += sign * binom * s[i][k];
        }
      }
    }
    return t;
  }();
  return table;
}

void check_order(int j) {
  if (j < 0) {
    throw ArgumentError("moment order must be non-negative, got " + std::to_string(j));
  }
  if (j > kMaxMomentOrder) {
    throw ArgumentError("moment order " + std::to_string(j) + " exceeds table size " +
                        std::to_string(kMaxMomentOrder));
  }
}

void check_mean(const BigReal& nbar) {
  if (!(nbar > 0)) {
    throw ArgumentError("Poisson mean must be positive");
  }
}

BigReal from_integer(const mpz_class& value, Precision p) {
  BigReal r(p);
  mpfr_set_z(r.get(), value.get_mpz_t(), MPFR_RNDN);
  return r;
}

BigReal horner(const std::vector<mpz_class>& coeffs, const BigReal& x) {
  BigReal acc(x.precision());
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc *= x;
    acc += from_integer(*it, x.precision());
  }
  return acc;
}

}  // namespace

const mpz_class& stirling2(int j, int k) {
  check_order(j);
  if (k < 0 || k > j) {
    throw ArgumentError("Stirling index k out of range");
  }
  return stirling_table()[j][k];
}

const std::vector<mpz_class>& central_moment_polynomial(int j) {
  check_order(j);
  return central_table()[j];
}

BigReal poisson_raw_moment(const BigReal& nbar, int j) {
  check_order(j);
  check_mean(nbar);
  return horner(stirling_table()[j], nbar);
}

BigReal poisson_central_moment(const BigReal& nbar, int j) {
  check_order(j);
  check_mean(nbar);
  return horner(central_table()[j], nbar);
}

PoissonMoments PoissonMoments::compute(const BigReal& nbar, int max_order) {
  check_order(max_order);
  check_mean(nbar);
  PoissonMoments m{nbar, {}, {}};
  m.raw.reserve(max_order + 1);
  m.central.reserve(max_order + 1);
  for (int j = 0; j <= max_order; ++j) {
    m.raw.push_back(horner(stirling_table()[j], nbar));
    m.central.push_back(horner(central_table()[j], nbar));
  }
  return m;
}

BigReal poisson_weight(const BigReal& nbar, long n) {
  check_mean(nbar);
  if (n < 0) {
    return BigReal(nbar.precision());
  }
  const Precision p = nbar.precision();
  return exp(BigReal(n, p) * log(nbar) - nbar - lgamma(BigReal(n + 1, p)));
}

BigReal poisson_tail(const BigReal& nbar, long lo, std::optional<long> hi) {
  check_mean(nbar);
  if (lo < 0 || (hi && *hi < lo)) {
    throw ArgumentError("poisson_tail requires 0 <= lo <= hi");
  }
  constexpr long kMaxTerms = 100'000'000;
  const Precision p = nbar.precision();
  const BigReal eps = pow10(-(p.digits() + 10), p);

  long anchor = nbar.floor_to_long();
  anchor = std::max(anchor, lo);
  if (hi) {
    anchor = std::min(anchor, *hi);
  }

  const BigReal w_anchor = poisson_weight(nbar, anchor);
  BigReal sum = w_anchor;
  long terms = 1;

  // Upward from the anchor; past the mode the ratio nbar/(n+1) < 1 bounds the rest geometrically.
  BigReal w = w_anchor;
  for (long n = anchor; !hi || n < *hi; ++n) {
    w *= nbar;
    w /= n + 1;
    sum += w;
    if (++terms > kMaxTerms) {
      throw ResourceError("poisson_tail exceeded its term budget");
    }
    const BigReal ratio = nbar / (n + 2);
    if (ratio < 1 && w * ratio < eps * sum * (1 - ratio)) {
      break;
    }
  }

  // Downward; below the mode the ratio n/nbar < 1.
  w = w_anchor;
  for (long n = anchor; n > lo; --n) {
    w *= n;
    w /= nbar;
    sum += w;
    if (++terms > kMaxTerms) {
      throw ResourceError("poisson_tail exceeded its term budget");
    }
    const BigReal ratio = BigReal(n - 1, p) / nbar;
    if (ratio < 1 && w * ratio < eps * sum * (1 - ratio)) {
      break;
    }
  }
  return sum;
}

}  // namespace pulsetrain
