#pragma once

#include "pulsetrain/big_real.hpp"

#include <gmpxx.h>

#include <optional>
#include <vector>

namespace pulsetrain {

/// Largest moment order backed by the exact integer tables.
inline constexpr int kMaxMomentOrder = 64;

/// Stirling number of the second kind S(j, k), exact.  0 <= k <= j <= kMaxMomentOrder.
const mpz_class& stirling2(int j, int k);

/// Integer coefficients c_i of the central moment polynomial mu_j(nbar) = sum_i c_i nbar^i.
///
/// Obtained by collapsing the binomial transform of the Stirling raw-moment
/// polynomials; all coefficients are non-negative, so evaluation is free of
/// cancellation.
const std::vector<mpz_class>& central_moment_polynomial(int j);

/// E[n^j] for n ~ Poisson(nbar).
BigReal poisson_raw_moment(const BigReal& nbar, int j);

/// E[(n - nbar)^j] for n ~ Poisson(nbar).
BigReal poisson_central_moment(const BigReal& nbar, int j);

/// Raw and central moments 0..max_order at one mean.
struct PoissonMoments {
  BigReal nbar;
  std::vector<BigReal> raw;
  std::vector<BigReal> central;

  static PoissonMoments compute(const BigReal& nbar, int max_order);
};

/// e^{-nbar} nbar^n / n!, evaluated in log space.
BigReal poisson_weight(const BigReal& nbar, long n);

/// sum_{n=lo}^{hi} e^{-nbar} nbar^n / n!; `hi == std::nullopt` sums to infinity
/// (until the remaining tail is below the working precision).
BigReal poisson_tail(const BigReal& nbar, long lo, std::optional<long> hi);

}  // namespace pulsetrain
