#include "pulsetrain/kernels.hpp"

#include "pulsetrain/errors.hpp"
#include "pulsetrain/poisson.hpp"

#include <algorithm>
#include <vector>

namespace pulsetrain {

SumArray zero_sums(Precision p) {
  return {BigReal(p), BigReal(p), BigReal(p), BigReal(p), BigReal(p),
          BigReal(p), BigReal(p), BigReal(p), BigReal(p), BigReal(p)};
}

namespace {

struct Angle {
  BigReal root;  // sqrt(n)
  BigReal sin;
  BigReal cos;
};

Angle angle_at(long n, const BigReal& tau) {
  BigReal root = sqrt(BigReal(n, tau.precision()));
  auto [s, c] = sin_cos(tau * root);
  return {std::move(root), std::move(s), std::move(c)};
}

// Adds w * f_i(n) for all ten summands; a is the angle at n, b at n + 1.
void add_terms(SumArray& acc, const BigReal& w, const Angle& a, const Angle& b,
               const BigReal& sqrt_nbar) {
  const BigReal w_over_b = w / b.root;
  const BigReal w_scaled = w * sqrt_nbar / b.root;
  const BigReal w_root = w * a.root / sqrt_nbar;

  acc[0] += w_scaled * a.cos * b.sin;
  acc[1] += w_scaled * b.sin * b.cos;
  acc[2] += w_over_b * a.root * a.sin * b.sin;
  const BigReal cos_a_sq = a.cos * a.cos;
  acc[3] += w * cos_a_sq;
  acc[4] += w * a.cos * b.cos;
  acc[5] += w * b.cos * b.cos;
  acc[6] += w_root * b.cos * a.sin;
  acc[7] += w * cos_a_sq;
  acc[8] += w * b.sin * b.sin;
  acc[9] += 2 * w_root * a.sin * a.cos;
}

void check_range(const BigReal& nbar, TermRange range) {
  if (!(nbar > 0)) {
    throw ArgumentError("mean photon number must be positive");
  }
  if (range.lo < 0 || range.hi < range.lo) {
    throw ArgumentError("term range must satisfy 0 <= lo <= hi");
  }
}

// Sums a contiguous block [lo, hi] upward from its own lgamma-seeded weight.
SumArray sum_block(const BigReal& nbar, const BigReal& tau, const BigReal& sqrt_nbar, long lo,
                   long hi) {
  SumArray acc = zero_sums(nbar.precision());
  BigReal w = poisson_weight(nbar, lo);
  Angle a = angle_at(lo, tau);
  for (long n = lo; n <= hi; ++n) {
    Angle b = angle_at(n + 1, tau);
    add_terms(acc, w, a, b, sqrt_nbar);
    w *= nbar;
    w /= n + 1;
    a = std::move(b);
  }
  return acc;
}

}  // namespace

SumArray direct_sums_serial(const BigReal& nbar, const BigReal& tau, TermRange range) {
  check_range(nbar, range);
  const BigReal sqrt_nbar = sqrt(nbar);
  SumArray acc = zero_sums(nbar.precision());

  const long anchor = std::clamp(nbar.floor_to_long(), range.lo, range.hi);
  const BigReal w_anchor = poisson_weight(nbar, anchor);

  BigReal w = w_anchor;
  Angle a = angle_at(anchor, tau);
  const Angle a_anchor = a;
  for (long n = anchor; n <= range.hi; ++n) {
    Angle b = angle_at(n + 1, tau);
    add_terms(acc, w, a, b, sqrt_nbar);
    w *= nbar;
    w /= n + 1;
    a = std::move(b);
  }

  w = w_anchor;
  Angle b = a_anchor;
  for (long n = anchor - 1; n >= range.lo; --n) {
    w *= n + 1;
    w /= nbar;
    Angle a_n = angle_at(n, tau);
    add_terms(acc, w, a_n, b, sqrt_nbar);
    b = std::move(a_n);
  }
  return acc;
}

SumArray direct_sums_parallel(const BigReal& nbar, const BigReal& tau, TermRange range,
                              long block_size) {
  check_range(nbar, range);
  if (block_size < 1) {
    throw ArgumentError("block size must be positive");
  }
  const BigReal sqrt_nbar = sqrt(nbar);
  const long blocks = (range.size() + block_size - 1) / block_size;

  std::vector<SumArray> partial(static_cast<std::size_t>(blocks), zero_sums(nbar.precision()));
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < blocks; ++i) {
    const long lo = range.lo + i * block_size;
    const long hi = std::min(range.hi, lo + block_size - 1);
    partial[static_cast<std::size_t>(i)] = sum_block(nbar, tau, sqrt_nbar, lo, hi);
  }

  SumArray acc = zero_sums(nbar.precision());
  for (const auto& part : partial) {
    for (int j = 0; j < kSumCount; ++j) {
      acc[j] += part[j];
    }
  }
  return acc;
}

}  // namespace pulsetrain
