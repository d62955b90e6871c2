#pragma once

#include "pulsetrain/big_real.hpp"

#include <array>

namespace pulsetrain {

inline constexpr int kSumCount = 10;

/// S_1..S_10 stored at indices 0..9.
using SumArray = std::array<BigReal, kSumCount>;

SumArray zero_sums(Precision p);

/// Inclusive photon-number range [lo, hi].
struct TermRange {
  long lo = 0;
  long hi = 0;

  long size() const { return hi - lo + 1; }
};

inline constexpr long kDefaultBlockSize = 256;

/// Reference kernel: one sweep up and one sweep down from the Poisson mode,
/// weights iterated multiplicatively.
SumArray direct_sums_serial(const BigReal& nbar, const BigReal& tau, TermRange range);

/// OpenMP kernel.  The range is cut into fixed blocks; each block seeds its
/// weight from lgamma and the block partials are added in index order, so the
/// result does not depend on the thread count.
SumArray direct_sums_parallel(const BigReal& nbar, const BigReal& tau, TermRange range,
                              long block_size = kDefaultBlockSize);

}  // namespace pulsetrain
