#pragma once

#include "pulsetrain/big_real.hpp"
#include "pulsetrain/pulse_map.hpp"

#include <span>
#include <vector>

namespace pulsetrain {

struct EnvelopePoint {
  BigReal n_r;  // Rabi periods, m k / 2
  BigReal W;
};

struct FitResult {
  BigReal A;
  BigReal b;
  BigReal rms_residual;  // RMS of ln W - (ln A - b N_R)
  long n_used = 0;
  long n_excluded = 0;
};

/// Least squares of ln W against N_R; points with W <= 0 are skipped.
/// Throws InsufficientDataError with fewer than 3 usable points.
FitResult fit_exponential(std::span<const EnvelopePoint> points);

/// W at the pulse counts that complete whole Rabi periods, N_R = 1..n_r_max.
std::vector<EnvelopePoint> period_envelope(const PulseMap& map, long n_r_max);

}  // namespace pulsetrain
