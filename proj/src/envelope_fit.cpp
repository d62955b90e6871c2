#include "pulsetrain/envelope_fit.hpp"

#include "pulsetrain/errors.hpp"

namespace pulsetrain {

FitResult fit_exponential(std::span<const EnvelopePoint> points) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].n_r.sign() < 0) {
      throw ArgumentError("N_R must be non-negative");
    }
    if (i > 0 && !(points[i].n_r > points[i - 1].n_r)) {
      throw ArgumentError("envelope points must be strictly increasing in N_R");
    }
  }
  std::vector<BigReal> xs;
  std::vector<BigReal> ys;
  for (const auto& point : points) {
    if (point.W.sign() > 0) {
      xs.push_back(point.n_r);
      ys.push_back(log(point.W));
    }
  }
  const long used = static_cast<long>(xs.size());
  if (used < 3) {
    throw InsufficientDataError("need at least 3 points with W > 0, got " + std::to_string(used));
  }
  const Precision p = xs.front().precision();
  BigReal mean_x(p);
  BigReal mean_y(p);
  for (long i = 0; i < used; ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= used;
  mean_y /= used;
  BigReal sxx(p);
  BigReal sxy(p);
  for (long i = 0; i < used; ++i) {
    const BigReal dx = xs[i] - mean_x;
    sxx += dx * dx;
    sxy += dx * (ys[i] - mean_y);
  }
  const BigReal slope = sxy / sxx;
  const BigReal intercept = mean_y - slope * mean_x;
  BigReal ss(p);
  for (long i = 0; i < used; ++i) {
    const BigReal r = ys[i] - (intercept + slope * xs[i]);
    ss += r * r;
  }
  return FitResult{exp(intercept), -slope, sqrt(ss / used), used, static_cast<long>(points.size()) - used};
}

std::vector<EnvelopePoint> period_envelope(const PulseMap& map, long n_r_max) {
  if (!map.k) {
    throw ArgumentError("period envelope needs a pulse area");
  }
  if (n_r_max < 1) {
    throw ArgumentError("n_r_max must be at least 1");
  }
  const PulseArea& k = *map.k;
  if (k.num() == 0) {
    throw ArgumentError("pulse area must be positive");
  }
  // smallest m with m k / 2 integral
  long step = 1;
  while (!k.completes_period(step)) {
    ++step;
  }
  const long periods_per_step = step * k.num() / (2 * k.den());
  std::vector<long> ms;
  for (long n = periods_per_step; n <= n_r_max; n += periods_per_step) {
    ms.push_back(n / periods_per_step * step);
  }
  const std::vector<BigReal> W = inversion_series(map, ms);
  std::vector<EnvelopePoint> out;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    out.push_back({BigReal(static_cast<long>(i + 1) * periods_per_step, map.precision()), W[i]});
  }
  return out;
}

}  // namespace pulsetrain
