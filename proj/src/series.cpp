#include "pulsetrain/series.hpp"

#include "pulsetrain/errors.hpp"
#include "pulsetrain/jet.hpp"
#include "pulsetrain/poisson.hpp"

#include <charconv>
#include <cmath>
#include <numeric>

namespace pulsetrain {

PulseArea::PulseArea(long num, long den) : num_(num), den_(den) {
  if (den_ <= 0) {
    throw ArgumentError("pulse area denominator must be positive");
  }
  if (num_ < 0) {
    throw ArgumentError("pulse area must be non-negative");
  }
  const long g = std::gcd(num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

namespace {

long parse_long(std::string_view text, std::string_view whole) {
  long value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ArgumentError("not a pulse area: '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

PulseArea PulseArea::parse(std::string_view text) {
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    return PulseArea(parse_long(text.substr(0, slash), text), parse_long(text.substr(slash + 1), text));
  }
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    const std::string_view frac = text.substr(dot + 1);
    if (frac.size() > 15) {
      throw ArgumentError("pulse area has too many decimals: '" + std::string(text) + "'");
    }
    long den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) {
      den *= 10;
    }
    const long whole = dot == 0 ? 0 : parse_long(text.substr(0, dot), text);
    const long part = frac.empty() ? 0 : parse_long(frac, text);
    return PulseArea(whole * den + part, den);
  }
  return PulseArea(parse_long(text, text), 1);
}

BigReal PulseArea::value(Precision p) const { return BigReal(num_, p) / den_; }

std::string PulseArea::to_string() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

bool PulseArea::completes_period(long m) const { return (m * num_) % (2 * den_) == 0; }

BigReal pulse_tau(const BigReal& nbar, const PulseArea& k) {
  if (!(nbar > 0)) {
    throw ArgumentError("mean photon number must be positive");
  }
  return k.value(nbar.precision()) * BigReal::pi(nbar.precision()) / (2 * sqrt(nbar));
}

namespace {

void check_index(int index) {
  if (index < 1 || index > kSumCount) {
    throw ArgumentError("sum index must be in 1..10, got " + std::to_string(index));
  }
}

void check_nbar(const BigReal& nbar) {
  if (!(nbar > 0)) {
    throw ArgumentError("mean photon number must be positive");
  }
}

void check_l(int l) {
  if (l < 0) {
    throw ArgumentError("target exponent l must be non-negative");
  }
}

}  // namespace

SeriesSpec SeriesSpec::from_pulse(int index, const BigReal& nbar, const PulseArea& k) {
  check_index(index);
  return SeriesSpec{index, nbar, pulse_tau(nbar, k), k};
}

SeriesSpec SeriesSpec::from_tau(int index, const BigReal& nbar, const BigReal& tau) {
  check_index(index);
  check_nbar(nbar);
  if (tau.sign() < 0) {
    throw ArgumentError("tau must be non-negative");
  }
  return SeriesSpec{index, nbar, tau, std::nullopt};
}

long truncation_cutoff(const BigReal& nbar, int l) {
  check_nbar(nbar);
  check_l(l);
  long t = std::max(1L, nbar.floor_to_long());
  const BigReal ln_nbar = log(nbar);
  BigReal log_fact = lgamma(BigReal(t, nbar.precision()));  // ln (t-1)!
  while (!(log_fact > (t + l) * ln_nbar - nbar)) {
    log_fact += log(BigReal(t, nbar.precision()));
    ++t;
  }
  return t;
}

int expansion_order(const BigReal& nbar, int l) {
  check_nbar(nbar);
  check_l(l);
  const Precision p = nbar.precision();
  if (!(nbar > 1)) {
    throw PlannerError("expansion order undefined for nbar <= 1; use direct summation");
  }
  const BigReal ln_nbar = log(nbar);
  const BigReal lead = (l + 1) * ln_nbar;
  const BigReal denominator = ln_nbar / 2 - log(lead);
  if (denominator.sign() <= 0) {
    throw PlannerError("expansion-order denominator ln(nbar)/2 - ln((l+1) ln nbar) = " +
                       denominator.to_string(6) + " is not positive; use direct summation");
  }
  const BigReal numerator =
      log(sqrt(BigReal(2, p)) * pow(nbar, BigReal(2 * l - 1, p) / 2) * lead);
  return static_cast<int>((numerator / denominator).ceil_to_long());
}

BigReal window_bound_alpha(const BigReal& nbar, int l) {
  check_l(l);
  if (!(nbar > 1)) {
    throw ArgumentError("window_bound_alpha requires nbar > 1");
  }
  const BigReal root = sqrt(nbar);
  const BigReal lead = (l + 1) * log(nbar);
  return 1 / root + lead / root + sqrt(lead * lead / nbar + 2 * lead);
}

PrecisionPlan plan_precision(const BigReal& nbar, int l) {
  std::optional<int> p;
  try {
    p = expansion_order(nbar, l);
  } catch (const PlannerError&) {
    p.reset();
  }
  return PrecisionPlan{l, p, window_bound_alpha(nbar, l), truncation_cutoff(nbar, l)};
}

TermRange precision_window(const BigReal& nbar, Precision p) {
  check_nbar(nbar);
  const double nb = nbar.to_double();
  const double ln_nb = std::log(nb);
  // Summands are bounded by sqrt(max(nbar, 1)) times a modest constant.
  const double target = -(p.digits() + 5) * std::log(10.0) - 0.5 * std::log(std::max(nb, 1.0)) -
                        std::log(1000.0);
  auto log_weight = [&](long n) {
    return static_cast<double>(n) * ln_nb - nb - std::lgamma(static_cast<double>(n) + 1.0);
  };
  const long mode = static_cast<long>(std::floor(nb));

  long hi = mode;
  for (;; ++hi) {
    const double ratio = nb / static_cast<double>(hi + 2);
    if (ratio < 1.0 && log_weight(hi + 1) - std::log1p(-ratio) < target) {
      break;
    }
  }
  long lo = mode;
  for (; lo > 0; --lo) {
    const double ratio = static_cast<double>(lo - 1) / nb;
    if (ratio < 1.0 && log_weight(lo - 1) - std::log1p(-ratio) < target) {
      break;
    }
  }
  return TermRange{lo, hi};
}

SumArray sum_direct_all(const BigReal& nbar, const BigReal& tau, TermRange range,
                        const DirectOptions& options) {
  check_nbar(nbar);
  if (range.size() > options.max_terms) {
    throw ResourceError("direct summation needs " + std::to_string(range.size()) +
                        " terms, above the limit of " + std::to_string(options.max_terms));
  }
  return options.kernel == Kernel::serial ? direct_sums_serial(nbar, tau, range)
                                          : direct_sums_parallel(nbar, tau, range);
}

BigReal sum_direct(const SeriesSpec& spec, int l, const DirectOptions& options) {
  check_index(spec.index);
  check_nbar(spec.nbar);
  const long t = truncation_cutoff(spec.nbar, l);
  const long lo = std::min(precision_window(spec.nbar, spec.precision()).lo, t);
  return sum_direct_all(spec.nbar, spec.tau, TermRange{lo, t}, options)[spec.index - 1];
}

SumArray sum_taylor_all(const BigReal& nbar, const BigReal& tau, int p) {
  check_nbar(nbar);
  if (nbar < kTaylorMinimumNbar) {
    throw ArgumentError("Taylor summation requires nbar >= 100; use direct summation");
  }
  if (p < 2 || p > kMaxMomentOrder) {
    throw ArgumentError("Taylor order must be in 2.." + std::to_string(kMaxMomentOrder));
  }
  const Precision prec = nbar.precision();

  // n = (1 + x) nbar:  sqrt(n) = sqrt(nbar) u,  sqrt(n + 1) = sqrt(nbar) v.
  const Jet x = Jet::variable(p, prec);
  auto shifted_root = [&](const BigReal& shift) {
    try {
      return sqrt(x + shift);
    } catch (const DomainError& e) {
      throw ArgumentError(std::string("invalid series specification: ") + e.what());
    }
  };
  const Jet u = shifted_root(BigReal(1, prec));
  const Jet v = shifted_root(1 + 1 / nbar);
  const Jet inv_v = reciprocal(v);
  const BigReal amplitude = tau * sqrt(nbar);
  const auto [sa, ca] = sin_cos(u * amplitude);
  const auto [sb, cb] = sin_cos(v * amplitude);

  const Jet ca_sq = ca * ca;
  const std::array<Jet, kSumCount> f = {
      inv_v * ca * sb,
      inv_v * sb * cb,
      u * inv_v * sa * sb,
      ca_sq,
      ca * cb,
      cb * cb,
      u * cb * sa,
      ca_sq,
      sb * sb,
      BigReal(2, prec) * (u * sa * ca),
  };

  // x^j -> mu_j / nbar^j
  const PoissonMoments moments = PoissonMoments::compute(nbar, p);
  std::vector<BigReal> scaled;
  scaled.reserve(p + 1);
  BigReal nbar_power(1, prec);
  for (int j = 0; j <= p; ++j) {
    scaled.push_back(moments.central[j] / nbar_power);
    nbar_power *= nbar;
  }

  SumArray out = zero_sums(prec);
  for (int i = 0; i < kSumCount; ++i) {
    for (int j = 0; j <= p; ++j) {
      out[i] += f[i][j] * scaled[j];
    }
  }
  return out;
}

BigReal sum_taylor(const SeriesSpec& spec, int p) {
  check_index(spec.index);
  return sum_taylor_all(spec.nbar, spec.tau, p)[spec.index - 1];
}

SumArray compute_all_sums(const BigReal& nbar, const BigReal& tau, const SumOptions& options) {
  check_nbar(nbar);
  Strategy strategy = options.strategy;
  if (strategy == Strategy::automatic) {
    strategy = nbar <= kStrategyThreshold ? Strategy::direct : Strategy::taylor;
  }
  if (strategy == Strategy::taylor) {
    return sum_taylor_all(nbar, tau, options.taylor_order);
  }
  return sum_direct_all(nbar, tau, precision_window(nbar, nbar.precision()), options.direct);
}

std::map<int, BigReal> compute_sums(const BigReal& nbar, const BigReal& tau,
                                    const std::set<int>& which, const SumOptions& options) {
  for (int i : which) {
    check_index(i);
  }
  const SumArray all = compute_all_sums(nbar, tau, options);
  std::map<int, BigReal> out;
  for (int i : which) {
    out.emplace(i, all[i - 1]);
  }
  return out;
}

}  // namespace pulsetrain
