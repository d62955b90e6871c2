#pragma once

#include "pulsetrain/big_real.hpp"
#include "pulsetrain/kernels.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace pulsetrain {

/// Rational pulse-area index k (a k*pi pulse), k = num/den >= 0.
class PulseArea {
 public:
  PulseArea(long num = 0, long den = 1);

  /// Accepts "2", "1/2" or "0.5".
  static PulseArea parse(std::string_view text);

  long num() const { return num_; }
  long den() const { return den_; }
  bool is_zero() const { return num_ == 0; }

  BigReal value(Precision p) const;
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string to_string() const;

  /// True when m pulses complete a whole number of Rabi periods.
  bool completes_period(long m) const;

  friend bool operator==(const PulseArea&, const PulseArea&) = default;

 private:
  long num_;
  long den_;
};

/// tau = k pi / (2 sqrt(nbar)) at the precision of nbar.
BigReal pulse_tau(const BigReal& nbar, const PulseArea& k);

/// One of the sums S_1..S_10 at a given (nbar, tau).
struct SeriesSpec {
  int index;
  BigReal nbar;
  BigReal tau;
  std::optional<PulseArea> k;

  static SeriesSpec from_pulse(int index, const BigReal& nbar, const PulseArea& k);
  static SeriesSpec from_tau(int index, const BigReal& nbar, const BigReal& tau);

  Precision precision() const { return nbar.precision(); }
};

struct PrecisionPlan {
  int l;
  /// Taylor order from expansion_order; empty outside its domain.
  std::optional<int> p;
  BigReal alpha0;
  long t_cutoff;
};

/// Smallest t >= max(1, floor(nbar)) with (t-1)! > e^{-nbar} nbar^{t+l}.
long truncation_cutoff(const BigReal& nbar, int l);

/// ceil(ln(sqrt2 nbar^{l-1/2} (l+1) ln nbar) / (ln nbar / 2 - ln((l+1) ln nbar))).
/// Throws PlannerError when the denominator is not positive.
int expansion_order(const BigReal& nbar, int l);

/// 1/sqrt(nbar) + (l+1) ln nbar / sqrt(nbar) + sqrt((l+1)^2 ln^2 nbar / nbar + 2 (l+1) ln nbar).
BigReal window_bound_alpha(const BigReal& nbar, int l);

PrecisionPlan plan_precision(const BigReal& nbar, int l);

enum class Kernel { serial, parallel };

struct DirectOptions {
  long max_terms = 10'000'000;
  Kernel kernel = Kernel::parallel;
};

/// Photon-number range outside of which every summand contributes below
/// 10^-(digits + 5) in total.
TermRange precision_window(const BigReal& nbar, Precision p);

/// sum_{n} w_n f(n) up to n = truncation_cutoff(nbar, l).  The lower end is cut
/// where the remaining lower tail drops below the working precision.
BigReal sum_direct(const SeriesSpec& spec, int l, const DirectOptions& options = {});

/// All ten sums over an explicit range.
SumArray sum_direct_all(const BigReal& nbar, const BigReal& tau, TermRange range,
                        const DirectOptions& options = {});

inline constexpr int kDefaultTaylorOrder = 10;
inline constexpr double kTaylorMinimumNbar = 100.0;

/// Mean-centred Taylor evaluation: expand the summand in x = (n - nbar)/nbar to
/// order p and replace x^j by mu_j / nbar^j.
BigReal sum_taylor(const SeriesSpec& spec, int p);

/// All ten sums by the Taylor route.
SumArray sum_taylor_all(const BigReal& nbar, const BigReal& tau, int p);

enum class Strategy { automatic, direct, taylor };

inline constexpr double kStrategyThreshold = 2000.0;

struct SumOptions {
  Strategy strategy = Strategy::automatic;
  int taylor_order = kDefaultTaylorOrder;
  DirectOptions direct;
};

/// Requested sums keyed by index 1..10.  Automatic strategy: direct summation
/// over the precision window for nbar <= 2000, Taylor otherwise.
std::map<int, BigReal> compute_sums(const BigReal& nbar, const BigReal& tau,
                                    const std::set<int>& which, const SumOptions& options = {});

/// All ten sums with the same strategy rules.
SumArray compute_all_sums(const BigReal& nbar, const BigReal& tau, const SumOptions& options = {});

}  // namespace pulsetrain
