#pragma once

#include <mpfr.h>

#include <compare>
#include <concepts>
#include <type_traits>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>

namespace pulsetrain {

inline constexpr int kDefaultDigits = 50;
inline constexpr int kMinimumDigits = 30;

/// Working precision expressed in significant decimal digits.
///
/// Every BigReal carries its own precision; there is no process-wide default.
class Precision {
 public:
  constexpr explicit Precision(int digits = kDefaultDigits) : digits_(digits) {}

  constexpr int digits() const { return digits_; }

  // Binary precision with a few guard bits so that `digits` decimal digits
  // survive a handful of roundings.
  mpfr_prec_t bits() const;

  constexpr Precision widened(int extra_digits) const { return Precision(digits_ + extra_digits); }

  friend constexpr auto operator<=>(Precision, Precision) = default;

 private:
  int digits_;
};

/// Real number at an explicit working precision (MPFR backed, round-to-nearest).
///
/// Binary operations produce a result at the larger of the operand precisions.
class BigReal {
 public:
  explicit BigReal(Precision p = Precision());
  template <std::integral T>
  BigReal(T value, Precision p) : BigReal(p) {
    if constexpr (std::is_signed_v<T>) {
      mpfr_set_si(v_, static_cast<long>(value), MPFR_RNDN);
    } else {
      mpfr_set_ui(v_, static_cast<unsigned long>(value), MPFR_RNDN);
    }
  }
  BigReal(double value, Precision p);
  BigReal(std::string_view decimal, Precision p);

  BigReal(const BigReal& other);
  BigReal(BigReal&& other) noexcept;
  BigReal& operator=(const BigReal& other);
  BigReal& operator=(BigReal&& other) noexcept;
  ~BigReal();

  static BigReal pi(Precision p);

  Precision precision() const { return precision_; }

  BigReal& operator+=(const BigReal& rhs);
  BigReal& operator-=(const BigReal& rhs);
  BigReal& operator*=(const BigReal& rhs);
  BigReal& operator/=(const BigReal& rhs);
  BigReal& operator+=(long rhs);
  BigReal& operator-=(long rhs);
  BigReal& operator*=(long rhs);
  BigReal& operator/=(long rhs);

  BigReal operator-() const;

  friend BigReal operator+(BigReal lhs, const BigReal& rhs) { return lhs += rhs; }
  friend BigReal operator-(BigReal lhs, const BigReal& rhs) { return lhs -= rhs; }
  friend BigReal operator*(BigReal lhs, const BigReal& rhs) { return lhs *= rhs; }
  friend BigReal operator/(BigReal lhs, const BigReal& rhs) { return lhs /= rhs; }
  template <std::integral T>
  friend BigReal operator+(BigReal lhs, T rhs) { return lhs += static_cast<long>(rhs); }
  template <std::integral T>
  friend BigReal operator-(BigReal lhs, T rhs) { return lhs -= static_cast<long>(rhs); }
  template <std::integral T>
  friend BigReal operator*(BigReal lhs, T rhs) { return lhs *= static_cast<long>(rhs); }
  template <std::integral T>
  friend BigReal operator/(BigReal lhs, T rhs) { return lhs /= static_cast<long>(rhs); }
  template <std::integral T>
  friend BigReal operator+(T lhs, BigReal rhs) { return rhs += static_cast<long>(lhs); }
  template <std::integral T>
  friend BigReal operator*(T lhs, BigReal rhs) { return rhs *= static_cast<long>(lhs); }
  template <std::integral T>
  friend BigReal operator-(T lhs, const BigReal& rhs) { return subtract_from(static_cast<long>(lhs), rhs); }
  template <std::integral T>
  friend BigReal operator/(T lhs, const BigReal& rhs) { return divide_into(static_cast<long>(lhs), rhs); }

  friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const BigReal& a, const BigReal& b);
  template <std::integral T>
  friend bool operator==(const BigReal& a, T b) { return a.compare_long(static_cast<long>(b)) == 0; }
  template <std::integral T>
  friend std::partial_ordering operator<=>(const BigReal& a, T b) { return a.order_long(static_cast<long>(b)); }
  template <std::floating_point T>
  friend std::partial_ordering operator<=>(const BigReal& a, T b) { return a.order_double(static_cast<double>(b)); }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long floor_to_long() const { return mpfr_get_si(v_, MPFR_RNDD); }
  long ceil_to_long() const { return mpfr_get_si(v_, MPFR_RNDU); }

  /// Scientific notation with `significant` digits, e.g. "3.9265164255300772995750283e-05".
  std::string to_string(int significant) const;

  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

 private:
  void widen_to(Precision p);
  int compare_long(long b) const { return mpfr_cmp_si(v_, b); }
  std::partial_ordering order_long(long b) const;
  std::partial_ordering order_double(double b) const;
  static BigReal subtract_from(long lhs, const BigReal& rhs);
  static BigReal divide_into(long lhs, const BigReal& rhs);

  mpfr_t v_;
  Precision precision_;
};

std::ostream& operator<<(std::ostream& os, const BigReal& x);

BigReal abs(const BigReal& x);
BigReal sqrt(const BigReal& x);
BigReal exp(const BigReal& x);
BigReal log(const BigReal& x);
BigReal sin(const BigReal& x);
BigReal cos(const BigReal& x);
std::pair<BigReal, BigReal> sin_cos(const BigReal& x);
BigReal atan2(const BigReal& y, const BigReal& x);
BigReal pow(const BigReal& base, const BigReal& exponent);
BigReal pow(const BigReal& base, long exponent);
/// ln Γ(x) for x > 0.
BigReal lgamma(const BigReal& x);
BigReal max(const BigReal& a, const BigReal& b);
BigReal min(const BigReal& a, const BigReal& b);

/// 10^exponent at precision p; handy for tolerances.
BigReal pow10(long exponent, Precision p);

}  // namespace pulsetrain
