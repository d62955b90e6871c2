#include "pulsetrain/big_real.hpp"

#include "pulsetrain/errors.hpp"

#include <cmath>
#include <ostream>

namespace pulsetrain {

namespace {

constexpr mpfr_rnd_t kRound = MPFR_RNDN;
constexpr mpfr_prec_t kGuardBits = 16;

}  // namespace

mpfr_prec_t Precision::bits() const {
  return static_cast<mpfr_prec_t>(std::ceil(digits_ * 3.321928094887362)) + kGuardBits;
}

BigReal::BigReal(Precision p) : precision_(p) {
  if (p.digits() < 1) {
    throw ArgumentError("precision must be at least one decimal digit");
  }
  mpfr_init2(v_, p.bits());
  mpfr_set_zero(v_, 1);
}

BigReal::BigReal(double value, Precision p) : BigReal(p) { mpfr_set_d(v_, value, kRound); }

BigReal::BigReal(std::string_view decimal, Precision p) : BigReal(p) {
  const std::string text(decimal);
  if (mpfr_set_str(v_, text.c_str(), 10, kRound) != 0) {
    throw ArgumentError("not a decimal number: '" + text + "'");
  }
}

BigReal::BigReal(const BigReal& other) : precision_(other.precision_) {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_set(v_, other.v_, kRound);
}

BigReal::BigReal(BigReal&& other) noexcept : precision_(other.precision_) {
  mpfr_init2(v_, MPFR_PREC_MIN);
  mpfr_swap(v_, other.v_);
}

BigReal& BigReal::operator=(const BigReal& other) {
  if (this != &other) {
    mpfr_set_prec(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, kRound);
    precision_ = other.precision_;
  }
  return *this;
}

BigReal& BigReal::operator=(BigReal&& other) noexcept {
  mpfr_swap(v_, other.v_);
  std::swap(precision_, other.precision_);
  return *this;
}

BigReal::~BigReal() { mpfr_clear(v_); }

BigReal BigReal::pi(Precision p) {
  BigReal r(p);
  mpfr_const_pi(r.v_, kRound);
  return r;
}

void BigReal::widen_to(Precision p) {
  if (p > precision_) {
    mpfr_prec_round(v_, p.bits(), kRound);
    precision_ = p;
  }
}

BigReal& BigReal::operator+=(const BigReal& rhs) {
  widen_to(rhs.precision_);
  mpfr_add(v_, v_, rhs.v_, kRound);
  return *this;
}

BigReal& BigReal::operator-=(const BigReal& rhs) {
  widen_to(rhs.precision_);
  mpfr_sub(v_, v_, rhs.v_, kRound);
  return *this;
}

BigReal& BigReal::operator*=(const BigReal& rhs) {
  widen_to(rhs.precision_);
  mpfr_mul(v_, v_, rhs.v_, kRound);
  return *this;
}

BigReal& BigReal::operator/=(const BigReal& rhs) {
  widen_to(rhs.precision_);
  mpfr_div(v_, v_, rhs.v_, kRound);
  return *this;
}

BigReal& BigReal::operator+=(long rhs) {
  mpfr_add_si(v_, v_, rhs, kRound);
  return *this;
}

BigReal& BigReal::operator-=(long rhs) {
  mpfr_sub_si(v_, v_, rhs, kRound);
  return *this;
}

BigReal& BigReal::operator*=(long rhs) {
  mpfr_mul_si(v_, v_, rhs, kRound);
  return *this;
}

BigReal& BigReal::operator/=(long rhs) {
  mpfr_div_si(v_, v_, rhs, kRound);
  return *this;
}

BigReal BigReal::operator-() const {
  BigReal r(*this);
  mpfr_neg(r.v_, r.v_, kRound);
  return r;
}

BigReal BigReal::subtract_from(long lhs, const BigReal& rhs) {
  BigReal r(rhs.precision_);
  mpfr_si_sub(r.v_, lhs, rhs.v_, kRound);
  return r;
}

BigReal BigReal::divide_into(long lhs, const BigReal& rhs) {
  BigReal r(rhs.precision_);
  mpfr_si_div(r.v_, lhs, rhs.v_, kRound);
  return r;
}

namespace {

std::partial_ordering ordering_from(int cmp, bool unordered) {
  if (unordered) {
    return std::partial_ordering::unordered;
  }
  if (cmp < 0) {
    return std::partial_ordering::less;
  }
  return cmp > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent;
}

}  // namespace

std::partial_ordering operator<=>(const BigReal& a, const BigReal& b) {
  const bool unordered = mpfr_unordered_p(a.v_, b.v_) != 0;
  return ordering_from(unordered ? 0 : mpfr_cmp(a.v_, b.v_), unordered);
}

std::partial_ordering BigReal::order_long(long b) const {
  const bool unordered = mpfr_nan_p(v_) != 0;
  return ordering_from(unordered ? 0 : mpfr_cmp_si(v_, b), unordered);
}

std::partial_ordering BigReal::order_double(double b) const {
  const bool unordered = mpfr_nan_p(v_) != 0 || std::isnan(b);
  return ordering_from(unordered ? 0 : mpfr_cmp_d(v_, b), unordered);
}

std::string BigReal::to_string(int significant) const {
  if (significant < 1) {
    significant = 1;
  }
  char* buffer = nullptr;
  mpfr_asprintf(&buffer, "%.*Re", significant - 1, v_);
  std::string out(buffer);
  mpfr_free_str(buffer);
  return out;
}

std::ostream& operator<<(std::ostream& os, const BigReal& x) {
  return os << x.to_string(x.precision().digits());
}

namespace {

template <typename Fn>
BigReal unary(const BigReal& x, Fn fn) {
  BigReal r(x.precision());
  fn(r.get(), x.get(), kRound);
  return r;
}

}  // namespace

BigReal abs(const BigReal& x) { return unary(x, mpfr_abs); }
BigReal sqrt(const BigReal& x) { return unary(x, mpfr_sqrt); }
BigReal exp(const BigReal& x) { return unary(x, mpfr_exp); }
BigReal log(const BigReal& x) { return unary(x, mpfr_log); }
BigReal sin(const BigReal& x) { return unary(x, mpfr_sin); }
BigReal cos(const BigReal& x) { return unary(x, mpfr_cos); }

std::pair<BigReal, BigReal> sin_cos(const BigReal& x) {
  BigReal s(x.precision());
  BigReal c(x.precision());
  mpfr_sin_cos(s.get(), c.get(), x.get(), kRound);
  return {std::move(s), std::move(c)};
}

BigReal atan2(const BigReal& y, const BigReal& x) {
  BigReal r(std::max(y.precision(), x.precision()));
  mpfr_atan2(r.get(), y.get(), x.get(), kRound);
  return r;
}

BigReal pow(const BigReal& base, const BigReal& exponent) {
  BigReal r(std::max(base.precision(), exponent.precision()));
  mpfr_pow(r.get(), base.get(), exponent.get(), kRound);
  return r;
}

BigReal pow(const BigReal& base, long exponent) {
  BigReal r(base.precision());
  mpfr_pow_si(r.get(), base.get(), exponent, kRound);
  return r;
}

BigReal lgamma(const BigReal& x) {
  if (x.sign() <= 0) {
    throw DomainError("lgamma requires a positive argument");
  }
  return unary(x, mpfr_lngamma);
}

BigReal max(const BigReal& a, const BigReal& b) { return a < b ? b : a; }
BigReal min(const BigReal& a, const BigReal& b) { return b < a ? b : a; }

BigReal pow10(long exponent, Precision p) { return pow(BigReal(10, p), exponent); }

}  // namespace pulsetrain
