#pragma once

#include "pulsetrain/big_real.hpp"

#include <utility>

namespace pulsetrain {

struct BigComplex {
  BigReal re;
  BigReal im;

  explicit BigComplex(Precision p = Precision()) : re(p), im(p) {}
  BigComplex(BigReal real, BigReal imag) : re(std::move(real)), im(std::move(imag)) {}

  static BigComplex polar(const BigReal& modulus, const BigReal& angle) {
    auto [s, c] = sin_cos(angle);
    return {modulus * c, modulus * s};
  }

  BigComplex conj() const { return {re, -im}; }
  BigReal norm2() const { return re * re + im * im; }

  friend BigComplex operator+(const BigComplex& a, const BigComplex& b) { return {a.re + b.re, a.im + b.im}; }
  friend BigComplex operator-(const BigComplex& a, const BigComplex& b) { return {a.re - b.re, a.im - b.im}; }
  friend BigComplex operator*(const BigComplex& a, const BigComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend BigComplex operator*(const BigReal& s, const BigComplex& a) { return {s * a.re, s * a.im}; }
  BigComplex times_i() const { return {-im, re}; }
};

}  // namespace pulsetrain
