#pragma once

#include "pulsetrain/big_real.hpp"

#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace pulsetrain {

/// Truncated Maclaurin series c_0 + c_1 x + ... + c_p x^p over BigReal.
///
/// Binary operations truncate to the smaller of the two orders.
class Jet {
 public:
  explicit Jet(std::vector<BigReal> coeffs);

  static Jet constant(const BigReal& value, int order);
  /// The identity series x (order >= 1) or the zero series at order 0.
  static Jet variable(int order, Precision p);

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  Precision precision() const { return coeffs_.front().precision(); }
  const BigReal& operator[](int i) const { return coeffs_[static_cast<std::size_t>(i)]; }
  std::span<const BigReal> coeffs() const { return coeffs_; }

  /// Evaluates the truncated polynomial at x.
  BigReal evaluate(const BigReal& x) const;

  Jet truncated(int order) const;

  Jet& operator+=(const BigReal& c);
  Jet& operator*=(const BigReal& c);

  friend Jet operator+(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a, const Jet& b);
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator*(const BigReal& c, Jet a) { return a *= c; }
  friend Jet operator*(Jet a, const BigReal& c) { return a *= c; }
  friend Jet operator+(Jet a, const BigReal& c) { return a += c; }
  Jet operator-() const;

 private:
  std::vector<BigReal> coeffs_;
};

/// sqrt(f); requires f[0] > 0.
Jet sqrt(const Jet& f);
/// 1/f; requires f[0] != 0.
Jet reciprocal(const Jet& f);
/// (sin f, cos f) from one coupled recurrence.
std::pair<Jet, Jet> sin_cos(const Jet& f);
Jet sin(const Jet& f);
Jet cos(const Jet& f);

/// Composition tree over {constant, x, +, -, *, scalar *, sqrt, sin, cos}.
///
/// The same tree can be expanded to a jet or evaluated pointwise, which lets
/// tests compare the two routes.
class Expr {
 public:
  static Expr constant(BigReal value);
  static Expr x();

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator*(const BigReal& scalar, const Expr& a);
  friend Expr sqrt(const Expr& a);
  friend Expr sin(const Expr& a);
  friend Expr cos(const Expr& a);

  Jet expand(int order, Precision p) const;
  BigReal evaluate(const BigReal& x) const;

  /// Number of nodes on the longest root-to-leaf path.
  int depth() const;

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// Order-`order` Maclaurin coefficients of f.
Jet jet_expand(const Expr& f, int order, Precision p);

}  // namespace pulsetrain
