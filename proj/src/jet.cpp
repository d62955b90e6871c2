#include "pulsetrain/jet.hpp"

#include "pulsetrain/errors.hpp"

#include <algorithm>
#include <optional>

namespace pulsetrain {

Jet::Jet(std::vector<BigReal> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) {
    throw ArgumentError("a jet needs at least its constant term");
  }
}

Jet Jet::constant(const BigReal& value, int order) {
  if (order < 0) {
    throw ArgumentError("jet order must be non-negative");
  }
  std::vector<BigReal> c(static_cast<std::size_t>(order) + 1, BigReal(value.precision()));
  c[0] = value;
  return Jet(std::move(c));
}

Jet Jet::variable(int order, Precision p) {
  Jet j = constant(BigReal(p), order);
  if (order >= 1) {
    j.coeffs_[1] = BigReal(1, p);
  }
  return j;
}

BigReal Jet::evaluate(const BigReal& x) const {
  BigReal acc(precision());
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc *= x;
    acc += *it;
  }
  return acc;
}

Jet Jet::truncated(int order) const {
  if (order >= this->order()) {
    return *this;
  }
  return Jet(std::vector<BigReal>(coeffs_.begin(), coeffs_.begin() + order + 1));
}

Jet& Jet::operator+=(const BigReal& c) {
  coeffs_[0] += c;
  return *this;
}

Jet& Jet::operator*=(const BigReal& c) {
  for (auto& x : coeffs_) {
    x *= c;
  }
  return *this;
}

Jet operator+(const Jet& a, const Jet& b) {
  const int p = std::min(a.order(), b.order());
  std::vector<BigReal> c;
  c.reserve(p + 1);
  for (int i = 0; i <= p; ++i) {
    c.push_back(a[i] + b[i]);
  }
  return Jet(std::move(c));
}

Jet operator-(const Jet& a, const Jet& b) {
  const int p = std::min(a.order(), b.order());
  std::vector<BigReal> c;
  c.reserve(p + 1);
  for (int i = 0; i <= p; ++i) {
    c.push_back(a[i] - b[i]);
  }
  return Jet(std::move(c));
}

Jet operator*(const Jet& a, const Jet& b) {
  const int p = std::min(a.order(), b.order());
  const Precision prec = std::max(a.precision(), b.precision());
  std::vector<BigReal> c(static_cast<std::size_t>(p) + 1, BigReal(prec));
  for (int k = 0; k <= p; ++k) {
    for (int i = 0; i <= k; ++i) {
      c[k] += a[i] * b[k - i];
    }
  }
  return Jet(std::move(c));
}

Jet Jet::operator-() const {
  Jet r(*this);
  for (auto& x : r.coeffs_) {
    x = -x;
  }
  return r;
}

Jet sqrt(const Jet& f) {
  if (!(f[0] > 0)) {
    throw DomainError("sqrt of a jet needs a positive constant term");
  }
  const int p = f.order();
  std::vector<BigReal> g(static_cast<std::size_t>(p) + 1, BigReal(f.precision()));
  g[0] = sqrt(f[0]);
  const BigReal two_g0 = 2 * g[0];
  for (int k = 1; k <= p; ++k) {
    BigReal acc = f[k];
    for (int j = 1; j < k; ++j) {
      acc -= g[j] * g[k - j];
    }
    g[k] = acc / two_g0;
  }
  return Jet(std::move(g));
}

Jet reciprocal(const Jet& f) {
  if (f[0].is_zero()) {
    throw DomainError("reciprocal of a jet needs a non-zero constant term");
  }
  const int p = f.order();
  std::vector<BigReal> h(static_cast<std::size_t>(p) + 1, BigReal(f.precision()));
  h[0] = 1 / f[0];
  for (int k = 1; k <= p; ++k) {
    BigReal acc(f.precision());
    for (int j = 1; j <= k; ++j) {
      acc += f[j] * h[k - j];
    }
    h[k] = -acc * h[0];
  }
  return Jet(std::move(h));
}

std::pair<Jet, Jet> sin_cos(const Jet& f) {
  // k s_k = sum_j j f_j c_{k-j},  k c_k = -sum_j j f_j s_{k-j}
  const int p = f.order();
  const Precision prec = f.precision();
  std::vector<BigReal> s(static_cast<std::size_t>(p) + 1, BigReal(prec));
  std::vector<BigReal> c(static_cast<std::size_t>(p) + 1, BigReal(prec));
  auto [s0, c0] = sin_cos(f[0]);
  s[0] = std::move(s0);
  c[0] = std::move(c0);
  for (int k = 1; k <= p; ++k) {
    BigReal ds(prec);
    BigReal dc(prec);
    for (int j = 1; j <= k; ++j) {
      const BigReal jf = j * f[j];
      ds += jf * c[k - j];
      dc -= jf * s[k - j];
    }
    s[k] = ds / k;
    c[k] = dc / k;
  }
  return {Jet(std::move(s)), Jet(std::move(c))};
}

Jet sin(const Jet& f) { return sin_cos(f).first; }
Jet cos(const Jet& f) { return sin_cos(f).second; }

// ---------------------------------------------------------------------------

struct Expr::Node {
  enum class Kind { constant, variable, add, sub, mul, scale, sqrt, sin, cos };

  Kind kind;
  std::optional<BigReal> value;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

Expr::Node make_node(Expr::Node::Kind kind, NodePtr lhs, NodePtr rhs = nullptr) {
  return Expr::Node{kind, std::nullopt, std::move(lhs), std::move(rhs)};
}

}  // namespace

Expr Expr::constant(BigReal value) {
  return Expr(std::make_shared<const Node>(Node{Node::Kind::constant, std::move(value), nullptr, nullptr}));
}

Expr Expr::x() { return Expr(std::make_shared<const Node>(make_node(Node::Kind::variable, nullptr))); }

Expr operator+(const Expr& a, const Expr& b) {
  return Expr(std::make_shared<const Expr::Node>(make_node(Expr::Node::Kind::add, a.node_, b.node_)));
}

Expr operator-(const Expr& a, const Expr& b) {
  return Expr(std::make_shared<const Expr::Node>(make_node(Expr::Node::Kind::sub, a.node_, b.node_)));
}

Expr operator*(const Expr& a, const Expr& b) {
  return Expr(std::make_shared<const Expr::Node>(make_node(Expr::Node::Kind::mul, a.node_, b.node_)));
}

Expr operator*(const BigReal& scalar, const Expr& a) {
  Expr::Node n = make_node(Expr::Node::Kind::scale, a.node_);
  n.value = scalar;
  return Expr(std::make_shared<const Expr::Node>(std::move(n)));
}

Expr sqrt(const Expr& a) {
  return Expr(std::make_shared<const Expr::Node>(make_node(Expr::Node::Kind::sqrt, a.node_)));
}

Expr sin(const Expr& a) {
  return Expr(std::make_shared<const Expr::Node>(make_node(Expr::Node::Kind::sin, a.node_)));
}

Expr cos(const Expr& a) {
  return Expr(std::make_shared<const Expr::Node>(make_node(Expr::Node::Kind::cos, a.node_)));
}

namespace {

using Kind = Expr::Node::Kind;

Jet expand_node(const Expr::Node& n, int order, Precision p) {
  switch (n.kind) {
    case Kind::constant:
      return Jet::constant(*n.value, order);
    case Kind::variable:
      return Jet::variable(order, p);
    case Kind::add:
      return expand_node(*n.lhs, order, p) + expand_node(*n.rhs, order, p);
    case Kind::sub:
      return expand_node(*n.lhs, order, p) - expand_node(*n.rhs, order, p);
    case Kind::mul:
      return expand_node(*n.lhs, order, p) * expand_node(*n.rhs, order, p);
    case Kind::scale:
      return *n.value * expand_node(*n.lhs, order, p);
    case Kind::sqrt:
      return sqrt(expand_node(*n.lhs, order, p));
    case Kind::sin:
      return sin(expand_node(*n.lhs, order, p));
    case Kind::cos:
      return cos(expand_node(*n.lhs, order, p));
  }
  throw ArgumentError("unknown expression node");
}

BigReal evaluate_node(const Expr::Node& n, const BigReal& x) {
  switch (n.kind) {
    case Kind::constant:
      return *n.value;
    case Kind::variable:
      return x;
    case Kind::add:
      return evaluate_node(*n.lhs, x) + evaluate_node(*n.rhs, x);
    case Kind::sub:
      return evaluate_node(*n.lhs, x) - evaluate_node(*n.rhs, x);
    case Kind::mul:
      return evaluate_node(*n.lhs, x) * evaluate_node(*n.rhs, x);
    case Kind::scale:
      return *n.value * evaluate_node(*n.lhs, x);
    case Kind::sqrt: {
      BigReal arg = evaluate_node(*n.lhs, x);
      if (arg.sign() < 0) {
        throw DomainError("sqrt of a negative value");
      }
      return sqrt(arg);
    }
    case Kind::sin:
      return sin(evaluate_node(*n.lhs, x));
    case Kind::cos:
      return cos(evaluate_node(*n.lhs, x));
  }
  throw ArgumentError("unknown expression node");
}

int depth_of(const Expr::Node& n) {
  int d = 0;
  if (n.lhs) {
    d = std::max(d, depth_of(*n.lhs));
  }
  if (n.rhs) {
    d = std::max(d, depth_of(*n.rhs));
  }
  return d + 1;
}

}  // namespace

Jet Expr::expand(int order, Precision p) const {
  if (order < 0) {
    throw ArgumentError("jet order must be non-negative");
  }
  return expand_node(*node_, order, p);
}

BigReal Expr::evaluate(const BigReal& x) const { return evaluate_node(*node_, x); }

int Expr::depth() const { return depth_of(*node_); }

Jet jet_expand(const Expr& f, int order, Precision p) { return f.expand(order, p); }

}  // namespace pulsetrain
