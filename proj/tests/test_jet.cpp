#include "support.hpp"

#include "pulsetrain/errors.hpp"
#include "pulsetrain/jet.hpp"

#include <random>

using namespace pulsetrain;
using namespace testing_support;

namespace {

Expr random_tree(std::mt19937& rng, int depth, Precision p) {
  std::uniform_int_distribution<int> pick(0, depth <= 1 ? 1 : 7);
  std::uniform_int_distribution<int> small(-9, 9);
  switch (pick(rng)) {
    case 0:
      return Expr::constant(BigReal(small(rng), p) / 4);
    case 1:
      return Expr::x();
    case 2:
      return random_tree(rng, depth - 1, p) + random_tree(rng, depth - 1, p);
    case 3:
      return random_tree(rng, depth - 1, p) - random_tree(rng, depth - 1, p);
    case 4:
      return random_tree(rng, depth - 1, p) * random_tree(rng, depth - 1, p);
    case 5:
      return (BigReal(small(rng), p) / 3) * random_tree(rng, depth - 1, p);
    case 6:
      if (depth >= 4) {
        // constant term of 2 + sin(.) is at least 1
        return sqrt(Expr::constant(BigReal(2, p)) + sin(random_tree(rng, depth - 3, p)));
      }
      [[fallthrough]];
    default:
      return cos(random_tree(rng, depth - 1, p));
  }
}

}  // namespace

TEST_SUITE("jet") {

TEST_CASE("Maclaurin series of sin and sqrt(1+x)") {
  const Precision p;
  const Jet s = jet_expand(sin(Expr::x()), 4, p);
  REQUIRE(s.order() == 4);
  CHECK(s[0] == 0);
  CHECK(s[1] == 1);
  CHECK(s[2] == 0);
  CHECK_CLOSE(s[3], big(-1, p) / 6, tol(-48));
  CHECK(s[4] == 0);

  const Jet r = jet_expand(sqrt(Expr::constant(big(1, p)) + Expr::x()), 2, p);
  CHECK(r[0] == 1);
  CHECK(r[1] == big("0.5"));
  CHECK(r[2] == big("-0.125"));
}

TEST_CASE("cos(pi sqrt(1+x)) against finite differences") {
  const Precision p(120);
  const BigReal pi = BigReal::pi(p);
  const Expr f = cos(pi * sqrt(Expr::constant(big(1, p)) + Expr::x()));
  const Jet jet = jet_expand(f, 3, Precision(60));

  const BigReal h = tol(-15, p);
  auto at = [&](int i) { return f.evaluate(i * h); };
  // central differences, O(h^2) truncation
  const BigReal d1 = (at(1) - at(-1)) / (2 * h);
  const BigReal d2 = (at(1) - 2 * at(0) + at(-1)) / (h * h);
  const BigReal d3 = (at(2) - 2 * at(1) + 2 * at(-1) - at(-2)) / (2 * h * h * h);
  CHECK_CLOSE(jet[0], at(0), tol(-55));
  CHECK_CLOSE(jet[1], d1, tol(-25));
  CHECK_CLOSE(jet[2], d2 / 2, tol(-25));
  CHECK_CLOSE(jet[3], d3 / 6, tol(-25));
}

TEST_CASE("sqrt needs a positive constant term") {
  const Precision p;
  CHECK_THROWS_AS(jet_expand(sqrt(Expr::x()), 3, p), DomainError);
  CHECK_THROWS_AS(jet_expand(sqrt(Expr::constant(big(-1, p)) + Expr::x()), 3, p), DomainError);
  CHECK_THROWS_AS(reciprocal(Jet::variable(3, p)), DomainError);
}

TEST_CASE("orders truncate to the smaller operand") {
  const Precision p;
  const Jet a = jet_expand(cos(Expr::x()), 6, p);
  const Jet b = jet_expand(sin(Expr::x()), 3, p);
  CHECK((a * b).order() == 3);
  CHECK((a + b).order() == 3);
  CHECK(sqrt(a).order() == 6);
}

TEST_CASE("reciprocal inverts") {
  const Precision p;
  const Jet f = jet_expand(Expr::constant(big(3, p)) + cos(Expr::x()) * Expr::x(), 8, p);
  const Jet one = f * reciprocal(f);
  CHECK_CLOSE(one[0], big(1, p), tol(-48));
  for (int i = 1; i <= 8; ++i) {
    CHECK(abs(one[i]) < tol(-47));
  }
}

TEST_CASE("expansion of a product equals the Cauchy product of expansions") {
  const Precision p(50);
  std::mt19937 rng(20240611);
  const int order = 7;
  for (int trial = 0; trial < 60; ++trial) {
    const Expr f = random_tree(rng, 5, p);
    const Expr g = random_tree(rng, 5, p);
    CHECK(f.depth() <= 5);
    const Jet jf = jet_expand(f, order, p);
    const Jet jg = jet_expand(g, order, p);
    const Jet jfg = jet_expand(f * g, order, p);
    for (int k = 0; k <= order; ++k) {
      BigReal cauchy(p);
      for (int i = 0; i <= k; ++i) {
        cauchy += jf[i] * jg[k - i];
      }
      CHECK(abs(jfg[k] - cauchy) <= tol(-40, p) * (1 + abs(cauchy)));
    }
  }
}

TEST_CASE("jet polynomial at small x matches direct evaluation") {
  const Precision p(80);
  std::mt19937 rng(77);
  const int order = 6;
  const BigReal x = tol(-6, p);
  const BigReal bound = pow(x, static_cast<long>(order + 1)) * 1000;
  for (int trial = 0; trial < 60; ++trial) {
    const Expr f = random_tree(rng, 5, p);
    const Jet jet = jet_expand(f, order, p);
    CHECK(abs(jet.evaluate(x) - f.evaluate(x)) <= bound);
  }
}

TEST_CASE("constant term equals the scalar function") {
  const Precision p;
  const BigReal c = big("0.3", p);
  const Expr inner = Expr::constant(c) + Expr::x();
  CHECK(jet_expand(sin(inner), 4, p)[0] == sin(c));
  CHECK(jet_expand(cos(inner), 4, p)[0] == cos(c));
  CHECK(jet_expand(sqrt(inner), 4, p)[0] == sqrt(c));
}

}
