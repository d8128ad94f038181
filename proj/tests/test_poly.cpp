#include <catch2/catch.hpp>
#include <random>

#include "qoc/poly.hpp"

using namespace qoc::poly;

namespace {

Polynomial u(int control, int knot) { return Polynomial::variable({control, knot}); }

std::mt19937& rng() {
  static std::mt19937 gen(1729);
  return gen;
}

Polynomial random_poly(int n_vars, int max_terms) {
  std::uniform_int_distribution<int> nt(0, max_terms);
  std::uniform_int_distribution<int> var(0, n_vars - 1);
  std::uniform_int_distribution<int> deg(0, 3);
  std::normal_distribution<double> coeff(0.0, 2.0);
  Polynomial p;
  const int terms = nt(rng());
  for (int t = 0; t < terms; ++t) {
    Monomial m;
    const int d = deg(rng());
    for (int i = 0; i < d; ++i) m = m * Monomial({var(rng()), 1});
    p += Polynomial::term(m, coeff(rng()));
  }
  return p;
}

std::map<VarId, double> random_point(int n_vars) {
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  std::map<VarId, double> point;
  for (int v = 0; v < n_vars; ++v) point[{v, 1}] = dist(rng());
  return point;
}

// Coefficient-wise comparison tolerant of floating-point reassociation.
bool approx_equal(const Polynomial& a, const Polynomial& b, double tol = 1e-9) {
  const Polynomial d = a - b;
  for (const auto& [m, c] : d.terms()) {
    if (std::abs(c) > tol * (1.0 + std::abs(a.coeff(m)) + std::abs(b.coeff(m)))) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("addition identities", "[poly]") {
  Polynomial p = u(1, 1) * u(1, 1) - 3.0 * u(2, 1);
  CHECK(p + Polynomial() == p);
  CHECK((u(1, 1) + (-1.0) * u(1, 1)).is_zero());
  Polynomial s = (u(1, 1) + u(2, 1)) + u(2, 1);
  CHECK(s.coeff(Monomial({1, 1})) == 1.0);
  CHECK(s.coeff(Monomial({2, 1})) == 2.0);
}

TEST_CASE("multiplication and degrees", "[poly]") {
  Polynomial sq = (u(1, 1) + u(2, 1)) * (u(1, 1) + u(2, 1));
  CHECK(sq.coeff(Monomial({1, 1}, 2)) == 1.0);
  CHECK(sq.coeff(Monomial({1, 1}) * Monomial({2, 1})) == 2.0);
  CHECK(sq.coeff(Monomial({2, 1}, 2)) == 1.0);

  Polynomial p = random_poly(3, 6);
  CHECK(p * Polynomial(1.0) == p);

  Polynomial q = 2.0 * u(0, 1) * u(0, 1) + u(1, 1);
  Polynomial r = u(0, 1) - 1.0 * u(1, 1) * u(1, 1) * u(1, 1);
  if (!q.is_zero() && !r.is_zero()) {
    CHECK((q * r).degree() == q.degree() + r.degree());
  }
}

TEST_CASE("ring axioms on random polynomials", "[poly]") {
  for (int trial = 0; trial < 30; ++trial) {
    Polynomial a = random_poly(3, 5), b = random_poly(3, 5), c = random_poly(3, 5);
    CHECK(approx_equal(a + b, b + a));
    CHECK(approx_equal(a * b, b * a));
    CHECK(approx_equal((a + b) + c, a + (b + c)));
    CHECK(approx_equal((a * b) * c, a * (b * c)));
    CHECK(approx_equal(a * (b + c), a * b + a * c));
  }
}

TEST_CASE("evaluation is a ring homomorphism", "[poly]") {
  for (int trial = 0; trial < 30; ++trial) {
    Polynomial a = random_poly(3, 5), b = random_poly(3, 5);
    auto point = random_point(3);
    const double va = a.evaluate(point), vb = b.evaluate(point);
    CHECK((a + b).evaluate(point) == Approx(va + vb).margin(1e-10));
    CHECK((a * b).evaluate(point) == Approx(va * vb).epsilon(1e-10).margin(1e-10));
  }
}

TEST_CASE("evaluate examples and errors", "[poly]") {
  Polynomial p = u(1, 1) * u(1, 1) - u(2, 1);
  CHECK(p.evaluate({{{1, 1}, 3.0}, {{2, 1}, 4.0}}) == Approx(5.0));
  CHECK(Polynomial(4.25).evaluate({}) == 4.25);
  CHECK_THROWS_AS(p.evaluate({{{1, 1}, 3.0}}), std::invalid_argument);
}

TEST_CASE("pinned substitution", "[poly]") {
  Polynomial p = u(1, 1) * u(2, 1);
  Polynomial sub = p.substitute_pinned({{{1, 1}, 2.0}});
  CHECK(sub == 2.0 * u(2, 1));

  auto point = random_point(3);
  Polynomial q = random_poly(3, 6);
  CHECK(q.substitute_pinned(point).evaluate({}) == Approx(q.evaluate(point)).margin(1e-9));
  CHECK(q.substitute_pinned({}) == q);
}

TEST_CASE("monomial ordering is graded", "[poly]") {
  Monomial unit;
  Monomial a({0, 1});
  Monomial b({1, 1});
  CHECK(unit < a);
  CHECK(a < b);
  CHECK(b < a * a);       // degree dominates
  CHECK(a * a < a * b);   // lexicographic within a degree
  CHECK_FALSE(a < a);
}

TEST_CASE("word canonicalization", "[poly]") {
  const VarId u1{1, 1}, u2{2, 1};
  Word w21 = Word::from_variable(u2) * Word::from_variable(u1);
  Word w12 = Word::from_variable(u1) * Word::from_variable(u2);

  CHECK(canonicalize(w21, true) == canonicalize(w12, true));
  CHECK(canonicalize(w21, true).to_monomial() == Monomial(u1) * Monomial(u2));
  CHECK(canonicalize(w21, false) != canonicalize(w12, false));
  CHECK(canonicalize(Word{}, true) == Word{});
  CHECK(canonicalize(Word{}, true).to_monomial().is_unit());

  // Idempotence, degree preserved.
  for (bool mode : {true, false}) {
    Word once = canonicalize(w21, mode);
    CHECK(canonicalize(once, mode) == once);
    CHECK(once.size() == w21.size());
  }
}

TEST_CASE("word involution reverses and daggers", "[poly]") {
  const VarId u1{1, 1}, u2{2, 1}, u3{3, 1};
  Word w = Word::from_variable(u1) * Word::from_variable(u2) * Word::from_variable(u3);
  Word d = w.dagger();
  REQUIRE(d.size() == 3);
  CHECK(d.letters()[0].var == u3);
  CHECK(d.letters()[2].var == u1);
  CHECK(d.letters()[0].daggered);
  CHECK(d.dagger() == w);
  // Over real variables the involution drops out of the canonical key.
  CHECK(canonicalize(d, false) ==
        canonicalize(Word::from_variable(u3) * Word::from_variable(u2) * Word::from_variable(u1),
                     false));
}

TEST_CASE("string rendering is deterministic", "[poly]") {
  Polynomial p = 2.0 * u(0, 2) * u(0, 1) - 0.5 * u(1, 3);
  CHECK(p.str() == "-0.5 * u1(3) + 2 * u0(1)*u0(2)");
  CHECK(Polynomial().str() == "0");
  CHECK(Monomial({0, 1}, 2).str() == "u0(1)^2");
}
