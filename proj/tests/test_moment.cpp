#include <catch2/catch.hpp>
#include <random>

#include "qoc/moment.hpp"

using namespace qoc;
using poly::Monomial;
using poly::Polynomial;
using poly::VarId;

namespace {

const VarId u{0, 1};
const VarId v{1, 1};

Polynomial pu() { return Polynomial::variable(u); }

// Moment vector of the point mass at x: y_w = w(x).
Eigen::VectorXd point_moments(const moment::MomentIndex& idx,
                              const std::map<VarId, double>& x) {
  Eigen::VectorXd y(idx.monomials.size());
  for (std::size_t i = 0; i < idx.monomials.size(); ++i) {
    y(i) = Polynomial::term(idx.monomials[i], 1.0).evaluate(x);
  }
  return y;
}

}  // namespace

TEST_CASE("basis enumeration counts and order", "[moment]") {
  const auto b11 = moment::enumerate_basis({u}, 1);
  REQUIRE(b11.words.size() == 2);
  CHECK(b11.words[0].is_unit());
  CHECK(b11.words[1] == Monomial(u));

  const auto b22 = moment::enumerate_basis({u, v}, 2);
  CHECK(b22.words.size() == 6);  // C(2+2, 2)

  const auto b34 = moment::enumerate_basis({u, v, {2, 1}}, 4);
  CHECK(b34.words.size() == 35);  // C(3+4, 4)

  for (std::size_t i = 1; i < b22.words.size(); ++i) {
    CHECK(b22.words[i - 1] < b22.words[i]);  // graded-lex, strictly sorted
  }
  CHECK_THROWS_AS(moment::enumerate_basis({u, v}, 6, 10), moment::BasisBudgetError);
}

TEST_CASE("word basis matches the commutative one for a single letter", "[moment]") {
  const auto words = moment::enumerate_word_basis({u}, 2);
  const auto monos = moment::enumerate_basis({u}, 2);
  CHECK(words.size() == monos.words.size());

  // Two letters: words count 1 + 2 + 4, monomials C(4,2) = 6.
  CHECK(moment::enumerate_word_basis({u, v}, 2).size() == 7);
}

TEST_CASE("order-sensitive moment keys", "[moment]") {
  const poly::Word wu = poly::Word::from_variable(u);
  const poly::Word wv = poly::Word::from_variable(v);
  CHECK(moment::nc_moment_key(wu, wv, false) != moment::nc_moment_key(wv, wu, false));
  CHECK(moment::nc_moment_key(wu, wv, true) == moment::nc_moment_key(wv, wu, true));
  // The involution on the row word keeps real-variable keys well-formed:
  // (u v)^dag u = v u u as a word.
  const poly::Word key = moment::nc_moment_key(wu * wv, wu, false);
  CHECK(key.size() == 3);
  CHECK(key.letters()[0].var == v);
}

TEST_CASE("moment block structure for one variable at order 1", "[moment]") {
  const auto basis = moment::enumerate_basis({u}, 1);
  const auto idx = moment::make_moment_index({u}, 1);
  REQUIRE(idx.monomials.size() == 3);  // 1, u, u^2
  const auto block = moment::build_moment_block(basis, idx);
  REQUIRE(block.side == 2);
  REQUIRE(block.entries.size() == 3);
  CHECK(block.entries[0].moment == 0);  // top-left is y_1
  CHECK(block.entries[1].moment == idx.at(Monomial(u)));
  CHECK(block.entries[2].moment == idx.at(Monomial(u, 2)));

  const Eigen::VectorXd y = point_moments(idx, {{u, 0.3}});
  const Eigen::MatrixXd m = moment::block_value(block, y);
  CHECK(m(0, 0) == 1.0);
  CHECK(m(0, 1) == Approx(0.3));
  CHECK(m(1, 1) == Approx(0.09));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() >= -1e-12);
}

TEST_CASE("localizing block for the box constraint", "[moment]") {
  const Polynomial ball = Polynomial(1.0) - pu() * pu();
  const auto idx = moment::make_moment_index({u}, 1);
  const auto block = moment::build_localizing_block(ball, {u}, 1, idx);
  REQUIRE(block.side == 1);  // |W_{1-1}| = 1
  REQUIRE(block.entries.size() == 2);
  // y_1 - y_{u^2}.
  CHECK(block.entries[0].moment == 0);
  CHECK(block.entries[0].coeff == 1.0);
  CHECK(block.entries[1].moment == idx.at(Monomial(u, 2)));
  CHECK(block.entries[1].coeff == -1.0);

  const Eigen::VectorXd y = point_moments(idx, {{u, 0.5}});
  CHECK(moment::block_value(block, y)(0, 0) == Approx(0.75));

  // A positive constant localizes to the scaled order-r moment block.
  const auto scaled = moment::build_localizing_block(Polynomial(2.5), {u}, 1, idx);
  const auto plain = moment::build_moment_block(moment::enumerate_basis({u}, 1), idx);
  REQUIRE(scaled.side == plain.side);
  REQUIRE(scaled.entries.size() == plain.entries.size());
  for (std::size_t i = 0; i < scaled.entries.size(); ++i) {
    CHECK(scaled.entries[i].moment == plain.entries[i].moment);
    CHECK(scaled.entries[i].coeff == Approx(2.5 * plain.entries[i].coeff));
  }

  CHECK_THROWS_AS(moment::build_localizing_block(pu() * pu() * pu(), {u}, 1, idx),
                  std::invalid_argument);
}

TEST_CASE("relaxation order must cover the degrees", "[moment]") {
  const Polynomial quartic = pu() * pu() * pu() * pu();
  CHECK_THROWS_AS(moment::build_relaxation(quartic, {}, 1), std::invalid_argument);
  CHECK_NOTHROW(moment::build_relaxation(quartic, {}, 2));
}

TEST_CASE("square lower bound at order 1", "[moment]") {
  const auto relax = moment::build_relaxation(pu() * pu(), {}, 1);
  const auto sol = sdp::solve(moment::to_sdp_problem(relax), 1e-8, 100);
  CHECK(sol.status == sdp::SolveStatus::optimal);
  CHECK(sol.primal_value == Approx(0).margin(1e-6));
}

TEST_CASE("linear objective over the unit interval", "[moment]") {
  const auto relax =
      moment::build_relaxation(pu(), {pu(), Polynomial(1.0) - pu()}, 1);
  const auto sol = sdp::solve(moment::to_sdp_problem(relax), 1e-8, 100);
  CHECK(sol.status == sdp::SolveStatus::optimal);
  CHECK(sol.primal_value == Approx(0).margin(1e-6));
}

TEST_CASE("quartic double well against the grid oracle", "[moment]") {
  const Polynomial objective = pu() * pu() * pu() * pu() - pu() * pu();
  const Polynomial ball = Polynomial(1.0) - pu() * pu();

  // Independent brute-force oracle on [-1, 1] at step 1e-4.
  double grid_min = 1e300;
  for (int i = -10000; i <= 10000; ++i) {
    const double x = i * 1e-4;
    grid_min = std::min(grid_min, x * x * x * x - x * x);
  }
  CHECK(grid_min == Approx(-0.25).margin(1e-8));

  const auto relax2 = moment::build_relaxation(objective, {ball}, 2);
  const auto sol2 = sdp::solve(moment::to_sdp_problem(relax2), 1e-9, 200);
  CHECK(sol2.status == sdp::SolveStatus::optimal);
  CHECK(sol2.primal_value == Approx(grid_min).margin(1e-6));

  // Hierarchy monotonicity: the next order can only tighten the bound.
  const auto relax3 = moment::build_relaxation(objective, {ball}, 3);
  const auto sol3 = sdp::solve(moment::to_sdp_problem(relax3), 1e-9, 200);
  CHECK(sol3.primal_value >= sol2.primal_value - 1e-6);
  CHECK(sol3.primal_value <= grid_min + 1e-6);

  // Flat extension: both minimizers are active, rank M_2 = rank M_1 = 2.
  const auto cert = moment::rank_certificates(relax2, sol2.y);
  CHECK(cert.moment_rank == 2);
  CHECK(cert.truncated_rank == 2);
  CHECK(cert.rank_loop);
  CHECK_FALSE(cert.rank_one);
}

TEST_CASE("point evaluations are feasible with matching objective", "[moment]") {
  const Polynomial objective = pu() * pu() * pu() * pu() - pu() * pu();
  const Polynomial ball = Polynomial(1.0) - pu() * pu();
  const auto relax = moment::build_relaxation(objective, {ball}, 2);

  std::mt19937 rng(77);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const double x = dist(rng);
    const Eigen::VectorXd y = point_moments(relax.moments, {{u, x}});
    for (const auto& block : relax.blocks) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(moment::block_value(block, y),
                                                        Eigen::EigenvaluesOnly);
      CHECK(es.eigenvalues().minCoeff() >= -1e-12);
    }
    double objective_value = 0;
    for (const auto& [pos, coeff] : relax.objective) objective_value += coeff * y(pos);
    CHECK(objective_value == Approx(objective.evaluate({{u, x}})).margin(1e-12));

    // Point moments are rank one by construction.
    const auto cert = moment::rank_certificates(relax, y);
    CHECK(cert.rank_one);
  }
}

TEST_CASE("pretty printer shows labels", "[moment]") {
  const auto relax = moment::build_relaxation(pu() * pu(), {Polynomial(1.0) - pu() * pu()}, 1);
  const std::string text = moment::pretty_print(relax);
  CHECK(text.find("u0(1)") != std::string::npos);
  CHECK(text.find("moment block") != std::string::npos);
  CHECK(text.find("localizing block") != std::string::npos);
}
