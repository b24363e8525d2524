#include <doctest.h>

#include <random>

#include "revpref/afriat.hpp"
#include "revpref/errors.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace revpref;
using namespace revpref::testing;

namespace {

PiecewiseConcaveUtility linear(std::initializer_list<const char*> gradient) {
  return PiecewiseConcaveUtility({{Rational(0), vec(gradient)}});
}

PiecewiseConcaveUtility random_utility(std::mt19937_64& rng, std::size_t goods) {
  std::uniform_int_distribution<int> constant(0, 10), slope(1, 5), count(1, 4);
  std::vector<PiecewiseConcaveUtility::Piece> pieces(count(rng));
  for (auto& piece : pieces) {
    piece.constant = constant(rng);
    piece.gradient.resize(goods);
    for (auto& g : piece.gradient) g = slope(rng);
  }
  return PiecewiseConcaveUtility(std::move(pieces));
}

/// Strict budget check: every bundle affordable at e.p.q is weakly worse.
void check_rationalizes(const PiecewiseConcaveUtility& u, const PurchaseDataset& d, const Rational& e) {
  for (std::size_t t = 0; t < d.size(); ++t) {
    const auto best = maximize_on_budget(u, d.price(t), e * d.expenditure(t));
    CHECK(best.value <= u(d.bundle(t)));
  }
}

}  // namespace

TEST_CASE("Afriat efficiency on the worked examples") {
  CHECK(afriat_estar(dbar()) == 1);
  CHECK(afriat_index(dbar()) == 0);
  CHECK(afriat_estar(dstar()) == Rational(7, 8));
  CHECK(afriat_index(dstar()) == Rational(1, 8));
  for (int n = 1; n <= 20; ++n) CHECK(afriat_index(d_n(n)) == 0);
}

TEST_CASE("Afriat e* matches the bisection and grid oracles") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 60; ++i) {
    const auto d = random_dataset(rng, 2 + i % 6, 2 + i % 3);
    const Rational e = afriat_estar(d);
    CHECK(e == oracle::estar_grid(d));
    const Rational approx = oracle::estar_bisection(d, Rational(1, 1 << 30));
    CHECK(abs(e - approx) <= Rational(1, 1 << 29));
    // e* is a supremum: e-GARP may fail at e* itself but holds just below.
    CHECK(is_e_acyclic(d, e));
    CHECK(check_e_garp(d, e - Rational(1, 1 << 30)));
  }
}

TEST_CASE("Afriat index vanishes exactly on GARP data and bounds strong cycles") {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 200; ++i) {
    const auto d = random_dataset(rng, 2 + i % 5, 2);
    const Rational a = afriat_index(d);
    CHECK((a == 0) == is_e_acyclic(d, Rational(1)));
    if (check_garp(d).satisfied) CHECK(a == 0);
    if (const auto cycle = find_strong_cycle(d)) {
      CHECK(a > 0);
      Rational worst = 0;
      for (std::size_t k = 0; k < cycle->nodes.size(); ++k) {
        const std::size_t t = cycle->nodes[k], s = cycle->nodes[(k + 1) % cycle->nodes.size()];
        worst = std::max(worst, d.ratio(t, s));
      }
      CHECK(a >= 1 - worst);
    }
  }
}

TEST_CASE("maximize_on_budget examples") {
  const auto u = linear({"1", "1"});
  const auto best = maximize_on_budget(u, PriceVector(vec({"2", "1"})), Rational(12));
  CHECK(best.value == 12);
  CHECK(best.argmax == bundle({"0", "12"}));

  const auto zero = maximize_on_budget(u, PriceVector(vec({"2", "1"})), Rational(0));
  CHECK(zero.value == 0);
  CHECK(zero.argmax == bundle({"0", "0"}));

  const PiecewiseConcaveUtility kinked({{Rational(0), vec({"1", "3"})}, {Rational(2), vec({"2", "1"})}});
  const auto k = maximize_on_budget(kinked, PriceVector(vec({"1", "1"})), Rational(4));
  CHECK(k.value == kinked(k.argmax));
  CHECK(PriceVector(vec({"1", "1"})).cost(k.argmax) <= 4);
}

TEST_CASE("maximize_on_budget against a dense grid") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> price(1, 6), income(0, 20);
  const int steps = 60;
  for (int i = 0; i < 100; ++i) {
    const auto u = random_utility(rng, 2);
    const PriceVector p(RationalVector{price(rng), price(rng)});
    const Rational m = income(rng);
    const auto best = maximize_on_budget(u, p, m);
    CHECK(p.cost(best.argmax) <= m);
    CHECK(best.value == u(best.argmax));
    const Rational grid = oracle::grid_maximum_2d(u, p, m, steps);
    CHECK(best.value >= grid);
    Rational slack = 0;
    for (const auto& piece : u.pieces()) {
      slack = std::max(slack, (piece.gradient[0] / p[0] + piece.gradient[1] / p[1]) * m / steps);
    }
    CHECK(best.value <= grid + slack);
  }
}

TEST_CASE("Afriat loss examples") {
  const auto loss = afriat_loss(linear({"1", "1"}), dbar());
  CHECK(abs(loss.value - Rational(5, 12)) <= loss.radius);
  CHECK(loss.radius <= default_loss_tolerance());

  for (int seed = 0; seed < 5; ++seed) {
    std::mt19937_64 rng(seed);
    CHECK(afriat_loss(random_utility(rng, 2), dbar()).value > 0);
  }

  const auto u = construct_utility(d_n(1));
  const auto zero = afriat_loss(u, d_n(1));
  CHECK(zero.value <= default_loss_tolerance());
}

TEST_CASE("construct_utility examples") {
  const auto single = make_dataset({{vec({"1", "1"}), vec({"1", "1"})}});
  check_rationalizes(construct_utility(single), single, Rational(1));
  check_rationalizes(construct_utility(d_n(1)), d_n(1), Rational(1));
  check_rationalizes(construct_utility(dbar(), Rational(3, 4)), dbar(), Rational(3, 4));
  CHECK_THROWS_AS(construct_utility(dbar(), Rational(1)), PreconditionError);
  CHECK_THROWS_AS(construct_utility(dstar(), Rational(1)), PreconditionError);
}

TEST_CASE("construct_utility round trip on random data") {
  std::mt19937_64 rng(24);
  int garp = 0;
  for (int i = 0; i < 80; ++i) {
    const auto d = random_dataset(rng, 2 + i % 5, 2 + i % 2);
    const Rational below = afriat_estar(d) - Rational(1, 1 << 20);
    const auto u = construct_utility(d, below);
    check_rationalizes(u, d, below);
    const auto loss = afriat_loss(u, d);
    // U rationalizes D just below e*, and no utility does better than the index.
    CHECK(loss.value - loss.radius <= 1 - below);
    CHECK(loss.value + loss.radius >= afriat_index(d) - default_loss_tolerance());
    if (check_garp(d).satisfied) {
      ++garp;
      CHECK(afriat_loss(construct_utility(d), d).value <= default_loss_tolerance());
    }
  }
  CHECK(garp > 5);
}

TEST_CASE("construct_utility with per-observation efficiencies") {
  std::mt19937_64 rng(25);
  std::uniform_int_distribution<int> level(2, 8);
  for (int i = 0; i < 60; ++i) {
    const auto d = random_dataset(rng, 4, 2);
    EfficiencyVector e(d.size());
    for (auto& v : e) v = Rational(level(rng), 8);
    if (!check_e_garp(d, e)) {
      CHECK_THROWS_AS(construct_utility(d, e), PreconditionError);
      continue;
    }
    const auto u = construct_utility(d, e);
    for (std::size_t t = 0; t < d.size(); ++t) {
      CHECK(maximize_on_budget(u, d.price(t), e[t] * d.expenditure(t)).value <= u(d.bundle(t)));
    }
  }
}

TEST_CASE("perturb_to_garp examples") {
  const Rational delta(1, 100);
  const auto fixed = perturb_to_garp(dbar(), delta);
  CHECK(check_garp(fixed).satisfied);
  for (std::size_t t = 0; t < 2; ++t) {
    CHECK(fixed.expenditure(t) == dbar().expenditure(t));
    Rational dist2 = 0;
    for (std::size_t l = 0; l < 2; ++l) {
      const Rational diff = fixed.bundle(t)[l] - dbar().bundle(t)[l];
      dist2 += diff * diff;
    }
    CHECK(dist2 <= delta * delta);
  }
  CHECK(perturb_to_garp(d_n(3), delta) == d_n(3));
  CHECK_THROWS_AS(perturb_to_garp(dstar(), delta), PreconditionError);
  CHECK_THROWS_AS(perturb_to_garp(dbar(), Rational(0)), PreconditionError);
}

TEST_CASE("money pump costs") {
  CHECK(money_pump_cost(dbar(), {{0, 1}, {true, false}}) == 3);
  CHECK(money_pump_cost(dstar(), {{0, 1}, {true, true}}) == Rational(9, 2));
  CHECK(money_pump_cost(dbar(), {{0}, {false}}) == 0);
  const auto dup = make_dataset({{vec({"1", "1"}), vec({"1", "2"})}, {vec({"1", "1"}), vec({"1", "2"})}});
  CHECK(money_pump_cost(dup, {{0, 1}, {false, false}}) == 0);
  CHECK_THROWS_AS(money_pump_cost(d_n(1), {{0, 1}, {true, false}}), PreconditionError);
  CHECK_THROWS_AS(money_pump_cost(dbar(), {{0, 5}, {true, false}}), PreconditionError);

  std::mt19937_64 rng(26);
  for (int i = 0; i < 200; ++i) {
    const auto d = random_dataset(rng, 5, 2);
    const auto r = check_garp(d);
    if (r.satisfied) continue;
    const Rational cost = money_pump_cost(d, *r.witness);
    CHECK(cost > 0);
    if (const auto s = find_strong_cycle(d)) CHECK(money_pump_cost(d, *s) > 0);
  }
}
