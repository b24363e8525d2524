#include <doctest.h>

#include <random>

#include "revpref/afriat.hpp"
#include "revpref/indices.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace revpref;
using namespace revpref::testing;

namespace {

/// D* next to a copy scaled far out of its budgets: two independent strong
/// 2-cycles.
PurchaseDataset two_strong_cycles() {
  return make_dataset({{vec({"2", "1"}), vec({"4.5", "3"})},
                       {vec({"1", "2"}), vec({"2", "5"})},
                       {vec({"2", "1"}), vec({"450", "300"})},
                       {vec({"1", "2"}), vec({"200", "500"})}});
}

}  // namespace

TEST_CASE("order efficiency examples") {
  CHECK(order_efficiency(dbar(), {{1, 0}}) == vec({"1", "1"}));
  CHECK(order_efficiency(dbar(), {{0, 1}}) == vec({"3/4", "1"}));
  CHECK(order_efficiency(dstar(), {{1, 0}}) == vec({"1", "7/8"}));
  CHECK(order_efficiency(dstar(), {{0, 0}}) == vec({"3/4", "7/8"}));

  const auto dominated = make_dataset({{vec({"1", "1"}), vec({"1", "1"})}, {vec({"1", "1"}), vec({"2", "2"})}});
  CHECK_THROWS_AS(validate_order(dominated, {{1, 0}}), PreconditionError);
  CHECK_THROWS_AS(validate_order(dominated, {{0, 0}}), PreconditionError);
  CHECK_NOTHROW(validate_order(dominated, {{0, 1}}));
  CHECK_THROWS_AS(validate_order(dominated, {{0}}), PreconditionError);
}

TEST_CASE("orders from rationalizing utilities are fully efficient") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 60; ++i) {
    const auto d = random_dataset(rng, 5, 2);
    if (!check_garp(d).satisfied) continue;
    const auto u = construct_utility(d);
    std::vector<Rational> values;
    for (std::size_t t = 0; t < d.size(); ++t) values.push_back(u(d.bundle(t)));
    PreferenceOrder order{std::vector<int>(d.size())};
    for (std::size_t t = 0; t < d.size(); ++t) {
      for (std::size_t s = 0; s < d.size(); ++s) order.level[t] += values[s] < values[t];
    }
    CHECK(order_efficiency(d, order) == EfficiencyVector(d.size(), Rational(1)));
  }
}

TEST_CASE("Varian index examples") {
  CHECK(varian_index(dbar()) == 0);
  CHECK(varian_index(dstar()) == Rational(1, 16));
  CHECK(varian_index(d_n(2)) == 0);
  CHECK(aggregate(Aggregator::mean_shortfall, vec({"3/4", "1"})) == Rational(1, 8));
}

TEST_CASE("Varian optima are attained and satisfy e-GARP") {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 40; ++i) {
    const auto d = random_dataset(rng, 2 + i % 5, 2);
    std::vector<EfficiencyVector> optima;
    const Rational v = for_each_varian_optimum(d, Aggregator::mean_shortfall, [&](const EfficiencyVector& e) {
      optima.push_back(e);
      return true;
    });
    CHECK(v == varian_index(d));
    REQUIRE_FALSE(optima.empty());
    for (const auto& e : optima) {
      CHECK(aggregate(Aggregator::mean_shortfall, e) == v);
      // Ties at the order's own thresholds can close weak cycles, so the
      // check runs just below e.
      EfficiencyVector below = e;
      for (auto& v : below) v *= 1 - Rational(1, 1 << 20);
      CHECK(check_e_garp(d, below));
    }
  }
}

TEST_CASE("Varian branch and bound matches exhaustive preorders") {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 40; ++i) {
    const auto d = random_dataset(rng, 2 + i % 5, 2 + i % 2);
    const Rational v = varian_index(d);
    CHECK(v == oracle::varian_exhaustive(d));
    CHECK(v <= afriat_index(d));
    CHECK((v == 0) == (afriat_index(d) == 0));
  }
}

TEST_CASE("upper contour measure") {
  CHECK(upper_contour_measure(dstar(), 1, {0}) == Rational(9, 16));
  CHECK(upper_contour_measure(dbar(), 1, {0}) == 0);
  CHECK(upper_contour_measure(dbar(), 0, {0}) == 0);
  // Nested cones at (1,1) and (1/2,1/2) inside p = (1,1), m = 2.
  const auto d = make_dataset({{vec({"1", "1"}), vec({"1", "1"})}, {vec({"1", "1"}), vec({"0.5", "0.5"})}});
  CHECK(upper_contour_measure(d, 0, {1}) == Rational(1, 2));
  CHECK(upper_contour_measure(d, 0, {0, 1}) == upper_contour_measure(d, 0, {1}));

  std::mt19937_64 rng(34);
  for (int i = 0; i < 100; ++i) {
    const auto r = random_dataset(rng, 4, 2);
    std::vector<std::size_t> s;
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (rng() % 2) s.push_back(k);
    }
    if (s.empty()) s.push_back(0);
    const std::size_t t = rng() % r.size();
    CHECK(upper_contour_measure(r, t, s) == oracle::contour_area_2d(r, t, s));
  }
}

TEST_CASE("upper contour measure in three goods") {
  // Simplex of side m/p: volume m^3 / (3! p1 p2 p3).
  const auto d = make_dataset({{vec({"1", "2", "3"}), vec({"0", "0", "1"})}});
  const auto origin = make_dataset({{vec({"1", "2", "3"}), vec({"1", "0", "0"})},
                                    {vec({"1", "1", "1"}), vec({"0", "0", "0.000001"})}});
  CHECK(upper_contour_measure(d, 0, {0}) == 0);
  const Rational m = origin.expenditure(0);
  const Rational corner = origin.cost(0, 1);
  CHECK(upper_contour_measure(origin, 0, {1}) == (m - corner) * (m - corner) * (m - corner) / 36);
}

TEST_CASE("Swaps index examples") {
  CHECK(swaps_index(dbar()) == 0);
  CHECK(swaps_index(dstar()) == Rational(9, 16));
  CHECK(swaps_index(d_n(4)) == 0);
}

TEST_CASE("Swaps branch and bound matches exhaustive preorders") {
  std::mt19937_64 rng(35);
  for (int i = 0; i < 30; ++i) {
    const auto d = random_dataset(rng, 2 + i % 4, 2);
    const Rational s = swaps_index(d);
    CHECK(s == oracle::swaps_exhaustive(d));
    if (find_strong_cycle(d)) CHECK(s > 0);
    if (check_garp(d).satisfied) CHECK(s == 0);
  }
}

TEST_CASE("Houtman-Maks examples") {
  CHECK(houtman_maks_index(dbar()) == 1);
  CHECK(houtman_maks_index(dstar()) == 1);
  CHECK(houtman_maks_index(d_n(5)) == 0);
  CHECK(houtman_maks_index(two_strong_cycles()) == 2);
  CHECK(oracle::hm_exhaustive(two_strong_cycles()) == 2);

  using Sets = std::vector<std::vector<std::size_t>>;
  CHECK(houtman_maks_minsets(dbar()) == Sets{{0}, {1}});
  CHECK(houtman_maks_minsets(dstar()) == Sets{{0}, {1}});
  CHECK(houtman_maks_minsets(d_n(1)) == Sets{{}});
  CHECK(houtman_maks_minsets(two_strong_cycles()) == Sets{{0, 2}, {0, 3}, {1, 2}, {1, 3}});
}

TEST_CASE("Houtman-Maks matches exhaustive subsets") {
  std::mt19937_64 rng(36);
  for (int i = 0; i < 60; ++i) {
    const auto d = random_dataset(rng, 2 + i % 7, 2);
    const std::size_t h = houtman_maks_index(d);
    CHECK(h == oracle::hm_exhaustive(d));
    CHECK((h == 0) == check_garp(d).satisfied);
    const auto sets = houtman_maks_minsets(d);
    CHECK(sets == oracle::hm_minsets_exhaustive(d));
    for (const auto& s : sets) CHECK(s.size() == h);
  }
}

TEST_CASE("removing an observation lowers Houtman-Maks by at most one") {
  std::mt19937_64 rng(37);
  for (int i = 0; i < 40; ++i) {
    const auto d = random_dataset(rng, 6, 2);
    const std::size_t h = houtman_maks_index(d);
    for (std::size_t drop = 0; drop < d.size(); ++drop) {
      std::vector<std::size_t> keep;
      for (std::size_t t = 0; t < d.size(); ++t) {
        if (t != drop) keep.push_back(t);
      }
      const std::size_t hs = houtman_maks_index(d.subset(keep));
      CHECK(hs <= h);
      CHECK(hs + 1 >= h);
    }
  }
}

TEST_CASE("enumeration caps are reported") {
  Limits tight;
  tight.max_enum = 3;
  std::mt19937_64 rng(38);
  const auto d = random_dataset(rng, 8, 2);
  CHECK_THROWS_AS(varian_index(d, Aggregator::mean_shortfall, tight), EnumerationCapExceeded);
  Limits narrow;
  narrow.max_cone_union = 2;
  const auto fan = make_dataset({{vec({"1", "1"}), vec({"10", "10"})},
                                 {vec({"1", "1"}), vec({"1", "3"})},
                                 {vec({"1", "1"}), vec({"2", "2"})},
                                 {vec({"1", "1"}), vec({"3", "1"})}});
  CHECK_THROWS_AS(upper_contour_measure(fan, 0, {1, 2, 3}, narrow), EnumerationCapExceeded);
  CHECK(upper_contour_measure(fan, 0, {1, 2, 3}) > 0);
}
