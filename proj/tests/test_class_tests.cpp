#include <doctest.h>

#include <random>

#include "revpref/class_tests.hpp"
#include "revpref/errors.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace revpref;
using namespace revpref::testing;

namespace {

ProbabilityVector uniform(std::size_t goods) {
  return ProbabilityVector(RationalVector(goods, Rational(1, static_cast<long>(goods))));
}

ProbabilityVector random_probabilities(std::mt19937_64& rng, std::size_t goods) {
  std::uniform_int_distribution<int> weight(1, 5);
  RationalVector w(goods);
  Rational total = 0;
  for (auto& v : w) total += v = weight(rng);
  for (auto& v : w) v /= total;
  return ProbabilityVector(std::move(w));
}

PurchaseDataset rescale(const PurchaseDataset& d, std::size_t t, const Rational& factor) {
  std::vector<Observation> obs;
  for (std::size_t s = 0; s < d.size(); ++s) {
    RationalVector p = d.price(s).values();
    if (s == t) {
      for (auto& v : p) v *= factor;
    }
    obs.emplace_back(PriceVector(std::move(p)), d.bundle(s));
  }
  return PurchaseDataset(std::move(obs));
}

}  // namespace

TEST_CASE("cycle ratio products on the worked examples") {
  CHECK(cycle_ratio_product(dbar(), {0, 1}) == Rational(3, 4));
  CHECK(cycle_ratio_product(d_n(1), {0, 1}) == Rational(39, 48));
  CHECK(cycle_ratio_product(dbar(), {0}) == 1);
}

TEST_CASE("homothetic examples") {
  CHECK_FALSE(check_homothetic(dbar()));
  CHECK_FALSE(check_homothetic(d_n(1)));
  CHECK(check_homothetic(make_dataset({{vec({"3", "1"}), vec({"2", "1"})}})));
  const auto w = check_homothetic_witness(dbar());
  REQUIRE_FALSE(w.satisfied);
  REQUIRE(w.witness);
  CHECK(cycle_ratio_product(dbar(), w.witness->nodes) < 1);
}

TEST_CASE("homothetic check agrees with cycle enumeration") {
  std::mt19937_64 rng(51);
  int passed = 0;
  for (int i = 0; i < 200; ++i) {
    const auto d = random_dataset(rng, 1 + i % 6, 2 + i % 2);
    const auto r = check_homothetic_witness(d);
    CHECK(r.satisfied == oracle::homothetic_by_cycles(d));
    CHECK(check_homothetic(d) == r.satisfied);
    if (r.witness) CHECK(cycle_ratio_product(d, r.witness->nodes) < 1);
    passed += r.satisfied;
    // Homotheticity implies GARP.
    if (r.satisfied) CHECK(check_garp(d).satisfied);
  }
  CHECK(passed > 10);
}

TEST_CASE("noiseless Cobb-Douglas data is homothetic") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GeneratorSpec spec;
    spec.observations = 10;
    spec.goods = 3;
    spec.utility_params = vec({"1", "2", "3"});
    spec.income_range = {q("50"), q("200")};
    spec.seed = seed;
    CHECK(check_homothetic(synthesize(spec)));
  }
}

TEST_CASE("homothetic verdict is invariant to rescaling one price vector") {
  std::mt19937_64 rng(52);
  std::uniform_int_distribution<int> num(1, 9), den(1, 9);
  for (int i = 0; i < 200; ++i) {
    const auto d = random_dataset(rng, 2 + i % 4, 2);
    const auto scaled = rescale(d, rng() % d.size(), Rational(num(rng), den(rng)));
    CHECK(check_homothetic(d) == check_homothetic(scaled));
  }
}

TEST_CASE("probability vectors are validated") {
  CHECK_THROWS_AS(ProbabilityVector(vec({"0.5", "0.4"})), PreconditionError);
  CHECK_THROWS_AS(ProbabilityVector(vec({"1", "0"})), PreconditionError);
  CHECK_THROWS_AS(ProbabilityVector(RationalVector{}), PreconditionError);
  CHECK_NOTHROW(ProbabilityVector(vec({"1/3", "2/3"})));
}

TEST_CASE("OCEU single-observation examples") {
  const auto pi = uniform(2);
  CHECK_FALSE(check_oceu(make_dataset({{vec({"3", "1"}), vec({"2", "1"})}}), pi));
  CHECK(check_oceu(make_dataset({{vec({"3", "1"}), vec({"1", "2"})}}), pi));
  const auto constant = make_dataset({{vec({"2", "3"}), vec({"1", "1"})}, {vec({"2", "3"}), vec({"1", "1"})}});
  CHECK(check_oceu(constant, pi));
  CHECK_THROWS_AS(check_oceu(dbar(), uniform(3)), PreconditionError);
}

TEST_CASE("OCEU edge weights") {
  const auto d = make_dataset({{vec({"3", "1"}), vec({"2", "1"})}});
  const auto w = oceu_edge_weight(d, uniform(2), 0, 0);
  REQUIRE(w);
  CHECK(*w == 3);
  const auto flat = make_dataset({{vec({"1", "1"}), vec({"1", "1"})}});
  CHECK_FALSE(oceu_edge_weight(flat, uniform(2), 0, 0));
}

TEST_CASE("OCEU check agrees with cycle and sequence enumeration") {
  std::mt19937_64 rng(53);
  int passed = 0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t goods = 2 + i % 2;
    const auto d = random_dataset(rng, 1 + i % 6, goods, 6, 4);
    const auto pi = random_probabilities(rng, goods);
    const bool ok = check_oceu(d, pi);
    CHECK(ok == oracle::oceu_by_cycles(d, pi));
    if (d.size() <= 4) CHECK(ok == oracle::oceu_by_sequences(d, pi, 4));
    passed += ok;
  }
  CHECK(passed > 5);
}

TEST_CASE("OCEU verdict is invariant to rescaling one price vector") {
  std::mt19937_64 rng(54);
  std::uniform_int_distribution<int> num(1, 9), den(1, 9);
  for (int i = 0; i < 200; ++i) {
    const auto d = random_dataset(rng, 1 + i % 4, 2, 6, 4);
    const auto pi = random_probabilities(rng, 2);
    const auto scaled = rescale(d, rng() % d.size(), Rational(num(rng), den(rng)));
    CHECK(check_oceu(d, pi) == check_oceu(scaled, pi));
  }
}
