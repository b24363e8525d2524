#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "revpref/dataset.hpp"

namespace revpref::testing {

inline Rational q(const std::string& text) { return parse_rational(text); }

inline RationalVector vec(std::initializer_list<const char*> values) {
  RationalVector out;
  for (const char* v : values) out.push_back(parse_rational(v));
  return out;
}

inline Bundle bundle(std::initializer_list<const char*> values) { return Bundle(vec(values)); }

/// Each row is (prices, quantities).
inline PurchaseDataset make_dataset(
    const std::vector<std::pair<RationalVector, RationalVector>>& rows) {
  std::vector<Observation> obs;
  for (const auto& [p, x] : rows) obs.emplace_back(PriceVector(p), Bundle(x));
  return PurchaseDataset(std::move(obs));
}

/// Two observations sitting on each other's budget lines: q = (4,4) at
/// p = (2,1), q' = (2,5) at p' = (1,2).
inline PurchaseDataset dbar() {
  return make_dataset({{vec({"2", "1"}), vec({"4", "4"})}, {vec({"1", "2"}), vec({"2", "5"})}});
}

/// Same prices with q replaced by (4.5, 3); both links strict.
inline PurchaseDataset dstar() {
  return make_dataset({{vec({"2", "1"}), vec({"4.5", "3"})}, {vec({"1", "2"}), vec({"2", "5"})}});
}

/// q_n = (4 - 1/(3n), 4 + 2/(3n)) on the first budget line; converges to dbar.
inline PurchaseDataset d_n(int n) {
  const Rational step = Rational(1) / Rational(3 * n);
  return make_dataset({{vec({"2", "1"}), {Rational(4) - step, Rational(4) + 2 * step}},
                       {vec({"1", "2"}), vec({"2", "5"})}});
}

inline Bundle q_tilde() { return bundle({"2.5", "7"}); }

/// Small integer prices and quantities, so exact ties between expenditures
/// are common.
inline PurchaseDataset random_dataset(std::mt19937_64& rng, std::size_t t, std::size_t goods,
                                      int max_price = 5, int max_quantity = 6) {
  std::uniform_int_distribution<int> price(1, max_price), quantity(0, max_quantity);
  std::vector<Observation> obs;
  for (std::size_t i = 0; i < t; ++i) {
    RationalVector p(goods), x(goods);
    for (auto& v : p) v = price(rng);
    do {
      for (auto& v : x) v = quantity(rng);
    } while (std::all_of(x.begin(), x.end(), [](const Rational& v) { return v == 0; }));
    obs.emplace_back(PriceVector(std::move(p)), Bundle(std::move(x)));
  }
  return PurchaseDataset(std::move(obs));
}

/// Two-good dataset whose bundles sit where budget lines cross: each q^t is
/// the intersection of its own budget line with another observation's line,
/// which produces weak (knife-edge) revealed preferences.
inline PurchaseDataset intersection_dataset(std::mt19937_64& rng, std::size_t t) {
  std::uniform_int_distribution<int> price(1, 6), income(6, 24);
  std::vector<std::pair<RationalVector, Rational>> budgets;
  for (std::size_t i = 0; i < t; ++i) budgets.push_back({{price(rng), price(rng)}, income(rng)});
  std::vector<Observation> obs;
  std::uniform_int_distribution<std::size_t> pick(0, t - 1);
  for (std::size_t i = 0; i < t; ++i) {
    const auto& [p, m] = budgets[i];
    RationalVector x;
    for (int attempt = 0; attempt < 8 && x.empty(); ++attempt) {
      const std::size_t j = pick(rng);
      if (j == i) continue;
      const auto& [r, n] = budgets[j];
      const Rational det = p[0] * r[1] - p[1] * r[0];
      if (det == 0) continue;
      const Rational x0 = (m * r[1] - p[1] * n) / det;
      const Rational x1 = (p[0] * n - r[0] * m) / det;
      if (x0 >= 0 && x1 >= 0 && (x0 > 0 || x1 > 0)) x = {x0, x1};
    }
    if (x.empty()) x = {m / (2 * p[0]), m / (2 * p[1])};
    obs.emplace_back(PriceVector(p), Bundle(std::move(x)));
  }
  return PurchaseDataset(std::move(obs));
}

}  // namespace revpref::testing
