#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "revpref/rational.hpp"

namespace revpref {

/// Nonnegative quantity vector. Virtual bundles (query points) may be zero;
/// observed bundles may not.
class Bundle {
 public:
  Bundle() = default;
  explicit Bundle(RationalVector quantities);

  std::size_t size() const { return values_.size(); }
  const Rational& operator[](std::size_t i) const { return values_[i]; }
  const RationalVector& values() const { return values_; }
  bool is_zero() const;

  friend bool operator==(const Bundle&, const Bundle&) = default;

 private:
  RationalVector values_;
};

/// a >= b in every coordinate.
bool dominates(const Bundle& a, const Bundle& b);
/// a >= b and a != b.
bool strictly_dominates(const Bundle& a, const Bundle& b);

class PriceVector {
 public:
  PriceVector() = default;
  explicit PriceVector(RationalVector prices);

  std::size_t size() const { return values_.size(); }
  const Rational& operator[](std::size_t i) const { return values_[i]; }
  const RationalVector& values() const { return values_; }

  Rational cost(const Bundle& bundle) const { return dot(values_, bundle.values()); }

  friend bool operator==(const PriceVector&, const PriceVector&) = default;

 private:
  RationalVector values_;
};

struct Observation {
  PriceVector price;
  Bundle quantity;

  Observation(PriceVector p, Bundle q);

  Rational expenditure() const { return price.cost(quantity); }

  friend bool operator==(const Observation&, const Observation&) = default;
};

/// Ordered purchase observations over L goods. Immutable once built.
class PurchaseDataset {
 public:
  explicit PurchaseDataset(std::vector<Observation> observations);

  std::size_t size() const { return observations_.size(); }
  std::size_t goods() const { return goods_; }
  const Observation& operator[](std::size_t t) const { return observations_[t]; }
  const std::vector<Observation>& observations() const { return observations_; }

  const PriceVector& price(std::size_t t) const { return observations_[t].price; }
  const Bundle& bundle(std::size_t t) const { return observations_[t].quantity; }
  const Rational& expenditure(std::size_t t) const { return expenditures_[t]; }
  /// p^t . q^s
  Rational cost(std::size_t t, std::size_t s) const { return price(t).cost(bundle(s)); }
  /// p^t . q^s / p^t . q^t
  Rational ratio(std::size_t t, std::size_t s) const { return cost(t, s) / expenditures_[t]; }

  /// Observations in `keep` (ascending indices), in their original order.
  PurchaseDataset subset(std::span<const std::size_t> keep) const;
  /// Same prices with replaced bundles.
  PurchaseDataset with_bundles(std::vector<Bundle> bundles) const;

  friend bool operator==(const PurchaseDataset& a, const PurchaseDataset& b) {
    return a.observations_ == b.observations_;
  }

 private:
  std::vector<Observation> observations_;
  RationalVector expenditures_;
  std::size_t goods_ = 0;
};

/// Reads the `t,p1..pL,q1..qL` CSV format. Errors carry the 1-based line.
PurchaseDataset parse_csv(std::string_view text);
PurchaseDataset read_csv_file(const std::string& path);
std::string serialize_csv(const PurchaseDataset& dataset);

enum class UtilityFamily { cobb_douglas, ces, leontief };

std::string to_string(UtilityFamily family);
UtilityFamily parse_utility_family(std::string_view name);

struct RationalInterval {
  Rational lo;
  Rational hi;
};

/// Synthetic panel generator configuration.
///
/// utility_params holds L positive weights; for CES a trailing positive
/// integer elasticity of substitution is appended (L + 1 values).
struct GeneratorSpec {
  std::size_t observations = 10;
  std::size_t goods = 2;
  UtilityFamily family = UtilityFamily::cobb_douglas;
  RationalVector utility_params;
  RationalInterval efficiency_noise{Rational(1), Rational(1)};
  RationalInterval price_range{Rational(1), Rational(10)};
  RationalInterval income_range{Rational(100), Rational(100)};
  std::uint64_t seed = 0;
};

/// Draws prices and incomes and computes the exact demand of the chosen
/// utility. With efficiency noise e_t < 1 the bundle then slides along its
/// own budget line, in a random direction, until its utility equals that of
/// the optimum at income e_t * m. Expenditure stays exactly m, and e_t is
/// (up to a 2^-32 rounding of the step, in the consumer's favour) the
/// largest share of the budget on which the choice is still optimal.
PurchaseDataset synthesize(const GeneratorSpec& spec);

}  // namespace revpref
