#include "revpref/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include "revpref/errors.hpp"

namespace revpref {

// ---------------------------------------------------------------------------
// Domain types

Bundle::Bundle(RationalVector quantities) : values_(std::move(quantities)) {
  if (values_.empty()) throw DatasetError("bundle must have at least one good");
  for (const auto& v : values_) {
    if (v < 0) throw DatasetError("bundle quantities must be nonnegative");
  }
}

bool Bundle::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](const Rational& v) { return v == 0; });
}

bool dominates(const Bundle& a, const Bundle& b) {
  if (a.size() != b.size()) throw DatasetError("bundle dimension mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
  }
  return true;
}

bool strictly_dominates(const Bundle& a, const Bundle& b) { return dominates(a, b) && a != b; }

PriceVector::PriceVector(RationalVector prices) : values_(std::move(prices)) {
  if (values_.empty()) throw DatasetError("price vector must have at least one good");
  for (const auto& v : values_) {
    if (v <= 0) throw DatasetError("prices must be strictly positive");
  }
}

Observation::Observation(PriceVector p, Bundle q) : price(std::move(p)), quantity(std::move(q)) {
  if (price.size() != quantity.size()) throw DatasetError("price and bundle lengths differ");
  if (quantity.is_zero()) throw DatasetError("observed bundle must not be the zero vector");
}

PurchaseDataset::PurchaseDataset(std::vector<Observation> observations)
    : observations_(std::move(observations)) {
  if (observations_.empty()) throw DatasetError("empty dataset");
  goods_ = observations_.front().price.size();
  expenditures_.reserve(observations_.size());
  for (const auto& obs : observations_) {
    if (obs.price.size() != goods_) throw DatasetError("observations disagree on the number of goods");
    expenditures_.push_back(obs.expenditure());
  }
}

PurchaseDataset PurchaseDataset::subset(std::span<const std::size_t> keep) const {
  std::vector<Observation> kept;
  kept.reserve(keep.size());
  for (std::size_t t : keep) kept.push_back(observations_.at(t));
  return PurchaseDataset(std::move(kept));
}

PurchaseDataset PurchaseDataset::with_bundles(std::vector<Bundle> bundles) const {
  if (bundles.size() != observations_.size()) throw DatasetError("bundle count mismatch");
  std::vector<Observation> out;
  out.reserve(bundles.size());
  for (std::size_t t = 0; t < bundles.size(); ++t) {
    out.emplace_back(observations_[t].price, std::move(bundles[t]));
  }
  return PurchaseDataset(std::move(out));
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

}  // namespace

PurchaseDataset parse_csv(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  std::size_t goods = 0;
  bool have_header = false;
  std::vector<Observation> observations;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }

    const auto fields = split_fields(line);
    if (!have_header) {
      if (fields.size() < 3 || fields.size() % 2 == 0 || fields[0] != "t") {
        throw DatasetError("header must be t,p1..pL,q1..qL", line_no);
      }
      goods = (fields.size() - 1) / 2;
      for (std::size_t l = 0; l < goods; ++l) {
        if (fields[1 + l] != "p" + std::to_string(l + 1) ||
            fields[1 + goods + l] != "q" + std::to_string(l + 1)) {
          throw DatasetError("header must be t,p1..pL,q1..qL", line_no);
        }
      }
      have_header = true;
      continue;
    }

    if (fields.size() != 2 * goods + 1) {
      throw DatasetError("inconsistent column count: expected " + std::to_string(2 * goods + 1) +
                             ", found " + std::to_string(fields.size()),
                         line_no);
    }
    if (fields[0].empty()) throw DatasetError("malformed row: empty observation index", line_no);

    RationalVector prices(goods), quantities(goods);
    for (std::size_t l = 0; l < goods; ++l) {
      try {
        prices[l] = parse_rational(fields[1 + l]);
        quantities[l] = parse_rational(fields[1 + goods + l]);
      } catch (const std::invalid_argument& e) {
        throw DatasetError(std::string("malformed row: ") + e.what(), line_no);
      }
      if (prices[l] <= 0) {
        throw DatasetError("nonpositive price in column p" + std::to_string(l + 1), line_no);
      }
      if (quantities[l] < 0) {
        throw DatasetError("negative quantity in column q" + std::to_string(l + 1), line_no);
      }
    }
    if (std::all_of(quantities.begin(), quantities.end(), [](const Rational& q) { return q == 0; })) {
      throw DatasetError("all-zero bundle", line_no);
    }
    observations.emplace_back(PriceVector(std::move(prices)), Bundle(std::move(quantities)));
  }

  if (!have_header) throw DatasetError("missing header");
  if (observations.empty()) throw DatasetError("empty dataset");
  return PurchaseDataset(std::move(observations));
}

PurchaseDataset read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str());
}

std::string serialize_csv(const PurchaseDataset& dataset) {
  const std::size_t goods = dataset.goods();
  std::string out = "t";
  for (std::size_t l = 0; l < goods; ++l) out += ",p" + std::to_string(l + 1);
  for (std::size_t l = 0; l < goods; ++l) out += ",q" + std::to_string(l + 1);
  out += '\n';
  for (std::size_t t = 0; t < dataset.size(); ++t) {
    out += std::to_string(t + 1);
    for (std::size_t l = 0; l < goods; ++l) out += "," + format_rational(dataset.price(t)[l]);
    for (std::size_t l = 0; l < goods; ++l) out += "," + format_rational(dataset.bundle(t)[l]);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Synthetic data

std::string to_string(UtilityFamily family) {
  switch (family) {
    case UtilityFamily::cobb_douglas: return "cobb-douglas";
    case UtilityFamily::ces: return "ces";
    case UtilityFamily::leontief: return "leontief";
  }
  return "unknown";
}

UtilityFamily parse_utility_family(std::string_view name) {
  if (name == "cobb-douglas") return UtilityFamily::cobb_douglas;
  if (name == "ces") return UtilityFamily::ces;
  if (name == "leontief") return UtilityFamily::leontief;
  throw std::invalid_argument("unknown utility family '" + std::string(name) + "'");
}

namespace {

constexpr int kGridSteps = 1000;

class Drawer {
 public:
  explicit Drawer(std::uint64_t seed) : engine_(seed) {}

  // Uniform on an evenly spaced rational grid over [lo, hi].
  Rational draw(const RationalInterval& range) {
    const int k = grid_(engine_);
    return range.lo + (range.hi - range.lo) * Rational(k, kGridSteps);
  }

  int step() { return grid_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::uniform_int_distribution<int> grid_{0, kGridSteps};
};

Rational power(const Rational& base, unsigned exponent) {
  Rational out = 1;
  for (unsigned i = 0; i < exponent; ++i) out *= base;
  return out;
}

void validate(const GeneratorSpec& spec) {
  if (spec.observations == 0 || spec.goods == 0) {
    throw PreconditionError("generator needs at least one observation and one good");
  }
  if (spec.price_range.lo <= 0 || spec.price_range.hi < spec.price_range.lo) {
    throw PreconditionError("price range must be strictly positive with lo <= hi");
  }
  if (spec.income_range.lo <= 0 || spec.income_range.hi < spec.income_range.lo) {
    throw PreconditionError("income range must be strictly positive with lo <= hi");
  }
  const auto& noise = spec.efficiency_noise;
  if (noise.lo < 0 || noise.hi > 1 || noise.hi < noise.lo) {
    throw PreconditionError("efficiency noise bounds must satisfy 0 <= lo <= hi <= 1");
  }
  const std::size_t expected =
      spec.family == UtilityFamily::ces ? spec.goods + 1 : spec.goods;
  if (spec.utility_params.size() != expected) {
    throw PreconditionError("expected " + std::to_string(expected) + " utility parameters for " +
                            to_string(spec.family));
  }
  for (std::size_t l = 0; l < spec.goods; ++l) {
    if (spec.utility_params[l] <= 0) throw PreconditionError("utility weights must be positive");
  }
  if (spec.family == UtilityFamily::ces) {
    const Rational& sigma = spec.utility_params.back();
    if (sigma <= 0 || boost::multiprecision::denominator(sigma) != 1 || sigma > 16) {
      throw PreconditionError("CES elasticity must be an integer in [1, 16]");
    }
  }
}

RationalVector demand(const GeneratorSpec& spec, const PriceVector& p, const Rational& income) {
  const std::size_t goods = spec.goods;
  const auto& a = spec.utility_params;
  RationalVector x(goods);
  switch (spec.family) {
    case UtilityFamily::cobb_douglas: {
      Rational total = 0;
      for (std::size_t l = 0; l < goods; ++l) total += a[l];
      for (std::size_t l = 0; l < goods; ++l) x[l] = a[l] / total * income / p[l];
      break;
    }
    case UtilityFamily::ces: {
      const auto sigma = static_cast<unsigned>(boost::multiprecision::numerator(a.back()));
      RationalVector weight(goods);
      Rational denom = 0;
      for (std::size_t l = 0; l < goods; ++l) {
        weight[l] = power(a[l] / p[l], sigma);
        denom += p[l] * weight[l];
      }
      for (std::size_t l = 0; l < goods; ++l) x[l] = income * weight[l] / denom;
      break;
    }
    case UtilityFamily::leontief: {
      Rational cost = 0;
      for (std::size_t l = 0; l < goods; ++l) cost += p[l] * a[l];
      for (std::size_t l = 0; l < goods; ++l) x[l] = a[l] * income / cost;
      break;
    }
  }
  return x;
}


/// Strictly increasing transform of the family's utility, in floating point.
double utility_score(const GeneratorSpec& spec, const std::vector<double>& x) {
  const auto& a = spec.utility_params;
  double score = 0;
  switch (spec.family) {
    case UtilityFamily::cobb_douglas:
      for (std::size_t l = 0; l < x.size(); ++l) score += to_double(a[l]) * std::log(x[l]);
      return score;
    case UtilityFamily::ces: {
      const double sigma = to_double(a.back());
      if (sigma == 1) {
        for (std::size_t l = 0; l < x.size(); ++l) score += to_double(a[l]) * std::log(x[l]);
        return score;
      }
      const double rho = (sigma - 1) / sigma;
      for (std::size_t l = 0; l < x.size(); ++l) score += to_double(a[l]) * std::pow(x[l], rho);
      return score;
    }
    case UtilityFamily::leontief:
      score = x[0] / to_double(a[0]);
      for (std::size_t l = 1; l < x.size(); ++l) score = std::min(score, x[l] / to_double(a[l]));
      return score;
  }
  return score;
}

/// Moves from the optimum along `direction` (which keeps expenditure fixed)
/// until utility falls to the level of the optimum scaled by `efficiency`,
/// i.e. the optimum on the budget with income e * m. The step is rounded to
/// a 2^-32 grid, so the bundle stays exactly on the budget line.
RationalVector slide_to_level(const GeneratorSpec& spec, const RationalVector& optimum,
                              const RationalVector& direction, const Rational& efficiency) {
  const std::size_t goods = optimum.size();
  std::optional<Rational> limit;
  for (std::size_t l = 0; l < goods; ++l) {
    if (direction[l] < 0) {
      const Rational bound = -optimum[l] / direction[l];
      if (!limit || bound < *limit) limit = bound;
    }
  }
  if (!limit) return optimum;

  auto point = [&](double lambda) {
    std::vector<double> x(goods);
    for (std::size_t l = 0; l < goods; ++l) {
      x[l] = std::max(0.0, to_double(optimum[l]) + lambda * to_double(direction[l]));
    }
    return x;
  };
  std::vector<double> scaled(goods);
  for (std::size_t l = 0; l < goods; ++l) scaled[l] = to_double(efficiency * optimum[l]);
  const double target = utility_score(spec, scaled);

  double lo = 0, hi = to_double(*limit);
  if (!(utility_score(spec, point(hi)) < target)) {
    lo = hi;
  } else {
    for (int i = 0; i < 80; ++i) {
      const double mid = (lo + hi) / 2;
      (utility_score(spec, point(mid)) >= target ? lo : hi) = mid;
    }
  }
  const double grid = 4294967296.0;
  Rational step(static_cast<long long>(std::floor(lo * grid)), static_cast<long long>(grid));
  step = std::min(step, *limit);
  RationalVector x(goods);
  for (std::size_t l = 0; l < goods; ++l) x[l] = optimum[l] + step * direction[l];
  return x;
}

}  // namespace

PurchaseDataset synthesize(const GeneratorSpec& spec) {
  validate(spec);
  Drawer rng(spec.seed);
  std::vector<Observation> observations;
  observations.reserve(spec.observations);

  for (std::size_t t = 0; t < spec.observations; ++t) {
    RationalVector prices(spec.goods);
    for (auto& p : prices) p = rng.draw(spec.price_range);
    PriceVector price(std::move(prices));
    const Rational income = rng.draw(spec.income_range);
    const Rational efficiency = rng.draw(spec.efficiency_noise);

    const RationalVector optimum = demand(spec, price, income);

    RationalVector chosen = optimum;
    if (efficiency < 1 && spec.goods > 1) {
      RationalVector direction(spec.goods);
      for (std::size_t l = 0; l + 1 < spec.goods; ++l) {
        direction[l] = rng.step() - kGridSteps / 2;
      }
      Rational slope = 0;
      for (std::size_t l = 0; l + 1 < spec.goods; ++l) slope += price[l] * direction[l];
      direction.back() = -slope / price[spec.goods - 1];
      chosen = slide_to_level(spec, optimum, direction, efficiency);
    }
    observations.emplace_back(std::move(price), Bundle(std::move(chosen)));
  }
  return PurchaseDataset(std::move(observations));
}

}  // namespace revpref
