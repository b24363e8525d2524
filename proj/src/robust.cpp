#include "revpref/robust.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "revpref/afriat.hpp"

namespace revpref {

std::string to_string(LossKind loss) {
  switch (loss) {
    case LossKind::afriat: return "afriat";
    case LossKind::varian: return "varian";
    case LossKind::houtman_maks: return "hm";
  }
  return "unknown";
}

LossKind parse_loss_kind(std::string_view name) {
  if (name == "afriat") return LossKind::afriat;
  if (name == "varian") return LossKind::varian;
  if (name == "hm" || name == "houtman-maks") return LossKind::houtman_maks;
  throw std::invalid_argument("unknown loss '" + std::string(name) + "'");
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::preferred: return "preferred";
    case Verdict::dispreferred: return "dispreferred";
    case Verdict::equivalent: return "equivalent";
    case Verdict::incomparable: return "incomparable";
  }
  return "unknown";
}

Verdict verdict_of(bool forward, bool backward) {
  if (forward && backward) return Verdict::equivalent;
  if (forward) return Verdict::preferred;
  if (backward) return Verdict::dispreferred;
  return Verdict::incomparable;
}

RobustPreference::RobustPreference(const PurchaseDataset& dataset, LossKind loss,
                                   const Limits& limits)
    : loss_(loss), goods_(dataset.goods()) {
  switch (loss) {
    case LossKind::afriat: {
      const Rational e = afriat_estar(dataset);
      const ReachMode mode = check_e_garp(dataset, e) ? ReachMode::weak : ReachMode::strict;
      benchmarks_.push_back({dataset, uniform_efficiency(dataset, e), mode});
      break;
    }
    case LossKind::houtman_maks: {
      for (const auto& removed : houtman_maks_minsets(dataset, limits)) {
        std::vector<std::size_t> kept;
        for (std::size_t t = 0; t < dataset.size(); ++t) {
          if (!std::binary_search(removed.begin(), removed.end(), t)) kept.push_back(t);
        }
        PurchaseDataset retained = dataset.subset(kept);
        EfficiencyVector ones = uniform_efficiency(retained, 1);
        benchmarks_.push_back({std::move(retained), std::move(ones), ReachMode::weak});
      }
      break;
    }
    case LossKind::varian: {
      if (check_garp(dataset).satisfied) {
        benchmarks_.push_back({dataset, uniform_efficiency(dataset, 1), ReachMode::weak});
        break;
      }
      std::set<EfficiencyVector> optima;
      for_each_varian_optimum(
          dataset, Aggregator::mean_shortfall,
          [&](const EfficiencyVector& e) {
            optima.insert(e);
            if (optima.size() > limits.max_enum) {
              throw EnumerationCapExceeded("too many optimal Varian efficiency vectors",
                                           "max_enum", limits.max_enum);
            }
            return true;
          },
          limits);
      // An optimum that itself satisfies e-GARP is attained; then the weak
      // relation at the attaining vectors applies.
      std::vector<EfficiencyVector> attained;
      for (const auto& e : optima) {
        if (check_e_garp(dataset, e)) attained.push_back(e);
      }
      if (!attained.empty()) {
        for (auto& e : attained) benchmarks_.push_back({dataset, std::move(e), ReachMode::weak});
      } else {
        for (const auto& e : optima) benchmarks_.push_back({dataset, e, ReachMode::strict});
      }
      break;
    }
  }
}

bool RobustPreference::operator()(const Bundle& a, const Bundle& b) const {
  if (a.size() != goods_ || b.size() != goods_) {
    throw PreconditionError("query bundles must have " + std::to_string(goods_) + " goods");
  }
  return std::all_of(benchmarks_.begin(), benchmarks_.end(), [&](const Benchmark& bm) {
    return reach_with_virtual(bm.data, bm.efficiency, bm.mode, a, b);
  });
}

RobustQueryResult RobustPreference::query(const Bundle& a, const Bundle& b) const {
  RobustQueryResult r;
  r.forward = (*this)(a, b);
  r.backward = (*this)(b, a);
  r.verdict = verdict_of(r.forward, r.backward);
  return r;
}

bool robust_pref_afriat(const PurchaseDataset& dataset, const Bundle& a, const Bundle& b) {
  return RobustPreference(dataset, LossKind::afriat)(a, b);
}

bool robust_pref_hm(const PurchaseDataset& dataset, const Bundle& a, const Bundle& b,
                    const Limits& limits) {
  return RobustPreference(dataset, LossKind::houtman_maks, limits)(a, b);
}

bool robust_pref_varian(const PurchaseDataset& dataset, const Bundle& a, const Bundle& b,
                        Aggregator agg, const Limits& limits) {
  if (agg != Aggregator::mean_shortfall) throw PreconditionError("unsupported aggregator");
  return RobustPreference(dataset, LossKind::varian, limits)(a, b);
}

// ---------------------------------------------------------------------------
// Compensation

Bundle median_bundle(const PurchaseDataset& dataset, std::size_t good) {
  if (good >= dataset.goods()) throw PreconditionError("good index out of range");
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dataset.bundle(a)[good] < dataset.bundle(b)[good];
  });
  return dataset.bundle(order[(dataset.size() + 1) / 2 - 1]);
}

Bundle counterfactual_bundle(const Bundle& base, std::size_t good, const Rational& reduction,
                             const Rational& k) {
  if (good >= base.size()) throw PreconditionError("good index out of range");
  RationalVector x = base.values();
  for (std::size_t l = 0; l < x.size(); ++l) x[l] *= l == good ? 1 - reduction : 1 + k;
  return Bundle(std::move(x));
}

namespace {

void validate_compensation(std::size_t goods, std::size_t good, const Rational& reduction,
                           const Rational& cap) {
  if (good >= goods) throw PreconditionError("good index out of range");
  if (reduction <= 0 || reduction >= 1) throw PreconditionError("reduction must lie in (0,1)");
  if (cap <= 0) throw PreconditionError("cap must be positive");
}

// Values of k at which a comparison between x(k) and a fixed bundle or
// budget can change.
std::vector<Rational> flip_points(const RobustPreference& relation, const Bundle& median,
                                  std::size_t good, const Rational& reduction,
                                  const Rational& cap) {
  std::vector<Rational> points{Rational(0), cap};
  auto add = [&](const Rational& k) {
    if (k >= 0 && k <= cap) points.push_back(k);
  };
  const Bundle x0 = counterfactual_bundle(median, good, reduction, 0);

  auto coordinate_flips = [&](const Bundle& other) {
    for (std::size_t l = 0; l < median.size(); ++l) {
      if (l == good || median[l] == 0) continue;
      add(other[l] / median[l] - 1);
    }
  };
  coordinate_flips(median);

  for (const auto& bm : relation.benchmarks()) {
    for (std::size_t t = 0; t < bm.data.size(); ++t) {
      coordinate_flips(bm.data.bundle(t));
      // p.x(k) = p.x(0) + k * slope
      Rational slope = 0;
      for (std::size_t l = 0; l < median.size(); ++l) {
        if (l != good) slope += bm.data.price(t)[l] * median[l];
      }
      if (slope == 0) continue;
      const Rational budget = bm.efficiency[t] * bm.data.expenditure(t);
      add((budget - bm.data.price(t).cost(x0)) / slope);
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

// Left end of the first scan cell where `holds` is true.
std::optional<Rational> first_true(const std::vector<CompensationPoint>& scan,
                                   bool (*holds)(const CompensationPoint&)) {
  // scan alternates breakpoint, midpoint, breakpoint, ...
  for (std::size_t i = 0; i < scan.size(); ++i) {
    if (!holds(scan[i])) continue;
    return i % 2 == 0 ? scan[i].k : scan[i - 1].k;
  }
  return std::nullopt;
}

}  // namespace

std::vector<CompensationPoint> compensation_scan(const RobustPreference& relation,
                                                 const Bundle& median, std::size_t good,
                                                 const Rational& reduction, const Rational& cap) {
  validate_compensation(median.size(), good, reduction, cap);
  const auto points = flip_points(relation, median, good, reduction, cap);
  std::vector<CompensationPoint> scan;
  auto evaluate = [&](const Rational& k) {
    const Bundle x = counterfactual_bundle(median, good, reduction, k);
    scan.push_back({k, relation(median, x), relation(x, median)});
  };
  for (std::size_t i = 0; i < points.size(); ++i) {
    evaluate(points[i]);
    if (i + 1 < points.size()) evaluate((points[i] + points[i + 1]) / 2);
  }
  return scan;
}

CompensationResult compensation_levels(const RobustPreference& relation, const Bundle& median,
                                       std::size_t good, const Rational& reduction,
                                       const Rational& cap) {
  const auto scan = compensation_scan(relation, median, good, reduction, cap);
  CompensationResult result;
  result.cap = cap;
  result.k_w = first_true(scan, [](const CompensationPoint& p) { return !p.forward; });
  result.k_s = first_true(scan, [](const CompensationPoint& p) { return p.backward; });
  return result;
}

CompensationResult compensation_levels(const PurchaseDataset& dataset, LossKind loss,
                                       std::size_t good, const Rational& reduction,
                                       const Rational& cap, const Limits& limits) {
  validate_compensation(dataset.goods(), good, reduction, cap);
  const RobustPreference relation(dataset, loss, limits);
  return compensation_levels(relation, median_bundle(dataset, good), good, reduction, cap);
}

std::string to_string(Sharpness s) {
  switch (s) {
    case Sharpness::first_sharper: return "first_sharper";
    case Sharpness::second_sharper: return "second_sharper";
    case Sharpness::equal: return "equal";
    case Sharpness::incomparable: return "incomparable";
  }
  return "unknown";
}

Sharpness sharpness_compare(const CompensationResult& first, const CompensationResult& second) {
  if (first.cap != second.cap) throw PreconditionError("compensation results use different caps");
  auto lo = [](const CompensationResult& r) { return r.k_w.value_or(r.cap); };
  auto hi = [](const CompensationResult& r) { return r.k_s.value_or(r.cap); };
  const bool first_in_second = lo(second) <= lo(first) && hi(first) <= hi(second);
  const bool second_in_first = lo(first) <= lo(second) && hi(second) <= hi(first);
  if (first_in_second && second_in_first) return Sharpness::equal;
  if (first_in_second) return Sharpness::first_sharper;
  if (second_in_first) return Sharpness::second_sharper;
  return Sharpness::incomparable;
}

}  // namespace revpref
