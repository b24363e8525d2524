#include "revpref/indices.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <set>
#include <unordered_map>

namespace revpref {

using Mask = std::uint64_t;

namespace {

Mask bit(std::size_t i) { return Mask{1} << i; }

void require_mask_size(const PurchaseDataset& dataset, const Limits& limits) {
  const std::size_t cap = std::min<std::size_t>(limits.max_observations, 64);
  if (dataset.size() > cap) {
    throw EnumerationCapExceeded("dataset has " + std::to_string(dataset.size()) +
                                     " observations; order search supports at most " +
                                     std::to_string(cap),
                                 "max_observations", cap);
  }
}

[[noreturn]] void node_budget_exceeded(const char* what, std::size_t cap) {
  throw EnumerationCapExceeded(std::string(what) + ": search exceeded " + std::to_string(cap) +
                                   " nodes (raise REVPREF_MAX_ENUM)",
                               "max_enum", cap);
}

// ---------------------------------------------------------------------------
// Order search
//
// Orders are built from the top down as sequences of classes of identical
// bundles. Placing a class below everything placed so far fixes the above-set
// of its members, and with it their cost. Ties between distinct bundles never
// help (a tie only enlarges above-sets), so linear orders of classes suffice.

class OrderSearch {
 public:
  using ClassCost = std::function<Rational(std::size_t cls, Mask above)>;
  using LowerBound = std::function<Rational(Mask placed)>;

  OrderSearch(const PurchaseDataset& dataset, ClassCost cost, LowerBound bound, std::size_t budget,
              const char* name)
      : n_(dataset.size()), cost_(std::move(cost)), bound_(std::move(bound)), budget_(budget),
        name_(name) {
    std::vector<std::size_t> class_of(n_, n_);
    for (std::size_t t = 0; t < n_; ++t) {
      if (class_of[t] != n_) continue;
      class_of[t] = members_.size();
      Mask m = bit(t);
      for (std::size_t s = t + 1; s < n_; ++s) {
        if (dataset.bundle(s) == dataset.bundle(t)) {
          class_of[s] = members_.size();
          m |= bit(s);
        }
      }
      members_.push_back(m);
    }
    above_.assign(members_.size(), 0);
    for (std::size_t c = 0; c < members_.size(); ++c) {
      const std::size_t t = static_cast<std::size_t>(std::countr_zero(members_[c]));
      for (std::size_t d = 0; d < members_.size(); ++d) {
        const std::size_t s = static_cast<std::size_t>(std::countr_zero(members_[d]));
        if (strictly_dominates(dataset.bundle(s), dataset.bundle(t))) above_[c] |= members_[d];
      }
    }
    full_ = n_ == 64 ? ~Mask{0} : bit(n_) - 1;
  }

  Rational minimize() {
    best_.reset();
    seen_.clear();
    nodes_ = 0;
    search_best(0, Rational(0));
    return *best_;
  }

  // Visits the placement sequence of every order with total cost == target.
  void enumerate(const Rational& target,
                 const std::function<bool(const std::vector<std::size_t>&)>& visit) {
    dead_.clear();
    nodes_ = 0;
    std::vector<std::size_t> sequence;
    stop_ = false;
    search_all(0, Rational(0), target, sequence, visit);
  }

  Mask members(std::size_t cls) const { return members_[cls]; }

 private:
  struct Child {
    std::size_t cls;
    Rational cost;
  };

  std::vector<Child> children(Mask placed) {
    std::vector<Child> out;
    for (std::size_t c = 0; c < members_.size(); ++c) {
      if ((placed & members_[c]) != 0 || (above_[c] & ~placed) != 0) continue;
      out.push_back({c, cost_(c, placed | members_[c])});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Child& a, const Child& b) { return a.cost < b.cost; });
    return out;
  }

  void tick() {
    if (++nodes_ > budget_) node_budget_exceeded(name_, budget_);
  }

  void search_best(Mask placed, const Rational& acc) {
    tick();
    if (placed == full_) {
      if (!best_ || acc < *best_) best_ = acc;
      return;
    }
    if (best_ && acc + bound_(placed) >= *best_) return;
    if (auto it = seen_.find(placed); it != seen_.end()) {
      if (acc >= it->second) return;
      it->second = acc;
    } else {
      seen_.emplace(placed, acc);
    }
    for (const auto& child : children(placed)) {
      search_best(placed | members_[child.cls], acc + child.cost);
    }
  }

  // Returns true when at least one optimal completion was found below.
  bool search_all(Mask placed, const Rational& acc, const Rational& target,
                  std::vector<std::size_t>& sequence,
                  const std::function<bool(const std::vector<std::size_t>&)>& visit) {
    tick();
    if (placed == full_) {
      if (acc != target) return false;
      if (!visit(sequence)) stop_ = true;
      return true;
    }
    if (acc + bound_(placed) > target) return false;
    if (auto it = dead_.find(placed); it != dead_.end() && acc >= it->second) return false;
    bool found = false;
    for (const auto& child : children(placed)) {
      sequence.push_back(child.cls);
      found |= search_all(placed | members_[child.cls], acc + child.cost, target, sequence, visit);
      sequence.pop_back();
      if (stop_) return true;
    }
    if (!found) {
      auto [it, inserted] = dead_.emplace(placed, acc);
      if (!inserted && acc < it->second) it->second = acc;
    }
    return found;
  }

  std::size_t n_;
  ClassCost cost_;
  LowerBound bound_;
  std::size_t budget_;
  const char* name_;
  std::vector<Mask> members_;
  std::vector<Mask> above_;
  Mask full_ = 0;

  std::optional<Rational> best_;
  std::unordered_map<Mask, Rational> seen_;
  std::unordered_map<Mask, Rational> dead_;
  std::size_t nodes_ = 0;
  bool stop_ = false;
};

// ---------------------------------------------------------------------------
// Varian costs

struct VarianCosts {
  const PurchaseDataset& dataset;
  std::vector<RationalVector> ratio;

  explicit VarianCosts(const PurchaseDataset& d) : dataset(d), ratio(d.size()) {
    for (std::size_t t = 0; t < d.size(); ++t) {
      for (std::size_t s = 0; s < d.size(); ++s) ratio[t].push_back(d.ratio(t, s));
    }
  }

  // 1 - min(1, min_{s in above} ratio(t, s))
  Rational shortfall(std::size_t t, Mask above) const {
    Rational low = 1;
    for (Mask m = above; m != 0; m &= m - 1) {
      const auto s = static_cast<std::size_t>(std::countr_zero(m));
      if (ratio[t][s] < low) low = ratio[t][s];
    }
    return 1 - low;
  }

  Rational class_cost(Mask members, Mask above) const {
    Rational sum = 0;
    for (Mask m = members; m != 0; m &= m - 1) {
      sum += shortfall(static_cast<std::size_t>(std::countr_zero(m)), above);
    }
    return sum;
  }

  Rational lower_bound(Mask placed) const {
    Rational sum = 0;
    for (std::size_t t = 0; t < dataset.size(); ++t) {
      if ((placed & bit(t)) == 0) sum += shortfall(t, placed);
    }
    return sum;
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// Orders

void validate_order(const PurchaseDataset& dataset, const PreferenceOrder& order) {
  if (order.level.size() != dataset.size()) {
    throw PreconditionError("order must rank every observation");
  }
  for (std::size_t t = 0; t < dataset.size(); ++t) {
    for (std::size_t s = 0; s < dataset.size(); ++s) {
      if (!dominates(dataset.bundle(t), dataset.bundle(s))) continue;
      const bool strict = dataset.bundle(t) != dataset.bundle(s);
      if (order.level[t] < order.level[s] || (strict && order.level[t] == order.level[s])) {
        throw PreconditionError("order violates dominance between observations " +
                                std::to_string(t + 1) + " and " + std::to_string(s + 1));
      }
    }
  }
}

EfficiencyVector order_efficiency(const PurchaseDataset& dataset, const PreferenceOrder& order) {
  validate_order(dataset, order);
  EfficiencyVector e(dataset.size(), Rational(1));
  for (std::size_t t = 0; t < dataset.size(); ++t) {
    for (std::size_t s = 0; s < dataset.size(); ++s) {
      if (order.level[s] >= order.level[t]) e[t] = std::min(e[t], dataset.ratio(t, s));
    }
  }
  return e;
}

Rational aggregate(Aggregator agg, const EfficiencyVector& e) {
  switch (agg) {
    case Aggregator::mean_shortfall: {
      if (e.empty()) throw PreconditionError("empty efficiency vector");
      Rational sum = 0;
      for (const auto& v : e) sum += 1 - v;
      return sum / static_cast<long>(e.size());
    }
  }
  throw PreconditionError("unknown aggregator");
}

Rational varian_index(const PurchaseDataset& dataset, Aggregator agg, const Limits& limits) {
  return for_each_varian_optimum(dataset, agg, nullptr, limits);
}

Rational for_each_varian_optimum(const PurchaseDataset& dataset, Aggregator agg,
                                 const std::function<bool(const EfficiencyVector&)>& visit,
                                 const Limits& limits) {
  require_mask_size(dataset, limits);
  const VarianCosts costs(dataset);
  const OrderSearch* self = nullptr;
  OrderSearch search(
      dataset,
      [&](std::size_t cls, Mask above) { return costs.class_cost(self->members(cls), above); },
      [&](Mask placed) { return costs.lower_bound(placed); }, limits.max_enum, "varian");
  self = &search;

  const Rational total = search.minimize();
  if (visit) {
    search.enumerate(total, [&](const std::vector<std::size_t>& sequence) {
      PreferenceOrder order{std::vector<int>(dataset.size())};
      int level = static_cast<int>(sequence.size());
      for (std::size_t cls : sequence) {
        for (Mask m = search.members(cls); m != 0; m &= m - 1) {
          order.level[static_cast<std::size_t>(std::countr_zero(m))] = level;
        }
        --level;
      }
      return visit(order_efficiency(dataset, order));
    });
  }
  switch (agg) {
    case Aggregator::mean_shortfall: return total / static_cast<long>(dataset.size());
  }
  throw PreconditionError("unknown aggregator");
}

// ---------------------------------------------------------------------------
// Swaps

namespace {

class ContourMeasure {
 public:
  ContourMeasure(const PurchaseDataset& dataset, std::size_t t, const Limits& limits)
      : dataset_(dataset), t_(t), cap_(limits.max_cone_union) {
    const std::size_t goods = dataset.goods();
    Rational denom = 1;
    for (std::size_t l = 0; l < goods; ++l) denom *= dataset.price(t)[l] * static_cast<long>(l + 1);
    scale_ = 1 / denom;
    for (std::size_t s = 0; s < dataset.size(); ++s) {
      if (dataset.cost(t, s) < dataset.expenditure(t)) relevant_ |= bit(s);
    }
  }

  Mask relevant() const { return relevant_; }

  // Measure of the union of cones over `set`.
  Rational operator()(Mask set) {
    set &= relevant_;
    set = drop_dominated(set);
    if (set == 0) return 0;
    if (auto it = memo_.find(set); it != memo_.end()) return it->second;

    std::vector<std::size_t> cones;
    for (Mask m = set; m != 0; m &= m - 1) cones.push_back(static_cast<std::size_t>(std::countr_zero(m)));
    if (cones.size() > cap_) {
      throw EnumerationCapExceeded("upper contour union of " + std::to_string(cones.size()) +
                                       " cones exceeds the inclusion-exclusion cap of " +
                                       std::to_string(cap_),
                                   "max_cone_union", cap_);
    }
    Rational total = 0;
    RationalVector corner(dataset_.goods(), Rational(0));
    accumulate(cones, 0, corner, 0, total);
    total *= scale_;
    memo_.emplace(set, total);
    return total;
  }

 private:
  Mask drop_dominated(Mask set) const {
    Mask out = set;
    for (Mask a = set; a != 0; a &= a - 1) {
      const auto s = static_cast<std::size_t>(std::countr_zero(a));
      for (Mask b = set; b != 0; b &= b - 1) {
        const auto r = static_cast<std::size_t>(std::countr_zero(b));
        if (r == s || (out & bit(r)) == 0) continue;
        // cone(q^s) is inside cone(q^r); identical bundles keep the lower index.
        const bool inside = dominates(dataset_.bundle(s), dataset_.bundle(r)) &&
                            (dataset_.bundle(s) != dataset_.bundle(r) || r < s);
        if (inside) {
          out &= ~bit(s);
          break;
        }
      }
    }
    return out;
  }

  // Inclusion-exclusion over subsets; `corner` is the running componentwise
  // max. Supersets of a subset whose corner leaves the budget add nothing.
  void accumulate(const std::vector<std::size_t>& cones, std::size_t from, RationalVector& corner,
                  std::size_t depth, Rational& total) const {
    for (std::size_t i = from; i < cones.size(); ++i) {
      RationalVector next = corner;
      const Bundle& q = dataset_.bundle(cones[i]);
      for (std::size_t l = 0; l < next.size(); ++l) next[l] = std::max(next[l], q[l]);
      const Rational room = dataset_.expenditure(t_) - dot(dataset_.price(t_).values(), next);
      if (room <= 0) continue;
      Rational term = 1;
      for (std::size_t l = 0; l < next.size(); ++l) term *= room;
      if (depth % 2 == 0) {
        total += term;
      } else {
        total -= term;
      }
      accumulate(cones, i + 1, next, depth + 1, total);
    }
  }

  const PurchaseDataset& dataset_;
  std::size_t t_;
  std::size_t cap_;
  Rational scale_;
  Mask relevant_ = 0;
  std::unordered_map<Mask, Rational> memo_;
};

}  // namespace

Rational upper_contour_measure(const PurchaseDataset& dataset, std::size_t t,
                               const std::vector<std::size_t>& s, const Limits& limits) {
  require_mask_size(dataset, limits);
  if (t >= dataset.size()) throw PreconditionError("observation index out of range");
  if (s.empty()) throw PreconditionError("upper_contour_measure needs a nonempty set");
  Mask set = 0;
  for (std::size_t i : s) {
    if (i >= dataset.size()) throw PreconditionError("observation index out of range");
    set |= bit(i);
  }
  ContourMeasure measure(dataset, t, limits);
  return measure(set);
}

Rational swaps_index(const PurchaseDataset& dataset, const Limits& limits) {
  require_mask_size(dataset, limits);
  const std::size_t n = dataset.size();
  std::vector<ContourMeasure> measures;
  measures.reserve(n);
  for (std::size_t t = 0; t < n; ++t) measures.emplace_back(dataset, t, limits);

  std::vector<RationalVector> single(n, RationalVector(n));
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t s = 0; s < n; ++s) single[t][s] = measures[t](bit(s));
  }

  const OrderSearch* self = nullptr;
  OrderSearch search(
      dataset,
      [&](std::size_t cls, Mask above) {
        Rational sum = 0;
        for (Mask m = self->members(cls); m != 0; m &= m - 1) {
          sum += measures[static_cast<std::size_t>(std::countr_zero(m))](above);
        }
        return sum;
      },
      [&](Mask placed) {
        Rational sum = 0;
        for (std::size_t t = 0; t < n; ++t) {
          if ((placed & bit(t)) != 0) continue;
          Rational best = 0;
          for (Mask m = placed & measures[t].relevant(); m != 0; m &= m - 1) {
            best = std::max(best, single[t][static_cast<std::size_t>(std::countr_zero(m))]);
          }
          sum += best;
        }
        return sum;
      },
      limits.max_enum, "swaps");
  self = &search;
  return search.minimize();
}

// ---------------------------------------------------------------------------
// Houtman-Maks

namespace {

class RemovalSearch {
 public:
  RemovalSearch(const PurchaseDataset& dataset, const Limits& limits)
      : dataset_(dataset), budget_(limits.max_enum) {}

  // All removal sets of size exactly `depth` reachable by hitting-set
  // branching; stops at the first one unless `collect_all`.
  bool run(std::size_t depth, bool collect_all) {
    depth_ = depth;
    collect_all_ = collect_all;
    visited_.clear();
    found_.clear();
    return branch(0, 0) || !found_.empty();
  }

  const std::set<std::vector<std::size_t>>& found() const { return found_; }

 private:
  bool branch(Mask removed, std::size_t size) {
    if (!visited_.insert(removed).second) return false;
    if (++nodes_ > budget_) node_budget_exceeded("houtman_maks", budget_);

    std::vector<std::size_t> kept;
    for (std::size_t t = 0; t < dataset_.size(); ++t) {
      if ((removed & bit(t)) == 0) kept.push_back(t);
    }
    const GarpResult result = check_garp(dataset_.subset(kept));
    if (result.satisfied) {
      if (size != depth_) return false;
      std::vector<std::size_t> set;
      for (std::size_t t = 0; t < dataset_.size(); ++t) {
        if ((removed & bit(t)) != 0) set.push_back(t);
      }
      found_.insert(std::move(set));
      return !collect_all_;
    }
    if (size == depth_) return false;
    // Every valid removal set must hit this cycle.
    for (std::size_t local : result.witness->nodes) {
      if (branch(removed | bit(kept[local]), size + 1)) return true;
    }
    return false;
  }

  const PurchaseDataset& dataset_;
  std::size_t budget_;
  std::size_t nodes_ = 0;
  std::size_t depth_ = 0;
  bool collect_all_ = false;
  std::set<Mask> visited_;
  std::set<std::vector<std::size_t>> found_;
};

}  // namespace

std::size_t houtman_maks_index(const PurchaseDataset& dataset, const Limits& limits) {
  require_mask_size(dataset, limits);
  RemovalSearch search(dataset, limits);
  for (std::size_t k = 0;; ++k) {
    if (search.run(k, false)) return k;
  }
}

std::vector<std::vector<std::size_t>> houtman_maks_minsets(const PurchaseDataset& dataset,
                                                           const Limits& limits) {
  require_mask_size(dataset, limits);
  RemovalSearch search(dataset, limits);
  for (std::size_t k = 0;; ++k) {
    if (search.run(k, false)) {
      search.run(k, true);
      const auto& found = search.found();
      if (found.size() > limits.max_enum) {
        throw EnumerationCapExceeded("too many minimum removal sets", "max_enum", limits.max_enum);
      }
      return {found.begin(), found.end()};
    }
  }
}

}  // namespace revpref
