#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "revpref/dataset.hpp"
#include "revpref/errors.hpp"
#include "revpref/relations.hpp"

namespace revpref {

/// Total preorder on the observed bundles: level[t] larger means preferred,
/// equal levels mean indifference.
struct PreferenceOrder {
  std::vector<int> level;
};

/// Throws PreconditionError when the order ranks a bundle above one that
/// dominates it, or fails to rank a strictly dominating bundle higher.
void validate_order(const PurchaseDataset& dataset, const PreferenceOrder& order);

/// e_t = min over s ranked at least as high as t of p^t.q^s / p^t.q^t.
EfficiencyVector order_efficiency(const PurchaseDataset& dataset, const PreferenceOrder& order);

enum class Aggregator { mean_shortfall };

/// (1/T) * sum_t (1 - e_t)
Rational aggregate(Aggregator agg, const EfficiencyVector& e);

/// Minimum aggregate shortfall over dominance-consistent preorders.
Rational varian_index(const PurchaseDataset& dataset, Aggregator agg = Aggregator::mean_shortfall,
                      const Limits& limits = {});

/// Calls `visit` with order_efficiency of every strict (tie-free between
/// distinct bundles) order attaining the Varian index, stopping early when
/// `visit` returns false. Returns the index value.
Rational for_each_varian_optimum(const PurchaseDataset& dataset, Aggregator agg,
                                 const std::function<bool(const EfficiencyVector&)>& visit,
                                 const Limits& limits = {});

/// Lebesgue measure of the union over s in S of {x >= q^s} intersected with
/// observation t's budget set.
Rational upper_contour_measure(const PurchaseDataset& dataset, std::size_t t,
                               const std::vector<std::size_t>& s, const Limits& limits = {});

/// Minimum over dominance-consistent preorders of the summed upper contour
/// measures.
Rational swaps_index(const PurchaseDataset& dataset, const Limits& limits = {});

/// Minimum number of observations whose removal leaves a GARP dataset.
std::size_t houtman_maks_index(const PurchaseDataset& dataset, const Limits& limits = {});

/// Every removal set of minimum size, each sorted, listed lexicographically.
std::vector<std::vector<std::size_t>> houtman_maks_minsets(const PurchaseDataset& dataset,
                                                           const Limits& limits = {});

}  // namespace revpref
