#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "revpref/dataset.hpp"
#include "revpref/errors.hpp"
#include "revpref/indices.hpp"
#include "revpref/relations.hpp"

namespace revpref {

enum class LossKind { afriat, varian, houtman_maks };

std::string to_string(LossKind loss);
/// Accepts "afriat", "varian", "hm".
LossKind parse_loss_kind(std::string_view name);

enum class Verdict { preferred, dispreferred, equivalent, incomparable };

std::string to_string(Verdict v);
Verdict verdict_of(bool forward, bool backward);

struct RobustQueryResult {
  bool forward = false;
  bool backward = false;
  Verdict verdict = Verdict::incomparable;
};

/// Robust preference relation for one loss function. Construction does the
/// expensive part (index, optimal orders or removal sets) once; each query
/// is then a conjunction of reachability checks, one per benchmark.
///
/// afriat: one benchmark at the critical efficiency e*, weak when e*-GARP
///   holds and strict otherwise.
/// hm: one weak benchmark at e = 1 per minimum removal set, on the retained
///   observations.
/// varian: when GARP holds, weak reachability at e = 1. Otherwise one strict
///   benchmark per distinct efficiency vector of an optimal order; the
///   infimum is then approached but not attained, so the limiting relation
///   is the strict one.
class RobustPreference {
 public:
  struct Benchmark {
    PurchaseDataset data;
    EfficiencyVector efficiency;
    ReachMode mode;
  };

  RobustPreference(const PurchaseDataset& dataset, LossKind loss, const Limits& limits = {});

  LossKind loss() const { return loss_; }
  const std::vector<Benchmark>& benchmarks() const { return benchmarks_; }

  /// a is robustly preferred to b.
  bool operator()(const Bundle& a, const Bundle& b) const;
  RobustQueryResult query(const Bundle& a, const Bundle& b) const;

 private:
  LossKind loss_;
  std::size_t goods_;
  std::vector<Benchmark> benchmarks_;
};

bool robust_pref_afriat(const PurchaseDataset& dataset, const Bundle& a, const Bundle& b);
bool robust_pref_hm(const PurchaseDataset& dataset, const Bundle& a, const Bundle& b,
                    const Limits& limits = {});
bool robust_pref_varian(const PurchaseDataset& dataset, const Bundle& a, const Bundle& b,
                        Aggregator agg = Aggregator::mean_shortfall, const Limits& limits = {});

/// Lower median along one good: the ceil(T/2)-th bundle in ascending order
/// of that good, ties broken by observation order.
Bundle median_bundle(const PurchaseDataset& dataset, std::size_t good);

/// `base` with `good` scaled by (1 - reduction) and every other good by (1 + k).
Bundle counterfactual_bundle(const Bundle& base, std::size_t good, const Rational& reduction,
                             const Rational& k);

struct CompensationResult {
  /// nullopt means no k in [0, cap] qualifies.
  std::optional<Rational> k_w;
  std::optional<Rational> k_s;
  Rational cap;
};

/// Robust relations between the median bundle and its counterfactual at one k.
struct CompensationPoint {
  Rational k;
  /// median R counterfactual(k)
  bool forward = false;
  /// counterfactual(k) R median
  bool backward = false;
};

/// Evaluates the relations at every k where some comparison involving the
/// counterfactual bundle can flip, and at the midpoint of each interval in
/// between. The relations are constant on each open interval, so this scan
/// is exact.
std::vector<CompensationPoint> compensation_scan(const RobustPreference& relation,
                                                 const Bundle& median, std::size_t good,
                                                 const Rational& reduction, const Rational& cap);

/// k_w = inf{k : not median R x(k)}, k_s = inf{k : x(k) R median}.
CompensationResult compensation_levels(const PurchaseDataset& dataset, LossKind loss,
                                       std::size_t good, const Rational& reduction = Rational(1, 4),
                                       const Rational& cap = Rational(1), const Limits& limits = {});
CompensationResult compensation_levels(const RobustPreference& relation, const Bundle& median,
                                       std::size_t good, const Rational& reduction,
                                       const Rational& cap);

enum class Sharpness { first_sharper, second_sharper, equal, incomparable };

std::string to_string(Sharpness s);

/// Containment of the [k_w, k_s] intervals; a missing level counts as cap.
Sharpness sharpness_compare(const CompensationResult& first, const CompensationResult& second);

}  // namespace revpref
