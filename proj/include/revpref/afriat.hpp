#pragma once

#include <vector>

#include "revpref/dataset.hpp"
#include "revpref/relations.hpp"

namespace revpref {

/// U(x) = min_k (constant_k + gradient_k . x) with strictly positive
/// gradients, so U is continuous, concave and strictly increasing.
class PiecewiseConcaveUtility {
 public:
  struct Piece {
    Rational constant;
    RationalVector gradient;
  };

  explicit PiecewiseConcaveUtility(std::vector<Piece> pieces);

  const std::vector<Piece>& pieces() const { return pieces_; }
  std::size_t goods() const { return pieces_.front().gradient.size(); }
  Rational operator()(const Bundle& x) const;
  Rational operator()(const RationalVector& x) const;

 private:
  std::vector<Piece> pieces_;
};

struct BudgetOptimum {
  Bundle argmax;
  Rational value;
};

/// Exact maximum of U over {x >= 0 : p.x <= m}, attained at a vertex.
BudgetOptimum maximize_on_budget(const PiecewiseConcaveUtility& u, const PriceVector& p,
                                 const Rational& m);

/// Builds U with U(q^t) >= U(x) whenever p^t.x <= e_t p^t.q^t, from Afriat
/// numbers assigned over the condensation of the R_e graph. Requires e-GARP
/// and checks the result on every relaxed budget before returning it.
PiecewiseConcaveUtility construct_utility(const PurchaseDataset& dataset, const EfficiencyVector& e);
PiecewiseConcaveUtility construct_utility(const PurchaseDataset& dataset,
                                          const Rational& e = Rational(1));

/// Largest breakpoint at which the strict relation is acyclic.
Rational afriat_estar(const PurchaseDataset& dataset);
Rational afriat_index(const PurchaseDataset& dataset);

/// 2^-40.
Rational default_loss_tolerance();

struct LossEstimate {
  /// Midpoint of the certified bracket.
  Rational value;
  /// The true loss lies in [value - radius, value + radius].
  Rational radius;
};

/// 1 - min_t e_t where e_t is the largest expenditure share at which q^t is
/// still U-optimal; per-observation bisection until the bracket is below
/// `tolerance`.
LossEstimate afriat_loss(const PiecewiseConcaveUtility& u, const PurchaseDataset& dataset,
                         const Rational& tolerance = default_loss_tolerance());

/// Moves bundles along their own budget lines, each by at most `delta` in
/// Euclidean norm, until GARP holds. Only possible when every revealed
/// preference cycle is weak.
PurchaseDataset perturb_to_garp(const PurchaseDataset& dataset, const Rational& delta);

/// Sum of p^{t_k} . (q^{t_k} - q^{t_{k+1}}) around the cycle.
Rational money_pump_cost(const PurchaseDataset& dataset, const CycleWitness& cycle);

}  // namespace revpref
