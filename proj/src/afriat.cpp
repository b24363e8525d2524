#include "revpref/afriat.hpp"

#include <algorithm>
#include <numeric>

#include "revpref/errors.hpp"
#include "revpref/exact_lp.hpp"

namespace revpref {

// ---------------------------------------------------------------------------
// Utility representation

PiecewiseConcaveUtility::PiecewiseConcaveUtility(std::vector<Piece> pieces)
    : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw PreconditionError("utility needs at least one piece");
  const std::size_t goods = pieces_.front().gradient.size();
  if (goods == 0) throw PreconditionError("utility gradients must be nonempty");
  for (const auto& piece : pieces_) {
    if (piece.gradient.size() != goods) throw PreconditionError("utility pieces disagree on goods");
    for (const auto& g : piece.gradient) {
      if (g <= 0) throw PreconditionError("utility gradients must be strictly positive");
    }
  }
}

Rational PiecewiseConcaveUtility::operator()(const RationalVector& x) const {
  Rational best = pieces_.front().constant + dot(pieces_.front().gradient, x);
  for (std::size_t k = 1; k < pieces_.size(); ++k) {
    best = std::min(best, pieces_[k].constant + dot(pieces_[k].gradient, x));
  }
  return best;
}

Rational PiecewiseConcaveUtility::operator()(const Bundle& x) const { return (*this)(x.values()); }

BudgetOptimum maximize_on_budget(const PiecewiseConcaveUtility& u, const PriceVector& p,
                                 const Rational& m) {
  if (m < 0) throw PreconditionError("budget must be nonnegative");
  const std::size_t goods = u.goods();
  if (p.size() != goods) throw PreconditionError("price vector does not match utility");

  // Variables (x_1..x_L, w) with z = w + c_min, so every right-hand side is
  // nonnegative and the origin is feasible.
  Rational c_min = u.pieces().front().constant;
  for (const auto& piece : u.pieces()) c_min = std::min(c_min, piece.constant);

  std::vector<RationalVector> a;
  RationalVector b;
  for (const auto& piece : u.pieces()) {
    RationalVector row(goods + 1);
    for (std::size_t l = 0; l < goods; ++l) row[l] = -piece.gradient[l];
    row[goods] = 1;
    a.push_back(std::move(row));
    b.push_back(piece.constant - c_min);
  }
  RationalVector budget_row(goods + 1);
  for (std::size_t l = 0; l < goods; ++l) budget_row[l] = p[l];
  a.push_back(std::move(budget_row));
  b.push_back(m);

  RationalVector c(goods + 1);
  c[goods] = 1;
  LpSolution sol = maximize_lp(a, b, c);
  sol.x.pop_back();
  Bundle argmax(std::move(sol.x));
  // Recompute from the bundle so the value is exactly U(argmax).
  Rational value = u(argmax);
  return {std::move(argmax), std::move(value)};
}

// ---------------------------------------------------------------------------
// Afriat numbers

PiecewiseConcaveUtility construct_utility(const PurchaseDataset& dataset, const EfficiencyVector& e) {
  if (!check_e_garp(dataset, e)) {
    throw PreconditionError("construct_utility requires the dataset to satisfy e-GARP");
  }
  const std::size_t n = dataset.size();
  // slack(s, t) = p^s.q^t - e_s p^s.q^s; negative exactly when s P_e t.
  auto slack = [&](std::size_t s, std::size_t t) {
    return dataset.cost(s, t) - e[s] * dataset.expenditure(s);
  };

  BoolMatrix graph(n);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      if (s != t && slack(s, t) <= 0) graph.set(s, t);
    }
  }

  // Components arrive sources first: nothing processed earlier is reachable
  // from the current component, so every slack(t, s) towards processed
  // observations is positive and lambda_t can absorb any utility gap.
  RationalVector level(n), lambda(n);
  std::vector<std::size_t> processed;
  for (const auto& component : strongly_connected_components(graph)) {
    Rational value = 0;
    bool first = true;
    for (std::size_t s : processed) {
      for (std::size_t t : component) {
        Rational bound = level[s] + lambda[s] * slack(s, t);
        if (first || bound < value) value = std::move(bound);
        first = false;
      }
    }
    for (std::size_t t : component) {
      level[t] = value;
      Rational lam = 1;
      for (std::size_t s : processed) {
        const Rational gap = level[s] - value;
        if (gap <= 0) continue;
        const Rational sl = slack(t, s);
        if (sl <= 0) throw std::logic_error("construct_utility: unexpected ordering");
        lam = std::max(lam, gap / sl);
      }
      lambda[t] = lam;
    }
    processed.insert(processed.end(), component.begin(), component.end());
  }

  std::vector<PiecewiseConcaveUtility::Piece> pieces;
  pieces.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    RationalVector gradient(dataset.goods());
    for (std::size_t l = 0; l < dataset.goods(); ++l) gradient[l] = lambda[t] * dataset.price(t)[l];
    pieces.push_back({level[t] - lambda[t] * e[t] * dataset.expenditure(t), std::move(gradient)});
  }
  PiecewiseConcaveUtility u(std::move(pieces));

  for (std::size_t t = 0; t < n; ++t) {
    const auto best = maximize_on_budget(u, dataset.price(t), e[t] * dataset.expenditure(t));
    if (best.value > u(dataset.bundle(t))) {
      throw std::logic_error("construct_utility: observation " + std::to_string(t + 1) +
                             " is not optimal on its relaxed budget");
    }
  }
  return u;
}

PiecewiseConcaveUtility construct_utility(const PurchaseDataset& dataset, const Rational& e) {
  return construct_utility(dataset, uniform_efficiency(dataset, e));
}

// ---------------------------------------------------------------------------
// Indices and losses

Rational afriat_estar(const PurchaseDataset& dataset) {
  const auto grid = breakpoints(dataset);
  for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
    if (is_e_acyclic(dataset, *it)) return *it;
  }
  return 0;
}

Rational afriat_index(const PurchaseDataset& dataset) { return 1 - afriat_estar(dataset); }

Rational default_loss_tolerance() { return Rational(1) / Rational(Integer(1) << 40); }

LossEstimate afriat_loss(const PiecewiseConcaveUtility& u, const PurchaseDataset& dataset,
                         const Rational& tolerance) {
  if (tolerance <= 0) throw PreconditionError("tolerance must be positive");
  if (u.goods() != dataset.goods()) throw PreconditionError("utility does not match dataset");

  Rational min_lo = 1, min_hi = 1;
  for (std::size_t t = 0; t < dataset.size(); ++t) {
    const Rational chosen = u(dataset.bundle(t));
    const Rational m = dataset.expenditure(t);
    auto optimal_at = [&](const Rational& e) {
      return maximize_on_budget(u, dataset.price(t), e * m).value <= chosen;
    };
    // U is increasing, so the predicate holds at 0 and is monotone in e.
    Rational lo = 0, hi = 1;
    if (optimal_at(hi)) {
      lo = hi;
    } else {
      while (hi - lo > tolerance) {
        const Rational mid = (lo + hi) / 2;
        (optimal_at(mid) ? lo : hi) = mid;
      }
    }
    min_lo = std::min(min_lo, lo);
    min_hi = std::min(min_hi, hi);
  }
  // Loss lies in [1 - min_hi, 1 - min_lo].
  return {1 - (min_lo + min_hi) / 2, (min_hi - min_lo) / 2};
}

// ---------------------------------------------------------------------------
// Perturbation

namespace {

Rational squared_distance(const Bundle& a, const Bundle& b) {
  Rational sum = 0;
  for (std::size_t l = 0; l < a.size(); ++l) {
    const Rational d = a[l] - b[l];
    sum += d * d;
  }
  return sum;
}

// Returns GARP-consistent bundles for the observations in `members`
// (ascending), each within delta of the original.
std::vector<Bundle> perturb_subset(const PurchaseDataset& dataset,
                                   const std::vector<std::size_t>& members,
                                   const Rational& delta_sq) {
  const PurchaseDataset sub = dataset.subset(members);
  std::vector<Bundle> bundles;
  for (std::size_t t : members) bundles.push_back(dataset.bundle(t));
  if (check_garp(sub).satisfied) return bundles;

  // Pick an observation no other one strictly reveals preferred to.
  std::size_t pick = members.size();
  for (std::size_t i = 0; i < members.size() && pick == members.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < members.size() && !dominated; ++j) {
      dominated = i != j && sub.expenditure(j) > sub.cost(j, i);
    }
    if (!dominated) pick = i;
  }
  if (pick == members.size()) throw PreconditionError("perturb_to_garp: strong cycle present");

  std::vector<std::size_t> rest = members;
  rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pick));
  std::vector<Bundle> rest_bundles = perturb_subset(dataset, rest, delta_sq);
  const PurchaseDataset rest_fixed = dataset.subset(rest).with_bundles(rest_bundles);

  const std::size_t s = members[pick];
  const PiecewiseConcaveUtility u = construct_utility(rest_fixed, Rational(1));
  const Bundle target = maximize_on_budget(u, dataset.price(s), dataset.expenditure(s)).argmax;
  const Bundle& original = dataset.bundle(s);

  Rational step = Rational(1, 2);
  for (int k = 1; k <= 64; ++k, step /= 2) {
    // alpha = 1 - step
    RationalVector mixed(original.size());
    for (std::size_t l = 0; l < original.size(); ++l) {
      mixed[l] = original[l] + step * (target[l] - original[l]);
    }
    Bundle candidate(std::move(mixed));
    if (squared_distance(candidate, original) > delta_sq) continue;
    std::vector<Bundle> trial = rest_bundles;
    trial.insert(trial.begin() + static_cast<std::ptrdiff_t>(pick), candidate);
    if (check_garp(sub.with_bundles(trial)).satisfied) return trial;
  }
  throw std::runtime_error("perturb_to_garp: no admissible mixing weight found");
}

}  // namespace

PurchaseDataset perturb_to_garp(const PurchaseDataset& dataset, const Rational& delta) {
  if (delta <= 0) throw PreconditionError("delta must be positive");
  if (classify_cycles(dataset) == CycleClass::has_strong) {
    throw PreconditionError("perturb_to_garp: dataset has a strong revealed preference cycle");
  }
  std::vector<std::size_t> all(dataset.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return dataset.with_bundles(perturb_subset(dataset, all, delta * delta));
}

Rational money_pump_cost(const PurchaseDataset& dataset, const CycleWitness& cycle) {
  const auto& nodes = cycle.nodes;
  if (nodes.empty()) throw PreconditionError("money_pump_cost: empty cycle");
  for (std::size_t t : nodes) {
    if (t >= dataset.size()) throw PreconditionError("money_pump_cost: index out of range");
  }
  Rational total = 0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const std::size_t t = nodes[k], next = nodes[(k + 1) % nodes.size()];
    const Rational gain = dataset.expenditure(t) - dataset.cost(t, next);
    if (gain < 0) {
      throw PreconditionError("money_pump_cost: link " + std::to_string(t + 1) + " -> " +
                              std::to_string(next + 1) + " is not a revealed preference");
    }
    total += gain;
  }
  return total;
}

}  // namespace revpref
