#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "revpref/dataset.hpp"

namespace revpref {

/// Dense square boolean matrix, row-major.
class BoolMatrix {
 public:
  BoolMatrix() = default;
  explicit BoolMatrix(std::size_t n) : n_(n), cells_(n * n, 0) {}

  std::size_t size() const { return n_; }
  bool operator()(std::size_t i, std::size_t j) const { return cells_[i * n_ + j] != 0; }
  void set(std::size_t i, std::size_t j, bool value = true) { cells_[i * n_ + j] = value ? 1 : 0; }

  friend bool operator==(const BoolMatrix&, const BoolMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> cells_;
};

/// Warshall closure.
BoolMatrix transitive_closure(BoolMatrix m);

/// True when the digraph has a directed cycle. Self-loops count.
bool has_cycle(const BoolMatrix& graph);

/// Strongly connected components, each sorted ascending; components are
/// listed in topological order of the condensation (sources first).
std::vector<std::vector<std::size_t>> strongly_connected_components(const BoolMatrix& graph);

/// Per-observation efficiency levels e_t in [0,1].
using EfficiencyVector = RationalVector;

/// Validates length and range; throws PreconditionError otherwise.
void validate_efficiency(const PurchaseDataset& dataset, const EfficiencyVector& e);
EfficiencyVector uniform_efficiency(const PurchaseDataset& dataset, const Rational& e);

/// weak(t,s): e_t p^t.q^t >= p^t.q^s; strict(t,s) with >.
struct RelationMatrix {
  BoolMatrix weak;
  BoolMatrix strict;
  EfficiencyVector efficiency;
};

RelationMatrix direct_relations(const PurchaseDataset& dataset, const EfficiencyVector& e);
RelationMatrix direct_relations(const PurchaseDataset& dataset, const Rational& e = Rational(1));

/// Cyclic chain t_1 -> ... -> t_K -> t_1 of weak relations. strict_flags[k]
/// refers to the link from nodes[k] to nodes[(k + 1) % K].
struct CycleWitness {
  std::vector<std::size_t> nodes;
  std::vector<bool> strict_flags;

  friend bool operator==(const CycleWitness&, const CycleWitness&) = default;
};

struct GarpResult {
  bool satisfied = true;
  std::optional<CycleWitness> witness;
};

/// Violations are strict links (t,s) with s R* t. The witness is built from
/// the first such link in row-major order and a shortest return path.
GarpResult check_garp(const PurchaseDataset& dataset);
GarpResult check_e_garp_witness(const PurchaseDataset& dataset, const EfficiencyVector& e);

bool check_sarp(const PurchaseDataset& dataset);
bool check_e_garp(const PurchaseDataset& dataset, const Rational& e);
bool check_e_garp(const PurchaseDataset& dataset, const EfficiencyVector& e);

enum class CycleClass { none, weak_only, has_strong };
std::string to_string(CycleClass c);

/// has_strong exactly when the strict relation P graph has a cycle.
CycleClass classify_cycles(const PurchaseDataset& dataset);

/// A cycle made only of strict links, if one exists.
std::optional<CycleWitness> find_strong_cycle(const PurchaseDataset& dataset);

/// Sorted distinct ratios p^t.q^s / p^t.q^t that lie in [0,1].
std::vector<Rational> breakpoints(const PurchaseDataset& dataset);

/// True when the P_e graph is acyclic.
bool is_e_acyclic(const PurchaseDataset& dataset, const Rational& e);

enum class ReachMode { weak, strict };

/// Reachability from a to b in the graph over observations plus the two
/// virtual bundles, with dominance edges between any nodes and revealed
/// preference edges (R_e or P_e) out of observations.
bool reach_with_virtual(const PurchaseDataset& dataset, const EfficiencyVector& e, ReachMode mode,
                        const Bundle& a, const Bundle& b);
bool reach_with_virtual(const PurchaseDataset& dataset, const Rational& e, ReachMode mode,
                        const Bundle& a, const Bundle& b);

}  // namespace revpref
