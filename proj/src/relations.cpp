#include "revpref/relations.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "revpref/errors.hpp"

namespace revpref {

BoolMatrix transitive_closure(BoolMatrix m) {
  const std::size_t n = m.size();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!m(i, k)) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (m(k, j)) m.set(i, j);
      }
    }
  }
  return m;
}

bool has_cycle(const BoolMatrix& graph) {
  const std::size_t n = graph.size();
  // Kahn's algorithm: a cycle exists iff some node never reaches in-degree 0.
  std::vector<std::size_t> indegree(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (graph(i, j)) ++indegree[j];
    }
  }
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  std::size_t removed = 0;
  while (!ready.empty()) {
    const std::size_t i = ready.back();
    ready.pop_back();
    ++removed;
    for (std::size_t j = 0; j < n; ++j) {
      if (graph(i, j) && --indegree[j] == 0) ready.push_back(j);
    }
  }
  return removed != n;
}

std::vector<std::vector<std::size_t>> strongly_connected_components(const BoolMatrix& graph) {
  // Tarjan emits components in reverse topological order.
  const std::size_t n = graph.size();
  constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, unvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> components;
  std::size_t counter = 0;

  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w = 0; w < n; ++w) {
      if (!graph(v, w)) continue;
      if (index[w] == unvisited) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::size_t> component;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        component.push_back(w);
      } while (w != v);
      std::sort(component.begin(), component.end());
      components.push_back(std::move(component));
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (index[v] == unvisited) visit(v);
  }
  std::reverse(components.begin(), components.end());
  return components;
}

void validate_efficiency(const PurchaseDataset& dataset, const EfficiencyVector& e) {
  if (e.size() != dataset.size()) {
    throw PreconditionError("efficiency vector has length " + std::to_string(e.size()) +
                            ", expected " + std::to_string(dataset.size()));
  }
  for (const auto& v : e) {
    if (v < 0 || v > 1) throw PreconditionError("efficiency levels must lie in [0,1]");
  }
}

EfficiencyVector uniform_efficiency(const PurchaseDataset& dataset, const Rational& e) {
  return EfficiencyVector(dataset.size(), e);
}

RelationMatrix direct_relations(const PurchaseDataset& dataset, const EfficiencyVector& e) {
  validate_efficiency(dataset, e);
  const std::size_t n = dataset.size();
  RelationMatrix out{BoolMatrix(n), BoolMatrix(n), e};
  for (std::size_t t = 0; t < n; ++t) {
    const Rational budget = e[t] * dataset.expenditure(t);
    for (std::size_t s = 0; s < n; ++s) {
      const Rational cost = dataset.cost(t, s);
      out.weak.set(t, s, budget >= cost);
      out.strict.set(t, s, budget > cost);
    }
  }
  return out;
}

RelationMatrix direct_relations(const PurchaseDataset& dataset, const Rational& e) {
  return direct_relations(dataset, uniform_efficiency(dataset, e));
}

namespace {

// Shortest path from `from` to `to` over edges of `graph`; includes both ends.
std::vector<std::size_t> shortest_path(const BoolMatrix& graph, std::size_t from, std::size_t to) {
  const std::size_t n = graph.size();
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> parent(n, none);
  std::deque<std::size_t> queue{from};
  parent[from] = from;
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    if (v == to) break;
    for (std::size_t w = 0; w < n; ++w) {
      if (graph(v, w) && parent[w] == none) {
        parent[w] = v;
        queue.push_back(w);
      }
    }
  }
  std::vector<std::size_t> path;
  if (parent[to] == none) return path;
  for (std::size_t v = to; v != from; v = parent[v]) path.push_back(v);
  path.push_back(from);
  std::reverse(path.begin(), path.end());
  return path;
}

CycleWitness make_witness(const RelationMatrix& rel, std::vector<std::size_t> nodes) {
  CycleWitness w;
  w.strict_flags.reserve(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    w.strict_flags.push_back(rel.strict(nodes[k], nodes[(k + 1) % nodes.size()]));
  }
  w.nodes = std::move(nodes);
  return w;
}

}  // namespace

GarpResult check_e_garp_witness(const PurchaseDataset& dataset, const EfficiencyVector& e) {
  const RelationMatrix rel = direct_relations(dataset, e);
  const BoolMatrix closure = transitive_closure(rel.weak);
  const std::size_t n = dataset.size();
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t s = 0; s < n; ++s) {
      if (!rel.strict(t, s) || !closure(s, t)) continue;
      // Cycle t -> s -> ... -> t.
      std::vector<std::size_t> back = shortest_path(rel.weak, s, t);
      back.pop_back();
      std::vector<std::size_t> nodes{t};
      nodes.insert(nodes.end(), back.begin(), back.end());
      return {false, make_witness(rel, std::move(nodes))};
    }
  }
  return {true, std::nullopt};
}

GarpResult check_garp(const PurchaseDataset& dataset) {
  return check_e_garp_witness(dataset, uniform_efficiency(dataset, 1));
}

bool check_e_garp(const PurchaseDataset& dataset, const EfficiencyVector& e) {
  return check_e_garp_witness(dataset, e).satisfied;
}

bool check_e_garp(const PurchaseDataset& dataset, const Rational& e) {
  return check_e_garp(dataset, uniform_efficiency(dataset, e));
}

bool check_sarp(const PurchaseDataset& dataset) {
  const RelationMatrix rel = direct_relations(dataset);
  const BoolMatrix closure = transitive_closure(rel.weak);
  const std::size_t n = dataset.size();
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t s = t + 1; s < n; ++s) {
      if (closure(t, s) && closure(s, t) && dataset.bundle(t) != dataset.bundle(s)) return false;
    }
  }
  return true;
}

std::string to_string(CycleClass c) {
  switch (c) {
    case CycleClass::none: return "none";
    case CycleClass::weak_only: return "weak_only";
    case CycleClass::has_strong: return "has_strong";
  }
  return "unknown";
}

CycleClass classify_cycles(const PurchaseDataset& dataset) {
  if (check_garp(dataset).satisfied) return CycleClass::none;
  return has_cycle(direct_relations(dataset).strict) ? CycleClass::has_strong
                                                     : CycleClass::weak_only;
}

std::optional<CycleWitness> find_strong_cycle(const PurchaseDataset& dataset) {
  const RelationMatrix rel = direct_relations(dataset);
  for (const auto& component : strongly_connected_components(rel.strict)) {
    if (component.size() < 2) continue;
    // Shortest cycle through the component's first node.
    const std::size_t start = component.front();
    for (std::size_t s : component) {
      if (s == start || !rel.strict(start, s)) continue;
      std::vector<std::size_t> back = shortest_path(rel.strict, s, start);
      if (back.empty()) continue;
      back.pop_back();
      std::vector<std::size_t> nodes{start};
      nodes.insert(nodes.end(), back.begin(), back.end());
      return make_witness(rel, std::move(nodes));
    }
  }
  return std::nullopt;
}

std::vector<Rational> breakpoints(const PurchaseDataset& dataset) {
  std::vector<Rational> out;
  for (std::size_t t = 0; t < dataset.size(); ++t) {
    for (std::size_t s = 0; s < dataset.size(); ++s) {
      Rational r = dataset.ratio(t, s);
      if (r <= 1) out.push_back(std::move(r));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool is_e_acyclic(const PurchaseDataset& dataset, const Rational& e) {
  return !has_cycle(direct_relations(dataset, e).strict);
}

bool reach_with_virtual(const PurchaseDataset& dataset, const EfficiencyVector& e, ReachMode mode,
                        const Bundle& a, const Bundle& b) {
  validate_efficiency(dataset, e);
  if (a.size() != dataset.goods() || b.size() != dataset.goods()) {
    throw PreconditionError("query bundles must have " + std::to_string(dataset.goods()) +
                            " goods");
  }
  const std::size_t n = dataset.size();
  const std::size_t source = n, target = n + 1;
  auto bundle_of = [&](std::size_t v) -> const Bundle& {
    return v == source ? a : v == target ? b : dataset.bundle(v);
  };
  auto edge = [&](std::size_t x, std::size_t y) {
    if (dominates(bundle_of(x), bundle_of(y))) return true;
    if (x >= n) return false;
    const Rational budget = e[x] * dataset.expenditure(x);
    const Rational cost = dataset.price(x).cost(bundle_of(y));
    return mode == ReachMode::weak ? budget >= cost : budget > cost;
  };

  std::vector<bool> seen(n + 2, false);
  std::vector<std::size_t> stack{source};
  seen[source] = true;
  while (!stack.empty()) {
    const std::size_t x = stack.back();
    stack.pop_back();
    if (x == target) return true;
    for (std::size_t y = 0; y < n + 2; ++y) {
      if (!seen[y] && y != source && edge(x, y)) {
        seen[y] = true;
        stack.push_back(y);
      }
    }
  }
  return false;
}

bool reach_with_virtual(const PurchaseDataset& dataset, const Rational& e, ReachMode mode,
                        const Bundle& a, const Bundle& b) {
  return reach_with_virtual(dataset, uniform_efficiency(dataset, e), mode, a, b);
}

}  // namespace revpref
