#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "revpref/dataset.hpp"
#include "revpref/errors.hpp"
#include "revpref/relations.hpp"
#include "revpref/robust.hpp"

namespace revpref {

inline constexpr int kSchemaVersion = 1;

/// {"exact": "a/b", "decimal": 0.25}
nlohmann::json rational_json(const Rational& value);

struct ReportNote {
  std::string code;
  std::string index;
  std::string message;
};

struct IndexSelection {
  bool afriat = true;
  bool varian = true;
  bool houtman_maks = true;
  bool swaps = true;
};

struct IndexReport {
  std::string dataset_id;
  std::size_t observations = 0;
  std::size_t goods = 0;
  bool garp = true;
  CycleClass cycle_class = CycleClass::none;
  std::optional<Rational> afriat;
  std::optional<Rational> varian;
  std::optional<std::size_t> houtman_maks;
  std::optional<Rational> swaps;
  bool homothetic = true;
  /// Indices skipped because a search budget ran out.
  std::vector<ReportNote> notes;
};

IndexReport compute_index_report(const PurchaseDataset& dataset, std::string dataset_id,
                                 const IndexSelection& which = {}, const Limits& limits = {});

nlohmann::json to_json(const IndexReport& report);
nlohmann::json to_json(const CycleWitness& witness);
nlohmann::json to_json(const RobustQueryResult& result);
nlohmann::json to_json(const CompensationResult& result);

/// Spearman correlation with average ranks for ties. Identical rank vectors
/// give 1; otherwise nullopt when either side has no variation or fewer
/// than two points.
std::optional<double> spearman(const std::vector<Rational>& x, const std::vector<Rational>& y);

struct PanelFailure {
  std::string dataset_id;
  std::string message;
};

struct PanelSummary {
  std::vector<IndexReport> reports;
  std::vector<PanelFailure> failures;
  /// Index names in matrix order.
  std::vector<std::string> indices;
  /// Pairwise Spearman correlations over datasets where all indices exist.
  std::vector<std::vector<std::optional<double>>> spearman;
  std::size_t correlated_datasets = 0;
};

/// Reports for every *.csv file directly inside `directory`, in file name
/// order. Files are processed on `workers` threads; a failing file is
/// recorded and the rest continue.
PanelSummary analyze_panel(const std::string& directory, const IndexSelection& which,
                           std::size_t workers, const Limits& limits = {});

nlohmann::json to_json(const PanelSummary& summary);

}  // namespace revpref
