#include "revpref/report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <thread>

#include "revpref/afriat.hpp"
#include "revpref/class_tests.hpp"
#include "revpref/indices.hpp"

namespace revpref {

using nlohmann::json;

json rational_json(const Rational& value) {
  return json{{"exact", format_fraction(value)}, {"decimal", to_double(value)}};
}

namespace {

template <typename F>
void guarded(IndexReport& report, const char* index, F&& compute) {
  try {
    compute();
  } catch (const EnumerationCapExceeded& e) {
    report.notes.push_back({"cap_exceeded:" + e.cap_name(), index, e.what()});
  }
}

}  // namespace

IndexReport compute_index_report(const PurchaseDataset& dataset, std::string dataset_id,
                                 const IndexSelection& which, const Limits& limits) {
  IndexReport r;
  r.dataset_id = std::move(dataset_id);
  r.observations = dataset.size();
  r.goods = dataset.goods();
  r.garp = check_garp(dataset).satisfied;
  r.cycle_class = classify_cycles(dataset);
  r.homothetic = check_homothetic(dataset);
  if (which.afriat) r.afriat = afriat_index(dataset);
  if (which.varian) {
    guarded(r, "varian", [&] { r.varian = varian_index(dataset, Aggregator::mean_shortfall, limits); });
  }
  if (which.houtman_maks) {
    guarded(r, "houtman_maks", [&] { r.houtman_maks = houtman_maks_index(dataset, limits); });
  }
  if (which.swaps) {
    guarded(r, "swaps", [&] { r.swaps = swaps_index(dataset, limits); });
  }
  return r;
}

json to_json(const IndexReport& r) {
  json j{{"dataset_id", r.dataset_id},
         {"T", r.observations},
         {"L", r.goods},
         {"garp", r.garp},
         {"cycle_class", to_string(r.cycle_class)},
         {"homothetic", r.homothetic}};
  j["afriat"] = r.afriat ? rational_json(*r.afriat) : json(nullptr);
  j["varian"] = r.varian ? rational_json(*r.varian) : json(nullptr);
  j["houtman_maks"] = r.houtman_maks ? json(*r.houtman_maks) : json(nullptr);
  j["swaps"] = r.swaps ? rational_json(*r.swaps) : json(nullptr);
  j["notes"] = json::array();
  for (const auto& note : r.notes) {
    j["notes"].push_back({{"code", note.code}, {"index", note.index}, {"message", note.message}});
  }
  return j;
}

json to_json(const CycleWitness& w) {
  json nodes = json::array();
  for (std::size_t t : w.nodes) nodes.push_back(t + 1);
  return json{{"nodes", nodes}, {"strict_flags", w.strict_flags}};
}

json to_json(const RobustQueryResult& r) {
  return json{{"forward", r.forward}, {"backward", r.backward}, {"verdict", to_string(r.verdict)}};
}

json to_json(const CompensationResult& r) {
  auto level = [&](const std::optional<Rational>& k) {
    json j = k ? rational_json(*k) : json{{"exact", nullptr}, {"decimal", nullptr}};
    j["over_cap"] = !k.has_value();
    return j;
  };
  return json{{"k_w", level(r.k_w)}, {"k_s", level(r.k_s)}, {"cap", rational_json(r.cap)}};
}

// ---------------------------------------------------------------------------
// Spearman

namespace {

std::vector<Rational> average_ranks(const std::vector<Rational>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<Rational> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) share the mean 1-based rank.
    const Rational mean = Rational(static_cast<long>(i + j + 2)) / 2;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

std::optional<double> spearman(const std::vector<Rational>& x, const std::vector<Rational>& y) {
  if (x.size() != y.size()) throw PreconditionError("spearman: length mismatch");
  if (x.size() < 2) return std::nullopt;
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  if (rx == ry) return 1.0;

  const Rational n = static_cast<long>(x.size());
  Rational mean_x = 0, mean_y = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    mean_x += rx[i];
    mean_y += ry[i];
  }
  mean_x /= n;
  mean_y /= n;
  Rational sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const Rational dx = rx[i] - mean_x, dy = ry[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) return std::nullopt;
  return to_double(sxy) / std::sqrt(to_double(sxx) * to_double(syy));
}

// ---------------------------------------------------------------------------
// Panels

PanelSummary analyze_panel(const std::string& directory, const IndexSelection& which,
                           std::size_t workers, const Limits& limits) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(directory)) throw std::runtime_error("not a directory: '" + directory + "'");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  struct Outcome {
    std::optional<IndexReport> report;
    std::string error;
  };
  std::vector<Outcome> outcomes(files.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      try {
        outcomes[i].report = compute_index_report(read_csv_file(files[i].string()),
                                                  files[i].filename().string(), which, limits);
      } catch (const std::exception& e) {
        outcomes[i].error = e.what();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(files.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  PanelSummary summary;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (outcomes[i].report) {
      summary.reports.push_back(std::move(*outcomes[i].report));
    } else {
      summary.failures.push_back({files[i].filename().string(), outcomes[i].error});
    }
  }

  std::vector<std::pair<std::string, std::function<std::optional<Rational>(const IndexReport&)>>>
      columns;
  if (which.afriat) columns.emplace_back("afriat", [](const IndexReport& r) { return r.afriat; });
  if (which.varian) columns.emplace_back("varian", [](const IndexReport& r) { return r.varian; });
  if (which.houtman_maks) {
    columns.emplace_back("houtman_maks", [](const IndexReport& r) -> std::optional<Rational> {
      if (!r.houtman_maks) return std::nullopt;
      return Rational(static_cast<long>(*r.houtman_maks));
    });
  }
  if (which.swaps) columns.emplace_back("swaps", [](const IndexReport& r) { return r.swaps; });

  std::vector<std::vector<Rational>> data(columns.size());
  for (const auto& report : summary.reports) {
    std::vector<Rational> row;
    for (const auto& column : columns) {
      auto v = column.second(report);
      if (!v) break;
      row.push_back(std::move(*v));
    }
    if (row.size() != columns.size()) continue;
    for (std::size_t c = 0; c < columns.size(); ++c) data[c].push_back(std::move(row[c]));
    ++summary.correlated_datasets;
  }
  for (const auto& column : columns) summary.indices.push_back(column.first);
  summary.spearman.assign(columns.size(), std::vector<std::optional<double>>(columns.size()));
  for (std::size_t a = 0; a < columns.size(); ++a) {
    summary.spearman[a][a] = 1.0;
    for (std::size_t b = a + 1; b < columns.size(); ++b) {
      summary.spearman[a][b] = summary.spearman[b][a] = spearman(data[a], data[b]);
    }
  }
  return summary;
}

json to_json(const PanelSummary& s) {
  json reports = json::array();
  for (const auto& r : s.reports) reports.push_back(to_json(r));
  json failures = json::array();
  for (const auto& f : s.failures) failures.push_back({{"dataset_id", f.dataset_id}, {"error", f.message}});
  json matrix = json::array();
  for (const auto& row : s.spearman) {
    json out = json::array();
    for (const auto& v : row) out.push_back(v ? json(*v) : json(nullptr));
    matrix.push_back(out);
  }
  return json{{"reports", reports},
              {"failures", failures},
              {"spearman", {{"indices", s.indices}, {"matrix", matrix}, {"datasets", s.correlated_datasets}}}};
}

}  // namespace revpref
