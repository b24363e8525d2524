#include "revpref/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "revpref/afriat.hpp"
#include "revpref/class_tests.hpp"
#include "revpref/dataset.hpp"
#include "revpref/errors.hpp"
#include "revpref/indices.hpp"
#include "revpref/relations.hpp"
#include "revpref/report.hpp"
#include "revpref/robust.hpp"

namespace revpref {

using nlohmann::json;

namespace {

json envelope(const std::string& command) {
  return json{{"schema_version", kSchemaVersion}, {"command", command}};
}

json bundle_json(const Bundle& b) {
  json out = json::array();
  for (const auto& v : b.values()) out.push_back(rational_json(v));
  return out;
}

Bundle parse_bundle(const std::string& text, std::size_t goods) {
  RationalVector values = parse_rational_list(text);
  if (values.size() != goods) {
    throw PreconditionError("bundle '" + text + "' has " + std::to_string(values.size()) +
                            " entries, dataset has " + std::to_string(goods) + " goods");
  }
  return Bundle(std::move(values));
}

RationalInterval parse_interval(const std::string& text) {
  const RationalVector v = parse_rational_list(text);
  if (v.size() == 1) return {v[0], v[0]};
  if (v.size() != 2) throw std::invalid_argument("interval '" + text + "' must be 'lo,hi'");
  return {v[0], v[1]};
}

IndexSelection parse_selection(const std::string& text) {
  IndexSelection which{false, false, false, false};
  std::stringstream ss(text);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (name == "all") {
      which = IndexSelection{};
    } else if (name == "afriat") {
      which.afriat = true;
    } else if (name == "varian") {
      which.varian = true;
    } else if (name == "hm" || name == "houtman-maks") {
      which.houtman_maks = true;
    } else if (name == "swaps") {
      which.swaps = true;
    } else {
      throw std::invalid_argument("unknown index '" + name + "'");
    }
  }
  return which;
}

std::string csv_value(const std::optional<Rational>& v) { return v ? format_rational(*v) : ""; }

void write_report_csv_header(std::ostream& out) {
  out << "dataset_id,T,L,garp,cycle_class,homothetic,afriat,varian,houtman_maks,swaps,notes\n";
}

void write_report_csv_row(std::ostream& out, const IndexReport& r) {
  out << r.dataset_id << ',' << r.observations << ',' << r.goods << ','
      << (r.garp ? "true" : "false") << ',' << to_string(r.cycle_class) << ','
      << (r.homothetic ? "true" : "false") << ',' << csv_value(r.afriat) << ','
      << csv_value(r.varian) << ','
      << (r.houtman_maks ? std::to_string(*r.houtman_maks) : std::string()) << ','
      << csv_value(r.swaps) << ',';
  for (std::size_t i = 0; i < r.notes.size(); ++i) out << (i ? ";" : "") << r.notes[i].code;
  out << '\n';
}

struct CheckOptions {
  std::string test;
  std::string file;
  std::string efficiency;
  std::string probabilities;
};

int run_check(const CheckOptions& opt, std::ostream& out) {
  const PurchaseDataset data = read_csv_file(opt.file);
  json j = envelope("check");
  j["test"] = opt.test;
  j["dataset"] = opt.file;
  bool passed = false;
  if (opt.test == "garp") {
    const GarpResult r = check_garp(data);
    passed = r.satisfied;
    j["cycle_class"] = to_string(classify_cycles(data));
    if (r.witness) {
      j["witness"] = to_json(*r.witness);
      j["money_pump_cost"] = rational_json(money_pump_cost(data, *r.witness));
    }
  } else if (opt.test == "sarp") {
    passed = check_sarp(data);
  } else if (opt.test == "egarp") {
    if (opt.efficiency.empty()) throw std::invalid_argument("egarp needs --efficiency");
    RationalVector e = parse_rational_list(opt.efficiency);
    if (e.size() == 1) e = uniform_efficiency(data, e.front());
    const GarpResult r = check_e_garp_witness(data, e);
    passed = r.satisfied;
    json ej = json::array();
    for (const auto& v : e) ej.push_back(rational_json(v));
    j["efficiency"] = ej;
    if (r.witness) j["witness"] = to_json(*r.witness);
  } else if (opt.test == "homothetic") {
    const HomotheticResult r = check_homothetic_witness(data);
    passed = r.satisfied;
    if (r.witness) {
      j["witness"] = to_json(*r.witness);
      j["cycle_product"] = rational_json(cycle_ratio_product(data, r.witness->nodes));
    }
  } else if (opt.test == "oceu") {
    if (opt.probabilities.empty()) throw std::invalid_argument("oceu needs --probabilities");
    const ProbabilityVector pi(parse_rational_list(opt.probabilities));
    passed = check_oceu(data, pi);
  } else {
    throw std::invalid_argument("unknown test '" + opt.test + "'");
  }
  j["passed"] = passed;
  out << j.dump(2) << '\n';
  return passed ? kExitPass : kExitFail;
}

int run_index(const std::string& which, const std::string& file, const std::string& format,
              const Limits& limits, std::ostream& out) {
  const IndexSelection selection = parse_selection(which);
  const PurchaseDataset data = read_csv_file(file);
  const IndexReport report =
      compute_index_report(data, std::filesystem::path(file).filename().string(), selection, limits);
  if (format == "csv") {
    write_report_csv_header(out);
    write_report_csv_row(out, report);
  } else {
    json j = envelope("index");
    j["report"] = to_json(report);
    out << j.dump(2) << '\n';
  }
  return kExitPass;
}

int run_robust(const std::string& file, const std::string& loss, const std::string& a_text,
               const std::string& b_text, const Limits& limits, std::ostream& out) {
  const PurchaseDataset data = read_csv_file(file);
  const Bundle a = parse_bundle(a_text, data.goods());
  const Bundle b = parse_bundle(b_text, data.goods());
  const RobustPreference relation(data, parse_loss_kind(loss), limits);
  json j = envelope("robust");
  j["loss"] = to_string(relation.loss());
  j["a"] = bundle_json(a);
  j["b"] = bundle_json(b);
  j.update(to_json(relation.query(a, b)));
  out << j.dump(2) << '\n';
  return kExitPass;
}

struct CompensateOptions {
  std::string file;
  std::string loss = "afriat";
  std::size_t good = 0;
  std::string reduction = "1/4";
  std::string cap = "1";
  std::string format = "json";
};

int run_compensate(const CompensateOptions& opt, const Limits& limits, std::ostream& out) {
  const PurchaseDataset data = read_csv_file(opt.file);
  const Rational reduction = parse_rational(opt.reduction);
  const Rational cap = parse_rational(opt.cap);
  if (opt.good >= data.goods()) throw PreconditionError("--good must be below the number of goods");
  if (reduction <= 0 || reduction >= 1) throw PreconditionError("--reduction must lie in (0,1)");
  if (cap <= 0) throw PreconditionError("--cap must be positive");

  const RobustPreference relation(data, parse_loss_kind(opt.loss), limits);
  const Bundle median = median_bundle(data, opt.good);
  if (opt.format == "csv") {
    out << "k,k_decimal,median_over_counterfactual,counterfactual_over_median,region\n";
    for (const auto& p : compensation_scan(relation, median, opt.good, reduction, cap)) {
      out << format_rational(p.k) << ',' << to_double(p.k) << ','
          << (p.forward ? "true" : "false") << ',' << (p.backward ? "true" : "false") << ','
          << to_string(verdict_of(p.backward, p.forward)) << '\n';
    }
    return kExitPass;
  }
  json j = envelope("compensate");
  j["loss"] = to_string(relation.loss());
  j["good"] = opt.good;
  j["reduction"] = rational_json(reduction);
  j["median_bundle"] = bundle_json(median);
  j.update(to_json(compensation_levels(relation, median, opt.good, reduction, cap)));
  out << j.dump(2) << '\n';
  return kExitPass;
}

int run_panel(const std::string& dir, const std::string& losses, std::size_t workers,
              const std::string& format, const Limits& limits, std::ostream& out) {
  const PanelSummary summary = analyze_panel(dir, parse_selection(losses), workers, limits);
  if (format == "csv") {
    write_report_csv_header(out);
    for (const auto& r : summary.reports) write_report_csv_row(out, r);
    return kExitPass;
  }
  json j = envelope("panel");
  j.update(to_json(summary));
  out << j.dump(2) << '\n';
  return kExitPass;
}

struct SynthOptions {
  std::string family = "cobb-douglas";
  std::string params;
  std::size_t observations = 10;
  std::size_t goods = 2;
  std::string noise = "1,1";
  std::string prices = "1,10";
  std::string income = "100,100";
  std::uint64_t seed = 0;
  std::size_t count = 1;
  std::string out_path;
};

int run_synth(const SynthOptions& opt, std::ostream& out) {
  GeneratorSpec spec;
  spec.observations = opt.observations;
  spec.goods = opt.goods;
  spec.family = parse_utility_family(opt.family);
  if (opt.params.empty()) {
    spec.utility_params.assign(opt.goods, Rational(1));
    if (spec.family == UtilityFamily::ces) spec.utility_params.push_back(Rational(2));
  } else {
    spec.utility_params = parse_rational_list(opt.params);
  }
  spec.efficiency_noise = parse_interval(opt.noise);
  spec.price_range = parse_interval(opt.prices);
  spec.income_range = parse_interval(opt.income);
  if (opt.count == 0) throw std::invalid_argument("--count must be positive");

  if (opt.count == 1) {
    spec.seed = opt.seed;
    const std::string csv = serialize_csv(synthesize(spec));
    if (opt.out_path.empty()) {
      out << csv;
    } else {
      std::ofstream file(opt.out_path);
      if (!(file << csv)) throw std::runtime_error("cannot write '" + opt.out_path + "'");
    }
    return kExitPass;
  }
  if (opt.out_path.empty()) throw std::invalid_argument("--count > 1 needs --out DIR");
  std::filesystem::create_directories(opt.out_path);
  const int width = static_cast<int>(std::to_string(opt.count).size());
  for (std::size_t i = 0; i < opt.count; ++i) {
    spec.seed = opt.seed + i;
    std::string index = std::to_string(i + 1);
    index.insert(0, static_cast<std::size_t>(std::max(0, width - static_cast<int>(index.size()))), '0');
    const auto path = std::filesystem::path(opt.out_path) / ("household_" + index + ".csv");
    std::ofstream file(path);
    if (!(file << serialize_csv(synthesize(spec)))) {
      throw std::runtime_error("cannot write '" + path.string() + "'");
    }
  }
  out << json{{"schema_version", kSchemaVersion}, {"command", "synth"}, {"written", opt.count}}.dump(2)
      << '\n';
  return kExitPass;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact revealed preference analysis", "revpref"};
  app.require_subcommand(1);

  CheckOptions check;
  auto* check_cmd = app.add_subcommand("check", "Test a rationalizability condition");
  check_cmd->add_option("test", check.test, "garp | sarp | egarp | homothetic | oceu")
      ->required()
      ->check(CLI::IsMember({"garp", "sarp", "egarp", "homothetic", "oceu"}));
  check_cmd->add_option("file", check.file, "Dataset CSV")->required();
  check_cmd->add_option("--efficiency", check.efficiency, "egarp level: scalar or e1,...,eT");
  check_cmd->add_option("--probabilities", check.probabilities, "oceu state probabilities");

  std::string index_which, index_file, format = "json";
  auto* index_cmd = app.add_subcommand("index", "Compute goodness-of-fit indices");
  index_cmd->add_option("which", index_which, "afriat | varian | hm | swaps | all (comma list)")
      ->required();
  index_cmd->add_option("file", index_file, "Dataset CSV")->required();
  index_cmd->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

  std::string robust_file, robust_a, robust_b, loss = "afriat";
  auto* robust_cmd = app.add_subcommand("robust", "Robust preference between two bundles");
  robust_cmd->add_option("file", robust_file, "Dataset CSV")->required();
  robust_cmd->add_option("a", robust_a, "First bundle, e.g. 4,4")->required();
  robust_cmd->add_option("b", robust_b, "Second bundle")->required();
  robust_cmd->add_option("--loss", loss, "afriat | varian | hm")
      ->check(CLI::IsMember({"afriat", "varian", "hm"}));

  CompensateOptions comp;
  auto* comp_cmd = app.add_subcommand("compensate", "Weak and strong compensation levels");
  comp_cmd->add_option("file", comp.file, "Dataset CSV")->required();
  comp_cmd->add_option("--loss", comp.loss, "afriat | varian | hm")
      ->check(CLI::IsMember({"afriat", "varian", "hm"}));
  comp_cmd->add_option("--good", comp.good, "Reduced good, 0-based (q1 is good 0)");
  comp_cmd->add_option("--reduction", comp.reduction, "Fractional reduction in (0,1)");
  comp_cmd->add_option("--cap", comp.cap, "Largest compensation considered");
  comp_cmd->add_option("--format", comp.format, "json | csv (per-k regions)")
      ->check(CLI::IsMember({"json", "csv"}));

  std::string panel_dir, panel_losses = "afriat,varian,hm";
  std::size_t workers = 1;
  auto* panel_cmd = app.add_subcommand("panel", "Index reports and rank correlations for a directory");
  panel_cmd->add_option("dir", panel_dir, "Directory of CSV files")->required();
  panel_cmd->add_option("--loss", panel_losses, "Indices to compute (comma list)");
  panel_cmd->add_option("--workers", workers, "Parallel files")->check(CLI::PositiveNumber);
  panel_cmd->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate synthetic datasets");
  synth_cmd->add_option("--family", synth.family, "cobb-douglas | ces | leontief")
      ->check(CLI::IsMember({"cobb-douglas", "ces", "leontief"}));
  synth_cmd->add_option("--params", synth.params, "Utility weights (CES: weights then sigma)");
  synth_cmd->add_option("--observations", synth.observations, "T")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--goods", synth.goods, "L")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--noise", synth.noise, "Efficiency bounds lo,hi in [0,1]");
  synth_cmd->add_option("--prices", synth.prices, "Price range lo,hi");
  synth_cmd->add_option("--income", synth.income, "Income range lo,hi");
  synth_cmd->add_option("--seed", synth.seed, "Random seed");
  synth_cmd->add_option("--count", synth.count, "Number of datasets (seeds seed..seed+count-1)");
  synth_cmd->add_option("--out", synth.out_path, "Output file, or directory when --count > 1");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInputError;
  }

  try {
    const Limits limits = Limits::from_environment();
    if (*check_cmd) return run_check(check, out);
    if (*index_cmd) return run_index(index_which, index_file, format, limits, out);
    if (*robust_cmd) return run_robust(robust_file, loss, robust_a, robust_b, limits, out);
    if (*comp_cmd) return run_compensate(comp, limits, out);
    if (*panel_cmd) return run_panel(panel_dir, panel_losses, workers, format, limits, out);
    if (*synth_cmd) return run_synth(synth, out);
  } catch (const EnumerationCapExceeded& e) {
    json j{{"schema_version", kSchemaVersion},
           {"error", e.what()},
           {"cap", {{"name", e.cap_name()}, {"value", e.cap()}}}};
    out << j.dump(2) << '\n';
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace revpref
