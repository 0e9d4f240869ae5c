#pragma once

// On-disk formats: scenario sheets, attack trees and scripted co-design
// oracles (JSON, `format_version` 1), plot-data CSV, and the assessment
// report.

#include <clopa/attack_tree.hpp>
#include <clopa/codesign.hpp>
#include <clopa/core.hpp>
#include <clopa/design_space.hpp>
#include <clopa/engine.hpp>
#include <clopa/error.hpp>

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace clopa::io {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

// ---------------------------------------------------------------------------
// Number formatting (locale independent)
// ---------------------------------------------------------------------------

/// Plain decimal notation with `digits` significant digits, e.g. 0.0425912345678.
inline std::string format_decimal(double x, int digits = 12) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  if (x == 0.0) return "0";
  const int exponent = static_cast<int>(std::floor(std::log10(std::fabs(x))));
  const int decimals = std::max(0, digits - 1 - exponent);
  char buf[512];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, decimals);
  return std::string(buf, res.ptr);
}

/// RRF display rounding: four significant digits, at least "113.0" style.
inline std::string format_rrf(double rrf) {
  if (!std::isfinite(rrf)) return "INFEASIBLE";
  if (rrf >= 1e4) {
    const double scale = std::pow(10.0, std::floor(std::log10(rrf)) - 3.0);
    return format_decimal(std::round(rrf / scale) * scale, 0);
  }
  return format_decimal(rrf, 4);
}

/// Scientific notation with `digits` significant digits, e.g. 1.13000e-04.
inline std::string format_scientific(double x, int digits = 6) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific, digits - 1);
  return std::string(buf, res.ptr);
}

/// Shortest round-trip representation.
inline std::string format_shortest(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

/// IEC 61511 safety integrity level band for a required RRF.
inline std::string sil_band(double rrf) {
  if (!std::isfinite(rrf)) return "unrealizable";
  if (rrf < 10.0) return "below SIL 1";
  if (rrf < 100.0) return "SIL 1";
  if (rrf < 1000.0) return "SIL 2";
  if (rrf < 10000.0) return "SIL 3";
  if (rrf < 100000.0) return "SIL 4";
  return "beyond SIL 4";
}

// ---------------------------------------------------------------------------
// JSON schema helpers
// ---------------------------------------------------------------------------

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline Json parse_json(std::string_view text, const std::string& origin) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    // Byte offset to 1-based line/column.
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(ErrorCode::ParseError, origin + ":" + std::to_string(line) + ":" +
                                           std::to_string(column) + ": malformed JSON");
  }
}

/// Reads one JSON object and rejects keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  [[noreturn]] static void fail(const std::string& where, const std::string& what) {
    throw Error(ErrorCode::SchemaError, (where.empty() ? std::string("<root>") : where) + ": " + what);
  }

  std::string field(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  const Json* optional(std::string_view key) {
    seen_.insert(std::string(key));
    auto it = j_.find(std::string(key));
    return it == j_.end() ? nullptr : &*it;
  }

  const Json& require(std::string_view key) {
    const Json* v = optional(key);
    if (!v) fail(field(key), "missing required field");
    return *v;
  }

  double number(std::string_view key) {
    const Json& v = require(key);
    if (!v.is_number()) fail(field(key), "expected a number");
    return v.get<double>();
  }

  std::optional<double> optional_number(std::string_view key) {
    const Json* v = optional(key);
    if (!v) return std::nullopt;
    if (!v->is_number()) fail(field(key), "expected a number");
    return v->get<double>();
  }

  std::string string(std::string_view key) {
    const Json& v = require(key);
    if (!v.is_string()) fail(field(key), "expected a string");
    return v.get<std::string>();
  }

  std::string optional_string(std::string_view key, std::string fallback = {}) {
    const Json* v = optional(key);
    if (!v) return fallback;
    if (!v->is_string()) fail(field(key), "expected a string");
    return v->get<std::string>();
  }

  bool optional_bool(std::string_view key, bool fallback) {
    const Json* v = optional(key);
    if (!v) return fallback;
    if (!v->is_boolean()) fail(field(key), "expected true or false");
    return v->get<bool>();
  }

  const Json& array(std::string_view key) {
    const Json& v = require(key);
    if (!v.is_array()) fail(field(key), "expected an array");
    return v;
  }

  void version() {
    const Json& v = require("format_version");
    if (!v.is_number_integer() || v.get<int>() != kFormatVersion) {
      fail(field("format_version"), "unsupported format version (expected " +
                                        std::to_string(kFormatVersion) + ")");
    }
  }

  /// Call once every known key has been read.
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (seen_.count(it.key()) == 0) fail(field(it.key()), "unknown key");
    }
  }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

inline Probability probability_field(ObjectReader& r, std::string_view key) {
  const double v = r.number(key);
  if (!(v >= 0.0 && v <= 1.0)) {
    throw Error(ErrorCode::ValidationError, r.field(key) + ": probability outside [0, 1]");
  }
  return Probability(v);
}

inline std::vector<LayerCell> read_layers(const Json* j, const std::string& path,
                                          const std::vector<std::string>& declared) {
  std::vector<LayerCell> cells;
  if (!j) return cells;
  if (!j->is_object()) ObjectReader::fail(path, "expected an object of layer PFDs");
  for (auto it = j->begin(); it != j->end(); ++it) {
    if (std::find(declared.begin(), declared.end(), it.key()) == declared.end()) {
      ObjectReader::fail(path + "." + it.key(), "layer not declared in 'layers'");
    }
    if (!it->is_number()) ObjectReader::fail(path + "." + it.key(), "expected a number");
  }
  // Cells follow the declared column order.
  for (const auto& name : declared) {
    auto it = j->find(name);
    if (it != j->end()) cells.push_back({name, it->get<double>()});
  }
  return cells;
}

inline Json write_layers(const std::vector<LayerCell>& cells) {
  Json j = Json::object();
  for (const auto& c : cells) j[c.layer] = c.pfd;
  return j;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Scenario documents
// ---------------------------------------------------------------------------

/// Everything a scenario file holds.
struct ScenarioDocument {
  ScenarioSheet sheet;
  SecurityPosture posture;
  std::vector<AttackerSource> attacker_sources;

  friend bool operator==(const ScenarioDocument&, const ScenarioDocument&) = default;
};

/// A scenario document together with its validated, folded scenario.
struct ParsedScenario {
  ScenarioDocument document;
  LopaScenario scenario;
};

inline ScenarioDocument scenario_document_from_json(const Json& j) {
  detail::ObjectReader root(j, "");
  root.version();
  ScenarioDocument doc;
  ScenarioSheet& sheet = doc.sheet;
  sheet.hazard_name = root.string("hazard");
  sheet.tmel = root.number("tmel");

  if (const Json* layers = root.optional("layers")) {
    if (!layers->is_array()) detail::ObjectReader::fail("layers", "expected an array of names");
    for (const auto& name : *layers) {
      if (!name.is_string()) detail::ObjectReader::fail("layers", "expected an array of names");
      sheet.layer_names.push_back(name.get<std::string>());
    }
  }

  const Json& events = root.array("initiating_events");
  for (std::size_t i = 0; i < events.size(); ++i) {
    const std::string path = "initiating_events[" + std::to_string(i) + "]";
    detail::ObjectReader r(events[i], path);
    EventRow row;
    row.name = r.string("name");
    row.likelihood = r.number("likelihood");
    row.layers = detail::read_layers(r.optional("layer_pfds"), path + ".layer_pfds",
                                     sheet.layer_names);
    r.finish();
    sheet.events.push_back(std::move(row));
  }

  std::vector<AttackerSource> sources;
  if (const Json* list = root.optional("attacker_sources")) {
    if (!list->is_array()) detail::ObjectReader::fail("attacker_sources", "expected an array");
    for (std::size_t i = 0; i < list->size(); ++i) {
      detail::ObjectReader r((*list)[i], "attacker_sources[" + std::to_string(i) + "]");
      AttackerSource s;
      s.name = r.string("name");
      const double lambda = r.number("lambda");
      if (!(lambda >= 0.0 && std::isfinite(lambda))) {
        throw Error(ErrorCode::ValidationError, r.field("lambda") + ": rate must be finite and >= 0");
      }
      s.lambda = Rate(lambda);
      s.success_probability = detail::probability_field(r, "success_probability");
      r.finish();
      sources.push_back(std::move(s));
    }
  }

  {
    detail::ObjectReader r(root.require("bpcs"), "bpcs");
    sheet.bpcs.pfd_physical = r.number("pfd_physical");
    sheet.bpcs.lambda_physical = r.number("lambda_physical");
    if (auto lc = r.optional_number("lambda_cyber")) {
      sheet.bpcs.lambda_cyber = *lc;
    } else if (!sources.empty()) {
      sheet.bpcs.lambda_cyber = aggregate_attack_rate(sources).value();
    } else {
      detail::ObjectReader::fail("bpcs.lambda_cyber",
                                 "missing (give it or list attacker_sources)");
    }
    sheet.bpcs.layers = detail::read_layers(r.optional("layer_pfds"), "bpcs.layer_pfds",
                                            sheet.layer_names);
    r.finish();
  }

  {
    detail::ObjectReader r(root.require("security"), "security");
    doc.posture.p_ab = detail::probability_field(r, "p_ab");
    doc.posture.p_asb = detail::probability_field(r, "p_asb");
    doc.posture.p_as = detail::probability_field(r, "p_as");
    doc.posture.p_abs = detail::probability_field(r, "p_abs");
    r.finish();
  }
  doc.attacker_sources = std::move(sources);
  root.finish();
  return doc;
}

inline Json scenario_document_to_json(const ScenarioDocument& doc) {
  const ScenarioSheet& s = doc.sheet;
  Json j;
  j["format_version"] = kFormatVersion;
  j["hazard"] = s.hazard_name;
  j["tmel"] = s.tmel;
  j["layers"] = s.layer_names;
  Json events = Json::array();
  for (const auto& row : s.events) {
    Json e;
    e["name"] = row.name;
    e["likelihood"] = row.likelihood;
    e["layer_pfds"] = detail::write_layers(row.layers);
    events.push_back(std::move(e));
  }
  j["initiating_events"] = std::move(events);
  Json b;
  b["pfd_physical"] = s.bpcs.pfd_physical;
  b["lambda_physical"] = s.bpcs.lambda_physical;
  b["lambda_cyber"] = s.bpcs.lambda_cyber;
  b["layer_pfds"] = detail::write_layers(s.bpcs.layers);
  j["bpcs"] = std::move(b);
  j["security"] = {{"p_ab", doc.posture.p_ab.value()},
                   {"p_asb", doc.posture.p_asb.value()},
                   {"p_as", doc.posture.p_as.value()},
                   {"p_abs", doc.posture.p_abs.value()}};
  if (!doc.attacker_sources.empty()) {
    Json list = Json::array();
    for (const auto& src : doc.attacker_sources) {
      list.push_back({{"name", src.name},
                      {"lambda", src.lambda.value()},
                      {"success_probability", src.success_probability.value()}});
    }
    j["attacker_sources"] = std::move(list);
  }
  return j;
}

/// Parses and validates scenario text. `origin` names the source in errors.
inline ParsedScenario parse_scenario_text(std::string_view text, const std::string& origin = "<input>") {
  const Json j = detail::parse_json(text, origin);
  ScenarioDocument doc = scenario_document_from_json(j);
  LopaScenario scenario = build_scenario(doc.sheet);
  return ParsedScenario{std::move(doc), std::move(scenario)};
}

inline ParsedScenario parse_scenario(const std::filesystem::path& path) {
  return parse_scenario_text(detail::read_file(path), path.string());
}

// ---------------------------------------------------------------------------
// Attack trees
// ---------------------------------------------------------------------------

namespace detail {

struct GateSpec {
  Gate gate;
  std::vector<std::string> inputs;
};

inline AttackNode expand(const std::string& id, const EventTable& events,
                         const std::map<std::string, GateSpec>& gates,
                         std::vector<std::string>& stack) {
  if (events.find(id)) return leaf(id);
  auto it = gates.find(id);
  if (it == gates.end()) {
    throw Error(ErrorCode::UnresolvedLeaf, "input '" + id + "' is neither an event nor a gate");
  }
  if (std::find(stack.begin(), stack.end(), id) != stack.end()) {
    std::string cycle;
    for (const auto& s : stack) cycle += s + " -> ";
    throw Error(ErrorCode::CycleDetected, cycle + id);
  }
  stack.push_back(id);
  AttackNode node{it->second.gate, {}, {}, id};
  for (const auto& input : it->second.inputs) {
    node.children.push_back(expand(input, events, gates, stack));
  }
  stack.pop_back();
  return node;
}

}  // namespace detail

inline AttackTree attack_tree_from_json(const Json& j) {
  detail::ObjectReader root(j, "");
  root.version();
  AttackTree tree;
  tree.name = root.optional_string("name");
  const Json& events = root.array("events");
  for (std::size_t i = 0; i < events.size(); ++i) {
    detail::ObjectReader r(events[i], "events[" + std::to_string(i) + "]");
    BasicEvent e;
    e.id = r.string("id");
    e.description = r.optional_string("description");
    e.probability = detail::probability_field(r, "probability");
    r.finish();
    tree.events.add(std::move(e));
  }
  std::map<std::string, detail::GateSpec> gates;
  const Json& gate_list = root.array("gates");
  for (std::size_t i = 0; i < gate_list.size(); ++i) {
    const std::string path = "gates[" + std::to_string(i) + "]";
    detail::ObjectReader r(gate_list[i], path);
    const std::string id = r.string("id");
    const std::string type = r.string("type");
    detail::GateSpec spec;
    if (type == "AND") {
      spec.gate = Gate::And;
    } else if (type == "OR") {
      spec.gate = Gate::Or;
    } else {
      detail::ObjectReader::fail(path + ".type", "expected \"AND\" or \"OR\"");
    }
    const Json& inputs = r.array("inputs");
    if (inputs.empty()) detail::ObjectReader::fail(path + ".inputs", "gate needs at least one input");
    for (const auto& in : inputs) {
      if (!in.is_string()) detail::ObjectReader::fail(path + ".inputs", "expected ids");
      spec.inputs.push_back(in.get<std::string>());
    }
    r.finish();
    if (tree.events.find(id) || gates.count(id)) {
      detail::ObjectReader::fail(path + ".id", "id '" + id + "' already in use");
    }
    gates.emplace(id, std::move(spec));
  }
  const std::string root_id = root.string("root");
  root.finish();
  std::vector<std::string> stack;
  tree.root = detail::expand(root_id, tree.events, gates, stack);
  return tree;
}

inline AttackTree parse_attack_tree_text(std::string_view text, const std::string& origin = "<input>") {
  return attack_tree_from_json(detail::parse_json(text, origin));
}

inline AttackTree parse_attack_tree(const std::filesystem::path& path) {
  return parse_attack_tree_text(detail::read_file(path), path.string());
}

// ---------------------------------------------------------------------------
// Scripted co-design oracle tables
// ---------------------------------------------------------------------------

struct CodesignScript {
  double target_rrf = 0.0;
  Probability p_as;
  std::optional<std::size_t> max_iterations;
  bool cycle = false;
  std::vector<ScriptedResponse> responses;

  friend bool operator==(const CodesignScript&, const CodesignScript&) = default;
};

inline CodesignScript codesign_script_from_json(const Json& j) {
  detail::ObjectReader root(j, "");
  root.version();
  CodesignScript script;
  script.target_rrf = root.number("target_rrf");
  script.p_as = detail::probability_field(root, "p_as");
  if (const Json* m = root.optional("max_iterations")) {
    if (!m->is_number_unsigned() || m->get<std::size_t>() < 1) {
      detail::ObjectReader::fail("max_iterations", "expected a positive integer");
    }
    script.max_iterations = m->get<std::size_t>();
  }
  script.cycle = root.optional_bool("cycle", false);
  const Json& rows = root.array("responses");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    detail::ObjectReader r(rows[i], "responses[" + std::to_string(i) + "]");
    ScriptedResponse row;
    row.verified_rrf = r.number("verified_rrf");
    row.posture.p_as = detail::probability_field(r, "p_as");
    row.posture.p_abs = detail::probability_field(r, "p_abs");
    row.architecture = r.optional_string("architecture");
    r.finish();
    script.responses.push_back(std::move(row));
  }
  root.finish();
  return script;
}

inline Json codesign_script_to_json(const CodesignScript& s) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["target_rrf"] = s.target_rrf;
  j["p_as"] = s.p_as.value();
  if (s.max_iterations) j["max_iterations"] = *s.max_iterations;
  j["cycle"] = s.cycle;
  Json rows = Json::array();
  for (const auto& r : s.responses) {
    Json row;
    row["verified_rrf"] = r.verified_rrf;
    row["p_as"] = r.posture.p_as.value();
    row["p_abs"] = r.posture.p_abs.value();
    if (!r.architecture.empty()) row["architecture"] = r.architecture;
    rows.push_back(std::move(row));
  }
  j["responses"] = std::move(rows);
  return j;
}

inline CodesignScript parse_codesign_script(const std::filesystem::path& path) {
  return codesign_script_from_json(detail::parse_json(detail::read_file(path), path.string()));
}

// ---------------------------------------------------------------------------
// Plot data
// ---------------------------------------------------------------------------

struct CurveRow {
  double p_as = 0.0;
  double p_abs = 0.0;
  std::optional<double> rrf;
};

inline std::vector<CurveRow> curve_rows(std::span<const CurveSample> samples,
                                        std::optional<double> rrf = std::nullopt) {
  std::vector<CurveRow> rows;
  rows.reserve(samples.size());
  for (const auto& s : samples) rows.push_back({s.p_as.value(), s.p_abs.value(), rrf});
  return rows;
}

/// Header `p_as,p_abs` (plus `,rrf` when any row carries one), then one line
/// per row, 12 significant digits, LF endings.
inline void write_curve_csv(std::ostream& out, std::span<const CurveRow> rows) {
  const bool with_rrf = std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.rrf.has_value(); });
  out << (with_rrf ? "p_as,p_abs,rrf\n" : "p_as,p_abs\n");
  for (const auto& r : rows) {
    out << format_decimal(r.p_as) << ',' << format_decimal(r.p_abs);
    if (with_rrf) out << ',' << (r.rrf ? format_decimal(*r.rrf) : std::string());
    out << '\n';
  }
}

inline void emit_curve_csv(std::span<const CurveRow> rows, const std::filesystem::path& destination) {
  std::ofstream out(destination, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + destination.string() + "'");
  write_curve_csv(out, rows);
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write to '" + destination.string() + "' failed");
}

/// Reads back a file written by write_curve_csv.
inline std::vector<CurveRow> read_curve_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "empty CSV");
  const bool with_rrf = line == "p_as,p_abs,rrf";
  if (!with_rrf && line != "p_as,p_abs") throw Error(ErrorCode::ParseError, "unexpected CSV header");
  auto number = [](std::string_view text) {
    double v = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
      throw Error(ErrorCode::ParseError, "bad CSV number '" + std::string(text) + "'");
    }
    return v;
  };
  std::vector<CurveRow> rows;
  while (std::getline(in, line)) {
    std::vector<std::string_view> cells;
    std::string_view rest(line);
    for (std::size_t comma; (comma = rest.find(',')) != std::string_view::npos;) {
      cells.push_back(rest.substr(0, comma));
      rest.remove_prefix(comma + 1);
    }
    cells.push_back(rest);
    if (cells.size() != (with_rrf ? 3U : 2U)) throw Error(ErrorCode::ParseError, "bad CSV row");
    CurveRow row{number(cells[0]), number(cells[1]), std::nullopt};
    if (with_rrf && !cells[2].empty()) row.rrf = number(cells[2]);
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Assessment report
// ---------------------------------------------------------------------------

/// Design points whose realizability slack is below this share of beta are
/// flagged as too close to the design boundary.
inline constexpr double kNearBoundaryFraction = 0.10;

struct ReportDocument {
  ScenarioDocument inputs;
  ClopaCoefficients coefficients;
  CyberFailureProbs cyber;
  BoundResult classical;
  BoundResult clopa;
  std::optional<RegionLimits> limits;
  std::optional<double> rrf_error;
  double design_slack = 0.0;
  std::vector<std::string> warnings;
};

inline ReportDocument assess(const ParsedScenario& parsed) {
  const auto& scenario = parsed.scenario;
  const auto& posture = parsed.document.posture;
  ReportDocument report;
  report.inputs = parsed.document;
  report.coefficients = clopa_coefficients(scenario, posture);
  report.cyber = cyber_failure_probs(posture);
  report.classical = classical_lopa(scenario);
  report.clopa = sis_pfd_bound(report.coefficients, posture.p_as, posture.p_abs);
  const auto& c = report.coefficients;
  if (c.gamma1 > 0.0 && c.gamma2 > 0.0 && c.gamma3 > 0.0) report.limits = region_limits(c);
  report.design_slack = region_slack(c, posture.p_as.value(), posture.p_abs.value());
  if (report.clopa.feasible()) {
    report.rrf_error = rrf_error(c, posture.p_as, posture.p_abs);
  }

  if (!report.clopa.feasible()) {
    report.warnings.push_back(
        "INFEASIBLE: the SIS attack probabilities lie outside the design region; no SIS "
        "reliability can meet the TMEL");
  } else if (report.design_slack < kNearBoundaryFraction * c.beta) {
    report.warnings.push_back(
        "design point is within 10% of the design boundary; the required RRF is very "
        "sensitive to the attack probabilities here");
  }
  if (report.clopa.feasible() && !report.clopa.sis_required()) {
    report.warnings.push_back("existing layers already meet the TMEL; no SIS is required");
  }
  if (!report.limits) {
    report.warnings.push_back("region limits undefined: a gamma coefficient is zero");
  }
  return report;
}

namespace detail {

inline Json optional_number(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

inline Json bound_to_json(const BoundResult& b) {
  Json j;
  j["feasible"] = b.feasible();
  j["pfd_bound"] = b.pfd_bound ? Json(b.pfd_bound->value()) : Json(nullptr);
  j["rrf"] = optional_number(b.rrf);
  j["rrf_display"] = b.rrf ? format_rrf(*b.rrf) : std::string("INFEASIBLE");
  j["sil"] = b.rrf ? sil_band(*b.rrf) : std::string("unrealizable");
  j["numerator"] = b.numerator;
  j["denominator"] = b.denominator;
  return j;
}

}  // namespace detail

inline Json coefficients_to_json(const ClopaCoefficients& c) {
  return Json{{"alpha1", c.alpha1}, {"alpha2", c.alpha2}, {"beta", c.beta},
              {"gamma1", c.gamma1}, {"gamma2", c.gamma2}, {"gamma3", c.gamma3},
              {"zeta1", c.zeta1},   {"zeta2", c.zeta2},   {"zeta3", c.zeta3}};
}

inline Json limits_to_json(const RegionLimits& l) {
  return Json{{"max_pas", l.max_pas.value()}, {"max_pabs", l.max_pabs.value()}, {"rrf_min", l.rrf_min}};
}

inline Json report_to_json(const ReportDocument& r) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["inputs"] = scenario_document_to_json(r.inputs);
  j["coefficients"] = coefficients_to_json(r.coefficients);
  j["cyber_failure"] = {{"p_bc", r.cyber.p_bc.value()},
                        {"p_sc", r.cyber.p_sc.value()},
                        {"p_joint_cyber", r.cyber.p_joint_cyber.value()}};
  j["classical"] = detail::bound_to_json(r.classical);
  j["clopa"] = detail::bound_to_json(r.clopa);
  j["region_limits"] = r.limits ? limits_to_json(*r.limits) : Json(nullptr);
  j["rrf_error"] = detail::optional_number(r.rrf_error);
  j["design_slack"] = r.design_slack;
  j["warnings"] = r.warnings;
  return j;
}

inline void write_report_text(std::ostream& out, const ReportDocument& r) {
  const auto& c = r.coefficients;
  const auto& doc = r.inputs;
  auto sci = [](double x) { return format_scientific(x, 6); };
  out << "Hazard: " << doc.sheet.hazard_name << "\n";
  out << "TMEL: " << format_shortest(doc.sheet.tmel) << " /yr\n\n";
  out << "Initiating events:\n";
  for (const auto& row : doc.sheet.events) {
    double product = 1.0;
    for (const auto& cell : row.layers) product *= cell.pfd;
    out << "  " << row.name << ": lambda = " << format_shortest(row.likelihood)
        << " /yr, P[L] = " << format_shortest(product) << "\n";
  }
  out << "BPCS: P[B_p] = " << format_shortest(doc.sheet.bpcs.pfd_physical)
      << ", lambda_p = " << format_shortest(doc.sheet.bpcs.lambda_physical)
      << " /yr, lambda_c = " << format_shortest(doc.sheet.bpcs.lambda_cyber) << " /yr\n";
  out << "Security: P[A_B] = " << format_shortest(doc.posture.p_ab.value())
      << ", P[A_SB] = " << format_shortest(doc.posture.p_asb.value())
      << ", P[A_S] = " << format_shortest(doc.posture.p_as.value())
      << ", P[A_BS] = " << format_shortest(doc.posture.p_abs.value()) << "\n\n";

  out << "Coefficients:\n";
  out << "  alpha1 = " << sci(c.alpha1) << "  alpha2 = " << sci(c.alpha2)
      << "  beta = " << sci(c.beta) << "\n";
  out << "  gamma1 = " << sci(c.gamma1) << "  gamma2 = " << sci(c.gamma2)
      << "  gamma3 = " << sci(c.gamma3) << "\n";
  out << "  zeta1 = " << sci(c.zeta1) << "  zeta2 = " << sci(c.zeta2)
      << "  zeta3 = " << sci(c.zeta3) << "\n\n";

  out << "Cyber failure: P[B_c] = " << sci(r.cyber.p_bc.value())
      << ", P[S_c] = " << sci(r.cyber.p_sc.value())
      << ", P[S_c,B_c] = " << sci(r.cyber.p_joint_cyber.value()) << "\n\n";

  auto bound_line = [&](const char* label, const BoundResult& b) {
    out << label;
    if (b.feasible()) {
      out << "PFD <= " << sci(b.pfd_bound->value()) << ", RRF = " << format_rrf(*b.rrf) << " ("
          << sil_band(*b.rrf) << ")\n";
    } else {
      out << "INFEASIBLE\n";
    }
  };
  bound_line("Classical LOPA: ", r.classical);
  bound_line("CLOPA:          ", r.clopa);
  if (r.rrf_error) out << "Classical LOPA RRF error: " << format_rrf(*r.rrf_error) << "\n";
  if (r.limits) {
    out << "\nDesign region:\n";
    out << "  max P[A_S]  = " << sci(r.limits->max_pas.value()) << "\n";
    out << "  max P[A_BS] = " << sci(r.limits->max_pabs.value()) << "\n";
    out << "  RRF_min     = " << format_rrf(r.limits->rrf_min) << "\n";
  }
  out << "  slack at design point = " << sci(r.design_slack) << " /yr\n";
  for (const auto& w : r.warnings) out << "WARNING: " << w << "\n";
}

// ---------------------------------------------------------------------------
// Co-design traces
// ---------------------------------------------------------------------------

inline Json trace_to_json(const CodesignTrace& t) {
  Json j;
  j["outcome"] = std::string(to_string(t.outcome));
  Json rows = Json::array();
  for (const auto& it : t.iterations) {
    Json row;
    row["iteration"] = it.index;
    row["target_rrf"] = it.target_rrf;
    row["verified_rrf"] = it.verified_rrf;
    row["architecture"] = it.architecture;
    row["p_as"] = it.posture.p_as.value();
    row["p_abs"] = it.posture.p_abs.value();
    row["recomputed_rrf"] = std::isfinite(it.recomputed_rrf) ? Json(it.recomputed_rrf) : Json(nullptr);
    rows.push_back(std::move(row));
  }
  j["iterations"] = std::move(rows);
  const auto& p = t.final_point;
  j["final_point"] = {{"p_as", p.p_as.value()},
                      {"p_abs", p.p_abs.value()},
                      {"pfd_bound", p.pfd_bound ? Json(p.pfd_bound->value()) : Json(nullptr)},
                      {"rrf", detail::optional_number(p.rrf)}};
  if (!t.failure_reason.empty()) j["failure_reason"] = t.failure_reason;
  return j;
}

}  // namespace clopa::io
