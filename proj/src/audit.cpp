/*
 * Copyright 2026 The fairgamble Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fairgamble/audit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include "fairgamble/availability.hpp"
#include "fairgamble/errors.hpp"
#include "fairgamble/hierarchy.hpp"

namespace fairgamble {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string JoinProblems(const std::vector<std::string>& problems) {
  std::string out = "ingestion failed";
  for (const auto& p : problems) out += "\n  " + p;
  return out;
}

}  // namespace

IngestError::IngestError(std::vector<std::string> problems)
    : std::runtime_error(JoinProblems(problems)), problems_(std::move(problems)) {}

// --- ingestion --------------------------------------------------------------

namespace {

// Any failure while decoding one field; caught per line.
struct FieldError {
  std::string message;
};

double Number(const json& j, const char* what) {
  if (!j.is_number()) throw FieldError{std::string(what) + " must be a number"};
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw FieldError{std::string(what) + " must be finite"};
  return x;
}

std::vector<double> Numbers(const json& j, const char* what) {
  if (!j.is_array()) throw FieldError{std::string(what) + " must be an array of numbers"};
  std::vector<double> out;
  for (const auto& x : j) out.push_back(Number(x, what));
  return out;
}

OutcomeSpace ParseSpace(const json& j) {
  if (!j.is_object()) throw FieldError{"space must be an object"};
  for (const auto& [key, _] : j.items()) {
    if (key != "values" && key != "labels") throw FieldError{"unknown space field '" + key + "'"};
  }
  try {
    if (j.contains("values")) {
      auto values = Numbers(j["values"], "space values");
      if (!j.contains("labels")) return OutcomeSpace::Numeric(std::move(values));
      return OutcomeSpace(j["labels"].get<std::vector<std::string>>(), std::move(values));
    }
    if (j.contains("labels")) return OutcomeSpace(j["labels"].get<std::vector<std::string>>());
  } catch (const json::exception&) {
    throw FieldError{"space labels must be strings"};
  } catch (const std::exception& e) {
    throw FieldError{e.what()};
  }
  throw FieldError{"space needs values or labels"};
}

Outcome ParseOutcome(const json& j, const OutcomeSpace& space) {
  if (j.is_string()) {
    if (auto y = space.find(j.get<std::string>())) return *y;
    throw FieldError{"unknown outcome label '" + j.get<std::string>() + "'"};
  }
  if (j.is_number() && space.has_numeric_values()) {
    const double x = j.get<double>();
    const auto values = space.numeric_values();
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] == x) return i;
    }
    throw FieldError{"outcome " + format_double(x) + " is not in the outcome space"};
  }
  throw FieldError{"outcome must be a label" + std::string(space.has_numeric_values() ? " or value" : "")};
}

PropertyValue ParseForecast(const json& j, const PropertySpec& spec) {
  PropertyValue v;
  if (spec.is_scalar()) {
    v = PropertyValue(Number(j, "forecast"));
  } else {
    v = PropertyValue(Numbers(j, "forecast"));
  }
  try {
    spec.require_in_value_set(v);
  } catch (const std::exception& e) {
    throw FieldError{std::string("forecast: ") + e.what()};
  }
  return v;
}

Belief ParseBelief(const json& j, std::size_t n, const char* what) {
  if (j.is_null()) return std::nullopt;
  auto w = Numbers(j, what);
  if (w.size() != n) throw FieldError{std::string(what) + " needs one weight per outcome"};
  try {
    return Distribution(std::move(w));
  } catch (const std::exception& e) {
    throw FieldError{std::string(what) + ": " + e.what()};
  }
}

Gamble ParseGamble(const json& j, std::size_t n, const char* what) {
  auto g = Numbers(j, what);
  if (g.size() != n) throw FieldError{std::string(what) + " needs one value per outcome"};
  return Gamble(std::move(g));
}

Restriction ParseRestrictionField(const json& j, std::size_t n, const char* what) {
  if (j.is_string()) {
    try {
      return parse_restriction(j.get<std::string>());
    } catch (const std::exception& e) {
      throw FieldError{std::string(what) + ": " + e.what()};
    }
  }
  if (j.is_object() && j.size() == 1 && j.contains("finite") && j["finite"].is_array()) {
    FiniteSet set;
    for (const auto& g : j["finite"]) set.gambles.push_back(ParseGamble(g, n, what));
    return set;
  }
  throw FieldError{std::string(what) + " must be a restriction id or {\"finite\": [...]}"};
}

struct Record {
  std::size_t line = 0;
  std::size_t t = 0;
  PropertyValue forecast;
  Outcome outcome = 0;
  std::vector<std::string> groups;
  std::optional<Belief> belief, fine_belief;
  std::optional<Restriction> restriction, restriction_prime;
  std::optional<Gamble> gamble;
};

const std::set<std::string>& RecordKeys() {
  static const std::set<std::string> keys{"t",      "forecast",   "outcome",     "groups",           "belief",
                                          "fine_belief", "restriction", "restriction_prime", "gamble"};
  return keys;
}

Record ParseRecord(const json& j, const PropertySpec& spec) {
  if (!j.is_object()) throw FieldError{"record must be a JSON object"};
  for (const auto& [key, _] : j.items()) {
    if (!RecordKeys().contains(key)) throw FieldError{"unknown field '" + key + "'"};
  }
  for (const char* key : {"t", "forecast", "outcome"}) {
    if (!j.contains(key)) throw FieldError{std::string("missing field '") + key + "'"};
  }
  Record r;
  const auto& t = j["t"];
  if (!t.is_number_integer() || t.get<long long>() < 0) throw FieldError{"t must be a non-negative integer"};
  r.t = t.get<std::size_t>();
  const std::size_t n = spec.num_outcomes();
  r.forecast = ParseForecast(j["forecast"], spec);
  r.outcome = ParseOutcome(j["outcome"], spec.space());
  if (j.contains("groups")) {
    const auto& g = j["groups"];
    if (!g.is_array() || !std::all_of(g.begin(), g.end(), [](const json& x) { return x.is_string(); })) {
      throw FieldError{"groups must be an array of strings"};
    }
    r.groups = g.get<std::vector<std::string>>();
  }
  if (j.contains("belief")) r.belief = ParseBelief(j["belief"], n, "belief");
  if (j.contains("fine_belief")) r.fine_belief = ParseBelief(j["fine_belief"], n, "fine_belief");
  if (j.contains("restriction")) r.restriction = ParseRestrictionField(j["restriction"], n, "restriction");
  if (j.contains("restriction_prime")) {
    r.restriction_prime = ParseRestrictionField(j["restriction_prime"], n, "restriction_prime");
  }
  if (j.contains("gamble")) r.gamble = ParseGamble(j["gamble"], n, "gamble");
  return r;
}

bool IsBlank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

// Collects an all-or-none per-round field.
template <typename T, typename Get>
std::vector<T> Column(const std::vector<Record>& records, const char* name, Get get,
                      std::vector<std::string>& problems) {
  std::size_t present = 0;
  for (const auto& r : records) present += get(r).has_value();
  if (present == 0) return {};
  std::vector<T> out;
  for (const auto& r : records) {
    if (!get(r)) {
      problems.push_back("line " + std::to_string(r.line) + ": " + name + " must be given on every record or none");
      continue;
    }
    out.push_back(*get(r));
  }
  return out;
}

double ParseDouble(const std::string& text, const std::string& context) {
  double x = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || end != text.data() + text.size() || !std::isfinite(x)) {
    throw StructuralError("bad number in '" + context + "'");
  }
  return x;
}

}  // namespace

PropertyModel resolve_model(const AuditInput& input, const AuditConfig& config) {
  const std::string property = config.property.value_or(input.property.empty() ? "mean" : input.property);
  if (property.find('+') != std::string::npos) throw StructuralError("give the loss with --loss, not in the property");
  if (!config.loss) return parse_property_model(property, input.run.space);
  static const std::regex re(R"(^(squared|pinball|brier)(?:\*([^+\-*][^+*]*?))?(?:([+\-][^+\-*]+))?$)");
  std::smatch m;
  if (!std::regex_match(*config.loss, m, re)) throw StructuralError("unknown loss '" + *config.loss + "'");
  auto model = parse_property_model(property + "+" + m[1].str(), input.run.space);
  const double scale = m[2].matched ? ParseDouble(m[2].str(), *config.loss) : 1.0;
  const double offset = m[3].matched ? ParseDouble(m[3].str().substr(m[3].str()[0] == '+' ? 1 : 0), *config.loss) : 0.0;
  if (!(scale > 0.0)) throw StructuralError("loss scale must be positive");
  if (scale != 1.0 || offset != 0.0) model.loss = model.loss.affine(scale, offset);
  return model;
}

GroupSystem resolve_groups(const ProtocolRun& run, const std::string& groups) {
  if (groups == "tags") return groups_from_tags(run);
  const std::size_t T = run.size();
  GroupSystem out{{kAllRoundsGroup, std::vector<bool>(T, true)}};
  if (groups == "all") return out;
  const auto tagged = groups_from_tags(run, false);
  std::stringstream ss(groups);
  std::string name;
  while (std::getline(ss, name, ',')) {
    auto it = std::find_if(tagged.begin(), tagged.end(), [&](const Group& g) { return g.name == name; });
    if (it == tagged.end()) throw StructuralError("unknown group '" + name + "'");
    out.push_back(*it);
  }
  return out;
}

AuditInput parse_jsonl(std::istream& in, const AuditConfig& config) {
  AuditInput input;
  std::vector<std::string> problems;
  std::vector<Record> records;
  std::optional<PropertySpec> spec;
  std::string line;
  std::size_t number = 0;
  bool seen_content = false;

  auto fail = [&](std::size_t n, const std::string& msg) {
    problems.push_back("line " + std::to_string(n) + ": " + msg);
  };

  while (std::getline(in, line)) {
    ++number;
    if (IsBlank(line)) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      fail(number, std::string("invalid JSON: ") + e.what());
      seen_content = true;
      continue;
    }
    const bool header = j.is_object() && !j.contains("t") && (j.contains("space") || j.contains("property"));
    if (header) {
      if (seen_content) {
        fail(number, "header must be the first line");
        continue;
      }
      seen_content = true;
      try {
        for (const auto& [key, _] : j.items()) {
          if (key != "space" && key != "property") throw FieldError{"unknown header field '" + key + "'"};
        }
        if (j.contains("space")) input.run.space = ParseSpace(j["space"]);
        if (j.contains("property")) {
          if (!j["property"].is_string()) throw FieldError{"property must be a string"};
          input.property = j["property"].get<std::string>();
        }
      } catch (const FieldError& e) {
        fail(number, e.message);
      }
      continue;
    }
    seen_content = true;
    if (!spec) {
      try {
        spec = resolve_model(input, config).spec;
      } catch (const std::exception& e) {
        throw IngestError({std::string("config: ") + e.what()});
      }
    }
    try {
      Record r = ParseRecord(j, *spec);
      r.line = number;
      records.push_back(std::move(r));
    } catch (const FieldError& e) {
      fail(number, e.message);
    }
  }
  if (records.empty() && problems.empty()) problems.emplace_back("no round records");

  std::stable_sort(records.begin(), records.end(), [](const Record& a, const Record& b) { return a.t < b.t; });
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].t == records[i - 1].t) {
      fail(records[i].line, "duplicate t=" + std::to_string(records[i].t) + " (first on line " +
                                std::to_string(records[i - 1].line) + ")");
    }
  }

  bool tagged = false;
  for (auto& r : records) {
    input.t.push_back(r.t);
    input.run.forecasts.push_back(r.forecast);
    input.run.outcomes.push_back(r.outcome);
    tagged = tagged || !r.groups.empty();
    input.run.groups.push_back(r.groups);
  }
  if (!tagged) input.run.groups.clear();
  input.beliefs = Column<Belief>(records, "belief", [](const Record& r) { return r.belief; }, problems);
  input.fine_beliefs =
      Column<Belief>(records, "fine_belief", [](const Record& r) { return r.fine_belief; }, problems);
  input.restrictions =
      Column<Restriction>(records, "restriction", [](const Record& r) { return r.restriction; }, problems);
  input.restrictions_prime = Column<Restriction>(
      records, "restriction_prime", [](const Record& r) { return r.restriction_prime; }, problems);
  if (std::any_of(records.begin(), records.end(), [](const Record& r) { return r.gamble.has_value(); })) {
    for (const auto& r : records) input.gambles.push_back(r.gamble);
  }
  if (!problems.empty()) throw IngestError(std::move(problems));
  return input;
}

AuditInput ingest(const std::filesystem::path& path, const AuditConfig& config) {
  std::ifstream in(path);
  if (!in) throw IngestError({"cannot open " + path.string()});
  return parse_jsonl(in, config);
}

namespace {

json BeliefJson(const Belief& b) {
  if (!b) return nullptr;
  return std::vector<double>(b->weights().begin(), b->weights().end());
}

json RestrictionJson(const Restriction& r) {
  if (const auto* set = std::get_if<FiniteSet>(&r)) {
    json gs = json::array();
    for (const auto& g : set->gambles) gs.push_back(std::vector<double>(g.values().begin(), g.values().end()));
    return json{{"finite", gs}};
  }
  return describe(r);
}

}  // namespace

std::string emit_jsonl(const AuditInput& input) {
  const auto& run = input.run;
  const auto& space = run.space;
  std::string out;
  ordered_json header;
  if (space.has_numeric_values()) {
    const auto values = space.numeric_values();
    header["space"]["values"] = std::vector<double>(values.begin(), values.end());
    OutcomeSpace plain = OutcomeSpace::Numeric(std::vector<double>(values.begin(), values.end()));
    if (plain.labels() != space.labels()) header["space"]["labels"] = space.labels();
  } else {
    header["space"]["labels"] = space.labels();
  }
  if (!input.property.empty()) header["property"] = input.property;
  out += header.dump() + "\n";
  for (std::size_t i = 0; i < run.size(); ++i) {
    ordered_json r;
    r["t"] = input.t.empty() ? i : input.t[i];
    const auto& v = run.forecasts[i];
    if (v.is_scalar()) {
      r["forecast"] = v.scalar();
    } else {
      r["forecast"] = v.coords();
    }
    const Outcome y = run.outcomes[i];
    if (space.has_numeric_values()) {
      r["outcome"] = space.value(y);
    } else {
      r["outcome"] = space.label(y);
    }
    r["groups"] = run.groups.empty() ? std::vector<std::string>{} : run.groups[i];
    if (!input.beliefs.empty()) r["belief"] = BeliefJson(input.beliefs[i]);
    if (!input.fine_beliefs.empty()) r["fine_belief"] = BeliefJson(input.fine_beliefs[i]);
    if (!input.restrictions.empty()) r["restriction"] = RestrictionJson(input.restrictions[i]);
    if (!input.restrictions_prime.empty()) r["restriction_prime"] = RestrictionJson(input.restrictions_prime[i]);
    if (!input.gambles.empty() && input.gambles[i]) {
      const auto& g = *input.gambles[i];
      r["gamble"] = std::vector<double>(g.values().begin(), g.values().end());
    }
    out += r.dump() + "\n";
  }
  return out;
}

// --- report -------------------------------------------------------------------

namespace {

ordered_json ValueJson(const PropertyValue& v) {
  if (v.is_scalar()) return v.scalar();
  return v.coords();
}

std::string ValueCsv(const PropertyValue& v) {
  std::string s;
  for (std::size_t i = 0; i < v.coords().size(); ++i) {
    if (i) s += ' ';
    s += format_double(v.coords()[i]);
  }
  return s;
}

ordered_json CheckJson(const HierarchyCheck& c, bool requested) {
  ordered_json j;
  j["name"] = c.name;
  j["requested"] = requested;
  j["outcome"] = to_string(c.outcome);
  j["lhs"] = c.lhs;
  j["rhs"] = c.rhs;
  j["tol"] = c.tol;
  j["inequality_holds"] = c.inequality_holds();
  j["failed_preconditions"] = c.failed_preconditions;
  return j;
}

std::vector<MetricId> SelectMetrics(const AuditConfig& config, const PropertyModel& model) {
  if (config.metrics.empty()) {
    std::vector<MetricId> out;
    for (MetricId id : all_metric_ids()) {
      if (metric_applies(id, model)) out.push_back(id);
    }
    return out;
  }
  for (MetricId id : config.metrics) {
    if (!metric_applies(id, model)) {
      throw StructuralError("metric " + to_string(id) + " does not apply to " + model.id());
    }
  }
  return config.metrics;
}

ordered_json AvailabilitySection(const AuditInput& input, const ProtocolRun& run, const PropertyModel& model,
                                 const AuditConfig& config) {
  std::map<PropertyValue, std::size_t> levels;
  for (const auto& v : run.forecasts) ++levels[v];
  ordered_json out;
  out["levels"] = ordered_json::array();
  std::size_t index = 0;
  for (const auto& [v, rounds] : levels) {
    const auto ls = level_set(model.spec, v);
    ordered_json level;
    level["forecast"] = ValueJson(v);
    level["rounds"] = rounds;
    level["method"] = ls.has_vertices() ? "vertices" : "lp";
    if (ls.has_vertices()) {
      level["vertices"] = ordered_json::array();
      for (const auto& d : ls.vertices()) {
        level["vertices"].push_back(std::vector<double>(d.weights().begin(), d.weights().end()));
      }
    }
    const auto axioms = check_offer_axioms(ls, config.offer_samples, config.seed + index++, config.tol);
    level["offer_axioms"] = {{"samples", axioms.samples},
                             {"o1_violations", axioms.o1_violations},
                             {"o2_violations", axioms.o2_violations},
                             {"o3_violations", axioms.o3_violations},
                             {"o4_violations", axioms.o4_violations},
                             {"worst_residual", axioms.worst_residual},
                             {"ok", axioms.ok()}};
    out["levels"].push_back(std::move(level));
  }

  out["gambles"] = ordered_json::array();
  for (std::size_t i = 0; i < input.gambles.size(); ++i) {
    if (!input.gambles[i]) continue;
    const Gamble& g = *input.gambles[i];
    const auto& v = run.forecasts[i];
    const auto verdict = is_available(g, level_set(model.spec, v), config.tol);
    ordered_json e;
    e["t"] = input.t[i];
    e["forecast"] = ValueJson(v);
    e["gamble"] = std::vector<double>(g.values().begin(), g.values().end());
    e["available"] = verdict.available;
    e["sup_value"] = verdict.sup_value;
    const auto cal = dominated_by_calibration(g, model.identification, v, config.tol);
    e["calibration"] = cal ? ordered_json{{"dominated", true}, {"alpha", cal->alpha}, {"slack", cal->slack}}
                           : ordered_json{{"dominated", false}};
    if (model.spec.is_scalar()) {
      ScaledRegretSearch search;
      search.tol = config.tol;
      const auto sr = dominated_by_scaled_regret(g, model.loss, v, search);
      ordered_json s{{"status", to_string(sr.status)}};
      if (sr.certificate) {
        s["beta"] = sr.certificate->beta;
        s["c"] = ValueJson(sr.certificate->c);
        s["slack"] = sr.certificate->slack;
      }
      e["scaled_regret"] = std::move(s);
    } else {
      e["scaled_regret"] = nullptr;
    }
    out["gambles"].push_back(std::move(e));
  }
  return out;
}

}  // namespace

std::string AuditReport::dump() const { return document.dump(2) + "\n"; }

AuditReport run_audit(const AuditInput& input, const AuditConfig& config) {
  if (!(config.tol > 0.0)) throw PreconditionError("tolerance must be positive");
  const PropertyModel model = resolve_model(input, config);
  ProtocolRun run = input.run;
  run.validate(model.spec);
  if (config.bin_width) run = bin_forecasts(run, *config.bin_width);
  const GroupSystem groups = resolve_groups(run, config.groups);
  const auto metrics = SelectMetrics(config, model);

  AuditReport report;
  auto& doc = report.document;
  doc["schema_version"] = kReportSchemaVersion;
  doc["config"] = {{"property", model.spec.name()},
                   {"loss", model.loss.name()},
                   {"norm", to_string(config.norm)},
                   {"tol", config.tol},
                   {"groups", config.groups},
                   {"bin_width", config.bin_width ? ordered_json(*config.bin_width) : ordered_json(nullptr)},
                   {"seed", config.seed}};
  std::map<PropertyValue, std::size_t> distinct;
  for (const auto& v : run.forecasts) ++distinct[v];
  ordered_json group_names = ordered_json::array();
  for (const auto& g : groups) group_names.push_back(g.name);
  doc["run"] = {{"rounds", run.size()},
                {"outcomes", run.space.labels()},
                {"distinct_forecasts", distinct.size()},
                {"groups", group_names}};

  bool residual = false;
  bool precondition = false;

  if (config.sections.metrics) {
    ordered_json section = ordered_json::array();
    for (MetricId id : metrics) {
      section.push_back({{"id", to_string(id)}, {"value", direct_metric(id, run, model, groups)}});
    }
    doc["metrics"] = std::move(section);
  }

  std::string recovery_csv = "metric,direct,via_capital,abs_diff\n";
  if (config.sections.recovery) {
    ordered_json entries = ordered_json::array();
    bool all_ok = true;
    for (MetricId id : metrics) {
      const auto r = recover_via_gamblers(id, run, model, groups, config.norm);
      const bool ok = r.abs_diff <= config.tol;
      all_ok = all_ok && ok;
      entries.push_back({{"id", to_string(id)},
                         {"direct", r.direct},
                         {"via_capital", r.via_capital},
                         {"abs_diff", r.abs_diff},
                         {"gamblers", r.gamblers},
                         {"within_tolerance", ok}});
      recovery_csv += to_string(id) + "," + format_double(r.direct) + "," + format_double(r.via_capital) + "," +
                      format_double(r.abs_diff) + "\n";
    }
    residual = residual || !all_ok;
    doc["recovery"] = {{"tolerance", config.tol}, {"all_within_tolerance", all_ok}, {"entries", entries}};
  }

  if (config.sections.availability) doc["availability"] = AvailabilitySection(input, run, model, config);

  if (config.sections.hierarchy) {
    ordered_json checks = ordered_json::array();
    auto record = [&](const HierarchyCheck& c, bool requested) {
      if (c.outcome == CheckOutcome::kViolated) residual = true;
      if (requested && c.outcome == CheckOutcome::kPreconditionsViolated) precondition = true;
      checks.push_back(CheckJson(c, requested));
    };
    for (const auto& c : check_metric_orders(run, model, config.tol)) record(c, false);
    if (model.spec.kind() == PropertyKind::kMean) record(check_swap_vs_ece_bound(run, model.loss, config.tol), false);
    const std::vector<Restriction> fallback{NormBall{config.norm, std::nullopt}};
    const auto& shared = input.restrictions.empty() ? fallback : input.restrictions;
    if (!input.beliefs.empty() && !input.fine_beliefs.empty()) {
      record(check_refinement_order(run, model, input.beliefs, input.fine_beliefs, shared, config.tol), true);
    }
    if (!input.beliefs.empty() && !input.restrictions_prime.empty()) {
      record(check_restriction_order(run, model, input.beliefs, shared, input.restrictions_prime, config.tol), true);
    }
    doc["hierarchy"] = {{"checks", checks}};
  }

  std::string levels_csv = "forecast,rounds,mean_identification\n";
  for (const auto& [v, rounds] : distinct) {
    std::string mean_nu;
    if (model.spec.is_scalar()) {
      double s = 0.0;
      for (std::size_t t = 0; t < run.size(); ++t) {
        if (run.forecasts[t] == v) s += model.identification(run.outcomes[t], v);
      }
      mean_nu = format_double(s / static_cast<double>(rounds));
    }
    levels_csv += ValueCsv(v) + "," + std::to_string(rounds) + "," + mean_nu + "\n";
  }
  doc["tables"] = {{"forecast_levels", levels_csv}};
  if (config.sections.recovery) doc["tables"]["recovery"] = recovery_csv;

  report.exit_code = precondition ? kExitPrecondition : residual ? kExitResidual : kExitOk;
  doc["status"] = precondition ? "precondition_failure" : residual ? "residual_over_tolerance" : "ok";
  doc["exit_code"] = report.exit_code;
  return report;
}

// --- fixtures -----------------------------------------------------------------

namespace {

// Portable draws: std::mt19937_64 output is fixed by the standard, the
// distribution adaptors are not.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : gen_(seed) {}
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }
  double cents(double lo, double hi) { return std::round((lo + (hi - lo) * unit()) * 100.0) / 100.0; }

 private:
  std::mt19937_64 gen_;
};

std::vector<std::vector<std::string>> Tags(Draw& draw, std::size_t T, std::size_t tags) {
  std::vector<double> rate(tags);
  for (double& r : rate) r = 0.1 + 0.5 * draw.unit();
  std::vector<std::vector<std::string>> out(T);
  for (auto& ts : out) {
    for (std::size_t k = 0; k < tags; ++k) {
      if (draw.unit() < rate[k]) ts.push_back("g" + std::to_string(k));
    }
  }
  return out;
}

AuditInput RandomScalar(std::uint64_t seed, OutcomeSpace space, std::string property) {
  Draw draw(seed);
  AuditInput in;
  in.run.space = std::move(space);
  in.property = std::move(property);
  const std::size_t T = 150 + draw.index(51);
  std::vector<double> levels(2 + draw.index(6));
  for (double& v : levels) v = draw.cents(in.run.space.min_value(), in.run.space.max_value());
  const std::size_t n = in.run.space.size();
  for (std::size_t t = 0; t < T; ++t) {
    const double v = levels[draw.index(levels.size())];
    // Outcomes lean towards the forecast: pick the nearest value half the time.
    Outcome y = draw.index(n);
    if (draw.unit() < 0.5) {
      const auto values = in.run.space.numeric_values();
      y = static_cast<Outcome>(std::min_element(values.begin(), values.end(),
                                                [&](double a, double b) { return std::abs(a - v) < std::abs(b - v); }) -
                               values.begin());
    }
    in.t.push_back(t);
    in.run.forecasts.emplace_back(v);
    in.run.outcomes.push_back(y);
  }
  in.run.groups = Tags(draw, T, 3);
  return in;
}

AuditInput RandomDistribution(std::uint64_t seed) {
  Draw draw(seed);
  AuditInput in;
  in.run.space = OutcomeSpace({"low", "mid", "high"});
  in.property = "dist";
  const std::size_t T = 100 + draw.index(51);
  std::vector<std::vector<double>> levels(2 + draw.index(3));
  for (auto& w : levels) {
    const double a = draw.cents(0.05, 0.6);
    const double b = draw.cents(0.05, 0.9 - a);
    w = {a, b, std::round((1.0 - a - b) * 100.0) / 100.0};
  }
  for (std::size_t t = 0; t < T; ++t) {
    const auto& w = levels[draw.index(levels.size())];
    const double u = draw.unit();
    const Outcome y = u < w[0] ? 0 : u < w[0] + w[1] ? 1 : 2;
    in.t.push_back(t);
    in.run.forecasts.emplace_back(w);
    in.run.outcomes.push_back(y);
  }
  in.run.groups = Tags(draw, T, 2);
  return in;
}

}  // namespace

std::vector<Fixture> make_fixtures(std::uint64_t seed) {
  std::vector<Fixture> out;

  AuditInput boundary;
  boundary.property = "mean";
  const std::vector<std::vector<double>> gambles{
      {-0.4, 0.6}, {-0.45, 0.55}, {-0.405, 0.595}, {-0.4005, 0.5995}};
  for (std::size_t t = 0; t < gambles.size(); ++t) {
    boundary.t.push_back(t);
    boundary.run.forecasts.emplace_back(0.4);
    boundary.run.outcomes.push_back(t % 2);
    boundary.gambles.emplace_back(Gamble(gambles[t]));
  }
  out.push_back({"boundary_geometry", boundary});

  AuditInput cx;
  cx.property = "mean";
  for (std::size_t t = 0; t < 3; ++t) {
    cx.t.push_back(t);
    cx.run.forecasts.emplace_back(5.0 / 12.0);
    cx.beliefs.emplace_back(Distribution({2.0 / 3.0, 1.0 / 3.0}));
  }
  cx.run.outcomes = {0, 1, 0};
  cx.fine_beliefs = {Distribution({0.5, 0.5}), Distribution({0.5, 0.5}), Distribution::Dirac(2, 0)};
  cx.restrictions = {NormBall{Norm::kL1, 1.0}, NonPositive{}, NonPositive{}};
  out.push_back({"refinement_counterexample", cx});

  const std::string s = std::to_string(seed);
  out.push_back({"random_binary_seed" + s, RandomScalar(seed, OutcomeSpace::Binary(), "mean")});
  out.push_back({"random_numeric_seed" + s,
                 RandomScalar(seed + 1, OutcomeSpace::Numeric({0.0, 0.25, 0.5, 0.75, 1.0}), "quantile@0.3")});
  out.push_back({"random_labels_seed" + s, RandomDistribution(seed + 2)});
  return out;
}

}  // namespace fairgamble
