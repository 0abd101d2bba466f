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

// Audit pipeline: JSON Lines ingestion, the audit report, and the fixture
// corpus shipped with the command-line tool.
//
// Input format, one JSON object per line:
//   {"space": {"values": [0, 0.5, 1]}, "property": "mean"}      optional header
//   {"t": 0, "forecast": 0.4, "outcome": 1, "groups": ["a"]}
// "space" may instead give {"labels": [...]}; without a header the space is
// binary {0, 1}. Optional per-round fields: "belief" and "fine_belief"
// (distribution or null for opt-out), "restriction" and "restriction_prime"
// (a restriction id such as "l1_ball(1)", or {"finite": [[...], ...]}), and
// "gamble" (one value per outcome).

#ifndef FAIRGAMBLE_AUDIT_HPP_
#define FAIRGAMBLE_AUDIT_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fairgamble/gambler.hpp"
#include "fairgamble/metrics.hpp"

namespace fairgamble {

inline constexpr int kReportSchemaVersion = 1;

enum ExitCode : int {
  kExitOk = 0,
  kExitIngestion = 2,
  kExitResidual = 3,
  kExitPrecondition = 4,
};

// Schema violations, one entry per offending line ("line 3: ...").
class IngestError : public std::runtime_error {
 public:
  explicit IngestError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

struct AuditInput {
  ProtocolRun run;
  std::string property;            // header hint, empty if none
  std::vector<std::size_t> t;      // record index of each round, increasing
  // Each optional field is empty or has one entry per round.
  std::vector<Belief> beliefs;
  std::vector<Belief> fine_beliefs;
  std::vector<Restriction> restrictions;
  std::vector<Restriction> restrictions_prime;
  std::vector<std::optional<Gamble>> gambles;

  bool operator==(const AuditInput&) const = default;
};

struct AuditSections {
  bool metrics = true;
  bool recovery = true;
  bool availability = true;
  bool hierarchy = true;
};

// "tags": all rounds plus one group per tag; "all": all rounds only; otherwise
// a comma-separated list of tags, each joined with the group of all rounds.
struct AuditConfig {
  std::optional<std::string> property;  // overrides the header; default "mean"
  std::optional<std::string> loss;      // "squared", "pinball", "brier", optionally "*a+b"
  Norm norm = Norm::kL1;
  double tol = 1e-9;
  std::vector<MetricId> metrics;        // empty: every applicable metric
  std::string groups = "tags";
  std::optional<double> bin_width;
  std::uint64_t seed = 42;
  std::size_t offer_samples = 200;
  AuditSections sections;
};

// Throws IngestError listing every offending line.
AuditInput parse_jsonl(std::istream& in, const AuditConfig& config);
AuditInput ingest(const std::filesystem::path& path, const AuditConfig& config);
std::string emit_jsonl(const AuditInput& input);

// The property model the config selects for this input.
PropertyModel resolve_model(const AuditInput& input, const AuditConfig& config);
GroupSystem resolve_groups(const ProtocolRun& run, const std::string& groups);

struct AuditReport {
  nlohmann::ordered_json document;
  int exit_code = kExitOk;

  // Pretty-printed document with a trailing newline.
  std::string dump() const;
};

AuditReport run_audit(const AuditInput& input, const AuditConfig& config);

struct Fixture {
  std::string name;  // file stem
  AuditInput input;
};

// Example-8 geometry, the refinement counterexample and seeded random corpora.
std::vector<Fixture> make_fixtures(std::uint64_t seed);

}  // namespace fairgamble

#endif  // FAIRGAMBLE_AUDIT_HPP_
