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

// fairgamble: audit forecasts from a JSON Lines file.
//
//   fairgamble metrics      run.jsonl [--property mean] [--groups tags] ...
//   fairgamble verify       run.jsonl --tol 1e-9
//   fairgamble availability run.jsonl --seed 7
//   fairgamble hierarchy    run.jsonl
//   fairgamble fixtures     --out fixtures --seed 42
//
// Exit codes: 0 ok, 2 ingestion or configuration error, 3 residual over
// tolerance, 4 precondition failure in a requested hierarchy check.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI/CLI.hpp>

#include "fairgamble/audit.hpp"
#include "fairgamble/errors.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitInternal = 1;

struct Options {
  std::string input;
  std::string property;
  std::string loss;
  std::string norm = "l1";
  double tol = 1e-9;
  std::string groups = "tags";
  double bin_width = 0.0;
  std::uint64_t seed = 42;
  std::string out;
  std::vector<std::string> metrics;
};

void AddAuditFlags(CLI::App* cmd, Options& o) {
  cmd->add_option("input", o.input, "JSON Lines file, one round per line")->required()->check(CLI::ExistingFile);
  cmd->add_option("--property", o.property, "mean, quantile@TAU or dist (default: file header, else mean)");
  cmd->add_option("--loss", o.loss, "squared, pinball or brier, optionally scaled as squared*2-1");
  cmd->add_option("--norm", o.norm, "norm of the calibration gamblers' ball")->check(CLI::IsMember({"l1", "lsup", "linf"}));
  cmd->add_option("--tol", o.tol, "residual tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--groups", o.groups, "tags, all, or a comma-separated list of tags");
  cmd->add_option("--bin-width", o.bin_width, "snap scalar forecasts to bins of this width")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "seed for sampled checks");
  cmd->add_option("--metric", o.metrics, "restrict to these metric ids (repeatable)");
  cmd->add_option("--out", o.out, "write the report here instead of stdout");
}

// Writes through a temporary file so readers never see a partial report.
void WriteAtomically(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << text;
    if (!f.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

void Emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
  } else {
    WriteAtomically(o.out, text);
  }
}

int RunAudit(const Options& o, const fairgamble::AuditSections& sections) {
  fairgamble::AuditConfig config;
  if (!o.property.empty()) config.property = o.property;
  if (!o.loss.empty()) config.loss = o.loss;
  config.norm = fairgamble::parse_norm(o.norm);
  config.tol = o.tol;
  config.groups = o.groups;
  if (o.bin_width > 0.0) config.bin_width = o.bin_width;
  config.seed = o.seed;
  for (const auto& id : o.metrics) config.metrics.push_back(fairgamble::parse_metric_id(id));
  config.sections = sections;

  const auto input = fairgamble::ingest(o.input, config);
  const auto report = fairgamble::run_audit(input, config);
  Emit(o, report.dump());
  return report.exit_code;
}

int RunFixtures(const Options& o) {
  const fs::path dir = o.out.empty() ? fs::path("fixtures") : fs::path(o.out);
  fs::create_directories(dir);
  for (const auto& f : fairgamble::make_fixtures(o.seed)) {
    WriteAtomically(dir / (f.name + ".jsonl"), fairgamble::emit_jsonl(f.input));
    std::cout << (dir / (f.name + ".jsonl")).string() << "\n";
  }
  return fairgamble::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Forecast audits through fair gamblers"};
  app.require_subcommand(1);
  Options o;

  struct Command {
    const char* name;
    const char* help;
    fairgamble::AuditSections sections;
  };
  const Command commands[] = {
      {"metrics", "direct metric values", {true, false, false, false}},
      {"verify", "metrics recovered from gambler capitals, with residuals", {false, true, false, false}},
      {"availability", "level sets, offer axioms and availability of supplied gambles", {false, false, true, false}},
      {"hierarchy", "capital orderings and metric orders", {false, false, false, true}},
  };
  std::vector<CLI::App*> subs;
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    AddAuditFlags(sub, o);
    subs.push_back(sub);
  }
  auto* fixtures = app.add_subcommand("fixtures", "write the fixture corpus");
  fixtures->add_option("--out", o.out, "output directory (default: fixtures)");
  fixtures->add_option("--seed", o.seed, "seed of the random corpora");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : fairgamble::kExitIngestion;
  }

  try {
    if (fixtures->parsed()) return RunFixtures(o);
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i]->parsed()) return RunAudit(o, commands[i].sections);
    }
  } catch (const fairgamble::IngestError& e) {
    std::cerr << e.what() << "\n";
    return fairgamble::kExitIngestion;
  } catch (const fairgamble::StructuralError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fairgamble::kExitIngestion;
  } catch (const fairgamble::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fairgamble::kExitIngestion;
  } catch (const fairgamble::PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fairgamble::kExitIngestion;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
