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

// Acceptance checks: one PASS/FAIL line per criterion, exit status 0 iff all
// pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fairgamble/audit.hpp"
#include "fairgamble/availability.hpp"
#include "fairgamble/errors.hpp"
#include "fairgamble/gambler.hpp"
#include "fairgamble/hierarchy.hpp"
#include "fairgamble/metrics.hpp"
#include "test_util.hpp"

namespace fg = fairgamble;
using fg::testing::RandomDistribution;
using fg::testing::RandomGamble;
using fg::testing::RandomNumericSpace;
using fg::testing::RandomRun;
using fg::testing::Rng;
using fg::testing::Uniform;
using fg::testing::UniformIndex;

namespace {

struct Result {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, x);
  return buf;
}

// A gamble available at `ls`: a random gamble pushed down by its supremum.
fg::Gamble RandomAvailable(Rng& rng, const fg::LevelSetPolytope& ls) {
  fg::Gamble g = RandomGamble(rng, ls.dimension());
  const double sup = fg::is_available(g, ls, 0.0).sup_value;
  return g - fg::Gamble::Constant(ls.dimension(), sup + Uniform(rng, 0.0, 0.2));
}

Result RecoveryEqualities() {
  Rng rng(20261016);
  std::map<fg::MetricId, double> worst;
  std::map<fg::MetricId, int> over;
  int straddling = 0, one_sided_bias_misses = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const auto space = RandomNumericSpace(rng, 2 + rep % 4);
    const auto run = RandomRun(rng, space, 200, 7);
    const auto groups = fg::groups_from_tags(run);
    const auto model = fg::parse_property_model("mean", space);
    double ybar = 0.0;
    for (auto y : run.outcomes) ybar += space.value(y);
    ybar /= static_cast<double>(run.size());
    bool below = false, above = false;
    for (const auto& v : run.forecasts) {
      below = below || v.scalar() < ybar;
      above = above || v.scalar() > ybar;
    }
    straddling += below && above;
    for (fg::MetricId id : fg::all_metric_ids()) {
      const auto r = fg::recover_via_gamblers(id, run, model, groups);
      worst[id] = std::max(worst[id], r.abs_diff);
      if (r.abs_diff > 1e-9) {
        ++over[id];
        if (id == fg::MetricId::kBiasLarge && !(below && above)) ++one_sided_bias_misses;
      }
    }
  }
  Result res{true, ""};
  double others = 0.0;
  for (const auto& [id, w] : worst) {
    if (over[id] > 0) {
      res.pass = false;
      res.detail += fg::to_string(id) + ": " + std::to_string(over[id]) + "/200 runs over 1e-9, max |diff| " +
                    Fmt("%.3g", w) + "; ";
    } else {
      others = std::max(others, w);
    }
  }
  res.detail += "other metrics max |diff| " + Fmt("%.3g", others) + "; forecasts straddle the mean outcome in " +
                std::to_string(straddling) + " runs, bias_large misses on one-sided runs: " +
                std::to_string(one_sided_bias_misses);
  return res;
}

Result ClairvoyantSanity() {
  Rng rng(90210);
  double worst = -1e300;
  int gamblers = 0;
  const char* properties[] = {"mean", "quantile@0.3", "quantile@0.5", "dist"};
  for (int rep = 0; rep < 1000; ++rep) {
    const auto space = RandomNumericSpace(rng, 2 + rep % 4);
    const auto model = fg::parse_property_model(properties[rep % 4], space);
    fg::ProtocolRun run;
    run.space = space;
    const std::size_t T = 1 + UniformIndex(rng, 30);
    for (std::size_t t = 0; t < T; ++t) {
      const fg::Outcome y = UniformIndex(rng, space.size());
      run.outcomes.push_back(y);
      run.forecasts.push_back(
          fg::evaluate_property(model.spec, fg::Distribution::Dirac(space.size(), y)).representative());
    }
    std::vector<fg::Gamble> gambles;
    if (rep % 2 == 0) {
      for (std::size_t t = 0; t < T; ++t) gambles.push_back(RandomAvailable(rng, fg::level_set(model.spec, run.forecasts[t])));
    } else {
      // A rational gambler with arbitrary beliefs and a random restriction.
      fg::GamblerSpec spec;
      for (std::size_t t = 0; t < T; ++t) spec.beliefs.push_back(RandomDistribution(rng, space.size()));
      switch (rep % 3) {
        case 0:
          spec.restrictions = {fg::RegretGambles{Uniform(rng, 0.1, 3.0)}};
          break;
        case 1:
          spec.restrictions = {fg::NormBall{fg::Norm::kL1, Uniform(rng, 0.1, 2.0)}};
          break;
        default: {
          fg::FiniteSet set{{fg::Gamble::Zero(space.size())}};
          for (int k = 0; k < 5; ++k) set.gambles.push_back(RandomGamble(rng, space.size()));
          spec.restrictions = {set};
        }
      }
      gambles = fg::play(spec, run, model);
    }
    worst = std::max(worst, fg::capital(gambles, run.outcomes));
    ++gamblers;
  }
  // The converse: a gamble paying at the realized outcome.
  const auto space = fg::OutcomeSpace::Binary();
  const auto model = fg::parse_property_model("mean", space);
  std::vector<fg::Outcome> ys{0, 1, 1};
  std::vector<fg::Gamble> unfair;
  bool flagged = true;
  for (auto y : ys) {
    unfair.push_back(fg::Gamble(std::vector<double>{y == 0 ? 1.0 : 0.0, y == 1 ? 1.0 : 0.0}));
    flagged = flagged && !fg::is_available(unfair.back(), fg::level_set(model.spec, space.value(y))).available;
  }
  const double k_unfair = fg::capital(unfair, ys);
  return {worst <= 1e-12 && k_unfair > 0.0 && flagged,
          std::to_string(gamblers) + " fair gamblers, max K " + Fmt("%.3g", worst) + "; unfair gamble K " +
              Fmt("%.3g", k_unfair) + (flagged ? ", rejected as unavailable" : ", NOT rejected")};
}

Result FiniteCharacterization() {
  Rng rng(31337);
  int disagreements = 0, available = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const auto space = RandomNumericSpace(rng, 2 + rep % 2);
    const auto spec = fg::PropertySpec::Mean(space);
    const auto idf = fg::IdentificationFunction::For(spec);
    const fg::PropertyValue v(Uniform(rng, space.min_value(), space.max_value()));
    const auto ls = fg::level_set(spec, v);
    fg::Gamble g = RandomGamble(rng, space.size());
    const double sup = fg::is_available(g, ls, 0.0).sup_value;
    g = g - fg::Gamble::Constant(space.size(), sup + Uniform(rng, -0.2, 0.2));
    const bool avail = fg::is_available(g, ls, 1e-9).available;
    const bool dominated = fg::dominated_by_calibration(g, idf, v, 1e-9).has_value();
    available += avail;
    disagreements += avail != dominated;
  }
  return {disagreements == 0, "1000 gambles (" + std::to_string(available) + " available), " +
                                  std::to_string(disagreements) + " disagreements"};
}

Result BoundaryGeometry() {
  const auto spec = fg::PropertySpec::Mean(fg::OutcomeSpace::Binary());
  const auto sq = fg::ScoringFunction::Squared(spec);
  const fg::Gamble limit({-0.4, 0.6});
  const auto verdict = fg::is_available(limit, fg::level_set(spec, 0.4));
  bool ok = verdict.available && verdict.sup_value == 0.0;
  double worst = 0.0;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    const auto cert = fg::scaled_regret_gamble(sq, 0.4, 0.4 + eps, 1.0 / (2.0 * eps));
    const double d = std::hypot(cert[0] - limit[0], cert[1] - limit[1]);
    worst = std::max(worst, std::abs(d - eps / std::sqrt(2.0)));
  }
  ok = ok && worst <= 1e-12;
  fg::ScaledRegretSearch search;
  search.beta_max = 1e6;
  const auto closure = fg::dominated_by_scaled_regret(limit, sq, 0.4, search);
  ok = ok && closure.status == fg::DominationStatus::kInconclusiveClosure;
  return {ok, "sup " + Fmt("%.3g", verdict.sup_value) + ", certificate distance error " + Fmt("%.3g", worst) +
                  ", limit point " + fg::to_string(closure.status)};
}

Result Hierarchy() {
  Rng rng(5150);
  auto model = fg::parse_property_model("mean", fg::OutcomeSpace::Binary());
  model.loss = model.loss.affine(2.0, -1.0);
  int bound_fail = 0, chain_fail = 0;
  double margin = 1e300;
  for (int rep = 0; rep < 500; ++rep) {
    const auto run = RandomRun(rng, fg::OutcomeSpace::Binary(), 200, 0);
    const auto c = fg::check_swap_vs_ece_bound(run, model.loss);
    bound_fail += c.outcome != fg::CheckOutcome::kHolds;
    margin = std::min(margin, c.rhs - c.lhs);
    for (const auto& o : fg::check_metric_orders(run, model)) chain_fail += o.outcome != fg::CheckOutcome::kHolds;
  }
  const auto input = fg::ingest(std::string(FAIRGAMBLE_FIXTURE_DIR) + "/refinement_counterexample.jsonl", {});
  const auto plain = fg::resolve_model(input, {});
  const auto cx = fg::check_refinement_order(input.run, plain, input.beliefs, input.fine_beliefs, input.restrictions);
  const bool cx_ok = cx.outcome == fg::CheckOutcome::kPreconditionsViolated &&
                     std::abs(cx.lhs - 5.0 / 36.0) <= 1e-12 && std::abs(cx.rhs + 5.0 / 36.0) <= 1e-12;
  return {bound_fail == 0 && chain_fail == 0 && cx_ok,
          "swap bound failures " + std::to_string(bound_fail) + " (min slack " + Fmt("%.3g", margin) +
              "), chain failures " + std::to_string(chain_fail) + ", counterexample K = " + Fmt("%.15g", cx.lhs) +
              " vs " + Fmt("%.15g", cx.rhs) + " (" + fg::to_string(cx.outcome) + ")"};
}

Result OfferAxioms() {
  Rng rng(8086);
  std::size_t violations = 0, samples = 0;
  const char* properties[] = {"mean", "quantile@0.25", "dist"};
  for (int k = 0; k < 20; ++k) {
    const auto space = RandomNumericSpace(rng, 2 + k % 4);
    const auto spec = fg::parse_property_model(properties[k % 3], space).spec;
    fg::PropertyValue v;
    if (spec.is_scalar()) {
      v = fg::PropertyValue(Uniform(rng, space.min_value(), space.max_value()));
    } else {
      v = fg::PropertyValue(RandomDistribution(rng, space.size()));
    }
    const auto r = fg::check_offer_axioms(fg::level_set(spec, v), 1000, 1000 + k);
    samples += r.samples;
    violations += r.o1_violations + r.o2_violations + r.o3_violations + r.o4_violations;
  }
  int vacuous_mismatch = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t n = 2 + rep % 4;
    const auto g = RandomGamble(rng, n) - fg::Gamble::Constant(n, Uniform(rng, -0.5, 1.5));
    const bool avail = fg::is_available(g, fg::LevelSetPolytope::Simplex(n)).available;
    vacuous_mismatch += avail != (g.max() <= 0.0);
  }
  return {violations == 0 && vacuous_mismatch == 0,
          std::to_string(samples) + " samples on 20 level sets, " + std::to_string(violations) +
              " violations; vacuous level set mismatches " + std::to_string(vacuous_mismatch) + "/1000"};
}

Result Determinism() {
  int files = 0, differing = 0;
  for (const auto& f : fg::make_fixtures(42)) {
    fg::AuditConfig config;
    config.seed = 42;
    const auto input = fg::ingest(std::string(FAIRGAMBLE_FIXTURE_DIR) + "/" + f.name + ".jsonl", config);
    const std::string first = fg::run_audit(input, config).dump();
    for (int k = 0; k < 2; ++k) differing += fg::run_audit(input, config).dump() != first;
    ++files;
  }
  return {differing == 0, std::to_string(files) + " fixtures x 3 runs, " + std::to_string(differing) + " differing"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Result()> run;
  };
  const Criterion criteria[] = {
      {"recovery equalities", RecoveryEqualities}, {"clairvoyant sanity", ClairvoyantSanity},
      {"finite characterization", FiniteCharacterization}, {"boundary geometry", BoundaryGeometry},
      {"hierarchy", Hierarchy}, {"offer axioms", OfferAxioms}, {"determinism", Determinism},
  };
  int failed = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %d %s: %s [%.2fs]\n", r.pass ? "PASS" : "FAIL", index, c.name, r.detail.c_str(), secs);
    failed += !r.pass;
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
