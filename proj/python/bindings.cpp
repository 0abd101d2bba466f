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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "fairgamble/audit.hpp"
#include "fairgamble/availability.hpp"
#include "fairgamble/errors.hpp"
#include "fairgamble/gambler.hpp"
#include "fairgamble/hierarchy.hpp"
#include "fairgamble/metrics.hpp"

namespace py = pybind11;
namespace fg = fairgamble;

namespace {

fg::PropertyValue ToValue(const py::handle& x) {
  if (py::isinstance<py::float_>(x) || py::isinstance<py::int_>(x)) return fg::PropertyValue(x.cast<double>());
  return fg::PropertyValue(x.cast<std::vector<double>>());
}

py::object FromValue(const fg::PropertyValue& v) {
  if (v.is_scalar()) return py::float_(v.scalar());
  return py::cast(v.coords());
}

std::vector<double> Values(const fg::Gamble& g) { return {g.values().begin(), g.values().end()}; }

std::vector<fg::Belief> ToBeliefs(const std::vector<std::optional<std::vector<double>>>& xs) {
  std::vector<fg::Belief> out;
  for (const auto& x : xs) {
    if (x) {
      out.emplace_back(fg::Distribution(*x));
    } else {
      out.emplace_back(std::nullopt);
    }
  }
  return out;
}

std::vector<fg::Restriction> ToRestrictions(const std::vector<std::string>& ids) {
  std::vector<fg::Restriction> out;
  for (const auto& id : ids) out.push_back(fg::parse_restriction(id));
  return out;
}

fg::ProtocolRun MakeRun(const fg::OutcomeSpace& space, const py::list& forecasts, std::vector<std::size_t> outcomes,
                        std::vector<std::vector<std::string>> groups) {
  fg::ProtocolRun run;
  run.space = space;
  for (const auto& f : forecasts) run.forecasts.push_back(ToValue(f));
  run.outcomes = std::move(outcomes);
  run.groups = std::move(groups);
  return run;
}

py::dict CheckDict(const fg::HierarchyCheck& c) {
  py::dict d;
  d["name"] = c.name;
  d["outcome"] = fg::to_string(c.outcome);
  d["lhs"] = c.lhs;
  d["rhs"] = c.rhs;
  d["tol"] = c.tol;
  d["failed_preconditions"] = c.failed_preconditions;
  return d;
}

}  // namespace

PYBIND11_MODULE(_fairgamble, m) {
  m.doc() = "Forecast evaluation through fair gamblers on finite outcome spaces.";

  py::register_exception<fg::StructuralError>(m, "StructuralError", PyExc_ValueError);
  py::register_exception<fg::DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<fg::PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<fg::NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<fg::IngestError>(m, "IngestError", PyExc_ValueError);

  py::class_<fg::OutcomeSpace>(m, "OutcomeSpace")
      .def(py::init([](std::vector<std::string> labels) { return fg::OutcomeSpace(std::move(labels)); }),
           py::arg("labels"))
      .def_static("binary", &fg::OutcomeSpace::Binary)
      .def_static("numeric", &fg::OutcomeSpace::Numeric, py::arg("values"))
      .def("__len__", &fg::OutcomeSpace::size)
      .def_property_readonly("labels", &fg::OutcomeSpace::labels)
      .def_property_readonly("values",
                             [](const fg::OutcomeSpace& s) -> py::object {
                               if (!s.has_numeric_values()) return py::none();
                               auto v = s.numeric_values();
                               return py::cast(std::vector<double>(v.begin(), v.end()));
                             })
      .def("__eq__", [](const fg::OutcomeSpace& a, const fg::OutcomeSpace& b) { return a == b; });

  py::class_<fg::PropertyModel>(m, "PropertyModel")
      .def(py::init(&fg::parse_property_model), py::arg("id"), py::arg("space"),
           "Parses 'mean', 'quantile@0.3', 'dist', optionally with '+squared' etc.")
      .def_property_readonly("id", &fg::PropertyModel::id)
      .def("loss", [](const fg::PropertyModel& pm, std::size_t y, const py::handle& v) { return pm.loss(y, ToValue(v)); })
      .def("identification", [](const fg::PropertyModel& pm, std::size_t y, const py::handle& v) {
        return pm.identification(y, ToValue(v));
      })
      .def("scaled_loss", [](fg::PropertyModel pm, double scale, double offset) {
        pm.loss = pm.loss.affine(scale, offset);
        return pm;
      });

  py::class_<fg::ProtocolRun>(m, "ProtocolRun")
      .def(py::init(&MakeRun), py::arg("space"), py::arg("forecasts"), py::arg("outcomes"),
           py::arg("groups") = std::vector<std::vector<std::string>>{})
      .def("__len__", &fg::ProtocolRun::size)
      .def_property_readonly("forecasts",
                             [](const fg::ProtocolRun& r) {
                               py::list out;
                               for (const auto& v : r.forecasts) out.append(FromValue(v));
                               return out;
                             })
      .def_readonly("outcomes", &fg::ProtocolRun::outcomes)
      .def_readonly("groups", &fg::ProtocolRun::groups);

  m.def(
      "level_set_vertices",
      [](const fg::PropertyModel& pm, const py::handle& v) -> py::object {
        const auto ls = fg::level_set(pm.spec, ToValue(v));
        if (!ls.has_vertices()) return py::none();
        std::vector<std::vector<double>> out;
        for (const auto& d : ls.vertices()) out.emplace_back(d.weights().begin(), d.weights().end());
        return py::cast(out);
      },
      py::arg("model"), py::arg("forecast"));

  m.def(
      "is_available",
      [](const fg::PropertyModel& pm, const py::handle& v, std::vector<double> g, double tol) {
        const auto r = fg::is_available(fg::Gamble(std::move(g)), fg::level_set(pm.spec, ToValue(v)), tol);
        return py::make_tuple(r.available, r.sup_value);
      },
      py::arg("model"), py::arg("forecast"), py::arg("gamble"), py::arg("tol") = fg::kAvailabilityTolerance,
      "Returns (available, sup of the expected gamble over the level set).");

  m.def(
      "dominated_by_calibration",
      [](const fg::PropertyModel& pm, const py::handle& v, std::vector<double> g, double tol) -> py::object {
        const auto c = fg::dominated_by_calibration(fg::Gamble(std::move(g)), pm.identification, ToValue(v), tol);
        if (!c) return py::none();
        return py::make_tuple(c->alpha, Values(c->dominating), c->slack);
      },
      py::arg("model"), py::arg("forecast"), py::arg("gamble"), py::arg("tol") = fg::kAvailabilityTolerance);

  m.def(
      "dominated_by_scaled_regret",
      [](const fg::PropertyModel& pm, const py::handle& v, std::vector<double> g, double beta_max) {
        fg::ScaledRegretSearch search;
        search.beta_max = beta_max;
        const auto r = fg::dominated_by_scaled_regret(fg::Gamble(std::move(g)), pm.loss, ToValue(v), search);
        py::dict d;
        d["status"] = fg::to_string(r.status);
        if (r.certificate) {
          d["beta"] = r.certificate->beta;
          d["c"] = FromValue(r.certificate->c);
        }
        return d;
      },
      py::arg("model"), py::arg("forecast"), py::arg("gamble"), py::arg("beta_max") = 1e6);

  m.def("metric_ids", [] {
    std::vector<std::string> out;
    for (auto id : fg::all_metric_ids()) out.push_back(fg::to_string(id));
    return out;
  });

  m.def(
      "direct_metric",
      [](const std::string& id, const fg::ProtocolRun& run, const fg::PropertyModel& pm, const std::string& groups) {
        return fg::direct_metric(fg::parse_metric_id(id), run, pm, fg::resolve_groups(run, groups));
      },
      py::arg("id"), py::arg("run"), py::arg("model"), py::arg("groups") = "tags");

  m.def(
      "recover",
      [](const std::string& id, const fg::ProtocolRun& run, const fg::PropertyModel& pm, const std::string& groups,
         const std::string& norm) {
        const auto r = fg::recover_via_gamblers(fg::parse_metric_id(id), run, pm, fg::resolve_groups(run, groups),
                                                fg::parse_norm(norm));
        py::dict d;
        d["direct"] = r.direct;
        d["via_capital"] = r.via_capital;
        d["abs_diff"] = r.abs_diff;
        d["gamblers"] = r.gamblers;
        return d;
      },
      py::arg("id"), py::arg("run"), py::arg("model"), py::arg("groups") = "tags", py::arg("norm") = "l1",
      "The metric computed directly and as the aggregated capital of its gambler family.");

  m.def(
      "capital",
      [](const fg::ProtocolRun& run, const fg::PropertyModel& pm,
         const std::vector<std::optional<std::vector<double>>>& beliefs, const std::vector<std::string>& restrictions) {
        fg::GamblerSpec spec;
        spec.beliefs = ToBeliefs(beliefs);
        spec.restrictions = ToRestrictions(restrictions);
        return fg::capital(fg::play(spec, run, pm), run.outcomes);
      },
      py::arg("run"), py::arg("model"), py::arg("beliefs"), py::arg("restrictions"),
      "Capital of a rational gambler; beliefs are distributions or None (opt out).");

  m.def(
      "check_metric_orders",
      [](const fg::ProtocolRun& run, const fg::PropertyModel& pm) {
        py::list out;
        for (const auto& c : fg::check_metric_orders(run, pm)) out.append(CheckDict(c));
        return out;
      },
      py::arg("run"), py::arg("model"));
  m.def(
      "check_swap_vs_ece_bound",
      [](const fg::ProtocolRun& run, const fg::PropertyModel& pm) {
        return CheckDict(fg::check_swap_vs_ece_bound(run, pm.loss));
      },
      py::arg("run"), py::arg("model"));
  m.def(
      "check_refinement_order",
      [](const fg::ProtocolRun& run, const fg::PropertyModel& pm,
         const std::vector<std::optional<std::vector<double>>>& coarse,
         const std::vector<std::optional<std::vector<double>>>& fine, const std::vector<std::string>& restrictions) {
        return CheckDict(fg::check_refinement_order(run, pm, ToBeliefs(coarse), ToBeliefs(fine),
                                                    ToRestrictions(restrictions)));
      },
      py::arg("run"), py::arg("model"), py::arg("coarse"), py::arg("fine"), py::arg("restrictions"));

  m.def(
      "audit",
      [](const std::string& jsonl, std::optional<std::string> property, std::optional<std::string> loss,
         const std::string& norm, double tol, const std::string& groups, std::optional<double> bin_width,
         std::uint64_t seed) {
        fg::AuditConfig config;
        config.property = std::move(property);
        config.loss = std::move(loss);
        config.norm = fg::parse_norm(norm);
        config.tol = tol;
        config.groups = groups;
        config.bin_width = bin_width;
        config.seed = seed;
        std::istringstream in(jsonl);
        const auto report = fg::run_audit(fg::parse_jsonl(in, config), config);
        return py::make_tuple(report.dump(), report.exit_code);
      },
      py::arg("jsonl"), py::arg("property") = py::none(), py::arg("loss") = py::none(), py::arg("norm") = "l1",
      py::arg("tol") = 1e-9, py::arg("groups") = "tags", py::arg("bin_width") = py::none(), py::arg("seed") = 42,
      "Runs the full audit on JSON Lines text; returns (report JSON text, exit code).");

  m.def(
      "fixtures",
      [](std::uint64_t seed) {
        py::dict out;
        for (const auto& f : fg::make_fixtures(seed)) out[py::str(f.name)] = fg::emit_jsonl(f.input);
        return out;
      },
      py::arg("seed") = 42);

  m.attr("SCHEMA_VERSION") = fg::kReportSchemaVersion;
}
