// Copyright 2026 The mvbc Authors
// SPDX-License-Identifier: Apache-2.0

// Python extension exposing the field, code, cost model and simulator.
// Structured results cross the boundary as JSON text; the mvbc package
// decodes them into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mvbc/consensus.hpp"
#include "mvbc/error.hpp"
#include "mvbc/explain.hpp"
#include "mvbc/galois_field.hpp"
#include "mvbc/metrics.hpp"
#include "mvbc/rs_code.hpp"
#include "mvbc/simulator.hpp"
#include "mvbc/strategies.hpp"

namespace py = pybind11;
using namespace mvbc;

namespace {

  gf::FieldElement elem(const gf::FieldSpec &f, std::uint32_t v) { return f.element(v); }

  rs::CodeSpec make_code(std::size_t n, std::size_t k, unsigned c) { return rs::CodeSpec(n, k, gf::FieldSpec(c)); }

  rs::PartialView to_view(const rs::CodeSpec &code, const std::vector<std::optional<std::uint32_t>> &slots) {
    rs::PartialView view = rs::PartialView::unknown(slots.size());
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (slots[i]) view.slots[i] = code.field().element(*slots[i]);
    }
    return view;
  }

  std::vector<std::uint32_t> values(const std::vector<gf::FieldElement> &v) {
    std::vector<std::uint32_t> out;
    for (auto e : v) out.push_back(e.value());
    return out;
  }

  json config_json(const ConsensusConfig &c) {
    return {{"n", c.n},         {"t", c.t},     {"k", c.k()},
            {"L", c.L},         {"padded_L", c.padded_L},
            {"D", c.D},         {"c", c.c},     {"stripes", c.stripes},
            {"symbol_bits", c.symbol_bits()}, {"generations", c.generations()},
            {"B", c.measured_B}};
  }

  json cost_json(const metrics::StageCost &s) {
    return {{"data_bits", s.data_bits}, {"bsb_invocations", s.bsb_invocations}, {"bsb_bits", s.bsb_bits}};
  }

}  // namespace

PYBIND11_MODULE(_mvbc, m) {
  m.doc() = "Error-free multi-valued Byzantine consensus: core bindings";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
  py::register_exception<UsageError>(m, "UsageError", error.ptr());
  py::register_exception<DomainError>(m, "DomainError", error.ptr());
  py::register_exception<InsufficientInformation>(m, "InsufficientInformation", error.ptr());
  py::register_exception<Inconsistency>(m, "Inconsistency", error.ptr());
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<InvariantViolation>(m, "InvariantViolation", error.ptr());

  py::class_<gf::FieldSpec>(m, "Field")
      .def(py::init<unsigned>(), py::arg("c"))
      .def(py::init<unsigned, std::uint32_t>(), py::arg("c"), py::arg("polynomial"))
      .def_property_readonly("bits", &gf::FieldSpec::bits)
      .def_property_readonly("polynomial", &gf::FieldSpec::polynomial)
      .def_property_readonly("order", &gf::FieldSpec::order)
      .def("add", [](const gf::FieldSpec &f, std::uint32_t a, std::uint32_t b) {
        return f.add(elem(f, a), elem(f, b)).value();
      })
      .def("mul", [](const gf::FieldSpec &f, std::uint32_t a, std::uint32_t b) {
        return f.mul(elem(f, a), elem(f, b)).value();
      })
      .def("inv", [](const gf::FieldSpec &f, std::uint32_t a) { return f.inv(elem(f, a)).value(); })
      .def("div", [](const gf::FieldSpec &f, std::uint32_t a, std::uint32_t b) {
        return f.div(elem(f, a), elem(f, b)).value();
      })
      .def("pow", [](const gf::FieldSpec &f, std::uint32_t a, std::uint64_t e) {
        return f.pow(elem(f, a), e).value();
      });

  m.def("rs_encode", [](std::size_t n, std::size_t k, unsigned c, const std::vector<std::uint32_t> &data) {
    const auto code = make_code(n, k, c);
    rs::DataBlock block;
    for (auto v : data) block.symbols.push_back(code.field().element(v));
    return values(code.encode(block).symbols);
  }, py::arg("n"), py::arg("k"), py::arg("c"), py::arg("data"));

  m.def("rs_decode", [](std::size_t n, std::size_t k, unsigned c,
                        const std::vector<std::optional<std::uint32_t>> &view) {
    const auto code = make_code(n, k, c);
    return values(code.erasure_decode(to_view(code, view)).symbols);
  }, py::arg("n"), py::arg("k"), py::arg("c"), py::arg("view"),
        "Data symbols from a view with None for unknown positions.");

  m.def("rs_is_consistent", [](std::size_t n, std::size_t k, unsigned c,
                               const std::vector<std::optional<std::uint32_t>> &view) {
    const auto code = make_code(n, k, c);
    return code.is_consistent(to_view(code, view));
  }, py::arg("n"), py::arg("k"), py::arg("c"), py::arg("view"));

  m.def("bsb_cost", &sim::measured_bsb_cost, py::arg("n"), py::arg("t"),
        "Bits of one fault-free single-bit broadcast instance.");

  m.def("choose_parameters_json", [](std::size_t n, std::size_t t, std::size_t L, std::optional<std::size_t> D) {
    return config_json(choose_parameters(n, t, L, sim::measured_bsb_cost(n, t), D)).dump();
  }, py::arg("n"), py::arg("t"), py::arg("L"), py::arg("D") = py::none());

  m.def("predict_per_generation_json", [](std::size_t n, std::size_t t, std::size_t D, std::uint64_t B) {
    const auto p = metrics::predict_per_generation(n, t, D, B);
    return json{{"matching", cost_json(p.matching)},
                {"checking", cost_json(p.checking)},
                {"diagnosis", cost_json(p.diagnosis)}}.dump();
  }, py::arg("n"), py::arg("t"), py::arg("D"), py::arg("B"));

  m.def("predict_total", &metrics::predict_total, py::arg("n"), py::arg("t"), py::arg("L"), py::arg("D"),
        py::arg("B"));

  m.def("builtin_strategies", &sim::builtin_strategies);

  m.def("parse_scenario_json", [](const std::string &text, bool is_json) {
    const auto sc = is_json ? sim::parse_scenario_json(text) : sim::parse_scenario_text(text);
    return sc.to_json().dump();
  }, py::arg("text"), py::arg("is_json") = false);

  m.def("run_scenario_json", [](const std::string &scenario_json, bool record_messages) {
    const auto sc = sim::parse_scenario_json(scenario_json);
    sim::RunOptions options;
    options.record_messages = record_messages;
    sim::ScenarioResult res;
    {
      py::gil_scoped_release release;
      res = sim::run_scenario(sc, options);
    }
    json outputs = json::array();
    for (const auto &o : res.outputs) outputs.push_back(o.value.to_hex());
    const auto report = metrics::validate(res.transcript, res.config);
    return json{{"ok", res.ok()},
                {"agreement", res.agreement},
                {"validity", res.validity},
                {"identical_inputs", res.identical_inputs},
                {"diagnosis_count", res.diagnosis_count},
                {"violations", res.violations},
                {"outputs", outputs},
                {"config", config_json(res.config)},
                {"stats", res.stats.to_json()},
                {"complexity", report.to_json()},
                {"transcript", res.transcript.to_jsonl(false)}}
        .dump();
  }, py::arg("scenario_json"), py::arg("record_messages") = true);

  m.def("explain", [](const std::string &jsonl) { return sim::explain(Transcript::from_jsonl(jsonl)); },
        py::arg("transcript_jsonl"));
}
