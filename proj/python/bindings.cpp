#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "modkit/constructions.hpp"
#include "modkit/expander.hpp"
#include "modkit/learner.hpp"
#include "modkit/metrics.hpp"

namespace py = pybind11;
using namespace modkit;

namespace {

// Sets cross the boundary as lists of 1-based items.
WideSet to_set(const std::vector<int>& items, int n) { return WideSet::from_items(items, n); }

py::dict eps_dict(const EpsResult& r) {
  py::dict d;
  d["eps"] = r.eps;
  d["exact"] = r.exact;
  if (r.witness) {
    d["witness"] = py::make_tuple(r.witness->s.items(), r.witness->t.items(), r.witness->value);
  }
  return d;
}

Variant parse_variant(const std::string& v) {
  if (v == "weak") return Variant::weak;
  if (v == "strong") return Variant::strong;
  throw std::invalid_argument("variant must be 'weak' or 'strong'");
}

}  // namespace

PYBIND11_MODULE(_modkit, m) {
  m.doc() = "Approximately modular set functions";

  py::register_exception<CapacityError>(m, "CapacityError", PyExc_ValueError);

  py::class_<LinearFunction>(m, "LinearFunction")
      .def(py::init<double, std::vector<double>>(), py::arg("c0"), py::arg("coeffs"))
      .def_readwrite("c0", &LinearFunction::c0)
      .def_readwrite("coeffs", &LinearFunction::coeffs)
      .def_property_readonly("n", &LinearFunction::n)
      .def("__call__", [](const LinearFunction& g, const std::vector<int>& s) { return linear_eval(g, to_set(s, g.n())); });

  py::class_<SetFunction>(m, "SetFunction")
      .def_static("table", &SetFunction::table, py::arg("n"), py::arg("values"))
      .def_static("linear", &SetFunction::linear, py::arg("g"))
      .def_static("symmetric", &SetFunction::symmetric, py::arg("by_size"))
      .def_static("oracle",
                  [](int n, std::function<double(std::vector<int>)> fn) {
                    return SetFunction::oracle(n, [fn](const WideSet& s) {
                      py::gil_scoped_acquire gil;
                      return fn(s.items());
                    });
                  },
                  py::arg("n"), py::arg("fn"))
      .def_property_readonly("n", &SetFunction::n)
      .def_property_readonly("query_count", &SetFunction::query_count)
      .def("__call__", [](const SetFunction& f, const std::vector<int>& s) { return f.evaluate(to_set(s, f.n())); })
      .def("mask", [](const SetFunction& f, std::uint64_t mask) { return f.evaluate(mask); });

  m.def("modularity_eps",
        [](const SetFunction& f, const std::string& variant, std::uint64_t samples, std::uint64_t seed) {
          const ScanMode mode = samples == 0 ? ScanMode::exact() : ScanMode::sample(samples, seed);
          const Variant v = parse_variant(variant);
          EpsResult r;
          {
            // Scans may run worker threads that call back into Python oracles.
            py::gil_scoped_release release;
            r = modularity_eps(f, v, mode);
          }
          return eps_dict(r);
        },
        py::arg("f"), py::arg("variant") = "strong", py::arg("samples") = 0, py::arg("seed") = 1);

  m.def("closest_linear",
        [](const SetFunction& f, std::uint64_t samples, std::uint64_t seed) {
          LinearFit fit;
          {
            py::gil_scoped_release release;
            fit = closest_linear(f, samples == 0 ? ScanMode::exact() : ScanMode::sample(samples, seed));
          }
          return py::make_tuple(fit.g, fit.delta);
        },
        py::arg("f"), py::arg("samples") = 0, py::arg("seed") = 1);

  m.def("learn_hadamard",
        [](const SetFunction& f) {
          LearnResult r;
          {
            py::gil_scoped_release release;
            r = is_power_of_two(f.n()) ? learn_hadamard(f) : learn_padded(f, LearnMethod::hadamard);
          }
          return py::make_tuple(r.h, r.query_count);
        },
        py::arg("f"));
  m.def("learn_lp",
        [](const SetFunction& f, double delta) {
          LearnResult r;
          {
            py::gil_scoped_release release;
            r = learn_lp(f, delta);
          }
          return py::make_tuple(r.h, r.query_count, r.feasible);
        },
        py::arg("f"), py::arg("delta"));

  m.def("pawlik", &pawlik, py::arg("k"));
  m.def("four_item_worstcase", &four_item_worstcase);
  m.def("symmetric_example", &symmetric_example, py::arg("n"), py::arg("eps"));
  m.def("noisy_linear", &noisy_linear, py::arg("g"), py::arg("delta"), py::arg("seed"));
  m.def("random_linear", &random_linear, py::arg("n"), py::arg("seed"));

  m.def("verify_construction",
        [](const std::string& name, const std::string& level, std::uint64_t samples, std::uint64_t pair_samples,
           std::uint64_t seed) {
          const RuleFunction f = name == "km20" ? km20() : name == "km70" ? km70() : throw std::invalid_argument(name);
          const CertificateReport rep = km_certificates(f, samples, seed,
                                                        level == "exact" ? VerifyLevel::exact : VerifyLevel::sampled,
                                                        pair_samples);
          py::dict checks;
          for (const auto& c : rep.checks) checks[py::str(c.name)] = c.pass;
          py::dict out;
          out["checks"] = checks;
          out["all_pass"] = rep.all_pass();
          out["max_sampled_violation"] = rep.max_sampled_violation;
          if (rep.exact_eps) out["exact_eps"] = *rep.exact_eps;
          return out;
        },
        py::arg("name"), py::arg("level") = "sampled", py::arg("samples") = 10000, py::arg("pair_samples") = 0,
        py::arg("seed") = 1);

  m.def("bound_suite", [] {
    py::dict out;
    for (const auto& v : bound_suite(paper_profile())) out[py::str(v.name)] = v.value;
    return out;
  });
  m.def("union_bound_rate", &union_bound_rate, py::arg("alpha"), py::arg("r"), py::arg("theta"));

  m.def("expander_check",
        [](int k, int r, double theta, double alpha, std::uint64_t seed) {
          const BipartiteGraph g = sample_biregular(k, r, theta, seed);
          const ExpansionResult ex = verify_expansion(g, alpha);
          return py::make_tuple(g.edges, ex.ok);
        },
        py::arg("k"), py::arg("r"), py::arg("theta"), py::arg("alpha"), py::arg("seed"));

  m.def("kalton_search",
        [](int n, int budget, std::uint64_t seed) {
          const KaltonSearchResult r = kalton_search(n, budget, seed);
          return py::make_tuple(r.ratio, r.delta, r.eps);
        },
        py::arg("n"), py::arg("budget"), py::arg("seed") = 1);
}
