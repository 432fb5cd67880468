#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ktdeque/bench.hpp"
#include "ktdeque/cadeque.hpp"
#include "ktdeque/colors.hpp"
#include "ktdeque/deque.hpp"
#include "ktdeque/fuzz.hpp"
#include "ktdeque/rbr_counter.hpp"

namespace py = pybind11;
using namespace ktdeque;

namespace {

using PyCadeque = Cadeque<py::object>;
using PyDeque = Deque<py::object>;

template <class S>
py::list to_list(const S& s) {
  py::list out;
  s.for_each([&](const py::object& x) { out.append(x); });
  return out;
}

fuzz::OpKind op_of(const std::string& name) {
  for (auto k : fuzz::all_ops)
    if (fuzz::op_name(k) == name) return k;
  throw py::value_error("unknown op '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Persistent real-time deques and catenable deques";

  py::class_<PyCadeque>(m, "Cadeque")
      .def(py::init<>())
      .def_static("empty", &PyCadeque::empty)
      .def_static(
          "from_iterable",
          [](py::iterable xs) {
            PyCadeque c;
            for (auto x : xs) c = c.inject(py::reinterpret_borrow<py::object>(x));
            return c;
          },
          py::arg("xs"))
      .def("push", &PyCadeque::push, py::arg("x"))
      .def("inject", &PyCadeque::inject, py::arg("x"))
      .def("pop", &PyCadeque::pop, "(front, rest) or None when empty")
      .def("eject", &PyCadeque::eject, "(rest, back) or None when empty")
      .def_static("concat", &PyCadeque::concat, py::arg("a"), py::arg("b"))
      .def("__add__", [](const PyCadeque& a, const PyCadeque& b) { return PyCadeque::concat(a, b); })
      .def("__len__", &PyCadeque::size)
      .def("__bool__", [](const PyCadeque& c) { return !c.is_empty(); })
      .def("to_list", &to_list<PyCadeque>)
      .def("__iter__", [](const PyCadeque& c) { return py::iter(to_list(c)); })
      .def("validate", [](const PyCadeque& c) { return c.validate(); }, "list of invariant violations, empty when valid");

  py::class_<PyDeque>(m, "Deque")
      .def(py::init<>())
      .def_static("empty", &PyDeque::empty)
      .def("push", &PyDeque::push, py::arg("x"))
      .def("inject", &PyDeque::inject, py::arg("x"))
      .def("pop", &PyDeque::pop)
      .def("eject", &PyDeque::eject)
      .def("__len__", &PyDeque::size)
      .def("__bool__", [](const PyDeque& d) { return !d.is_empty(); })
      .def("to_list", &to_list<PyDeque>)
      .def("__iter__", [](const PyDeque& d) { return py::iter(to_list(d)); })
      .def("validate", [](const PyDeque& d) { return d.validate_deep(); });

  py::class_<rbr::Number>(m, "RNumber")
      .def(py::init<>())
      .def_static("zero", &rbr::Number::zero)
      .def_static("from_digits", &rbr::Number::from_digits, py::arg("digits"))
      .def("succ", [](const rbr::Number& n) { return succ(n); })
      .def_property_readonly("value", &rbr::Number::value)
      .def("digits", &rbr::Number::digits)
      .def("render", &rbr::Number::render)
      .def("validate", [](const rbr::Number& n) { return validate(n); })
      .def("__int__", &rbr::Number::value)
      .def("__repr__", [](const rbr::Number& n) { return "RNumber('" + n.digits() + "')"; });

  m.def(
      "size_to_color", [](std::size_t n) { return std::string(size_to_color(n).name()); }, py::arg("n"));

  m.def("work_counter", &work::current, "constructions performed so far on this thread");

  m.def(
      "gen_scenario",
      [](std::uint64_t seed, std::size_t steps, double concat_fraction, std::int64_t value_range, std::size_t max_len) {
        fuzz::ScenarioConfig cfg;
        cfg.steps = steps;
        cfg.concat_fraction = concat_fraction;
        cfg.value_range = value_range;
        cfg.max_len = max_len;
        auto s = fuzz::gen_scenario(seed, cfg);
        py::list out;
        for (const auto& st : s.steps) out.append(py::make_tuple(std::string(fuzz::op_name(st.kind)), st.a, st.b, st.value));
        return out;
      },
      py::arg("seed"), py::arg("steps") = 100, py::arg("concat_fraction") = 0.1, py::arg("value_range") = 1 << 20,
      py::arg("max_len") = 1 << 14, "list of (op, a, b, value) steps; raises ValueError on an invalid config");

  m.def(
      "run_fuzz",
      [](std::size_t seeds, std::size_t steps, double concat_fraction, std::size_t max_len, const std::string& target,
         std::uint64_t first_seed) {
        fuzz::BatchConfig cfg;
        cfg.seeds = seeds;
        cfg.first_seed = first_seed;
        cfg.scenario.steps = steps;
        cfg.scenario.concat_fraction = concat_fraction;
        cfg.scenario.max_len = max_len;
        if (target == "deque")
          cfg.target = fuzz::Target::Deque;
        else if (target != "cadeque")
          throw py::value_error("target must be 'cadeque' or 'deque'");
        fuzz::BatchReport r;
        {
          py::gil_scoped_release release;
          r = fuzz::run_batch(cfg);
        }
        return py::module_::import("json").attr("loads")(fuzz::to_json(r, -1));
      },
      py::arg("seeds") = 10, py::arg("steps") = 100, py::arg("concat_fraction") = 0.1, py::arg("max_len") = 1 << 14,
      py::arg("target") = "cadeque", py::arg("first_seed") = 1, "report dict with the same fields as the CLI's JSON report");

  m.def("bin_of", &bench::bin_of, py::arg("n"));
  m.attr("CSV_HEADER") = bench::csv_header;
  m.def(
      "plan_operations", [](unsigned max_log2, unsigned per_bin, std::uint64_t seed) {
        return bench::plan_population(max_log2, per_bin, seed).operations();
      },
      py::arg("max_log2"), py::arg("per_bin"), py::arg("seed") = 1);
  m.def(
      "run_bench",
      [](unsigned max_log2, unsigned per_bin, unsigned replays, std::uint64_t seed, std::vector<std::string> structures) {
        bench::BenchConfig cfg;
        cfg.max_log2 = max_log2;
        cfg.per_bin = per_bin;
        cfg.replays = replays;
        cfg.seed = seed;
        cfg.structures = std::move(structures);
        bench::BenchResult res;
        {
          py::gil_scoped_release release;
          res = bench::run_bench(cfg);
        }
        std::ostringstream csv;
        bench::write_csv(csv, res.records);
        return csv.str();
      },
      py::arg("max_log2") = 10, py::arg("per_bin") = 10, py::arg("replays") = 20, py::arg("seed") = 1,
      py::arg("structures") = std::vector<std::string>{"cadeque", "deque", "list"}, "CSV text with the bench CLI's header");

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const precondition_violation& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const internal_invariant_failure& e) {
      PyErr_SetString(PyExc_AssertionError, e.what());
    }
  });
}
