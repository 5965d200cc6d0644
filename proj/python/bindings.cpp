#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "kummer/corpus.hpp"
#include "kummer/report.hpp"

namespace py = pybind11;
using namespace kummer;

namespace {

NumericValue rational_arg(const std::string& text) { return NumericValue(parse_rational(text)); }

py::object value_to_py(const NumericValue& v) {
  if (v.is_exact()) {
    py::object frac = py::module_::import("fractions").attr("Fraction");
    return frac(v.exact_value().get_str());
  }
  return py::float_(v.to_double());
}

std::string analyze(const std::string& expression, std::int64_t start, std::vector<std::string> tests,
                    std::int64_t window, std::int64_t probe_window, std::vector<std::string> seeds,
                    const std::string& rho, const std::string& format) {
  AnalysisConfig c;
  c.expression = expression;
  c.start = start;
  c.tests = std::move(tests);
  c.window = window;
  c.probe_window = probe_window;
  if (!seeds.empty()) {
    c.seeds.clear();
    for (const auto& s : seeds) c.seeds.push_back(rational_arg(s));
  }
  c.rho = rational_arg(rho);
  c.validate();
  const AnalysisReport r = full_analysis(Series::parse(expression, start), c.options());
  if (format == "json") return render_json(r);
  if (format == "text") return render_text(r);
  if (format == "csv") return render_csv(r);
  throw ArgumentError("unknown format '" + format + "'");
}

std::string run_corpus_file(const std::string& path, const std::string& format, unsigned jobs) {
  const CorpusResult r = run_corpus(load_corpus(path), {}, jobs);
  return format == "text" ? render_corpus_text(r) : render_corpus_json(r);
}

}  // namespace

PYBIND11_MODULE(_kummer, m) {
  m.doc() = "Kummer's test for positive series";

  auto base = py::register_exception<Error>(m, "KummerError", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ResourceError>(m, "ResourceError", base.ptr());
  py::register_exception<ArgumentError>(m, "ArgumentError", base.ptr());
  py::register_exception<PositivityViolation>(m, "PositivityViolation", base.ptr());
  static py::exception<ParseError> parse_error(m, "ParseError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ParseError& e) {
      py::object err = py::reinterpret_borrow<py::object>(parse_error.ptr())(e.what());
      err.attr("offset") = e.offset();
      err.attr("expected") = e.expected();
      PyErr_SetObject(parse_error.ptr(), err.ptr());
    }
  });

  m.def("canonical", [](const std::string& text) { return print(parse(text)); }, py::arg("expression"),
        "Parse an expression and return its canonical printed form.");
  m.def("is_exact", [](const std::string& text) { return is_exactly_evaluable(parse(text)); },
        py::arg("expression"));

  py::class_<Series>(m, "Series")
      .def(py::init([](const std::string& text, std::int64_t start) { return Series::parse(text, start); }),
           py::arg("expression"), py::arg("start") = 1)
      .def_property_readonly("start", &Series::start)
      .def_property_readonly("exact", &Series::is_exact)
      .def_property_readonly("expression", [](const Series& s) { return print(s.expr()); })
      .def("term", [](const Series& s, std::int64_t n) { return value_to_py(s.term(n)); }, py::arg("n"))
      .def(
          "partial_sum",
          [](const Series& s, std::int64_t from, std::int64_t to) { return value_to_py(s.partial_sum(from, to)); },
          py::arg("from_"), py::arg("to"))
      .def("__repr__", [](const Series& s) { return "Series('" + print(s.expr()) + "', start=" + std::to_string(s.start()) + ")"; });

  m.def(
      "kummer_sequence",
      [](const Series& s, const std::string& seed, std::int64_t end) {
        const KummerSequence seq = build_recursive(s, s.start(), rational_arg(seed), end);
        py::list values;
        for (const auto& v : seq.values) values.append(value_to_py(v));
        return py::make_tuple(values, seq.first_nonpositive);
      },
      py::arg("series"), py::arg("seed"), py::arg("end"),
      "B_N..B_end from the equality recursion and the first non-positive index.");

  m.def("analyze", &analyze, py::arg("expression"), py::arg("start") = 1,
        py::arg("tests") = std::vector<std::string>{}, py::arg("window") = 1000, py::arg("probe_window") = 10000,
        py::arg("seeds") = std::vector<std::string>{}, py::arg("rho") = "1", py::arg("format") = "json",
        py::call_guard<py::gil_scoped_release>());
  m.def("run_corpus", &run_corpus_file, py::arg("path"), py::arg("format") = "json", py::arg("jobs") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def("default_corpus_path", &default_corpus_path);
}
