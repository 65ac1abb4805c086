// Python bindings for the forcing workbench: spaces, formulas, forcing
// queries, ring spectra and the verification suites.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "toposforge/verify.hpp"

namespace py = pybind11;
using namespace toposforge;

namespace {

/// A space session: the standard environment over one finite space.
class PySpace {
public:
  explicit PySpace(const std::string& fileText)
      : se_(FiniteSpace::from_file_text(fileText)), forcer_(se_.env) {
    if (se_.space.open_count() >= 2)
      se_.env.propConstants["U"] = se_.space.open_at(se_.space.open_count() - 2);
  }

  std::vector<std::string> points() const { return se_.space.points(); }
  int open_count() const { return se_.space.open_count(); }
  std::vector<std::string> opens() const {
    std::vector<std::string> out;
    for (Mask m : se_.space.opens()) out.push_back(se_.space.format_mask(m));
    return out;
  }

  bool force(const std::string& formula, const std::string& open) {
    FormulaPtr f = parse_formula(formula, se_.env.symbols());
    return forcer_.force(parse_open(open), f);
  }
  std::string truth_value(const std::string& formula) {
    FormulaPtr f = parse_formula(formula, se_.env.symbols());
    return se_.space.format_mask(forcer_.truth_value(f));
  }
  bool is_boolean() const { return space_is_boolean(se_.space); }

private:
  Mask parse_open(const std::string& text) {
    if (text.empty() || text == "X") return se_.space.full();
    if (text == "{}") return 0;
    Mask m = 0;
    std::istringstream ss(text);
    std::string p;
    while (ss >> p) m |= bit(se_.space.point_index(p));
    se_.space.index_of(m);
    return m;
  }

  SpaceEnv se_;
  Forcer forcer_;
};

/// A ring session over Spec(A).
class PySpectrum {
public:
  explicit PySpectrum(const std::string& spec) : ring_(FinRing::from_spec(spec)), ctx_(ring_) {}

  int frame_size() const { return static_cast<int>(ctx_.frame().radicals.size()); }
  int point_count() const { return ctx_.space().point_count(); }
  std::vector<std::string> frame_labels() const {
    std::vector<std::string> out;
    for (int i = 0; i < ctx_.frame().frame.size(); ++i)
      out.push_back(ctx_.frame().frame.label(i));
    return out;
  }
  int global_sections() const {
    return ctx_.structure_sheaf().card(ctx_.space().index_of(ctx_.space().full()));
  }
  bool force(const std::string& formula) {
    Forcer fz(ctx_.env());
    FormulaPtr f = parse_formula(formula, ctx_.env().symbols());
    return fz.force(ctx_.space().full(), f);
  }
  std::string truth_value(const std::string& formula) {
    Forcer fz(ctx_.env());
    FormulaPtr f = parse_formula(formula, ctx_.env().symbols());
    return ctx_.space().format_mask(fz.truth_value(f));
  }

private:
  FinRing ring_;
  SpectrumContext ctx_;
};

std::string translate(const std::string& formulaText, const std::string& nucleus, bool elideGray,
                      const SymbolTable& st) {
  FormulaPtr f = parse_formula(formulaText, st);
  TranslationResult r = nucleus == "negneg" ? negneg_translate(*f, elideGray)
                                            : box_translate(*f, nucleus, elideGray);
  return print_formula(*r.formula);
}

}  // namespace

PYBIND11_MODULE(_toposforge, m) {
  m.doc() = "Kripke-Joyal forcing over sheaves on finite spaces";

  py::register_exception<ParseError>(m, "FormulaParseError");
  py::register_exception<SortError>(m, "FormulaSortError");
  py::register_exception<ValidationError>(m, "InvalidStructureError");
  py::register_exception<ResolveError>(m, "ResolutionError");

  py::class_<PySpace>(m, "Space")
      .def(py::init<const std::string&>(), py::arg("file_text"))
      .def("points", &PySpace::points)
      .def("open_count", &PySpace::open_count)
      .def("opens", &PySpace::opens)
      .def("force", &PySpace::force, py::arg("formula"), py::arg("open") = std::string())
      .def("truth_value", &PySpace::truth_value)
      .def("is_boolean", &PySpace::is_boolean);

  py::class_<PySpectrum>(m, "Spectrum")
      .def(py::init<const std::string&>(), py::arg("ring_spec"))
      .def("frame_size", &PySpectrum::frame_size)
      .def("point_count", &PySpectrum::point_count)
      .def("frame_labels", &PySpectrum::frame_labels)
      .def("global_sections", &PySpectrum::global_sections)
      .def("force", &PySpectrum::force)
      .def("truth_value", &PySpectrum::truth_value);

  m.def(
      "translate",
      [](const std::string& formula, const std::string& nucleus, bool elideGray) {
        SymbolTable st;
        st.sheafSorts = {"F"};
        st.ringSorts = {"F"};
        SortPtr sF = Sort::sheaf("F");
        st.functions["add"].push_back({{sF, sF}, sF});
        st.functions["mul"].push_back({{sF, sF}, sF});
        st.functions["f"].push_back({{sF}, sF});
        st.functions["p"].push_back({{sF}, sF});
        for (char v = 'a'; v <= 'z'; ++v) st.freeVars[std::string(1, v)] = sF;
        st.nuclei = {"j", "negneg", nucleus};
        return translate(formula, nucleus, elideGray, st);
      },
      py::arg("formula"), py::arg("nucleus"), py::arg("elide_gray") = false);

  m.def(
      "verify",
      [](const std::string& suite, std::uint64_t seed, int count) {
        VerifyOptions opt;
        opt.seed = seed;
        opt.instanceCount = count;
        Report rep = verify_suite(suite, opt);
        return py::make_tuple(rep.all_pass(), rep.to_text());
      },
      py::arg("suite"), py::arg("seed") = 20260809, py::arg("count") = 5);

  m.def("suites", [] { return suite_names(); });
}
