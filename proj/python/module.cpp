// Python bindings for the core operations: construction, structure
// detection, switching, invariants, canonical keys, and enumeration.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>
#include <sstream>

#include "had/canonical.hpp"
#include "had/constructions.hpp"
#include "had/enumeration.hpp"
#include "had/invariants.hpp"
#include "had/switching.hpp"

namespace py = pybind11;
using namespace had;

namespace {

HadamardMatrix matrix_from_text(const std::string& text) {
  std::istringstream in(text);
  return read_had(in);
}

std::string matrix_to_text(const HadamardMatrix& m) {
  std::ostringstream out;
  write_had(out, m);
  return out.str();
}

Axis axis_from_name(const std::string& name) {
  if (name == "rows") return Axis::rows;
  if (name == "columns" || name == "cols") return Axis::columns;
  throw domain_error("axis must be 'rows' or 'columns'");
}

py::dict code_summary_dict(const CodeSummary& cs) {
  py::dict d;
  d["dimension"] = cs.dimension;
  d["self_orthogonal"] = cs.self_orthogonal;
  d["self_dual"] = cs.self_dual;
  d["weight4_count"] = cs.weight4_count;
  if (cs.weight_enumerator) {
    py::dict we;
    for (const auto& [w, c] : *cs.weight_enumerator) we[py::int_(w)] = c;
    d["weight_enumerator"] = we;
  } else {
    d["weight_enumerator"] = py::none();
  }
  return d;
}

Quadruple quadruple_from_indices(const HadamardMatrix& m, const std::vector<int>& idx, Axis axis) {
  if (idx.size() != 4) throw domain_error("a quadruple needs exactly four indices");
  return quadruple_type(m, {idx[0], idx[1], idx[2], idx[3]}, axis);
}

}  // namespace

PYBIND11_MODULE(_hadswitch, m) {
  m.doc() = "Hadamard matrix switching operations, invariants, and class enumeration";

  py::register_exception<domain_error>(m, "DomainError");
  py::register_exception<io_error>(m, "IoError");

  py::class_<HadamardMatrix>(m, "HadamardMatrix")
      .def_static("from_text", &matrix_from_text, py::arg("text"),
                  "Parse the text format: order line, then rows over {+,-} or {1,0}.")
      .def_static(
          "from_entries",
          [](int n, const std::vector<int>& e) { return HadamardMatrix::from_entries(n, e); },
          py::arg("n"), py::arg("entries"))
      .def_property_readonly("order", &HadamardMatrix::order)
      .def_property_readonly("valid", &HadamardMatrix::is_valid)
      .def("entry", &HadamardMatrix::entry, py::arg("row"), py::arg("col"))
      .def("to_text", &matrix_to_text)
      .def("transposed", &HadamardMatrix::transposed)
      .def("__eq__", [](const HadamardMatrix& a, const HadamardMatrix& b) { return a == b; })
      .def("__repr__", [](const HadamardMatrix& mm) {
        return "<HadamardMatrix order " + std::to_string(mm.order()) +
               (mm.is_valid() ? "" : ", invalid") + ">";
      });

  m.def("sylvester", &sylvester, py::arg("k"));
  m.def("paley", &paley, py::arg("q"), py::arg("type"));
  m.def(
      "doubled",
      [](const HadamardMatrix& a, const HadamardMatrix& b, const std::vector<int>& perm,
         bool tilde) {
        std::vector<int> p = perm;
        if (p.empty()) {
          p.resize(a.order());
          for (int i = 0; i < a.order(); ++i) p[i] = i;
        }
        return doubled(a, b, p, tilde);
      },
      py::arg("a"), py::arg("b"), py::arg("perm") = std::vector<int>{}, py::arg("tilde") = false);

  m.def("verify", &verify);
  m.def(
      "closed_quadruples",
      [](const HadamardMatrix& mm, const std::string& axis) {
        std::vector<std::array<int, 4>> out;
        for (const auto& q : find_closed_quadruples(mm, axis_from_name(axis)))
          out.push_back(q.indices);
        return out;
      },
      py::arg("matrix"), py::arg("axis") = "rows");
  m.def(
      "hall_sets",
      [](const HadamardMatrix& mm, const std::string& axis) {
        std::vector<std::pair<std::array<int, 4>, std::array<int, 4>>> out;
        for (const auto& q : find_hall_sets(mm, axis_from_name(axis)))
          out.push_back({q.indices, *q.hall_cross});
        return out;
      },
      py::arg("matrix"), py::arg("axis") = "rows",
      "Type-1 quadruples with their cross positions on the other axis.");

  m.def(
      "switch_closed_quadruple",
      [](const HadamardMatrix& mm, const std::vector<int>& idx, int field,
         const std::string& axis) {
        Axis ax = axis_from_name(axis);
        return switch_closed_quadruple(mm, quadruple_from_indices(mm, idx, ax), field, ax);
      },
      py::arg("matrix"), py::arg("indices"), py::arg("field") = 1, py::arg("axis") = "rows");
  m.def(
      "switch_hall_set",
      [](const HadamardMatrix& mm, const std::vector<int>& idx, int field) {
        return switch_hall_set(mm, quadruple_from_indices(mm, idx, Axis::rows), field);
      },
      py::arg("matrix"), py::arg("indices"), py::arg("field") = 1);

  m.def(
      "smith_factors",
      [](const HadamardMatrix& mm) { return smith_normal_form(to_int_matrix(mm)).factors_int64(); },
      py::arg("matrix"));
  m.def("smith_class", &smith_class, py::arg("matrix"));
  m.def(
      "binary_code_summary",
      [](const HadamardMatrix& mm, const std::string& axis) {
        return code_summary_dict(binary_code_summary(mm, axis_from_name(axis)));
      },
      py::arg("matrix"), py::arg("axis") = "rows");
  m.def("weight4_vs_closed_quadruples", &weight4_vs_closed_quadruples, py::arg("matrix"));

  m.def(
      "canonical_key", [](const HadamardMatrix& mm) { return canonical_key(mm).hex(); },
      py::arg("matrix"), "Hex key equal for two matrices iff they are Hadamard equivalent.");
  m.def(
      "decode_key", [](const std::string& hex) { return decode_key(CanonicalKey::from_hex(hex)); },
      py::arg("hex"));
  m.def("equivalent", &equivalent, py::arg("a"), py::arg("b"));
  m.def("is_self_dual_class", &is_self_dual_class, py::arg("matrix"));

  m.def(
      "enumerate_classes",
      [](const HadamardMatrix& seed, const std::string& mode, const std::string& store_dir,
         size_t limit, int threads, bool no_skip) {
        auto em = mode_from_name(mode);
        ClassStore store = std::filesystem::exists(store_dir + "/meta.json")
                               ? ClassStore::open(store_dir)
                               : ClassStore::create(store_dir, em, seed.order());
        EnumerationOptions opts;
        if (limit > 0) opts.limit = limit;
        opts.threads = threads;
        opts.no_skip = no_skip;
        opts.collect_stats = false;
        auto rep = enumerate_classes(seed, em, store, opts);
        py::dict out;
        out["class_count"] = rep.class_count;
        out["exhausted"] = rep.exhausted;
        std::vector<std::string> keys;
        for (size_t i = 0; i < store.size(); ++i) keys.push_back(store.key_at(i).hex());
        out["keys"] = keys;
        return out;
      },
      py::arg("seed"), py::arg("mode"), py::arg("store_dir"), py::arg("limit") = 0,
      py::arg("threads") = 1, py::arg("no_skip") = false,
      "Run the breadth-first census for the seed's class into a store directory.");
}
