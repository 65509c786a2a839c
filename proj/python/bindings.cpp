#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "trank/bounds.hpp"
#include "trank/directsum.hpp"
#include "trank/error.hpp"
#include "trank/io.hpp"
#include "trank/oracle.hpp"

namespace py = pybind11;
using namespace trank;

namespace {

// Reports cross the boundary as plain dicts, using the same layout as the
// command-line JSON output.
py::object to_py(const Json &j)
{
    return py::module_::import("json").attr("loads")(j.dump());
}

Json from_py(const py::object &o)
{
    return Json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

Tensor3 tensor_from_values(const std::string &field, const Dims &dims, const py::list &values)
{
    Field f = parse_field(field);
    std::vector<Scalar> entries;
    for (const auto &x : values) {
        if (py::isinstance<py::int_>(x))
            entries.emplace_back(f, mpq_class(py::str(x).cast<std::string>()));
        else
            entries.push_back(Scalar::parse(f, py::str(x).cast<std::string>()));
    }
    return Tensor3(f, dims, std::move(entries));
}

std::optional<BlockSplit> split_from(const std::optional<py::dict> &d, const Dims &dims)
{
    if (!d)
        return std::nullopt;
    Json j = {{"field", {{"kind", "gf"}, {"p", 2}}},
              {"dims", dims},
              {"entries", std::vector<int>(dims[0] * dims[1] * dims[2], 0)},
              {"split", from_py(*d)}};
    return tensor_from_json(j).split;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Exact tensor rank tools over finite fields and the rationals";

    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<FieldMismatch>(m, "FieldMismatch", PyExc_ValueError);
    py::register_exception<UnsupportedField>(m, "UnsupportedField", PyExc_ValueError);
    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);

    py::class_<Tensor3>(m, "Tensor")
        .def(py::init(&tensor_from_values), py::arg("field"), py::arg("dims"), py::arg("entries"))
        .def_property_readonly("field", [](const Tensor3 &t) { return t.field().name(); })
        .def_property_readonly("dims", &Tensor3::dims)
        .def("entries",
             [](const Tensor3 &t) {
                 std::vector<std::string> out;
                 for (const Scalar &s : t.entries())
                     out.push_back(s.to_string());
                 return out;
             })
        .def("to_json", [](const Tensor3 &t) { return to_py(tensor_to_json({t, std::nullopt})); })
        .def_static("from_json",
                    [](const py::object &o) { return tensor_from_json(from_py(o)).tensor; })
        .def("__eq__", &Tensor3::operator==)
        .def("__repr__", [](const Tensor3 &t) {
            const Dims &d = t.dims();
            return "<Tensor " + t.field().name() + " " + std::to_string(d[0]) + "x" +
                   std::to_string(d[1]) + "x" + std::to_string(d[2]) + ">";
        });

    m.def("matmul_tensor",
          [](std::size_t i, std::size_t j, std::size_t k, const std::string &field) {
              return matmul_tensor(i, j, k, parse_field(field));
          },
          py::arg("i"), py::arg("j"), py::arg("k"), py::arg("field") = "gf2");
    m.def("random_tensor",
          [](const Dims &dims, const std::string &field, std::uint64_t seed) {
              return random_tensor(parse_field(field), dims, seed);
          },
          py::arg("dims"), py::arg("field") = "gf2", py::arg("seed") = 1);
    m.def("direct_sum", &direct_sum);
    m.def("flattening_ranks", &flattening_ranks);

    m.def("rank_oracle",
          [](const Tensor3 &p, std::size_t max_rank, std::uint64_t budget) {
              OracleResult r;
              {
                  py::gil_scoped_release release;
                  r = rank_oracle(p, max_rank, budget);
              }
              return to_py(oracle_to_json(r));
          },
          py::arg("tensor"), py::arg("max_rank") = kDefaultMaxRank,
          py::arg("budget") = kDefaultBudget);
    m.def("substitution_lower_bound",
          [](const Tensor3 &p, std::uint64_t budget) {
              return to_py(substitution_to_json(substitution_lower_bound(p, budget)));
          },
          py::arg("tensor"), py::arg("budget") = kDefaultSubstitutionBudget);
    m.def("upper_bound",
          [](const Tensor3 &p, const std::optional<py::dict> &split) {
              UpperBound ub = upper_bound(p, split_from(split, p.dims()));
              return py::make_tuple(ub.witness.size(), ub.source,
                                    to_py(decomposition_to_json(ub.witness)));
          },
          py::arg("tensor"), py::arg("split") = py::none());
    m.def("verify_strassen", [](const std::string &field) {
        Field f = parse_field(field);
        return certifies(strassen_222(f), matmul_tensor(2, 2, 2, f)).has_value();
    });
    m.def("certifies", [](const py::object &decomposition, const Tensor3 &p) {
        return certifies(decomposition_from_json(from_py(decomposition)), p).has_value();
    });

    m.def("classify",
          [](const Tensor3 &p, const py::object &decomposition, const py::dict &split) {
              Decomposition d = decomposition_from_json(from_py(decomposition));
              if (!certifies(d, p))
                  throw PreconditionError("decomposition does not certify the tensor");
              return to_py(classified_to_json(classify(d, *split_from(split, p.dims()))));
          },
          py::arg("tensor"), py::arg("decomposition"), py::arg("split"));
    m.def("additivity_check",
          [](const Tensor3 &p1, const Tensor3 &p2, std::uint64_t budget) {
              AdditivityReport rep;
              {
                  py::gil_scoped_release release;
                  rep = additivity_check(p1, p2, budget);
              }
              return to_py(dossier_json(p1, p2, rep));
          },
          py::arg("prime"), py::arg("bis"), py::arg("budget") = kDefaultBudget);
}
