#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "icis/deform.hpp"
#include "icis/groebner.hpp"
#include "icis/parse.hpp"
#include "icis/report.hpp"

namespace py = pybind11;
using namespace icis;

namespace {

py::object json_to_py(const nlohmann::json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::null: return py::none();
    case nlohmann::json::value_t::boolean: return py::bool_(j.get<bool>());
    case nlohmann::json::value_t::number_integer:
      return py::int_(j.get<long long>());
    case nlohmann::json::value_t::number_unsigned:
      return py::int_(j.get<unsigned long long>());
    case nlohmann::json::value_t::number_float:
      return py::float_(j.get<double>());
    case nlohmann::json::value_t::string: return py::str(j.get<std::string>());
    case nlohmann::json::value_t::array: {
      py::list out;
      for (auto& e : j) out.append(json_to_py(e));
      return out;
    }
    case nlohmann::json::value_t::object: {
      py::dict out;
      for (auto& [k, v] : j.items()) out[py::str(k)] = json_to_py(v);
      return out;
    }
    default: return py::none();
  }
}

MapGerm germ_of(const std::string& text, std::uint64_t p, unsigned k) {
  return parse_germ(text, Field::make(p, k));
}

}  // namespace

PYBIND11_MODULE(pyicis, m) {
  m.doc() = "exact classification of 0-dimensional ICIS germs";

  m.def(
      "classify",
      [](const std::string& germ, std::uint64_t p, unsigned k, int k_cap) {
        ClassifyOptions opts;
        opts.k_cap = k_cap;
        auto rep = classify_icis(germ_of(germ, p, k), opts);
        return json_to_py(report_json(rep));
      },
      py::arg("germ"), py::arg("p") = 0, py::arg("k") = 1,
      py::arg("k_cap") = 64,
      "Classify a germ given as 'f1 ; f2'; returns the report dict.");

  m.def(
      "tjurina",
      [](const std::string& germ, std::uint64_t p, unsigned k) {
        auto g = germ_of(germ, p, k);
        auto t = tjurina(g);
        auto ts = tjurina_sec(g);
        py::dict out;
        out["tau"] = t.finite ? py::object(py::int_(t.value)) : py::none();
        out["tau_sec"] =
            ts.finite ? py::object(py::int_(ts.value)) : py::none();
        return out;
      },
      py::arg("germ"), py::arg("p") = 0, py::arg("k") = 1);

  m.def(
      "t1sec_basis",
      [](const std::string& germ, std::uint64_t p, unsigned k) {
        auto g = germ_of(germ, p, k);
        auto basis = t1sec_basis(g);
        py::list out;
        for (auto& c : basis)
          out.append(py::str(coord_str(c, g.nvars(), g.size())));
        return out;
      },
      py::arg("germ"), py::arg("p") = 0, py::arg("k") = 1);

  m.def(
      "is_icis",
      [](const std::string& germ, std::uint64_t p, unsigned k) {
        auto r = is_icis(germ_of(germ, p, k));
        py::dict out;
        out["icis"] = r.icis;
        out["reason"] = r.reason.empty() ? py::object(py::none())
                                         : py::object(py::str(r.reason));
        return out;
      },
      py::arg("germ"), py::arg("p") = 0, py::arg("k") = 1);

  m.def(
      "normal_form",
      [](const std::string& tag, std::vector<long> params, std::uint64_t p,
         unsigned k) {
        SingularityType t;
        if (tag == "A") t = SingularityType::A_k(params.at(0));
        else if (tag == "F") t = SingularityType::F(params.at(0), params.at(1));
        else if (tag == "F22_0") t = SingularityType::simple_tag(TypeTag::F22_0);
        else if (tag == "F22_1") t = SingularityType::simple_tag(TypeTag::F22_1);
        else if (tag == "G5_0") t = SingularityType::simple_tag(TypeTag::G5_0);
        else if (tag == "G5_1") t = SingularityType::simple_tag(TypeTag::G5_1);
        else if (tag == "G7") t = SingularityType::simple_tag(TypeTag::G7);
        else if (tag == "H") t = SingularityType::simple_tag(TypeTag::H, params.at(0));
        else if (tag == "I0_odd") t = SingularityType::simple_tag(TypeTag::I0_odd, params.at(0));
        else if (tag == "I1_odd") t = SingularityType::simple_tag(TypeTag::I1_odd, params.at(0));
        else if (tag == "I0_even") t = SingularityType::simple_tag(TypeTag::I0_even, params.at(0));
        else if (tag == "I1_even") t = SingularityType::simple_tag(TypeTag::I1_even, params.at(0));
        else throw InvalidParameters("unknown type tag " + tag);
        MapGerm nf = normal_form_of(t, Field::make(p, k));
        std::string s;
        for (int i = 0; i < nf.size(); ++i) {
          if (i) s += " ; ";
          s += nf[i].str();
        }
        return s;
      },
      py::arg("tag"), py::arg("params") = std::vector<long>{},
      py::arg("p") = 0, py::arg("k") = 1);

  m.def(
      "unfold",
      [](const std::string& germ, std::uint64_t p, unsigned k,
         bool filter_order2) {
        Unfolding u = build_unfolding(germ_of(germ, p, k), filter_order2);
        auto h = enumerate_fibers(u);
        return json_to_py(histogram_json(h));
      },
      py::arg("germ"), py::arg("p"), py::arg("k") = 1,
      py::arg("filter_order2") = true,
      "Exhaustive fiber classification of the T^1,sec unfolding.");

  m.def("repro_char2", [] { return repro_char2_elimination().str(); },
        "The characteristic-2 elimination polynomial.");

  m.def(
      "order",
      [](const std::string& germ, std::vector<int> degrees,
         std::vector<int> weights, std::uint64_t p, unsigned k) {
        auto g = germ_of(germ, p, k);
        long v = dw_order(g, WeightSystem{degrees, weights});
        return v >= kInfinity ? py::object(py::none())
                              : py::object(py::int_(v));
      },
      py::arg("germ"), py::arg("degrees"), py::arg("weights"),
      py::arg("p") = 0, py::arg("k") = 1);
}
