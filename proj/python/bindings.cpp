// Python bindings: fields cross the boundary as float64 arrays of shape
// (components, N, ..., N), last axis fastest.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "psiec/applications.hpp"
#include "psiec/exterior.hpp"
#include "psiec/frame.hpp"

namespace py = pybind11;
using namespace psiec;

namespace {

py::array_t<double> to_array(const SampledFormField& f) {
  std::vector<py::ssize_t> shape{static_cast<py::ssize_t>(f.comp.size())};
  for (int a = 0; a < f.grid.n; ++a) shape.push_back(f.grid.N);
  py::array_t<double> out(shape);
  double* p = out.mutable_data();
  for (const auto& c : f.comp) p = std::copy(c.begin(), c.end(), p);
  return out;
}

SampledFormField from_array(py::array_t<double, py::array::c_style | py::array::forcecast> a,
                            int degree, double extent) {
  int n = static_cast<int>(a.ndim()) - 1;
  if (n != 2 && n != 3) throw py::value_error("expected shape (components, N, N[, N])");
  Grid g{n, static_cast<int>(a.shape(1)), extent};
  for (int k = 1; k <= n; ++k)
    if (a.shape(k) != g.N) throw py::value_error("grid must be cubic");
  auto f = SampledFormField::zeros(g, degree);
  if (a.shape(0) != static_cast<py::ssize_t>(f.comp.size()))
    throw py::value_error("component count does not match the degree");
  const double* p = a.data();
  for (auto& c : f.comp) {
    std::copy(p, p + c.size(), c.begin());
    p += c.size();
  }
  return f;
}

WindowSet windows(const std::string& config, bool directional) {
  if (!config.empty()) return load_windows_file(config);
  WindowSet w;
  if (directional) {
    w.angular2d = AngularWindow2D::cos_power(1, 5);
    w.angular3d = AngularWindow3D::directional();
  }
  return w;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Polar wavelets for differential forms";

  py::class_<WindowSet>(m, "Windows")
      .def(py::init([](const std::string& config, bool directional) { return windows(config, directional); }),
           py::arg("config") = "", py::arg("directional") = true)
      .def_property_readonly("hash", [](const WindowSet& w) { return window_hash(w); })
      .def("to_json", [](const WindowSet& w) { return windows_to_json(w); })
      .def("calderon_residual",
           [](const WindowSet& w, int levels) { return calderon_check(w.radial, levels, calderon_grid(levels)); },
           py::arg("levels") = 6)
      .def("admissible", [](const WindowSet& w) {
        GauntTable g(8);
        auto a = admissibility_2d(w.angular2d);
        auto b = admissibility_3d(w.angular3d, g);
        py::dict d;
        d["plane"] = a.pass;
        d["space"] = b.pass;
        d["plane_message"] = a.message;
        d["space_message"] = b.message;
        return d;
      });

  m.def("ft_basis", [](int n, unsigned mask) {
    auto s = ft_basis(n, mask);
    return py::make_tuple(s.sign, s.mask);
  }, "Transform of a basis monomial: (sign, dual mask).");

  m.def("atom_types", [](int n) {
    std::vector<std::string> out;
    for (const auto& t : atom_types(n)) out.push_back(t.str());
    return out;
  });

  m.def("sample_atom",
        [](int n, int r, const std::string& nu, int family, int j, std::vector<int> k, int t, int N,
           double extent, const WindowSet& w) {
          k.resize(3, 0);
          FormAtomIndex idx{{n, r, parse_nu(nu), family}, j, {k[0], k[1], k[2]}, t};
          double mi = 0.0;
          auto f = sample_atom(idx, Grid{n, N, extent}, w, &mi);
          return py::make_tuple(to_array(f), mi);
        },
        py::arg("n"), py::arg("r"), py::arg("nu"), py::arg("family") = 1, py::arg("j") = 0,
        py::arg("k") = std::vector<int>{}, py::arg("t") = 0, py::arg("N") = 64, py::arg("extent") = 16.0,
        py::arg("windows") = WindowSet{}, "Atom sampled on a grid; returns (array, max imaginary part).");

  m.def("random_field",
        [](int n, int degree, int N, double extent, double lo, double hi, unsigned long long seed) {
          return to_array(random_bandlimited(Grid{n, N, extent}, degree, lo, hi, seed));
        },
        py::arg("n"), py::arg("degree"), py::arg("N") = 64, py::arg("extent") = 16.0, py::arg("lo") = 0.0,
        py::arg("hi") = 3.0, py::arg("seed") = 1);

  m.def("roundtrip",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> a, int degree, double extent, int J,
           const WindowSet& w) {
          auto f = from_array(a, degree, extent);
          auto F = to_frequency(f);
          auto c = analyze(F, J, w);
          py::dict d;
          d["field"] = to_array(synthesize(c, w));
          d["coefficients"] = c.count();
          d["energy_exact"] = c.energy(Nu::d);
          d["energy_coexact"] = c.energy(Nu::delta);
          d["leakage"] = c.leakage;
          d["parseval_error"] = parseval_report(F, c).rel_error();
          return d;
        },
        py::arg("field"), py::arg("degree"), py::arg("extent"), py::arg("J"), py::arg("windows") = WindowSet{},
        "Analyze and re-synthesize a sampled form field.");

  m.def("exterior_derivative",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> a, int degree, double extent) {
          return to_array(spectral_d(from_array(a, degree, extent)));
        });

  m.def("circulation",
        [](double sigma, std::vector<double> center, int J, const WindowSet& w, int N) {
          center.resize(2, 0.0);
          auto st = circulation_study(sigma, center.data(), 1.0, J, w, N);
          py::list levels;
          for (const auto& L : st.levels) {
            py::dict d;
            d["J"] = L.J;
            d["boundary"] = L.boundary_sum;
            d["interior"] = L.interior_sum;
            d["residual"] = L.residual;
            levels.append(d);
          }
          return py::make_tuple(st.reference, levels);
        },
        py::arg("sigma") = 0.12, py::arg("center") = std::vector<double>{0.3, -0.2}, py::arg("J") = 6,
        py::arg("windows") = WindowSet{}, py::arg("N") = 512);

  m.def("cavity_reference", [](int count, double side) { return cavity_reference(count, side); },
        py::arg("count") = 6, py::arg("side") = kPi);
}
