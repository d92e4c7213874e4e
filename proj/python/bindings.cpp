#include "dnls/gauge.hpp"
#include "dnls/pde_oracle.hpp"
#include "dnls/reconstruction.hpp"

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace dnls;

namespace {

py::array_t<cplx> carr(const std::vector<cplx>& v) { return py::array_t<cplx>(v.size(), v.data()); }
py::array_t<double> rarr(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

Potential from_arrays(py::array_t<double> x, py::array_t<cplx> q) {
    auto xv = x.unchecked<1>();
    auto qv = q.unchecked<1>();
    if (xv.shape(0) != qv.shape(0) || xv.shape(0) < 16) throw std::invalid_argument("x and q must match, >= 16 samples");
    Potential p;
    for (py::ssize_t i = 0; i < xv.shape(0); ++i) {
        p.x.push_back(xv(i));
        p.q.push_back(qv(i));
    }
    p.X = p.x.back();
    if (std::abs(p.x.front() + p.X) > 1e-9 * (1 + p.X)) throw std::invalid_argument("grid must be symmetric [-X, X]");
    return p;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Inverse scattering solver for the derivative NLS equation (C++ core)";

    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

    py::class_<Potential>(m, "Potential")
        .def_static(
            "sech", [](cplx A, std::vector<double> phase, double X, int J) {
                return Potential::sampled(SechFamily{A, phase}, X, J);
            },
            py::arg("A"), py::arg("phase") = std::vector<double>{}, py::arg("X") = 30.0, py::arg("J") = 12001)
        .def_static("zero", &Potential::zero, py::arg("X") = 30.0, py::arg("J") = 12001)
        .def_static("from_arrays", &from_arrays, py::arg("x"), py::arg("q"))
        .def_property_readonly("x", [](const Potential& p) { return rarr(p.x); })
        .def_property_readonly("q", [](const Potential& p) { return carr(p.q); })
        .def_readonly("X", &Potential::X)
        .def("at", &Potential::at)
        .def("l2_norm_sq", &Potential::l2_norm_sq)
        .def("h22_norm", &Potential::h22_norm)
        .def("mirror", &Potential::mirror)
        .def("validate", &Potential::validate, py::arg("tail_tol") = 1e-10);

    py::class_<SpectralPair>(m, "SpectralPair")
        .def_readonly("R", &SpectralPair::R)
        .def_readonly("x0", &SpectralPair::x0)
        .def_readonly("Lambda1", &SpectralPair::Lambda1)
        .def_readonly("R_mirror", &SpectralPair::R_mirror)
        .def_readonly("x0_mirror", &SpectralPair::x0_mirror)
        .def_property_readonly("t", [](const SpectralPair& s) { return s.right.t; })
        .def_property_readonly("S_inf", [](const SpectralPair& s) { return s.right.graph.S_inf; });

    m.def(
        "direct_map",
        [](const Potential& q, std::optional<double> R, std::optional<double> x0) {
            DirectOptions o;
            if (R) o.params.R = o.params_mirror.R = *R;
            if (x0) o.params.x0 = *x0;
            return direct_map(q, o);
        },
        py::arg("q"), py::arg("R") = py::none(), py::arg("x0") = py::none(),
        py::call_guard<py::gil_scoped_release>());
    m.def("evolve", &evolve_pair, py::arg("data"), py::arg("t"));
    m.def(
        "inverse_map",
        [](const SpectralPair& sp, std::vector<double> xs, double resolution, double a_split, int threads) {
            InverseOptions o;
            o.resolution = resolution;
            o.a_split = a_split;
            InverseResult r;
            {
                py::gil_scoped_release nogil;
                r = inverse_map(sp, xs, o, threads);
            }
            std::vector<double> res, sig;
            for (auto& d : r.diag) {
                res.push_back(d.residual);
                sig.push_back(d.sigma_min);
            }
            py::dict out;
            out["x"] = rarr(r.x);
            out["q"] = carr(r.q);
            out["residual"] = rarr(res);
            out["sigma_min"] = rarr(sig);
            out["overlap_error"] = r.overlap_error;
            out["overlap_ok"] = r.overlap_ok;
            return out;
        },
        py::arg("data"), py::arg("x"), py::arg("resolution") = 1.0, py::arg("a_split") = 0.0, py::arg("threads") = 1);

    m.def(
        "step_dnls2",
        [](const Potential& q0, std::vector<double> times, double dt, int N, double L) {
            PdeOptions o;
            o.N = N;
            o.L = L > 0 ? L : 4 * q0.X;
            PdeRun r;
            {
                py::gil_scoped_release nogil;
                r = step_dnls2(q0, times, dt, o);
            }
            py::list snaps;
            for (auto& s : r.q) snaps.append(carr(s));
            py::dict out;
            out["x"] = rarr(r.x);
            out["t"] = rarr(r.t);
            out["q"] = snaps;
            out["l2"] = rarr(r.l2);
            return out;
        },
        py::arg("q0"), py::arg("times"), py::arg("dt") = 1e-3, py::arg("N") = 1024, py::arg("L") = 0.0);

    m.def("gauge_forward", &gauge_forward, py::arg("u"), py::arg("eps") = -1);
    m.def("gauge_inverse", &gauge_inverse, py::arg("q"), py::arg("eps") = -1);
}
