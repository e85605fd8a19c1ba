#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "curveflow/export.hpp"

namespace py = pybind11;
using namespace curveflow;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

TangentField to_field(const Array& a) {
    if (a.ndim() != 2 || a.shape(1) != 3) throw ArgumentError("expected an array of shape (N, 3)");
    auto r = a.unchecked<2>();
    TangentField f(static_cast<std::size_t>(a.shape(0)));
    for (py::ssize_t i = 0; i < a.shape(0); ++i) f[static_cast<std::size_t>(i)] = {r(i, 0), r(i, 1), r(i, 2)};
    return f;
}

DiscreteCurve to_curve(const Array& a) { return DiscreteCurve(to_field(a)); }

Array to_array(const std::vector<Vec3>& v) {
    Array a({static_cast<py::ssize_t>(v.size()), py::ssize_t{3}});
    auto w = a.mutable_unchecked<2>();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto k = static_cast<py::ssize_t>(i);
        w(k, 0) = v[i].x;
        w(k, 1) = v[i].y;
        w(k, 2) = v[i].z;
    }
    return a;
}

Array frames_array(const std::vector<DiscreteCurve>& frames) {
    const auto n = frames.empty() ? py::ssize_t{0} : static_cast<py::ssize_t>(frames.front().size());
    Array a({static_cast<py::ssize_t>(frames.size()), n, py::ssize_t{3}});
    auto w = a.mutable_unchecked<3>();
    for (std::size_t f = 0; f < frames.size(); ++f)
        for (std::size_t i = 0; i < frames[f].size(); ++i) {
            const auto& p = frames[f][i];
            w(f, i, 0) = p.x;
            w(f, i, 1) = p.y;
            w(f, i, 2) = p.z;
        }
    return a;
}

Vec3 to_vec3(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }

CurveFamily family(const std::string& name, double r, int p, int q, double R, double rho) {
    if (name == "circle") return Circle{r};
    if (name == "trefoil") return Trefoil{};
    if (name == "torus_knot") return TorusKnot{p, q, R, rho};
    throw ConfigError("unknown curve family '" + name + "'");
}

WeightSpec weight(const std::string& name, double C, double p) {
    if (name == "identity") return Identity{};
    if (name == "length") return LengthWeighted{C, p};
    if (name == "curvature") return CurvatureWeighted{};
    throw ConfigError("unknown weight type '" + name + "'");
}

HamiltonianSpec hamiltonian(const std::string& name, const std::array<double, 3>& axis, double power) {
    if (name == "length") {
        if (power == 1.0) return Length{};
        return Length{[power](double l) { return std::pow(l, power); },
                      [power](double l) { return power * std::pow(l, power - 1.0); }};
    }
    if (name == "flux_translation") return FluxTranslation{to_vec3(axis)};
    if (name == "flux_rotation") {
        const Vec3 v = to_vec3(axis);
        if (std::abs(norm(v) - 1.0) > 1e-9) throw ConfigError("flux_rotation axis must be a unit vector");
        return FluxRotation{v / norm(v)};
    }
    if (name == "squared_curvature") return SquaredCurvature{};
    if (name == "total_torsion") return TotalTorsion{};
    if (name == "squared_scale") return SquaredScale{};
    if (name == "length_times_k") return LengthTimesK{};
    throw ConfigError("unknown hamiltonian type '" + name + "'");
}

py::dict report_dict(const CheckReport& r) {
    py::dict d;
    d["name"] = r.name;
    d["residual"] = r.residual;
    d["tolerance"] = r.tolerance;
    d["refinement_orders"] = r.refinement_orders;
    d["min_order"] = r.min_order;
    d["passed"] = r.passed;
    d["must_fail"] = r.must_fail;
    d["ok"] = report_ok(r);
    d["seed"] = r.seed;
    d["detail"] = r.detail;
    return d;
}

py::dict diagnostics_dict(const std::vector<FlowDiagnostics>& ds) {
    std::vector<long> step;
    std::vector<double> time, h, length, speed, edge;
    std::vector<bool> resampled;
    std::vector<Vec3> angular, linear;
    for (const auto& d : ds) {
        step.push_back(d.step);
        time.push_back(d.time);
        h.push_back(d.hamiltonian_value);
        length.push_back(d.length);
        speed.push_back(d.max_speed);
        edge.push_back(d.min_edge);
        resampled.push_back(d.resampled);
        angular.push_back(d.momenta.angular);
        linear.push_back(d.momenta.linear);
    }
    py::dict out;
    out["step"] = py::array(py::cast(step));
    out["time"] = py::array(py::cast(time));
    out["hamiltonian"] = py::array(py::cast(h));
    out["length"] = py::array(py::cast(length));
    out["max_speed"] = py::array(py::cast(speed));
    out["min_edge"] = py::array(py::cast(edge));
    out["resampled"] = py::array(py::cast(resampled));
    out["angular_momentum"] = to_array(angular);
    out["linear_momentum"] = to_array(linear);
    return out;
}

}  // namespace

PYBIND11_MODULE(_curveflow, m) {
    m.doc() = "Hamiltonian flows of closed space curves.";

    // Translators run newest first, so the base class goes first.
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<InvarianceError>(m, "InvarianceError", PyExc_ValueError);
    py::register_exception<UnsupportedVariantError>(m, "UnsupportedVariantError", PyExc_ValueError);
    py::register_exception<DegenerateCurveError>(m, "DegenerateCurveError", PyExc_ValueError);
    py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);

    m.def(
        "make_curve",
        [](const std::string& name, std::size_t n, double r, int p, int q, double R, double rho) {
            return to_array(make_curve(family(name, r, p, q, R, rho), n).vertices());
        },
        py::arg("family"), py::arg("n"), py::arg("r") = 1.0, py::arg("p") = 2, py::arg("q") = 3, py::arg("R") = 2.0,
        py::arg("rho") = 1.0, "Vertices of a built-in curve as an (N, 3) array.");

    m.def(
        "length", [](const Array& c) { return measures(to_curve(c)).total_length; }, py::arg("curve"));
    m.def(
        "curvature_sq", [](const Array& c) { return curvature_sq(to_curve(c)); }, py::arg("curve"));
    m.def(
        "torsion", [](const Array& c) { return torsion(to_curve(c)); }, py::arg("curve"));

    m.def(
        "theta",
        [](const Array& c, const Array& h, const std::string& w, double C, double p) {
            return theta(weight(w, C, p), to_curve(c), to_field(h));
        },
        py::arg("curve"), py::arg("h"), py::arg("weight") = "identity", py::arg("C") = 1.0, py::arg("p") = 0.0);
    m.def(
        "omega",
        [](const Array& c, const Array& h, const Array& k, const std::string& w, double C, double p) {
            return omega(weight(w, C, p), to_curve(c), to_field(h), to_field(k));
        },
        py::arg("curve"), py::arg("h"), py::arg("k"), py::arg("weight") = "identity", py::arg("C") = 1.0,
        py::arg("p") = 0.0);

    m.def(
        "h_value",
        [](const std::string& H, const Array& c, std::array<double, 3> axis, double power) {
            return h_value(hamiltonian(H, axis, power), to_curve(c));
        },
        py::arg("hamiltonian"), py::arg("curve"), py::arg("axis") = std::array<double, 3>{0, 0, 1},
        py::arg("power") = 1.0);
    m.def(
        "h_grad",
        [](const std::string& H, const Array& c, std::array<double, 3> axis, double power) {
            return to_array(h_grad_l2(hamiltonian(H, axis, power), to_curve(c)));
        },
        py::arg("hamiltonian"), py::arg("curve"), py::arg("axis") = std::array<double, 3>{0, 0, 1},
        py::arg("power") = 1.0, "Exact L2 gradient of the discrete Hamiltonian.");
    m.def(
        "hgrad",
        [](const std::string& H, const Array& c, const std::string& w, double C, double p, std::array<double, 3> axis,
           double power) { return to_array(hgrad(hamiltonian(H, axis, power), weight(w, C, p), to_curve(c))); },
        py::arg("hamiltonian"), py::arg("curve"), py::arg("weight") = "identity", py::arg("C") = 1.0,
        py::arg("p") = 0.0, py::arg("axis") = std::array<double, 3>{0, 0, 1}, py::arg("power") = 1.0,
        "Horizontal Hamiltonian vector field.");

    m.def(
        "momentum",
        [](const Array& c, const std::string& w, double C, double p) {
            const auto curve = to_curve(c);
            const auto ws = weight(w, C, p);
            const Vec3 a = angular_momentum(ws, curve), l = linear_momentum(ws, curve);
            return py::make_tuple(std::array<double, 3>{a.x, a.y, a.z}, std::array<double, 3>{l.x, l.y, l.z});
        },
        py::arg("curve"), py::arg("weight") = "identity", py::arg("C") = 1.0, py::arg("p") = 0.0,
        "(angular, linear) momentum.");

    m.def(
        "format_scenario", [](const std::string& text) { return format_scenario(parse_scenario(text)); },
        py::arg("text"), "Canonical form of a scenario text.");

    m.def(
        "simulate",
        [](const std::string& text) {
            const auto s = parse_scenario(text);
            SimulationResult r;
            {
                py::gil_scoped_release release;
                r = simulate(s);
            }
            py::dict out;
            out["frames"] = frames_array(r.frames);
            out["diagnostics"] = diagnostics_dict(r.diagnostics);
            out["completed"] = r.completed;
            out["failed_step"] = r.failed_step;
            out["error"] = r.error;
            return out;
        },
        py::arg("text"), "Runs a scenario given as text; frames have shape (F, N, 3).");

    m.def(
        "verify",
        [](const std::string& text) {
            const auto s = parse_scenario(text);
            std::vector<CheckReport> reports;
            {
                py::gil_scoped_release release;
                reports = verify_scenario(s);
            }
            py::list out;
            for (const auto& r : reports) out.append(report_dict(r));
            return out;
        },
        py::arg("text"), "Verification reports for a scenario given as text.");

    m.def(
        "run_scenario",
        [](const std::string& path, const std::string& out_dir, bool verify_only) {
            const auto s = load_scenario(path);
            py::gil_scoped_release release;
            return run_scenario(s, out_dir, verify_only);
        },
        py::arg("path"), py::arg("out_dir"), py::arg("verify_only") = false,
        "Runs a scenario file and writes its outputs; returns the CLI exit code.");
}
