#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "calorics/caloric.hpp"
#include "calorics/constructions.hpp"
#include "calorics/errors.hpp"
#include "calorics/nodal.hpp"
#include "calorics/poly_io.hpp"
#include "calorics/scan.hpp"

namespace py = pybind11;
using namespace calorics;

namespace {

// Rationals cross the boundary as fractions.Fraction; ints, strings and Fractions are accepted.
Rational to_rational(const py::handle& obj) {
    if (py::isinstance<py::bool_>(obj)) throw InvalidArgument("expected a rational, got bool");
    if (py::isinstance<py::float_>(obj)) return rational_from_double(obj.cast<double>());
    return parse_rational(py::str(obj).cast<std::string>());
}

py::object to_fraction(const Rational& r) {
    return py::module_::import("fractions").attr("Fraction")(to_string(r));
}

Rotation to_rotation(const py::object& obj) {
    if (obj.is_none()) return Rotation::pair(Rational(3, 5), Rational(4, 5));
    if (py::isinstance<py::str>(obj)) return Rotation::parse(obj.cast<std::string>());
    if (py::isinstance<py::float_>(obj)) return Rotation::from_angle(obj.cast<double>());
    const auto pair = obj.cast<py::sequence>();
    if (pair.size() != 2) throw InvalidArgument("rotation must be (c, s), an angle or a string");
    return Rotation::pair(to_rational(pair[0]), to_rational(pair[1]));
}

py::dict json_to_dict(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump()).cast<py::dict>();
}

py::dict check_dict(const CheckResult& r) {
    py::dict d;
    d["ok"] = r.ok;
    d["detail"] = r.detail;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact homogeneous caloric polynomials and nodal-domain counting";

    // Later registrations are tried first, so subclasses follow their base.
    const auto& base = py::register_exception<Error>(m, "CaloricsError");
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<NotHomogeneous>(m, "NotHomogeneous", base.ptr());
    py::register_exception<BoundViolation>(m, "BoundViolation", base.ptr());
    py::register_exception<DimensionMismatch>(m, "DimensionMismatch", base.ptr());

    py::class_<Polynomial>(m, "Polynomial")
        .def(py::init([](const std::string& text, int n) { return parse_poly(text, n); }), py::arg("text"),
             py::arg("n"))
        .def_property_readonly("spatial_dim", &Polynomial::spatial_dim)
        .def_property_readonly("is_zero", &Polynomial::is_zero)
        .def("__len__", &Polynomial::size)
        .def("__str__", [](const Polynomial& p) { return to_string(p); })
        .def("__repr__", [](const Polynomial& p) { return "Polynomial('" + to_string(p) + "', " + std::to_string(p.spatial_dim()) + ")"; })
        .def("terms",
             [](const Polynomial& p) {
                 py::list out;
                 for (const auto& [e, c] : p.terms())
                     out.append(py::make_tuple(e.t_exp, py::tuple(py::cast(e.space)), to_fraction(c)));
                 return out;
             },
             "[(k, alpha, coefficient)] in canonical order")
        .def("to_json", [](const Polynomial& p) { return to_json(p).dump(); })
        .def_static("from_json", [](const std::string& s) { return polynomial_from_json(nlohmann::json::parse(s)); })
        .def("evaluate",
             [](const Polynomial& p, const py::sequence& pt) {
                 RationalPoint q;
                 for (const auto& v : pt) q.coords.push_back(to_rational(v));
                 if (static_cast<int>(q.coords.size()) != p.spatial_dim() + 1)
                     throw DimensionMismatch("point needs n + 1 coordinates");
                 return to_fraction(evaluate(p, q));
             })
        .def("evaluate_float", [](const Polynomial& p, const std::vector<double>& pt) { return evaluate_float(p, pt); })
        .def("partial", [](const Polynomial& p, const std::string& var) {
            if (var == "t") return partial(p, Var::t());
            const Polynomial probe = parse_poly(var, p.spatial_dim());
            for (int a = 0; a < p.spatial_dim(); ++a)
                if (probe == Polynomial::variable(p.spatial_dim(), Var::x(a))) return partial(p, Var::x(a));
            throw InvalidArgument("not a variable: " + var);
        })
        .def("rotate", [](const Polynomial& p, int i, int j, const py::object& rot) {
            const Rotation r = to_rotation(rot);
            return rotate_xy(p, i, j, r.c, r.s);
        })
        .def("__add__", [](const Polynomial& a, const Polynomial& b) { return a + b; })
        .def("__sub__", [](const Polynomial& a, const Polynomial& b) { return a - b; })
        .def("__mul__", [](const Polynomial& a, const Polynomial& b) { return a * b; })
        .def("__mul__", [](const Polynomial& a, const py::object& c) { return a * to_rational(c); })
        .def("__rmul__", [](const Polynomial& a, const py::object& c) { return a * to_rational(c); })
        .def("__neg__", [](const Polynomial& a) { return -a; })
        .def("__pow__", [](const Polynomial& a, unsigned e) { return pow(a, e); })
        .def("__eq__", [](const Polynomial& a, const Polynomial& b) { return a == b; })
        .def("__hash__", [](const Polynomial& p) { return py::hash(py::str(to_string(p))); });

    m.def("parse_poly", [](const std::string& text, int n) { return parse_poly(text, n); }, py::arg("text"), py::arg("n"));
    m.def("heat_apply", &heat_apply);
    m.def("parabolic_degree", &parabolic_degree);
    m.def("is_caloric", [](const Polynomial& p) {
        const CaloricCheck c = is_caloric(p);
        py::dict d;
        d["ok"] = c.ok();
        d["status"] = to_string(c.status);
        d["detail"] = c.detail;
        return d;
    });
    m.def("chain_check", [](const Polynomial& p) {
        const ChainReport r = chain_check(p);
        py::dict d;
        d["ok"] = r.ok;
        d["m"] = r.m;
        d["first_failure"] = r.first_failure ? py::object(py::int_(*r.first_failure)) : py::none();
        return d;
    });
    m.def("eigen_check", [](const Polynomial& p) { return check_dict(eigen_check(p)); });

    m.def("hermite", &hermite);
    m.def("basic_hcp", &basic_hcp);
    m.def("product_hcp", [](const std::vector<unsigned>& alpha) { return product_hcp({alpha}); });
    m.def("basis", &basis, py::arg("n"), py::arg("d"));
    m.def("parabola_factors", [](unsigned d, double tol) {
        const ParabolaFactors f = parabola_factors(d, tol);
        py::dict out;
        out["leading_x"] = f.leading_x;
        out["coefficients"] = f.coefficients;
        out["reconstruction_error"] = f.reconstruction_error;
        return out;
    }, py::arg("d"), py::arg("tol") = 1e-10);
    m.def("weighted_inner_product", [](const Polynomial& p, const Polynomial& q) {
        const WeightedInnerProduct w = weighted_inner_product(p, q);
        return py::make_tuple(to_fraction(w.rational_part), w.pi_half_power, w.value());
    }, "(rational_part, pi_half_power, value)");

    m.def("harmonic_2d", [](unsigned d, const std::string& kind) { return harmonic_2d({d, parse_seed_kind(kind)}); },
          py::arg("d"), py::arg("kind") = "im");
    m.def("lewy_2mod4", [](unsigned d, const py::object& eps) { return lewy_2mod4(d, to_rational(eps)); });
    m.def("odd_construction", [](unsigned d, const py::object& eps, const py::object& rot) {
        return odd_construction(d, to_rational(eps), to_rotation(rot));
    }, py::arg("d"), py::arg("eps"), py::arg("rot") = py::none());
    m.def("zero_mod4", [](unsigned d, const py::object& eps, const py::object& rot) {
        return zero_mod4(d, to_rational(eps), to_rotation(rot));
    }, py::arg("d"), py::arg("eps"), py::arg("rot") = py::none());
    m.def("high_dim", [](unsigned d, const std::string& kind, int n) { return high_dim(d, parse_seed_kind(kind), n); },
          py::arg("d"), py::arg("kind") = "re", py::arg("n") = 3);
    m.def("product_lower", &product_lower, py::arg("n"), py::arg("d"));
    m.def("fixture", &fixture);
    m.def("fixture_ids", &fixture_ids);
    m.def("scalar_multiple", [](const Polynomial& q, const Polynomial& p) -> py::object {
        const auto r = scalar_multiple(q, p);
        return r ? to_fraction(*r) : py::none();
    });

    m.def("nodal_count", [](const Polynomial& p, std::optional<std::vector<int>> schedule) {
        ComponentReport r;
        {
            py::gil_scoped_release release;
            r = schedule ? nodal_count(p, *schedule) : nodal_count(p);
        }
        return json_to_dict(to_json(r));
    }, py::arg("p"), py::arg("schedule") = py::none());
    m.def("slice_count", [](const Polynomial& p, std::optional<double> half_width, std::optional<int> resolution,
                            std::optional<int> nodal_total) {
        const double r = half_width ? *half_width : default_slice_half_width(p);
        const int res = resolution ? *resolution : default_slice_resolution(p.spatial_dim());
        return json_to_dict(to_json(slice_count(p, r, res, nodal_total)));
    }, py::arg("p"), py::arg("half_width") = py::none(), py::arg("resolution") = py::none(),
          py::arg("nodal_total") = py::none());
    m.def("polar_chambers", [](const Polynomial& p, const std::string& pole, double rho, int samples) {
        const Pole which = pole == "south" ? Pole::south : Pole::north;
        return json_to_dict(to_json(polar_chambers(p, which, rho, samples)));
    }, py::arg("p"), py::arg("pole") = "north", py::arg("rho") = 0.1, py::arg("samples") = 256);
    m.def("export_nodal_pointcloud", &export_nodal_pointcloud, py::arg("p"), py::arg("resolution") = 256,
          py::arg("delta") = 0.2);
    m.def("single_linkage_clusters", [](const std::vector<Point3>& pts, double gap) {
        return single_linkage_clusters(pts, gap);
    }, py::arg("points"), py::arg("gap") = 0.05);
    m.def("bounds_report", [](int n, unsigned d, std::optional<int> counted) {
        return json_to_dict(to_json(bounds_report(n, d, counted)));
    }, py::arg("n"), py::arg("d"), py::arg("counted") = py::none());
    m.def("scan_epsilon", [](const std::string& family, unsigned d, const py::list& grid, std::optional<int> target,
                             const py::object& rot) {
        ConstructionSpec spec;
        spec.family = parse_family(family);
        spec.d = d;
        spec.n = 2;
        spec.rot = to_rotation(rot);
        std::vector<Rational> eps;
        for (const auto& e : grid) eps.push_back(to_rational(e));
        const int want = target ? *target : target_count(spec).value_or(-1);
        if (want < 0) throw InvalidArgument("no default target for this family");
        return json_to_dict(to_json(scan_epsilon(spec, eps, want)));
    }, py::arg("family"), py::arg("d"), py::arg("grid"), py::arg("target") = py::none(), py::arg("rot") = py::none());
}
