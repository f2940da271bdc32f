// Python bindings for the main operations: surfaces, cylinders,
// deformations, the bounding LP, degenerating families and product models.

#include "flatgeom/builders.hpp"
#include "flatgeom/deform.hpp"
#include "flatgeom/degeneration.hpp"
#include "flatgeom/jsonio.hpp"
#include "flatgeom/multicomponent.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace flatgeom;

namespace {

using Complex = std::complex<double>;

Vec2<double> to_vec(const Complex& z) { return {z.real(), z.imag()}; }
Complex to_c(const Vec2<double>& v) { return {v.x, v.y}; }

CVec<double> to_cvec(const std::vector<Complex>& v) {
    CVec<double> out;
    for (const auto& z : v) out.push_back(to_vec(z));
    return out;
}

CMat<double> to_cmat(const std::vector<std::vector<Complex>>& rows) {
    CMat<double> out;
    for (const auto& r : rows) out.push_back(to_cvec(r));
    return out;
}

std::vector<long> to_longs(const IntVec& v) {
    std::vector<long> out;
    for (const Int& z : v) out.push_back(z.get_si());
    return out;
}

struct PySurface {
    PolygonSurface<double> s;

    SurfaceInfo<double> info() const { return validate_or_throw(s); }
    HomologyPresentation pres() const { return homology_basis(info()); }
};

py::dict validate_dict(const PySurface& ps) {
    auto rep = validate(ps.s);
    py::dict d;
    d["pass"] = rep.pass;
    py::list checks;
    for (const auto& c : rep.checks) {
        py::dict cd;
        cd["name"] = c.name;
        cd["pass"] = c.pass;
        cd["message"] = c.message;
        checks.append(cd);
    }
    d["checks"] = checks;
    if (rep.pass) {
        d["area"] = rep.info->area();
        py::list comps;
        for (const auto& comp : rep.info->components) {
            py::dict c;
            c["genus"] = comp.genus;
            c["marked_points"] = comp.num_marked;
            c["kappa"] = comp.kappa;
            comps.append(c);
        }
        d["components"] = comps;
        d["kappa"] = rep.info->kappa();
    }
    return d;
}

py::list cylinder_list(const CylinderSet<double>& cs) {
    py::list out;
    for (const auto& c : cs.cylinders) {
        py::dict d;
        d["circumference"] = c.circ;
        d["height"] = c.ht;
        d["modulus"] = c.modulus;
        d["core_class"] = to_longs(c.core_class);
        d["dual"] = to_longs(c.dual);
        d["boundary"] = c.boundary;
        out.append(d);
    }
    return out;
}

struct PyFamily {
    Family fam;
};

py::dict collapse_dict(const CollapseData& cd) {
    py::dict d;
    d["explicit_mode"] = cd.explicit_mode;
    d["rank_base"] = cd.pres_base.rank();
    d["rank_limit"] = cd.pres_limit.rank();
    d["dim_V"] = cd.dim_V();
    d["dim_AnnV"] = cd.dim_Ann();
    py::list fs;
    for (int i = 0; i < cd.f_star.rows(); ++i) fs.append(to_longs(cd.f_star.row(i)));
    d["f_star"] = fs;
    d["limit"] = PySurface{cd.limit};
    return d;
}

} // namespace

PYBIND11_MODULE(flatgeom, m) {
    m.doc() = "polygonal translation surfaces: cylinders, deformations, degenerations";

    py::register_exception<ParseError>(m, "FlatgeomParseError");
    py::register_exception<ValidationError>(m, "FlatgeomValidationError", PyExc_ValueError);
    py::register_exception<StepBoundExceeded>(m, "StepBoundExceeded");
    py::register_exception<DivergentEdge>(m, "DivergentEdge");
    py::register_exception<DisjointnessViolation>(m, "DisjointnessViolation");

    py::class_<PySurface>(m, "Surface")
        .def(py::init([](const std::vector<std::vector<Complex>>& polygons,
                         const std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>>&
                             gluings) {
                 PySurface ps;
                 for (const auto& poly : polygons) {
                     std::vector<Vec2<double>> edges;
                     for (const auto& z : poly) edges.push_back(to_vec(z));
                     ps.s.polygons.push_back(std::move(edges));
                 }
                 for (const auto& [a, b] : gluings)
                     ps.s.gluings.push_back(
                         {EdgeRef{a.first, a.second}, EdgeRef{b.first, b.second}});
                 return ps;
             }),
             py::arg("polygons"), py::arg("gluings"))
        .def_static("from_json",
                    [](const std::string& text) {
                        return PySurface{surface_from_json(Json::parse(text))};
                    })
        .def_static("from_json_file",
                    [](const std::string& path) {
                        return PySurface{surface_from_json(load_json_file(path))};
                    })
        .def("to_json", [](const PySurface& ps) { return surface_to_json(ps.s).dump(2); })
        .def("validate", &validate_dict)
        .def_property_readonly("area", [](const PySurface& ps) { return area(ps.s); })
        .def_property_readonly("genus", [](const PySurface& ps) { return ps.info().genus(); })
        .def_property_readonly("kappa", [](const PySurface& ps) { return ps.info().kappa(); })
        .def_property_readonly("homology_rank",
                               [](const PySurface& ps) { return ps.pres().rank(); })
        .def_property_readonly(
            "periods",
            [](const PySurface& ps) {
                std::vector<Complex> out;
                for (const auto& p : period_coordinates(ps.s, ps.pres())) out.push_back(to_c(p));
                return out;
            })
        .def("apply_matrix",
             [](const PySurface& ps, double a, double b, double c, double d) {
                 return PySurface{apply_matrix(ps.s, Mat2<double>{a, b, c, d})};
             })
        .def(
            "cylinders",
            [](const PySurface& ps, Complex direction) {
                auto info = ps.info();
                auto pres = homology_basis(info);
                return cylinder_list(
                    analyze_cylinders(ps.s, info, pres, to_vec(direction)));
            },
            py::arg("direction") = Complex{1, 0})
        .def(
            "stretch_cylinder",
            [](const PySurface& ps, int index, double t, Complex direction) {
                auto info = ps.info();
                auto pres = homology_basis(info);
                auto cs = analyze_cylinders(ps.s, info, pres, to_vec(direction));
                return PySurface{stretch_cylinder(ps.s, cs, index, t).surface};
            },
            py::arg("index"), py::arg("t"), py::arg("direction") = Complex{1, 0})
        .def(
            "shear_cylinder",
            [](const PySurface& ps, int index, double t, Complex direction) {
                auto info = ps.info();
                auto pres = homology_basis(info);
                auto cs = analyze_cylinders(ps.s, info, pres, to_vec(direction));
                return PySurface{shear_cylinder(ps.s, cs, index, t).surface};
            },
            py::arg("index"), py::arg("t"), py::arg("direction") = Complex{1, 0})
        .def(
            "bound_moduli",
            [](const PySurface& ps, double M,
               const std::vector<std::vector<Complex>>& span,
               const std::vector<Complex>& directions, int samples) {
                auto info = ps.info();
                auto pres = homology_basis(info);
                LocalModel<double> model =
                    span.empty() ? LocalModel<double>::full(pres.rank())
                                 : LocalModel<double>::from_span(pres.rank(), to_cmat(span));
                std::vector<Vec2<double>> dirs;
                for (const auto& d : directions) dirs.push_back(to_vec(d));
                auto res = bound_moduli(ps.s, info, pres, model, M, dirs, samples);
                py::dict d;
                d["R"] = res.R;
                d["H"] = res.H;
                d["M_prime"] = res.M_prime;
                d["constant_path"] = res.constant_path;
                d["endpoint_max_modulus"] = res.endpoint_max_modulus;
                d["max_path_residual"] = res.max_path_residual;
                py::list path;
                for (const auto& e : res.path) {
                    py::dict pe;
                    pe["direction"] = e.dir_index;
                    pe["cylinder"] = e.cyl_index;
                    pe["t"] = e.t_coeff;
                    pe["modulus_before"] = e.m0;
                    pe["modulus_after"] = e.m1;
                    path.append(pe);
                }
                d["path"] = path;
                d["final_surface"] = PySurface{res.final_surface};
                return d;
            },
            py::arg("M"), py::arg("span") = std::vector<std::vector<Complex>>{},
            py::arg("directions") = std::vector<Complex>{{1, 0}, {0, 1}},
            py::arg("samples") = 10);

    m.def("square_torus", [] { return PySurface{square_torus<double>()}; });
    m.def("rect_torus",
          [](double w, double h) { return PySurface{rect_torus<double>(w, h)}; });
    m.def("l_shape", [] { return PySurface{l_shape_2x2<double>()}; });
    m.def("octagon", [] { return PySurface{octagon_surface()}; });
    m.def("two_square_slit", [] { return PySurface{two_square_slit<double>()}; });
    m.def("sandwich", [](double h1, double h2) {
        return PySurface{sandwich_surface<double>(h1, h2)};
    });

    m.def(
        "linalg_bound",
        [](const std::vector<std::vector<double>>& subspace, const std::vector<double>& v,
           double H) {
            BoundResult r = linalg_bound({subspace, v, H});
            py::dict d;
            d["v_prime"] = r.v_prime;
            d["H_local"] = r.H_local;
            d["fixed"] = r.fixed;
            d["moved"] = r.moved;
            return d;
        },
        py::arg("subspace"), py::arg("v"), py::arg("H"));

    py::class_<PyFamily>(m, "Family")
        .def_static("from_json_file",
                    [](const std::string& path) {
                        return PyFamily{family_from_json(load_json_file(path))};
                    })
        .def("to_json", [](const PyFamily& f) { return family_to_json(f.fam).dump(2); })
        .def("evaluate",
             [](const PyFamily& f, double eps) {
                 return PySurface{evaluate_family(f.fam, eps)};
             })
        .def("collapse", [](const PyFamily& f) { return collapse_dict(collapse(f.fam)); })
        .def("check_equations",
             [](const PyFamily& f, const std::vector<double>& grid) {
                 auto cd = collapse(f.fam);
                 auto reps = limit_equation_check(f.fam, cd, f.fam.equations, grid);
                 py::list out;
                 for (const auto& r : reps) {
                     py::dict d;
                     d["family_residual"] = r.family_residual;
                     d["limit_residual"] = r.limit_residual;
                     d["limit_satisfied"] = r.limit_satisfied;
                     out.append(d);
                 }
                 return out;
             })
        .def("convergence", [](const PyFamily& f, const std::vector<double>& grid) {
            auto cd = collapse(f.fam);
            auto rep = convergence_report(f.fam, cd, grid);
            py::dict d;
            d["min_slope"] = rep.min_slope;
            py::list rows;
            for (const auto& r : rep.rows) {
                py::dict rd;
                rd["basis_class"] = r.basis_class;
                rd["slope"] = r.slope;
                rd["constant"] = r.constant;
                rd["residuals"] = r.residual;
                rows.append(rd);
            }
            d["rows"] = rows;
            return d;
        });

    m.def("cautionary_family", [](Complex c, Complex d) {
        return PyFamily{cautionary_family(to_vec(c), to_vec(d))};
    });
    m.def("slit_closing_family", [](double eps0) { return PyFamily{family_slit_closing(eps0)}; },
          py::arg("eps0") = 0.25);

    py::class_<ProductModel<double>>(m, "ProductModel")
        .def(py::init([](const std::vector<PySurface>& comps,
                         const std::vector<std::vector<Complex>>& span) {
                 std::vector<PolygonSurface<double>> surfaces;
                 for (const auto& c : comps) surfaces.push_back(c.s);
                 return make_product_model(std::move(surfaces), to_cmat(span));
             }),
             py::arg("components"), py::arg("span"))
        .def_static("from_json_file",
                    [](const std::string& path) {
                        return product_model_from_json(load_json_file(path));
                    })
        .def_property_readonly("dim", &ProductModel<double>::dim)
        .def("is_prime",
             [](const ProductModel<double>& m) {
                 auto w = is_prime(m);
                 py::dict d;
                 d["prime"] = w.prime;
                 if (!w.prime) {
                     std::vector<int> side(w.side.begin(), w.side.end());
                     d["witness"] = side;
                 }
                 return d;
             })
        .def("factorize",
             [](const ProductModel<double>& m) {
                 py::list out;
                 for (const auto& f : prime_factorization(m)) out.append(f.members);
                 return out;
             })
        .def("conclusions", [](const ProductModel<double>& m) {
            auto con = check_prime_conclusions(m);
            py::dict d;
            d["kernel_dims"] = con.kernel_dims;
            d["periods_determined"] = con.periods_determined;
            d["ranks"] = con.ranks;
            d["ranks_equal"] = con.ranks_equal;
            d["pass"] = con.pass;
            return d;
        });

    m.def("diagonal_model", [](const PySurface& s, int copies) {
        return diagonal_model(s.s, copies);
    }, py::arg("surface"), py::arg("copies") = 2);
}
