// flatgeom command line: validation, stratum info, cylinder decompositions,
// per-cylinder deformations, modulus bounding, degenerating families and
// prime decomposition of product models.

#include "flatgeom/builders.hpp"
#include "flatgeom/deform.hpp"
#include "flatgeom/jsonio.hpp"

#include <CLI11.hpp>

#include <random>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace flatgeom;

namespace {

int g_exit = 0; // sticky check-failure flag (exit 1)

void emit(const std::string& text, const std::string& out_path) {
    std::cout << text;
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw Error("cannot write " + out_path);
        out << text;
    }
}

Vec2<double> parse_direction(const std::string& s) {
    std::istringstream in(s);
    double a, b;
    if (!(in >> a >> b)) throw ParseError("direction must be two numbers: \"a b\"");
    return {a, b};
}

std::vector<Vec2<double>> parse_directions(const std::string& s) {
    std::vector<Vec2<double>> out;
    std::stringstream in(s);
    std::string part;
    while (std::getline(in, part, ';'))
        if (!part.empty()) out.push_back(parse_direction(part));
    if (out.empty()) throw ParseError("no directions given");
    return out;
}

std::vector<double> parse_grid(const std::string& s) {
    std::vector<double> out;
    std::stringstream in(s);
    std::string part;
    while (std::getline(in, part, ','))
        if (!part.empty()) out.push_back(std::stod(part));
    if (out.empty()) throw ParseError("empty eps grid");
    return out;
}

std::string class_string(const IntVec& v) {
    std::string s = "[";
    for (size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + v[i].get_str();
    return s + "]";
}

template <class R> int run_validate(const std::string& path) {
    auto j = load_json_file(path);
    PolygonSurface<R> s;
    if constexpr (ScalarTraits<R>::exact)
        s = surface_from_json_exact(j);
    else
        s = surface_from_json(j);
    auto rep = validate(s);
    std::cout << rep.summary();
    if (!rep.pass) return 1;
    std::cout << "valid translation surface\n";
    return 0;
}

void print_info(const SurfaceInfo<double>& info, const HomologyPresentation* pres) {
    std::cout << "components," << info.comb.num_components << "\n";
    for (size_t c = 0; c < info.components.size(); ++c) {
        const auto& comp = info.components[c];
        std::cout << "component," << c << ",genus," << comp.genus << ",marked,"
                  << comp.num_marked << ",kappa,";
        for (size_t i = 0; i < comp.kappa.size(); ++i)
            std::cout << (i ? " " : "") << comp.kappa[i];
        std::cout << "\n";
    }
    std::cout << "area," << fmt_num(info.area()) << "\n";
    if (pres) {
        std::cout << "homology_rank," << pres->rank() << "\n";
        std::cout << "absolute_rank," << pres->absolute_rank() << "\n";
    }
}

std::string cylinder_csv(const CylinderSet<double>& cs) {
    std::ostringstream out;
    out << "index,core_class,circumference,height,modulus,boundary\n";
    for (size_t i = 0; i < cs.cylinders.size(); ++i) {
        const auto& c = cs.cylinders[i];
        out << i << "," << class_string(c.core_class) << "," << fmt_num(c.circ) << ","
            << fmt_num(c.ht) << "," << fmt_num(c.modulus) << "," << c.boundary << "\n";
    }
    return out.str();
}

LocalModel<double> model_for(const Json& j, const HomologyPresentation& pres) {
    if (j.contains("model")) return model_from_json(j.at("model"), pres.rank());
    return LocalModel<double>::full(pres.rank());
}

int run(int argc, char** argv) {
    CLI::App app{"flat surfaces: cylinders, deformations, degenerations"};
    app.require_subcommand(1);

    std::string path, out_path, direction = "1 0", directions = "1 0;0 1";
    std::string eps_grid = "1e-1,1e-2,1e-3,1e-4,1e-5";
    bool exact = false;
    double M = 2.0, stretch_t = 0, shear_t = 0, c_re = 2, d_re = 5, eps0 = 0.1;
    int cylinder_index = 0, samples = 10;
    long seed = 0;
    bool do_stretch = false, xi_test = false;

    auto* v = app.add_subcommand("validate", "check the surface invariants");
    v->add_option("file", path)->required();
    v->add_flag("--exact", exact, "exact rational arithmetic");

    auto* inf = app.add_subcommand("info", "stratum data and homology rank");
    inf->add_option("file", path)->required();
    inf->add_flag("--exact", exact);

    auto* cyl = app.add_subcommand("cylinders", "cylinder decomposition as CSV");
    cyl->add_option("file", path)->required();
    cyl->add_option("--direction", direction, "direction \"a b\" (default horizontal)");
    cyl->add_flag("--exact", exact);
    cyl->add_option("--out", out_path, "also write the CSV here");

    auto* def = app.add_subcommand("deform", "stretch or shear one cylinder");
    def->add_option("file", path)->required();
    def->add_option("--cylinder", cylinder_index)->required();
    auto* st = def->add_option("--stretch", stretch_t, "a_t with factor e^t");
    auto* sh = def->add_option("--shear", shear_t, "u_t");
    def->add_option("--direction", direction);
    def->add_option("--out", out_path, "write the deformed surface JSON");

    auto* bm = app.add_subcommand("bound-moduli", "deform all large-modulus cylinders");
    bm->add_option("file", path)->required();
    bm->add_option("--M", M)->required();
    bm->add_option("--directions", directions, "semicolon-separated \"a b\" pairs");
    bm->add_option("--samples", samples, "tangency samples along the path");
    bm->add_option("--out", out_path, "write the final surface JSON");

    auto* dg = app.add_subcommand("degenerate", "periods vs eps and convergence report");
    dg->add_option("file", path)->required();
    dg->add_option("--eps-grid", eps_grid);
    dg->add_flag("--xi-test", xi_test, "also run the Ann(V) perturbation sweep");
    dg->add_option("--seed", seed, "seed for the perturbation sweep");
    dg->add_option("--out", out_path);

    auto* co = app.add_subcommand("collapse", "collapse map, vanishing cycles, Ann(V)");
    co->add_option("file", path)->required();
    co->add_option("--out", out_path, "write the limit surface JSON");

    auto* ce = app.add_subcommand("check-equations", "push equations to the limit");
    ce->add_option("file", path)->required();
    ce->add_option("--eps-grid", eps_grid);

    auto* pf = app.add_subcommand("prime-factor", "prime decomposition of a product model");
    pf->add_option("file", path)->required();

    auto* ca = app.add_subcommand("cautionary", "write the built-in discontinuity family");
    ca->add_option("--c", c_re)->required();
    ca->add_option("--d", d_re)->required();
    ca->add_option("--eps0", eps0);
    ca->add_option("--out", out_path)->required();

    CLI11_PARSE(app, argc, argv);

    if (v->parsed()) {
        return exact ? run_validate<Rat>(path) : run_validate<double>(path);
    }

    if (inf->parsed()) {
        auto j = load_json_file(path);
        auto s = surface_from_json(j);
        auto info = validate_or_throw(s);
        if (info.comb.num_components == 1) {
            auto pres = homology_basis(info);
            print_info(info, &pres);
            std::cout << "periods:\nclass,re,im\n";
            auto periods = period_coordinates(s, pres);
            for (int k = 0; k < pres.rank(); ++k)
                std::cout << k << "," << fmt_num(periods[k].x) << "," << fmt_num(periods[k].y)
                          << "\n";
        } else {
            print_info(info, nullptr);
        }
        return 0;
    }

    if (cyl->parsed()) {
        auto j = load_json_file(path);
        if (exact) {
            auto s = surface_from_json_exact(j);
            auto info = validate_or_throw(s);
            auto pres = homology_basis(info);
            auto d = parse_direction(direction);
            auto cs = analyze_cylinders(s, info, pres,
                                        Vec2<Rat>{Rat(d.x), Rat(d.y)});
            // report through the double pipeline for uniform formatting
            std::ostringstream out;
            out << "index,core_class,circumference,height,modulus,boundary\n";
            for (size_t i = 0; i < cs.cylinders.size(); ++i) {
                const auto& c = cs.cylinders[i];
                out << i << "," << class_string(c.core_class) << "," << fmt_num(c.circ)
                    << "," << fmt_num(c.ht) << "," << fmt_num(c.modulus) << ","
                    << c.boundary << "\n";
            }
            emit(out.str(), out_path);
            return 0;
        }
        auto s = surface_from_json(j);
        auto info = validate_or_throw(s);
        auto pres = homology_basis(info);
        auto cs = analyze_cylinders(s, info, pres, parse_direction(direction));
        emit(cylinder_csv(cs), out_path);
        return 0;
    }

    if (def->parsed()) {
        if ((st->count() > 0) == (sh->count() > 0))
            throw ParseError("deform: use exactly one of --stretch / --shear");
        do_stretch = st->count() > 0;
        auto j = load_json_file(path);
        auto s = surface_from_json(j);
        auto info = validate_or_throw(s);
        auto pres = homology_basis(info);
        auto cs = analyze_cylinders(s, info, pres, parse_direction(direction));
        if (cylinder_index < 0 || cylinder_index >= int(cs.cylinders.size()))
            throw ParseError("deform: cylinder index out of range");
        std::cout << "before:\n" << cylinder_csv(cs);
        Deformed<double> d = do_stretch
                                 ? stretch_cylinder(s, cs, cylinder_index, stretch_t)
                                 : shear_cylinder(s, cs, cylinder_index, shear_t);
        auto info2 = validate_or_throw(d.surface);
        auto pres2 = HomologyPresentation::build(info2.comb);
        auto cs2 = analyze_cylinders(d.surface, info2, pres2, parse_direction(direction));
        std::cout << "after:\n" << cylinder_csv(cs2);
        if (!out_path.empty()) save_json_file(out_path, surface_to_json(d.surface));
        return 0;
    }

    if (bm->parsed()) {
        auto j = load_json_file(path);
        auto s = surface_from_json(j);
        auto info = validate_or_throw(s);
        auto pres = homology_basis(info);
        auto model = model_for(j, pres);
        auto res = bound_moduli(s, info, pres, model, M, parse_directions(directions), samples);
        std::ostringstream out;
        out << "M," << fmt_num(res.M) << "\nR," << fmt_num(res.R) << "\nH," << fmt_num(res.H)
            << "\nH_max," << fmt_num(res.H_max) << "\nM_prime," << fmt_num(res.M_prime)
            << "\nconstant_path," << (res.constant_path ? 1 : 0) << "\n";
        out << "path:\ndirection,cylinder,t_coeff,c,h_before,h_after,m_before,m_after\n";
        for (const auto& e : res.path)
            out << e.dir_index << "," << e.cyl_index << "," << fmt_num(e.t_coeff) << ","
                << fmt_num(e.c) << "," << fmt_num(e.h0) << "," << fmt_num(e.h1) << ","
                << fmt_num(e.m0) << "," << fmt_num(e.m1) << "\n";
        out << "before:\ndirection,c,h,m\n";
        for (const auto& r : res.before_table)
            out << r.dir << "," << fmt_num(r.c) << "," << fmt_num(r.h) << "," << fmt_num(r.m)
                << "\n";
        out << "after:\ndirection,c,h,m\n";
        for (const auto& r : res.after_table)
            out << r.dir << "," << fmt_num(r.c) << "," << fmt_num(r.h) << "," << fmt_num(r.m)
                << "\n";
        out << "endpoint_max_modulus," << fmt_num(res.endpoint_max_modulus) << "\n";
        out << "max_path_residual," << fmt_num(res.max_path_residual) << "\n";
        std::cout << out.str();
        if (!out_path.empty()) save_json_file(out_path, surface_to_json(res.final_surface));
        if (res.endpoint_max_modulus > res.M_prime * (1 + 1e-9)) g_exit = 1;
        return g_exit;
    }

    if (dg->parsed()) {
        auto fam = family_from_json(load_json_file(path));
        auto cd = collapse(fam);
        auto grid = parse_grid(eps_grid);
        std::ostringstream out;
        out << "periods vs eps:\nclass";
        for (double e : grid) out << ",re(" << fmt_num(e) << "),im(" << fmt_num(e) << ")";
        out << "\n";
        for (int jcl = 0; jcl < cd.pres_base.rank(); ++jcl) {
            IntVec unit(cd.pres_base.rank());
            unit[jcl] = 1;
            out << jcl;
            for (double e : grid) {
                auto se = evaluate_family(fam, e);
                auto p = period(se, cd.pres_base, unit);
                out << "," << fmt_num(p.x) << "," << fmt_num(p.y);
            }
            out << "\n";
        }
        auto rep = convergence_report(fam, cd, grid);
        out << "convergence:\nclass,slope,constant\n";
        for (const auto& row : rep.rows)
            out << row.basis_class << "," << fmt_num(row.slope) << "," << (row.constant ? 1 : 0)
                << "\n";
        out << "min_slope," << fmt_num(rep.min_slope) << "\n";
        if (xi_test && cd.dim_Ann() > 0) {
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> dr(-1.0, 1.0);
            CVec<double> xi(cd.pres_base.rank(), Vec2<double>{0, 0});
            for (int col = 0; col < cd.dim_Ann(); ++col) {
                double cr = 0.002 * dr(rng), ci = 0.002 * dr(rng);
                for (int i = 0; i < cd.pres_base.rank(); ++i) {
                    xi[i].x += cr * cd.annihilator.at(i, col).get_d();
                    xi[i].y += ci * cd.annihilator.at(i, col).get_d();
                }
            }
            auto xrep = xi_perturbation_test(fam, cd, xi, {}, grid);
            out << "xi_test:\neps,residual\n";
            for (size_t i = 0; i < grid.size(); ++i)
                out << fmt_num(grid[i]) << "," << fmt_num(xrep.residual[i]) << "\n";
            out << "xi_slope," << fmt_num(xrep.slope) << "\n";
        }
        emit(out.str(), out_path);
        return 0;
    }

    if (co->parsed()) {
        auto fam = family_from_json(load_json_file(path));
        auto cd = collapse(fam);
        std::cout << "mode," << (cd.explicit_mode ? "explicit" : "auto") << "\n";
        std::cout << "rank_base," << cd.pres_base.rank() << "\n";
        std::cout << "rank_limit," << cd.pres_limit.rank() << "\n";
        std::cout << "dim_V," << cd.dim_V() << "\n";
        std::cout << "dim_AnnV," << cd.dim_Ann() << "\n";
        std::cout << "f_star:\n";
        for (int i = 0; i < cd.f_star.rows(); ++i) {
            for (int k = 0; k < cd.f_star.cols(); ++k)
                std::cout << (k ? " " : "") << cd.f_star.at(i, k).get_str();
            std::cout << "\n";
        }
        bool ok = cd.dim_V() + cd.dim_Ann() == cd.pres_base.rank() &&
                  int_rank(cd.f_star) == cd.pres_limit.rank();
        std::cout << "rank_nullity," << (ok ? "pass" : "FAIL") << "\n";
        if (!out_path.empty()) save_json_file(out_path, surface_to_json(cd.limit));
        return ok ? 0 : 1;
    }

    if (ce->parsed()) {
        auto fam = family_from_json(load_json_file(path));
        if (fam.equations.empty()) {
            std::cout << "no equations in the family file\n";
            return 0;
        }
        auto cd = collapse(fam);
        auto reports = limit_equation_check(fam, cd, fam.equations, parse_grid(eps_grid));
        bool all_ok = true;
        std::cout << "equation,family_residual,limit_value,limit_residual,verdict\n";
        for (size_t i = 0; i < reports.size(); ++i) {
            const auto& r = reports[i];
            std::cout << i << "," << fmt_num(r.family_residual) << ","
                      << fmt_complex(r.family_value) << "," << fmt_num(r.limit_residual)
                      << "," << (r.limit_satisfied ? "satisfied" : "violated") << "\n";
            if (!r.limit_satisfied) all_ok = false;
        }
        return all_ok ? 0 : 1;
    }

    if (pf->parsed()) {
        auto m = product_model_from_json(load_json_file(path));
        auto factors = prime_factorization(m);
        std::cout << "components," << m.num_components() << "\n";
        std::cout << "dim_T," << m.dim() << "\n";
        std::cout << "factors," << factors.size() << "\n";
        for (size_t i = 0; i < factors.size(); ++i) {
            std::cout << "factor," << i << ",members,";
            for (size_t k = 0; k < factors[i].members.size(); ++k)
                std::cout << (k ? " " : "") << factors[i].members[k];
            std::cout << "\n";
        }
        if (m.num_components() >= 2 && is_prime(m).prime) {
            auto con = check_prime_conclusions(m);
            std::cout << "prime,1\n";
            std::cout << "periods_determined," << (con.periods_determined ? "PASS" : "FAIL")
                      << "\n";
            std::cout << "ranks,";
            for (size_t i = 0; i < con.ranks.size(); ++i)
                std::cout << (i ? " " : "") << fmt_num(con.ranks[i]);
            std::cout << "\n";
            std::cout << "ranks_equal," << (con.ranks_equal ? "PASS" : "FAIL") << "\n";
        } else {
            std::cout << "prime,0\n";
        }
        return 0;
    }

    if (ca->parsed()) {
        auto fam = cautionary_family(Vec2<double>{c_re, 0}, Vec2<double>{d_re, 0}, eps0);
        save_json_file(out_path, family_to_json(fam));
        std::cout << "wrote " << out_path << " (c=" << fmt_num(c_re) << ", d=" << fmt_num(d_re)
                  << ", eps0=" << fmt_num(eps0) << ")\n";
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
