// Acceptance suite: every release criterion as one pass/fail line, with
// tolerances pinned in code. Usage: acceptance [cli-binary] [data-dir]

#include "flatgeom/builders.hpp"
#include "flatgeom/deform.hpp"
#include "flatgeom/degeneration.hpp"
#include "flatgeom/jsonio.hpp"
#include "flatgeom/multicomponent.hpp"
#include "unit/lp_oracle.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace flatgeom;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;
Clock::time_point g_start;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int index, const std::string& name, bool pass, const std::string& detail) {
    std::printf("criterion %2d: %-24s %s  (%s)\n", index, name.c_str(),
                pass ? "PASS" : "FAIL", detail.c_str());
    if (!pass) ++g_failures;
}

std::vector<PolygonSurface<double>> corpus() {
    std::vector<PolygonSurface<double>> v;
    v.push_back(square_torus<double>());
    v.push_back(rect_torus<double>(2, 1));
    v.push_back(rect_torus<double>(1, 10));
    v.push_back(rect_torus<double>(3, 2));
    v.push_back(apply_matrix(square_torus<double>(), Mat2<double>{1, 0.5, 0, 1}));
    v.push_back(l_shape_2x2<double>());
    v.push_back(l_shape<double>(2, 1, 1, 3));
    v.push_back(octagon_surface());
    v.push_back(hexagon_torus());
    v.push_back(two_square_slit<double>());
    v.push_back(ratio_two_surface<double>());
    v.push_back(sandwich_surface<double>(1, 2));
    v.push_back(cautionary_surface<double>({{2, 0}, {5, 0}, {4, 0}, {7, 0}, 0.25, 0.25}));
    return v;
}

// --- criterion 1: stratum arithmetic --------------------------------
void criterion_1() {
    auto t0 = Clock::now();
    bool ok = true;
    auto surfaces = corpus();
    for (const auto& s : surfaces) {
        auto rep = validate(s);
        if (!rep.pass) {
            ok = false;
            break;
        }
        long ksum = 0;
        for (long k : rep.info->kappa()) ksum += k;
        const auto& comp = rep.info->components[0];
        if (ksum != 2L * comp.genus - 2) ok = false;
        auto pres = homology_basis(*rep.info);
        if (pres.rank() != 2 * comp.genus + comp.num_marked - 1) ok = false;
        if (pres.rank() != int(s.gluings.size()) - int(s.polygons.size()) + 1) ok = false;
        if (pres.absolute_rank() != 2 * comp.genus) ok = false;
    }
    double dt = seconds_since(t0);
    std::ostringstream d;
    d << surfaces.size() << " surfaces, " << fmt_num(dt) << " s";
    report(1, "stratum arithmetic", ok && dt < 1.0, d.str());
}

// --- criterion 2: cylinder conservation -----------------------------
void criterion_2() {
    bool ok = true;
    double worst = 0;
    int count = 0;
    for (const auto& s : corpus()) {
        auto cs = horizontal_cylinders(s);
        double rel = std::fabs(cs.total_ch() - area(s)) / area(s);
        worst = std::max(worst, rel);
        ok = ok && rel <= 1e-10;
        ++count;
    }
    std::ostringstream d;
    d << count << " decompositions, worst rel err " << fmt_num(worst);
    report(2, "cylinder conservation", ok, d.str());
}

// --- criterion 3: deformation laws ----------------------------------
void criterion_3() {
    bool ok = true;
    std::string why;

    // stretch scales the modulus by e^t to 1e-12
    {
        auto s = two_square_slit<double>();
        auto cs = horizontal_cylinders(s);
        double t = 0.37;
        auto d = stretch_cylinder(s, cs, 0, t);
        auto cs2 = horizontal_cylinders(d.surface);
        double target = cs.cylinders[0].modulus * std::exp(t);
        bool found = false;
        for (const auto& c : cs2.cylinders)
            if (std::fabs(c.modulus - target) <= 1e-12 * target) found = true;
        if (!found) {
            ok = false;
            why = "stretch scaling";
        }
    }
    // shear preserves the area exactly in rational mode
    {
        auto s = ratio_two_surface<Rat>();
        auto info = validate_or_throw(s);
        auto pres = homology_basis(info);
        auto cs = analyze_cylinders(s, info, pres, Vec2<Rat>{Rat(1), Rat(0)});
        Rat a0 = area2(s);
        auto d = shear_cylinder(s, cs, 0, Rat(5, 7));
        if (!(area2(d.surface) == a0)) {
            ok = false;
            why = "exact shear area";
        }
    }
    // full twist is the identity on the stored representation
    {
        auto s = rect_torus<Rat>(Rat(3), Rat(2));
        auto info = validate_or_throw(s);
        auto pres = homology_basis(info);
        auto cs = analyze_cylinders(s, info, pres, Vec2<Rat>{Rat(1), Rat(0)});
        Rat full = cs.cylinders[0].circumference / cs.cylinders[0].height;
        auto d = shear_cylinder(s, cs, 0, full);
        if (!(d.surface == s)) {
            ok = false;
            why = "full twist identity";
        }
    }
    // semigroup law for stretches to 1e-12
    {
        auto s = two_square_slit<double>();
        auto cs = horizontal_cylinders(s);
        auto d1 = stretch_cylinder(s, cs, 0, 0.31);
        auto cs1 = horizontal_cylinders(d1.surface);
        auto d12 = stretch_cylinder(d1.surface, cs1, 0, 0.55);
        auto dsum = stretch_cylinder(s, cs, 0, 0.86);
        for (size_t p = 0; p < s.polygons.size() && ok; ++p)
            for (size_t e = 0; e < s.polygons[p].size(); ++e) {
                if (std::fabs(d12.surface.polygons[p][e].x - dsum.surface.polygons[p][e].x) >
                        1e-12 ||
                    std::fabs(d12.surface.polygons[p][e].y - dsum.surface.polygons[p][e].y) >
                        1e-12) {
                    ok = false;
                    why = "stretch semigroup";
                }
            }
    }
    report(3, "deformation laws", ok, ok ? "stretch/shear/twist/semigroup" : why);
}

// --- criterion 4: the bounding LP ------------------------------------
void criterion_4() {
    auto t0 = Clock::now();
    bool ok = true;
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> dd(-2.0, 2.0);
    std::uniform_real_distribution<double> pos(0.2, 2.0);
    std::uniform_real_distribution<double> hd(1.1, 3.0);
    int solved = 0;
    for (int trial = 0; trial < 100 && ok; ++trial) {
        int n = 1 + int(rng() % 4);
        int k = 1 + int(rng() % n);
        BoundInstance inst;
        bool built = false;
        for (int attempt = 0; attempt < 200 && !built; ++attempt) {
            inst.subspace.assign(k, std::vector<double>(n));
            for (auto& row : inst.subspace)
                for (auto& x : row) x = dd(rng);
            std::vector<double> v(n, 0.0);
            for (int i = 0; i < k; ++i) {
                double c = pos(rng);
                for (int j = 0; j < n; ++j) v[j] += c * inst.subspace[i][j];
            }
            bool nonneg = true;
            for (double x : v) nonneg = nonneg && x >= 0;
            if (!nonneg) continue;
            inst.v = v;
            inst.H = hd(rng);
            built = true;
        }
        if (!built) {
            inst.subspace = {std::vector<double>(n, 1.0)};
            inst.v.assign(n, 1.7);
            inst.H = 1.5;
        }
        BoundResult res = linalg_bound(inst);
        for (int i : res.fixed)
            if (res.v_prime[i] != inst.v[i]) ok = false;
        for (int j : res.moved) {
            if (res.v_prime[j] < inst.H - 1e-7) ok = false;
            if (res.v_prime[j] > res.H_local + 1e-7) ok = false;
        }
        if (!res.moved.empty()) {
            double opt = oracle::bound_optimum_bruteforce(inst);
            if (std::fabs(res.H_local - opt) > 1e-6 * std::max(1.0, opt)) ok = false;
        }
        ++solved;
    }
    // monotonicity on 20 paired instances
    std::mt19937_64 rng2(99331);
    for (int trial = 0; trial < 20 && ok; ++trial) {
        int n = 2 + int(rng2() % 3);
        BoundInstance inst;
        inst.subspace = {std::vector<double>(n, 1.0), std::vector<double>(n)};
        for (int j = 0; j < n; ++j) inst.subspace[1][j] = 0.2 * j;
        inst.v.assign(n, 0.0);
        for (int j = 0; j < n; ++j) inst.v[j] = 1.0 + 0.7 * j;
        inst.H = 1.2 + 0.05 * trial;
        BoundInstance bigger = inst;
        bigger.H = inst.H * 1.5;
        if (linalg_bound(bigger).H_local < linalg_bound(inst).H_local - 1e-7) ok = false;
    }
    double dt = seconds_since(t0);
    std::ostringstream d;
    d << solved << " instances, " << fmt_num(dt) << " s";
    report(4, "bounding LP", ok && dt < 5.0, d.str());
}

// --- criterion 5: the modulus-bounding deformation -------------------
void criterion_5() {
    bool ok = true;
    std::string why = "3 scenarios";
    auto run = [&](const PolygonSurface<double>& s, const LocalModel<double>& model, double M,
                   std::vector<Vec2<double>> dirs) {
        auto info = validate_or_throw(s);
        auto pres = homology_basis(info);
        auto res = bound_moduli(s, info, pres, model, M, dirs, 10);
        if (res.endpoint_max_modulus > res.M_prime * (1 + 1e-9)) {
            ok = false;
            why = "endpoint above M'";
        }
        for (const auto& e : res.path)
            if (e.m1 < M * (1 - 1e-9) || e.m1 > res.M_prime * (1 + 1e-9)) {
                ok = false;
                why = "deformed modulus outside [M, M']";
            }
        if (res.max_path_residual > 1e-9) {
            ok = false;
            why = "path tangency residual";
        }
        return res;
    };

    // single tall cylinder, full stratum
    {
        auto s = rect_torus<double>(1, 10);
        auto info = validate_or_throw(s);
        auto pres = homology_basis(info);
        run(s, LocalModel<double>::full(pres.rank()), 2.0, {{1, 0}, {0, 1}});
    }
    // coupled two-cylinder class with the ratio constraint
    {
        auto s = slit_stack<double>(2, 100, 1, 50, 0.5);
        auto info = validate_or_throw(s);
        auto pres = homology_basis(info);
        auto cs = analyze_cylinders(s, info, pres, Vec2<double>{1, 0});
        int a = cs.cylinders[0].circ > cs.cylinders[1].circ ? 0 : 1;
        int b = 1 - a;
        auto omega = period_vector(s, pres);
        CVec<double> u(pres.rank());
        for (int k = 0; k < pres.rank(); ++k)
            u[k] = {2.0 * cs.cylinders[a].dual[k].get_d() + cs.cylinders[b].dual[k].get_d(),
                    0.0};
        auto res = run(s, LocalModel<double>::from_span(pres.rank(), {omega, u}), 2.0,
                       {{1, 0}});
        if (res.path.size() != 2) {
            ok = false;
            why = "coupled class path size";
        }
    }
    // the cautionary surface with its huge vertical cylinders
    {
        auto s = cautionary_surface<double>({{2, 0}, {5, 0}, {4, 0}, {7, 0}, 0.25, 0.25});
        auto info = validate_or_throw(s);
        auto pres = homology_basis(info);
        run(s, LocalModel<double>::full(pres.rank()), 2.0, {{1, 0}, {0, 1}});
    }
    // the no-large-cylinder case gives the constant path
    {
        auto s = square_torus<double>();
        auto info = validate_or_throw(s);
        auto pres = homology_basis(info);
        auto res = bound_moduli(s, info, pres, LocalModel<double>::full(pres.rank()), 2.0);
        if (!res.constant_path || !(res.final_surface == s)) {
            ok = false;
            why = "constant path";
        }
    }
    report(5, "modulus bounding", ok, why);
}

// --- criterion 6: the cautionary example -----------------------------
void criterion_6() {
    auto fam = cautionary_family(2.0, 5.0);
    auto cd = collapse(fam);
    auto reps = limit_equation_check(fam, cd, fam.equations, {1e-1, 1e-2, 1e-3, 1e-4});
    bool ok = reps.size() == 1 && reps[0].family_residual <= 1e-12 &&
              std::fabs(reps[0].limit_residual - 3.0) <= 1e-12 && !reps[0].limit_satisfied;
    std::ostringstream d;
    if (!reps.empty())
        d << "family residual " << fmt_num(reps[0].family_residual) << ", limit residual "
          << fmt_num(reps[0].limit_residual);
    report(6, "cautionary example", ok, d.str());
}

// --- criterion 7: collapse algebra -----------------------------------
void criterion_7() {
    bool ok = true;
    int families = 0;
    auto check = [&](const Family& fam) {
        auto cd = collapse(fam);
        if (cd.dim_V() + cd.dim_Ann() != cd.pres_base.rank()) ok = false;
        if (int_rank(cd.f_star) != cd.pres_limit.rank()) ok = false;             // surjective
        if (int_rank(cd.f_star.transpose()) != cd.pres_limit.rank()) ok = false; // injective
        ++families;
    };
    check(family_slit_closing());
    check(family_collapsing_polygon());
    check(family_shear());
    check(cautionary_family(2.0, 5.0));
    std::ostringstream d;
    d << families << " families";
    report(7, "collapse algebra", ok, d.str());
}

// --- criterion 8: continuity at desk scale ---------------------------
void criterion_8() {
    bool ok = true;
    double worst = 2.0;
    std::vector<double> grid{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
    for (auto fam :
         {family_slit_closing(0.1), family_collapsing_polygon(0.1), family_shear(0.1)}) {
        auto cd = auto_collapse(fam);
        auto rep = convergence_report(fam, cd, grid);
        worst = std::min(worst, rep.min_slope);
        if (rep.min_slope < 0.9) ok = false;
    }
    std::ostringstream d;
    d << "min slope " << fmt_num(worst);
    report(8, "limit continuity", ok, d.str());
}

// --- criterion 9: prime decomposition --------------------------------
void criterion_9() {
    bool ok = true;
    std::string why = "50 random + examples";

    // projection-based independent oracle
    auto splits_oracle = [](const ProductModel<double>& m, const std::vector<char>& side) {
        auto off = m.offsets();
        LocalModel<double> t = LocalModel<double>::from_span(m.total_rank(), m.span);
        for (const auto& row : m.span) {
            CVec<double> projected(m.total_rank(), Vec2<double>{0, 0});
            for (int c = 0; c < m.num_components(); ++c)
                if (side[c])
                    for (int j = off[c]; j < off[c + 1]; ++j) projected[j] = row[j];
            if (!t.contains(projected)) return false;
        }
        return true;
    };
    auto prime_oracle = [&](const ProductModel<double>& m) {
        const int k = m.num_components();
        for (unsigned mask = 1; mask < (1u << (k - 1)); ++mask) {
            std::vector<char> side(k, 0);
            for (int c = 1; c < k; ++c) side[c] = (mask >> (c - 1)) & 1;
            if (splits_oracle(m, side)) return false;
        }
        return true;
    };

    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> dd(-1, 1);
    for (int trial = 0; trial < 50 && ok; ++trial) {
        int k = 2 + int(rng() % 3);
        std::vector<PolygonSurface<double>> comps(k, square_torus<double>());
        CMat<double> span;
        if (rng() % 2 == 0) {
            int split = 1 + int(rng() % (k - 1));
            for (int j = 0; j < 2; ++j) {
                CVec<double> row(2 * k, Vec2<double>{0, 0});
                for (int c = 0; c < split; ++c) row[2 * c + j] = {1, 0};
                span.push_back(row);
            }
            for (int j = 0; j < 2; ++j) {
                CVec<double> row(2 * k, Vec2<double>{0, 0});
                for (int c = split; c < k; ++c) row[2 * c + j] = {1, 0};
                span.push_back(row);
            }
        } else {
            CVec<double> omega(2 * k, Vec2<double>{0, 0});
            for (int c = 0; c < k; ++c) {
                omega[2 * c] = {1, 0};
                omega[2 * c + 1] = {0, 1};
            }
            span.push_back(omega);
            int dim = 1 + int(rng() % (2 * k - 1));
            for (int i = 1; i < dim; ++i) {
                CVec<double> row(2 * k);
                for (auto& z : row) z = {dd(rng), dd(rng)};
                span.push_back(row);
            }
        }
        auto m = make_product_model(std::move(comps), std::move(span));
        if (is_prime(m).prime != prime_oracle(m)) {
            ok = false;
            why = "oracle disagreement";
        }
    }

    // the diagonal is prime and its conclusions hold
    auto diag = diagonal_model(square_torus<double>(), 2);
    if (!is_prime(diag).prime) {
        ok = false;
        why = "diagonal not prime";
    }
    auto dcon = check_prime_conclusions(diag);
    if (!dcon.pass) {
        ok = false;
        why = "diagonal conclusions";
    }

    // a constructed product is recovered exactly
    {
        auto torus = square_torus<double>();
        auto a = diagonal_model(torus, 2);
        ProductModel<double> single;
        single.components.push_back(make_component(torus));
        single.span = LocalModel<double>::full(2).span;
        auto prod = product_of(a, single);
        auto f = prime_factorization(prod);
        if (f.size() != 2 || f[0].members != std::vector<int>{0, 1} ||
            f[1].members != std::vector<int>{2}) {
            ok = false;
            why = "factorization mismatch";
        }
    }

    // rank equality on the sqrt(2)-scaled pair
    {
        auto m = scaled_pair_model(l_shape_2x2<double>(), std::sqrt(2.0));
        auto con = check_prime_conclusions(m);
        if (!con.ranks_equal || std::fabs(con.ranks[0] - 2.0) > 1e-9) {
            ok = false;
            why = "sqrt2 ranks";
        }
    }
    report(9, "prime decomposition", ok, why);
}

// --- criterion 10: runtime and byte-stable CLI ------------------------
void criterion_10(const std::string& cli, const std::string& data) {
    bool ok = true;
    std::string why;
    if (cli.empty() || data.empty()) {
        report(10, "runtime + CLI stability", false, "cli binary or data dir not supplied");
        return;
    }
    auto run_once = [&](const std::string& args, const std::string& outfile) {
        std::string cmd = cli + " " + args + " > " + outfile + " 2>/dev/null";
        return std::system(cmd.c_str());
    };
    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    // every surface shipped with the repo must pass `validate`
    for (const std::string& name :
         {"torus", "torus_2x1", "tall_cyl", "l_shape", "octagon", "hexagon",
          "two_square_slit", "ratio_two", "sandwich", "cautionary_surface", "coupled_tall"}) {
        int rc = std::system(
            (cli + " validate " + data + "/" + name + ".json > /dev/null 2>&1").c_str());
        if (rc != 0) {
            ok = false;
            why = "shipped surface fails validate: " + name;
        }
    }

    std::vector<std::string> invocations = {
        "cylinders " + data + "/two_square_slit.json",
        "info " + data + "/l_shape.json",
        "check-equations " + data + "/cautionary.json --eps-grid 1e-1,1e-2,1e-3,1e-4",
        "bound-moduli " + data + "/coupled_tall.json --M 2 --directions \"1 0\"",
        "degenerate " + data + "/slit_family.json --eps-grid 1e-1,1e-2,1e-3",
        "prime-factor " + data + "/product_split.json",
    };
    for (size_t i = 0; i < invocations.size() && ok; ++i) {
        std::string f1 = "/tmp/flatgeom_acc_a" + std::to_string(i) + ".txt";
        std::string f2 = "/tmp/flatgeom_acc_b" + std::to_string(i) + ".txt";
        run_once(invocations[i], f1);
        run_once(invocations[i], f2);
        std::string a = slurp(f1), b = slurp(f2);
        if (a.empty() || a != b) {
            ok = false;
            why = "unstable output: " + invocations[i];
        }
        std::remove(f1.c_str());
        std::remove(f2.c_str());
    }
    double elapsed = seconds_since(g_start);
    if (elapsed >= 60.0) {
        ok = false;
        why = "acceptance run exceeded 60 s";
    }
    std::ostringstream d;
    d << "total " << fmt_num(elapsed) << " s";
    report(10, "runtime + CLI stability", ok, why.empty() ? d.str() : why);
}

} // namespace

int main(int argc, char** argv) {
    g_start = Clock::now();
    std::string cli = argc > 1 ? argv[1] : "";
    std::string data = argc > 2 ? argv[2] : "";
    try {
        criterion_1();
        criterion_2();
        criterion_3();
        criterion_4();
        criterion_5();
        criterion_6();
        criterion_7();
        criterion_8();
        criterion_9();
        criterion_10(cli, data);
    } catch (const std::exception& e) {
        std::cerr << "acceptance suite aborted: " << e.what() << "\n";
        return 99;
    }
    std::printf("%s (%d failure%s)\n", g_failures == 0 ? "ALL CRITERIA PASS" : "FAILURES",
                g_failures, g_failures == 1 ? "" : "s");
    return g_failures;
}
