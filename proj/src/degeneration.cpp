#include "flatgeom/degeneration.hpp"

#include "flatgeom/builders.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace flatgeom {

namespace {

double family_scale(const Family& fam) {
    double s = 1.0;
    for (const auto& e : fam.schedule) {
        s = std::max(s, std::fabs(e.alpha.x));
        s = std::max(s, std::fabs(e.alpha.y));
        s = std::max(s, std::fabs(e.beta.x));
        s = std::max(s, std::fabs(e.beta.y));
    }
    return s;
}

} // namespace

void validate_family(const Family& fam) {
    if (fam.eps0 <= 0) throw ValidationError("family: eps0 must be positive");
    if (fam.schedule.size() != fam.base.gluings.size())
        throw ValidationError("family: one schedule per gluing pair required");
    auto info = validate_or_throw(fam.base);
    const double tol = 1e-9 * family_scale(fam);

    // closure identically in the coefficients, polygon by polygon
    for (int p = 0; p < info.comb.num_polys; ++p) {
        Vec2<double> sa{0, 0}, sb{0, 0}, sg{0, 0};
        for (size_t i = 0; i < fam.base.polygons[p].size(); ++i) {
            int g = info.comb.pair_of[p][i];
            double sgn = info.comb.end_of[p][i] == 0 ? 1.0 : -1.0;
            sa += fam.schedule[g].alpha * sgn;
            sb += fam.schedule[g].beta * sgn;
            sg += fam.schedule[g].gamma * sgn;
        }
        for (double x : {sa.x, sa.y, sb.x, sb.y, sg.x, sg.y})
            if (std::fabs(x) > tol)
                throw ValidationError("family: closure violated identically (bad coefficients)");
    }

    // the schedule must reproduce the base surface at eps0
    for (size_t g = 0; g < fam.schedule.size(); ++g) {
        Vec2<double> v = fam.schedule[g].at(fam.eps0);
        const EdgeRef& e0 = fam.base.gluings[g][0];
        Vec2<double> b = fam.base.polygons[e0.poly][e0.edge];
        if (std::fabs(v.x - b.x) > tol || std::fabs(v.y - b.y) > tol)
            throw ValidationError("family: schedule does not match the base surface at eps0");
    }
}

PolygonSurface<double> evaluate_family(const Family& fam, double eps) {
    if (!(eps > 0) || eps > fam.eps0 * (1 + 1e-12))
        throw ValidationError("evaluate_family: eps must lie in (0, eps0]");
    PolygonSurface<double> out = fam.base;
    for (size_t g = 0; g < fam.schedule.size(); ++g) {
        Vec2<double> v = fam.schedule[g].at(eps);
        const EdgeRef& e0 = fam.base.gluings[g][0];
        const EdgeRef& e1 = fam.base.gluings[g][1];
        out.polygons[e0.poly][e0.edge] = v;
        out.polygons[e1.poly][e1.edge] = -v;
    }
    auto rep = validate(out);
    if (!rep.pass)
        throw ValidationError("evaluate_family: surface degenerates at eps = " +
                              std::to_string(eps));
    return out;
}

namespace {

struct SlotKey {
    int poly = -1, edge = -1;
    bool operator<(const SlotKey& o) const {
        return poly != o.poly ? poly < o.poly : edge < o.edge;
    }
    bool operator==(const SlotKey& o) const { return poly == o.poly && edge == o.edge; }
};

// union-find over base pairs with a relative sign to the root
struct SignedUF {
    std::vector<int> parent;
    std::vector<int> sign;

    explicit SignedUF(int n) : parent(n), sign(n, 1) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    std::pair<int, int> find(int x) {
        if (parent[x] == x) return {x, 1};
        auto [r, s] = find(parent[x]);
        parent[x] = r;
        sign[x] *= s;
        return {r, sign[x]};
    }
    // declare a = rel * b
    void unite(int a, int b, int rel) {
        auto [ra, sa] = find(a);
        auto [rb, sb] = find(b);
        if (ra == rb) return;
        parent[ra] = rb;
        sign[ra] = rel * sa * sb; // a = sa * ra; b = sb * rb; a = rel b
    }
};

// Collapse the vanishing pairs of a complex whose surviving edges carry
// the limit vectors. Returns the limit surface and the generator map.
std::pair<PolygonSurface<double>, IntMat> collapse_vanishing(
    const PolygonSurface<double>& base, const Combinatorics& comb,
    const std::vector<Vec2<double>>& limit_vec, const std::vector<char>& vanish) {
    const int E = comb.num_pairs;
    std::vector<std::vector<std::pair<SlotKey, Vec2<double>>>> polys(comb.num_polys);
    std::map<SlotKey, SlotKey> partner;
    std::map<SlotKey, std::pair<int, int>> slot_pair; // pair id and end

    for (int p = 0; p < comb.num_polys; ++p)
        for (size_t i = 0; i < base.polygons[p].size(); ++i) {
            int g = comb.pair_of[p][i];
            if (vanish[g]) continue;
            SlotKey k{p, int(i)};
            Vec2<double> v = comb.end_of[p][i] == 0 ? limit_vec[g] : -limit_vec[g];
            polys[p].push_back({k, v});
            slot_pair[k] = {g, comb.end_of[p][i]};
        }
    for (int g = 0; g < E; ++g) {
        if (vanish[g]) continue;
        SlotKey k0{base.gluings[g][0].poly, base.gluings[g][0].edge};
        SlotKey k1{base.gluings[g][1].poly, base.gluings[g][1].edge};
        partner[k0] = k1;
        partner[k1] = k0;
    }

    SignedUF uf(E);
    std::vector<char> alive(comb.num_polys, 1);
    std::vector<char> pair_gone(E, 0);
    for (int g = 0; g < E; ++g) pair_gone[g] = vanish[g];

    bool changed = true;
    while (changed) {
        changed = false;
        for (int p = 0; p < comb.num_polys; ++p) {
            if (!alive[p]) continue;
            if (polys[p].empty()) {
                alive[p] = 0;
                changed = true;
                continue;
            }
            if (polys[p].size() == 1)
                throw ValidationError("collapse: limit has a monogon (inconsistent schedules)");
            if (polys[p].size() != 2) continue;

            // degenerate bigon: weld the two outside edges together
            auto [ka, va] = polys[p][0];
            auto [kb, vb] = polys[p][1];
            if (std::fabs(va.x + vb.x) > 1e-9 || std::fabs(va.y + vb.y) > 1e-9)
                throw ValidationError("collapse: bigon with mismatched edges");
            auto [ga, ea] = slot_pair[ka];
            auto [gb, eb] = slot_pair[kb];
            // boundary relation of the bigon: sa ga + sb gb = 0
            int sa = ea == 0 ? 1 : -1;
            int sb = eb == 0 ? 1 : -1;
            uf.unite(ga, gb, -sa * sb);

            SlotKey pa = partner[ka], pb = partner[kb];
            alive[p] = 0;
            changed = true;
            pair_gone[ga] = pair_gone[gb] = 1;
            partner.erase(ka);
            partner.erase(kb);
            if (pa == kb) {
                // the bigon was glued to itself: a sphere component vanishes
                continue;
            }
            partner[pa] = pb;
            partner[pb] = pa;
            polys[p].clear();
        }
    }

    // assemble the limit surface
    PolygonSurface<double> limit;
    std::map<SlotKey, EdgeRef> new_ref;
    for (int p = 0; p < comb.num_polys; ++p) {
        if (!alive[p] || polys[p].empty()) continue;
        int np = int(limit.polygons.size());
        std::vector<Vec2<double>> edges;
        for (size_t i = 0; i < polys[p].size(); ++i) {
            new_ref[polys[p][i].first] = EdgeRef{np, int(i)};
            edges.push_back(polys[p][i].second);
        }
        limit.polygons.push_back(std::move(edges));
    }
    std::map<SlotKey, int> final_pair_of;
    for (const auto& [k, pk] : partner) {
        if (final_pair_of.count(k)) continue;
        SlotKey k0 = k < pk ? k : pk;
        SlotKey k1 = k < pk ? pk : k;
        int id = int(limit.gluings.size());
        limit.gluings.push_back({new_ref.at(k0), new_ref.at(k1)});
        final_pair_of[k0] = id;
        final_pair_of[k1] = id;
    }

    // generator map: for a surviving slot, the sign is combinatorial; the
    // union-find transports pairs whose slots died in welds
    IntMat gen_map(int(limit.gluings.size()), E);
    auto image_of_slot = [&](const SlotKey& k, int end) -> std::pair<int, int> {
        int fp = final_pair_of.at(k);
        // does this slot carry the final pair's slot-0 direction?
        bool is_slot0 = new_ref.at(k) == limit.gluings[fp][0];
        int dir = (end == 0 ? 1 : -1) * (is_slot0 ? 1 : -1);
        return {fp, dir};
    };
    for (int g = 0; g < E; ++g) {
        if (vanish[g]) continue;
        auto [root, s_root] = uf.find(g);
        // find a member of the class with a surviving slot
        int fp = -1, dir = 0;
        for (int h = 0; h < E; ++h) {
            if (vanish[h]) continue;
            auto [rh, sh] = uf.find(h);
            if (rh != root) continue;
            for (int end = 0; end < 2; ++end) {
                SlotKey k{base.gluings[h][end].poly, base.gluings[h][end].edge};
                if (!partner.count(k)) continue;
                auto [f, d0] = image_of_slot(k, end);
                // h = sh * root  =>  root = sh * h; g = s_root * root
                fp = f;
                dir = d0 * sh * s_root;
                break;
            }
            if (fp >= 0) break;
        }
        if (fp < 0) continue; // the whole class vanished (sphere component)
        gen_map.at(fp, g) = dir;
    }
    return {limit, gen_map};
}

CollapseData finish_collapse(const Family& fam, const SurfaceInfo<double>& base_info,
                             PolygonSurface<double> limit, IntMat gen_map, bool explicit_mode) {
    CollapseData cd;
    cd.explicit_mode = explicit_mode;
    cd.limit = std::move(limit);
    auto rep = validate(cd.limit);
    if (!rep.pass) throw ValidationError("collapse: limit surface invalid:\n" + rep.summary());
    cd.limit_info = *rep.info;
    cd.pres_base = HomologyPresentation::build(base_info.comb);
    cd.pres_limit = HomologyPresentation::build(cd.limit_info.comb);
    cd.gen_map = std::move(gen_map);

    if (cd.gen_map.rows() != int(cd.limit.gluings.size()) ||
        cd.gen_map.cols() != int(fam.base.gluings.size()))
        throw ValidationError("collapse: generator map has the wrong shape");

    // relations must map to relations, otherwise f_star is ill-defined
    IntMat base_rel = cd.pres_base.relations();
    for (int p = 0; p < base_rel.cols(); ++p) {
        IntVec img = cd.gen_map.apply(base_rel.column(p));
        for (const Int& c : cd.pres_limit.class_of_chain(img))
            if (c != 0)
                throw ValidationError("collapse: generator map does not respect relations");
    }

    // basis-level pushforward
    cd.f_star = IntMat(cd.pres_limit.rank(), cd.pres_base.rank());
    for (int j = 0; j < cd.pres_base.rank(); ++j) {
        IntVec cls(cd.pres_base.rank());
        cls[j] = 1;
        IntVec img = cd.gen_map.apply(cd.pres_base.chain_of_class(cls));
        IntVec lc = cd.pres_limit.class_of_chain(img);
        for (int i = 0; i < cd.pres_limit.rank(); ++i) cd.f_star.at(i, j) = lc[i];
    }

    Smith s = smith_normal_form(cd.f_star);
    if (s.rank != cd.pres_limit.rank())
        throw ValidationError("collapse: pushforward is not surjective");
    for (const Int& d : s.divisors)
        if (d != 1) throw ValidationError("collapse: pushforward is not surjective over Z");

    auto sec = int_solve_mat(cd.f_star, IntMat::identity(cd.pres_limit.rank()));
    if (!sec) throw Error("collapse: no integral section despite surjectivity");
    cd.section = *sec;

    cd.vanishing = int_kernel(cd.f_star);
    cd.annihilator = int_kernel(cd.vanishing.transpose());
    if (cd.dim_V() + cd.dim_Ann() != cd.pres_base.rank())
        throw Error("collapse: rank-nullity violated");
    return cd;
}

} // namespace

CVec<double> CollapseData::pullback(const CVec<double>& limit_covector) const {
    CVec<double> out(f_star.cols(), Vec2<double>{0, 0});
    for (int i = 0; i < f_star.cols(); ++i)
        for (int k = 0; k < f_star.rows(); ++k)
            if (f_star.at(k, i) != 0)
                out[i] += limit_covector[k] * f_star.at(k, i).get_d();
    return out;
}

CollapseData auto_collapse(const Family& fam) {
    validate_family(fam);
    for (const auto& e : fam.schedule)
        if (e.divergent())
            throw DivergentEdge("auto_collapse: a schedule carries a 1/eps term; "
                                "explicit collapse data is required");
    auto info = validate_or_throw(fam.base);
    std::vector<Vec2<double>> limit_vec;
    std::vector<char> vanish;
    for (const auto& e : fam.schedule) {
        limit_vec.push_back(e.alpha);
        vanish.push_back(e.vanishing() ? 1 : 0);
    }
    auto [limit, gen_map] = collapse_vanishing(fam.base, info.comb, limit_vec, vanish);
    return finish_collapse(fam, info, std::move(limit), std::move(gen_map), false);
}

CollapseData collapse(const Family& fam) {
    if (fam.explicit_collapse) {
        validate_family(fam);
        auto info = validate_or_throw(fam.base);
        return finish_collapse(fam, info, fam.explicit_collapse->limit,
                               fam.explicit_collapse->gen_map, true);
    }
    return auto_collapse(fam);
}

std::vector<EquationReport> limit_equation_check(
    const Family& fam, const CollapseData& cd,
    const std::vector<std::pair<CVec<double>, Vec2<double>>>& equations,
    const std::vector<double>& eps_grid) {
    std::vector<EquationReport> out;
    auto limit_periods = period_coordinates(cd.limit, cd.pres_limit);
    for (const auto& [w, k] : equations) {
        if (int(w.size()) != cd.pres_base.rank())
            throw ValidationError("equation has the wrong dimension");
        EquationReport rep;
        // family side
        for (double eps : eps_grid) {
            auto s = evaluate_family(fam, eps);
            auto periods = period_coordinates(s, cd.pres_base);
            Vec2<double> acc{0, 0};
            for (size_t i = 0; i < w.size(); ++i) acc += w[i].cmul(periods[i]);
            Vec2<double> diff = acc - k;
            rep.family_residual = std::max(rep.family_residual, cmag(diff));
        }
        // pushforward: substitute the collapsed classes
        CVec<double> w0(cd.pres_limit.rank(), Vec2<double>{0, 0});
        for (int kk = 0; kk < cd.pres_limit.rank(); ++kk)
            for (int j = 0; j < cd.pres_base.rank(); ++j)
                if (cd.f_star.at(kk, j) != 0)
                    w0[kk] += w[j] * cd.f_star.at(kk, j).get_d();
        Vec2<double> val{0, 0};
        for (int kk = 0; kk < cd.pres_limit.rank(); ++kk)
            val += w0[kk].cmul(limit_periods[kk]);
        rep.family_value = val;
        rep.limit_residual = cmag(Vec2<double>(val - k));
        rep.limit_satisfied = rep.limit_residual <= 1e-9 * std::max(1.0, cmag(k));
        out.push_back(rep);
    }
    return out;
}

namespace {

// least squares slope of log(r) against log(eps), ignoring zero residuals
double fit_slope(const std::vector<double>& eps, const std::vector<double>& r, double floor_val,
                 bool* constant) {
    std::vector<double> xs, ys;
    for (size_t i = 0; i < eps.size(); ++i)
        if (r[i] > floor_val) {
            xs.push_back(std::log(eps[i]));
            ys.push_back(std::log(r[i]));
        }
    if (constant) *constant = xs.size() < 2;
    if (xs.size() < 2) return 0;
    double mx = 0, my = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= double(xs.size());
    my /= double(ys.size());
    double num = 0, den = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    return den > 0 ? num / den : 0;
}

} // namespace

ConvergenceReport convergence_report(const Family& fam, const CollapseData& cd,
                                     const std::vector<double>& eps_grid) {
    ConvergenceReport rep;
    rep.eps_grid = eps_grid;
    auto limit_periods = period_coordinates(cd.limit, cd.pres_limit);

    // classes to track: in explicit mode restrict to the section images
    std::vector<IntVec> classes;
    std::vector<Vec2<double>> targets;
    if (cd.explicit_mode) {
        for (int k = 0; k < cd.pres_limit.rank(); ++k) {
            IntVec unit(cd.pres_limit.rank());
            unit[k] = 1;
            classes.push_back(cd.section.apply(unit));
            targets.push_back(limit_periods[k]);
        }
    } else {
        for (int j = 0; j < cd.pres_base.rank(); ++j) {
            IntVec unit(cd.pres_base.rank());
            unit[j] = 1;
            classes.push_back(unit);
            IntVec img = cd.f_star.apply(unit);
            Vec2<double> t{0, 0};
            for (int k = 0; k < cd.pres_limit.rank(); ++k)
                t += limit_periods[k] * img[k].get_d();
            targets.push_back(t);
        }
    }

    std::vector<std::vector<double>> residuals(classes.size());
    double scale = family_scale(fam);
    for (double eps : eps_grid) {
        auto s = evaluate_family(fam, eps);
        for (size_t j = 0; j < classes.size(); ++j) {
            Vec2<double> p = period(s, cd.pres_base, classes[j]);
            residuals[j].push_back(cmag(Vec2<double>(p - targets[j])));
        }
    }
    double min_slope = 1e99;
    for (size_t j = 0; j < classes.size(); ++j) {
        ConvergenceRow row;
        row.basis_class = int(j);
        row.residual = residuals[j];
        row.slope = fit_slope(eps_grid, residuals[j], 1e-13 * scale, &row.constant);
        if (!row.constant) min_slope = std::min(min_slope, row.slope);
        rep.rows.push_back(std::move(row));
    }
    rep.min_slope = min_slope == 1e99 ? 1.0 : min_slope;
    return rep;
}

XiReport xi_perturbation_test(const Family& fam, const CollapseData& cd,
                              const CVec<double>& xi,
                              const std::vector<CVec<double>>& xi_sequence,
                              const std::vector<double>& eps_grid, const XiOptions& opt) {
    if (int(xi.size()) != cd.pres_base.rank())
        throw ValidationError("xi has the wrong dimension");
    // xi must annihilate the vanishing cycles
    double xiscale = std::max(1.0, cvec_mag(xi));
    for (int col = 0; col < cd.vanishing.cols(); ++col) {
        Vec2<double> acc{0, 0};
        for (int i = 0; i < cd.pres_base.rank(); ++i)
            if (cd.vanishing.at(i, col) != 0)
                acc += xi[i] * cd.vanishing.at(i, col).get_d();
        if (cmag(acc) > 1e-9 * xiscale)
            throw ValidationError("xi does not lie in Ann(V)");
    }
    // ball-size knob: reject perturbations large next to the limit edges
    double min_edge = 1e99;
    for (const auto& poly : cd.limit.polygons)
        for (const auto& e : poly) min_edge = std::min(min_edge, cmag(e));
    if (cvec_mag(xi) > opt.max_norm_rel * min_edge)
        throw ValidationError("perturbation too large for the configured neighborhood");

    // target: limit + xi, read through the section
    auto limit_periods = period_coordinates(cd.limit, cd.pres_limit);
    std::vector<Vec2<double>> target(cd.pres_limit.rank());
    std::vector<IntVec> sec_classes(cd.pres_limit.rank());
    for (int k = 0; k < cd.pres_limit.rank(); ++k) {
        IntVec unit(cd.pres_limit.rank());
        unit[k] = 1;
        sec_classes[k] = cd.section.apply(unit);
        Vec2<double> xi0{0, 0};
        for (int i = 0; i < cd.pres_base.rank(); ++i)
            if (sec_classes[k][i] != 0) xi0 += xi[i] * sec_classes[k][i].get_d();
        target[k] = limit_periods[k] + xi0;
    }

    XiReport rep;
    rep.eps_grid = eps_grid;
    for (size_t n = 0; n < eps_grid.size(); ++n) {
        const CVec<double>& xin = n < xi_sequence.size() ? xi_sequence[n] : xi;
        if (int(xin.size()) != cd.pres_base.rank())
            throw ValidationError("xi_n has the wrong dimension");
        auto s = evaluate_family(fam, eps_grid[n]);
        auto sp = deform_periods(s, cd.pres_base, xin);
        auto vrep = validate(sp);
        if (!vrep.pass)
            throw ValidationError("perturbation too large: surface invalid at eps = " +
                                  std::to_string(eps_grid[n]));
        double resid = 0;
        for (int k = 0; k < cd.pres_limit.rank(); ++k) {
            Vec2<double> p = period(sp, cd.pres_base, sec_classes[k]);
            resid = std::max(resid, cmag(Vec2<double>(p - target[k])));
        }
        rep.residual.push_back(resid);
    }
    rep.slope = fit_slope(eps_grid, rep.residual, 1e-13 * family_scale(fam), nullptr);
    bool mono = true;
    for (size_t i = 0; i + 1 < rep.residual.size(); ++i)
        if (rep.residual[i + 1] > rep.residual[i] + 1e-12) mono = false;
    rep.converged = mono && !rep.residual.empty() &&
                    rep.residual.back() <= 1e-6 * family_scale(fam) + cvec_mag(xi) * 1e-6 +
                                               (xi_sequence.empty() ? 0.0 : 1.0);
    return rep;
}

// ---------------------------------------------------------------------
// built-in families

Family family_slit_closing(double eps0) {
    Family fam;
    fam.eps0 = eps0;
    fam.base = slit_stack<double>(1, 1, 1, 1, eps0);
    fam.schedule.assign(fam.base.gluings.size(), EdgeSchedule{});
    // gluing order of slit_stack: 0: (A.4, B.0) slit, 1: (B.4, A.0) slit,
    // 2: (A.3, A.1) rest, 3: (B.3, B.1) rest, 4/5: sides
    for (size_t g = 0; g < fam.base.gluings.size(); ++g) {
        const EdgeRef& e0 = fam.base.gluings[g][0];
        fam.schedule[g].alpha = fam.base.polygons[e0.poly][e0.edge];
    }
    fam.schedule[0] = {{0, 0}, {-1, 0}, {0, 0}}; // A.top slit piece (-eps, 0)
    fam.schedule[1] = {{0, 0}, {-1, 0}, {0, 0}}; // B.top slit piece
    fam.schedule[2] = {{-1, 0}, {1, 0}, {0, 0}}; // A.top rest (eps - 1, 0)
    fam.schedule[3] = {{-1, 0}, {1, 0}, {0, 0}};
    validate_family(fam);
    return fam;
}

Family family_collapsing_polygon(double eps0) {
    Family fam;
    fam.eps0 = eps0;
    const double s = 0.3;
    PolygonSurface<double>& b = fam.base;
    b.polygons.push_back({{s, 0},
                          {eps0, 0},
                          {1 - s - eps0, 0},
                          {0, 1},
                          {-(1 - s - eps0), 0},
                          {-eps0, 0},
                          {-s, 0},
                          {0, -1}});
    b.polygons.push_back({{eps0, 0}, {0, eps0}, {-eps0, 0}, {0, -eps0}});
    b.gluings = {
        {EdgeRef{0, 0}, EdgeRef{0, 6}}, // bottom-left <-> top-left
        {EdgeRef{0, 2}, EdgeRef{0, 4}}, // bottom-right <-> top-right
        {EdgeRef{0, 3}, EdgeRef{0, 7}}, // sides
        {EdgeRef{0, 1}, EdgeRef{1, 2}}, // bottom-mid <-> bubble top
        {EdgeRef{1, 0}, EdgeRef{0, 5}}, // bubble bottom <-> top-mid
        {EdgeRef{1, 1}, EdgeRef{1, 3}}, // bubble sides
    };
    fam.schedule.assign(b.gluings.size(), EdgeSchedule{});
    fam.schedule[0].alpha = {s, 0};
    fam.schedule[1] = {{1 - s, 0}, {-1, 0}, {0, 0}};
    fam.schedule[2].alpha = {0, 1};
    fam.schedule[3] = {{0, 0}, {1, 0}, {0, 0}};
    fam.schedule[4] = {{0, 0}, {1, 0}, {0, 0}};
    fam.schedule[5] = {{0, 0}, {0, 1}, {0, 0}};
    validate_family(fam);
    return fam;
}

Family family_shear(double eps0) {
    Family fam;
    fam.eps0 = eps0;
    fam.base = rect_torus<double>(1, 1);
    fam.base.polygons[0][1] = {eps0, 1};
    fam.base.polygons[0][3] = {-eps0, -1};
    fam.schedule.assign(2, EdgeSchedule{});
    fam.schedule[0].alpha = {1, 0};
    fam.schedule[1] = {{0, 1}, {1, 0}, {0, 0}};
    validate_family(fam);
    return fam;
}

Family cautionary_family(const Vec2<double>& c, const Vec2<double>& d, double eps0, double t) {
    Vec2<double> diff = d - c;
    if (std::fabs(diff.x) < 1e-12 && std::fabs(diff.y) < 1e-12)
        throw ValidationError("cautionary family requires c != d");

    Family fam;
    fam.eps0 = eps0;
    Vec2<double> x{1.0 / eps0, 0};
    Vec2<double> y = x + diff;
    fam.base = cautionary_surface<double>({c, d, x, y, eps0, t});
    fam.schedule.assign(fam.base.gluings.size(), EdgeSchedule{});
    // pair order of cautionary_surface: per wall {low, high, [a', a]},
    // then tops [11..13], then the Q pairs x = 14, y = 15
    auto vertical = [&](int g) { fam.schedule[g] = {{0, 0}, {0, 1}, {0, 0}}; };
    auto high = [&](int g) { fam.schedule[g] = {{0, 1 - t}, {0, -1}, {0, 0}}; };
    for (size_t g = 0; g < fam.base.gluings.size(); ++g) {
        const EdgeRef& e0 = fam.base.gluings[g][0];
        fam.schedule[g].alpha = fam.base.polygons[e0.poly][e0.edge];
    }
    high(1);
    vertical(2);
    vertical(3);
    high(5);
    vertical(6);
    vertical(7);
    high(9);
    vertical(10);
    fam.schedule[14] = {{0, 0}, {0, 0}, {1, 0}};    // x = 1/eps
    fam.schedule[15] = {diff, {0, 0}, {1, 0}};      // y = 1/eps + (d - c)

    // explicit collapse: the limit torus with each wall split at height t
    ExplicitCollapse ec;
    auto wall6 = [&](const Vec2<double>& w) {
        return std::vector<Vec2<double>>{
            w, {0, t}, {0, 1 - t}, -w, {0, -(1 - t)}, {0, -t}};
    };
    ec.limit.polygons = {wall6(c), wall6(d), wall6({1, 0})};
    ec.limit.gluings = {
        {EdgeRef{0, 1}, EdgeRef{1, 5}}, // low01
        {EdgeRef{0, 2}, EdgeRef{1, 4}}, // high01
        {EdgeRef{1, 1}, EdgeRef{2, 5}}, // low12
        {EdgeRef{1, 2}, EdgeRef{2, 4}}, // high12
        {EdgeRef{2, 1}, EdgeRef{0, 5}}, // low20
        {EdgeRef{2, 2}, EdgeRef{0, 4}}, // high20
        {EdgeRef{0, 0}, EdgeRef{0, 3}},
        {EdgeRef{1, 0}, EdgeRef{1, 3}},
        {EdgeRef{2, 0}, EdgeRef{2, 3}},
    };
    ec.gen_map = IntMat(int(ec.limit.gluings.size()), int(fam.base.gluings.size()));
    auto send = [&](int base_pair, int limit_pair) { ec.gen_map.at(limit_pair, base_pair) = 1; };
    send(0, 0);  // low01
    send(1, 1);  // high01
    send(4, 2);  // low12
    send(5, 3);  // high12
    send(8, 4);  // low20
    send(9, 5);  // high20
    send(11, 6); // tops
    send(12, 7);
    send(13, 8);
    fam.explicit_collapse = std::move(ec);

    // the defining equation y - x = d - c, as basis-class coefficients
    auto info = validate_or_throw(fam.base);
    auto pres = HomologyPresentation::build(info.comb);
    IntVec ux(fam.base.gluings.size()), uy(fam.base.gluings.size());
    ux[14] = 1;
    uy[15] = 1;
    IntVec wx = pres.class_of_chain(ux), wy = pres.class_of_chain(uy);
    CVec<double> w(pres.rank(), Vec2<double>{0, 0});
    for (int i = 0; i < pres.rank(); ++i)
        w[i] = {wy[i].get_d() - wx[i].get_d(), 0.0};
    fam.equations.push_back({w, diff});

    validate_family(fam);
    return fam;
}

} // namespace flatgeom
