// The modulus-bounding deformation: detect classes with large-modulus
// cylinders, solve the coordinate-bounding LP on each class's height
// space, and run the stretch path a_{t t_1}^{E_1} ... a_{t t_k}^{E_k}.
#pragma once

#include "flatgeom/linmodel.hpp"
#include "flatgeom/lp.hpp"

#include <cmath>
#include <map>

namespace flatgeom {

struct PathEntry {
    int dir_index = 0;
    int cyl_index = 0; // in the start decomposition of that direction
    double t_coeff = 0;
    double c = 0, h0 = 0, h1 = 0, m0 = 0, m1 = 0;
};

struct ClassPlan {
    int dir_index = 0;
    int class_index = 0;
    std::vector<int> members;
    std::vector<double> h0, h1;
    double H = 0, H_local = 0;
};

struct ModulusRow {
    int dir = 0;
    double c = 0, h = 0, m = 0;
};

struct BoundModuliResult {
    double M = 0, R = 1, H = 0, H_max = 0, M_prime = 0;
    bool constant_path = true;
    std::vector<PathEntry> path;
    std::vector<ClassPlan> plans;
    PolygonSurface<double> final_surface;
    double endpoint_max_modulus = 0;
    double max_path_residual = 0;
    std::vector<ModulusRow> before_table, after_table;
};

namespace deform_detail {

// intersection area of two convex polygons (Sutherland-Hodgman)
inline double convex_overlap_area(std::vector<Vec2<double>> subject,
                                  const std::vector<Vec2<double>>& clip) {
    for (size_t k = 0; k < clip.size() && !subject.empty(); ++k) {
        const Vec2<double>& a = clip[k];
        const Vec2<double>& b = clip[(k + 1) % clip.size()];
        std::vector<Vec2<double>> out;
        auto inside = [&](const Vec2<double>& p) {
            return cross(Vec2<double>(b - a), Vec2<double>(p - a)) >= -1e-12;
        };
        auto isect = [&](const Vec2<double>& p, const Vec2<double>& q) {
            Vec2<double> d1 = b - a, d2 = q - p;
            double den = cross(d1, d2);
            double u = cross(Vec2<double>(p - a), d1) / (den == 0 ? 1e-300 : den);
            return Vec2<double>(p + d2 * u);
        };
        for (size_t i = 0; i < subject.size(); ++i) {
            const Vec2<double>& p = subject[i];
            const Vec2<double>& q = subject[(i + 1) % subject.size()];
            bool pin = inside(p), qin = inside(q);
            if (pin) out.push_back(p);
            if (pin != qin) out.push_back(isect(p, q));
        }
        subject = std::move(out);
    }
    if (subject.size() < 3) return 0;
    double acc = 0;
    for (size_t i = 0; i < subject.size(); ++i) {
        const auto& p = subject[i];
        const auto& q = subject[(i + 1) % subject.size()];
        acc += p.x * q.y - q.x * p.y;
    }
    return std::fabs(acc) / 2;
}

// pieces of one cylinder as polygons in base-polygon charts (original frame)
inline std::vector<std::pair<int, std::vector<Vec2<double>>>> cylinder_patches(
    const CylinderSet<double>& cs, const Cylinder<double>& cyl) {
    std::vector<std::pair<int, std::vector<Vec2<double>>>> out;
    double n2 = to_double(norm2(cs.direction));
    for (int f : cyl.faces) {
        std::vector<Vec2<double>> poly;
        for (const auto& p : cs.pieces[f].pos) {
            Vec2<double> rot = Vec2<double>(p + cs.piece_origin[f]);
            Vec2<double> orig = rot.cmul(cs.direction);
            poly.push_back({orig.x / n2, orig.y / n2});
        }
        out.push_back({cs.piece_poly[f], std::move(poly)});
    }
    return out;
}

inline double cylinder_overlap(const CylinderSet<double>& ca, const Cylinder<double>& A,
                               const CylinderSet<double>& cb, const Cylinder<double>& B) {
    auto pa = cylinder_patches(ca, A);
    auto pb = cylinder_patches(cb, B);
    double total = 0;
    for (const auto& [poly_a, verts_a] : pa)
        for (const auto& [poly_b, verts_b] : pb)
            if (poly_a == poly_b) total += convex_overlap_area(verts_a, verts_b);
    return total;
}

// match a start-decomposition cylinder in a re-detected set by
// circumference and boundary lengths, with the expected height as a
// tie-break
inline int match_cylinder(const CylinderSet<double>& cs, double c,
                          std::vector<double> bottom_lengths, double expected_h) {
    std::sort(bottom_lengths.begin(), bottom_lengths.end());
    int best = -1;
    double best_err = 1e9;
    for (size_t i = 0; i < cs.cylinders.size(); ++i) {
        const auto& cyl = cs.cylinders[i];
        if (std::fabs(cyl.circ - c) > 1e-6 * std::max(1.0, c)) continue;
        std::vector<double> bl;
        for (int g : cyl.bottom) {
            const EdgeRef& e = cs.refined.gluings[g][0];
            bl.push_back(std::fabs(to_double(cs.refined.polygons[e.poly][e.edge].x)) /
                         cs.dir_norm);
        }
        std::sort(bl.begin(), bl.end());
        if (bl.size() != bottom_lengths.size()) continue;
        double err = 0;
        for (size_t k = 0; k < bl.size(); ++k) err += std::fabs(bl[k] - bottom_lengths[k]);
        if (err > 1e-6 * std::max(1.0, c)) continue;
        double herr = std::fabs(cyl.ht - expected_h);
        if (best < 0 || herr < best_err) {
            best = int(i);
            best_err = herr;
        }
    }
    if (best < 0) throw Error("could not match a cylinder across the deformation");
    return best;
}

inline std::vector<double> bottom_lengths_of(const CylinderSet<double>& cs,
                                             const Cylinder<double>& cyl) {
    std::vector<double> bl;
    for (int g : cyl.bottom) {
        const EdgeRef& e = cs.refined.gluings[g][0];
        bl.push_back(std::fabs(to_double(cs.refined.polygons[e.poly][e.edge].x)) / cs.dir_norm);
    }
    return bl;
}

} // namespace deform_detail

// Bring every detected modulus below M' = H'_max R by stretching the
// large-modulus cylinders, keeping the path tangent to the model.
inline BoundModuliResult bound_moduli(const PolygonSurface<double>& surface,
                                      const SurfaceInfo<double>& info,
                                      const HomologyPresentation& pres,
                                      const LocalModel<double>& model, double M,
                                      std::vector<Vec2<double>> directions = {},
                                      int samples = 10, const TraceOptions& topt = {}) {
    using namespace deform_detail;
    if (M <= 1.0) throw ValidationError("bound_moduli: M must exceed 1");
    if (directions.empty()) directions = {{1, 0}, {0, 1}};

    struct DirData {
        CylinderSet<double> cs;
        ParallelClasses<double> classes;
        std::vector<HeightSystem<double>> systems;
    };
    std::vector<DirData> dirs;
    for (const auto& w : directions) {
        DirData d{analyze_cylinders(surface, info, pres, w, topt), {}, {}};
        d.classes = m_parallel_classes(model, d.cs);
        for (const auto& members : d.classes.members) {
            auto sys = height_equations(model, d.cs, members);
            if (!sys.current_satisfies)
                throw ValidationError(
                    "bound_moduli: current heights violate the model's height equations "
                    "(the model is not tangent at this surface)");
            d.systems.push_back(std::move(sys));
        }
        dirs.push_back(std::move(d));
    }

    BoundModuliResult res;
    res.M = M;

    // R: the largest ratio of M-parallel cylinders (both orders)
    double R = 1;
    for (const auto& d : dirs)
        for (const auto& ratios : d.classes.ratio)
            for (const auto& r : ratios) {
                double x = to_double(r);
                R = std::max(R, std::max(x, 1.0 / x));
            }
    res.R = R;
    const double H = R * M;
    res.H = H;

    // plan the deformation of every class containing a large cylinder
    double H_max = H;
    for (size_t di = 0; di < dirs.size(); ++di) {
        const DirData& d = dirs[di];
        for (size_t ci = 0; ci < d.classes.members.size(); ++ci) {
            const auto& members = d.classes.members[ci];
            int c1 = -1;
            for (int m : members) {
                if (d.cs.cylinders[m].modulus < M) continue;
                if (c1 < 0 || d.cs.cylinders[m].modulus > d.cs.cylinders[c1].modulus) c1 = m;
            }
            if (c1 < 0) continue; // no large cylinder in this class

            BoundInstance inst;
            inst.H = H;
            const double c_ref = d.cs.cylinders[c1].circ;
            for (int m : members) inst.v.push_back(d.cs.cylinders[m].ht / c_ref);
            for (const auto& row : d.systems[ci].tangent) {
                std::vector<double> r;
                for (const auto& x : row) r.push_back(to_double(x));
                inst.subspace.push_back(std::move(r));
            }
            BoundResult b = linalg_bound(inst);
            H_max = std::max(H_max, b.H_local);

            ClassPlan plan;
            plan.dir_index = int(di);
            plan.class_index = int(ci);
            plan.members = members;
            plan.H = H;
            plan.H_local = b.H_local;
            for (size_t k = 0; k < members.size(); ++k) {
                plan.h0.push_back(d.cs.cylinders[members[k]].ht);
                plan.h1.push_back(b.v_prime[k] * c_ref);
            }
            res.plans.push_back(std::move(plan));
        }
    }
    res.H_max = H_max;
    res.M_prime = H_max * R;

    // path entries and the k = 0 shortcut
    for (const auto& plan : res.plans)
        for (size_t k = 0; k < plan.members.size(); ++k) {
            const auto& cyl = dirs[plan.dir_index].cs.cylinders[plan.members[k]];
            if (std::fabs(plan.h1[k] - plan.h0[k]) <= 1e-12 * std::max(1.0, plan.h0[k]))
                continue;
            PathEntry e;
            e.dir_index = plan.dir_index;
            e.cyl_index = plan.members[k];
            e.t_coeff = std::log(plan.h1[k] / plan.h0[k]);
            e.c = cyl.circ;
            e.h0 = plan.h0[k];
            e.h1 = plan.h1[k];
            e.m0 = cyl.modulus;
            e.m1 = plan.h1[k] / cyl.circ;
            res.path.push_back(e);
        }
    res.constant_path = res.path.empty();

    // disjointness of the deformed cylinders across directions
    for (size_t a = 0; a < res.path.size(); ++a)
        for (size_t b2 = a + 1; b2 < res.path.size(); ++b2) {
            const PathEntry& pa = res.path[a];
            const PathEntry& pb = res.path[b2];
            if (pa.dir_index == pb.dir_index) continue; // same direction: disjoint interiors
            double ov = cylinder_overlap(dirs[pa.dir_index].cs,
                                         dirs[pa.dir_index].cs.cylinders[pa.cyl_index],
                                         dirs[pb.dir_index].cs,
                                         dirs[pb.dir_index].cs.cylinders[pb.cyl_index]);
            double amin = std::min(pa.c * pa.h0, pb.c * pb.h0);
            if (ov > 1e-9 * amin)
                throw DisjointnessViolation(
                    "large-modulus cylinders from different directions overlap; "
                    "increase M");
        }

    // walk the path; sample the heights and check tangency along the way
    auto surface_at = [&](double t) {
        PolygonSurface<double> cur = surface;
        for (size_t di = 0; di < dirs.size(); ++di) {
            // factors for this direction at path time t
            std::vector<std::tuple<double, std::vector<double>, double, double>> targets;
            for (const auto& e : res.path) {
                if (e.dir_index != int(di)) continue;
                const auto& cyl0 = dirs[di].cs.cylinders[e.cyl_index];
                targets.push_back({cyl0.circ, bottom_lengths_of(dirs[di].cs, cyl0),
                                   cyl0.ht * std::exp(t * e.t_coeff) , cyl0.ht});
            }
            if (targets.empty()) continue;
            auto cur_info = validate_or_throw(cur);
            auto cur_pres = HomologyPresentation::build(cur_info.comb);
            auto cur_cs = analyze_cylinders(cur, cur_info, cur_pres, directions[di], topt);
            std::vector<std::pair<int, double>> factors;
            for (auto& [c, bl, h_target, h_start] : targets) {
                int idx = match_cylinder(cur_cs, c, bl, h_start);
                factors.push_back({idx, h_target / cur_cs.cylinders[idx].ht});
            }
            cur = stretch_cylinders(cur, cur_cs, factors).surface;
        }
        return cur;
    };

    double max_resid = 0;
    for (int sidx = 0; sidx < samples; ++sidx) {
        double t = samples == 1 ? 1.0 : double(sidx) / double(samples - 1);
        PolygonSurface<double> st = surface_at(t);
        auto st_info = validate_or_throw(st);
        auto st_pres = HomologyPresentation::build(st_info.comb);
        for (const auto& plan : res.plans) {
            auto cs_t =
                analyze_cylinders(st, st_info, st_pres, directions[plan.dir_index], topt);
            const auto& sys = dirs[plan.dir_index].systems[plan.class_index];
            std::vector<double> h(plan.members.size());
            for (size_t k = 0; k < plan.members.size(); ++k) {
                const auto& cyl0 = dirs[plan.dir_index].cs.cylinders[plan.members[k]];
                double expect = plan.h0[k] * std::pow(plan.h1[k] / plan.h0[k], t);
                int idx = match_cylinder(cs_t, cyl0.circ,
                                         bottom_lengths_of(dirs[plan.dir_index].cs, cyl0),
                                         expect);
                h[k] = cs_t.cylinders[idx].ht;
            }
            for (const auto& eq : sys.equations) {
                double acc = 0, scale = 1.0;
                for (size_t k = 0; k < h.size(); ++k) {
                    acc += to_double(eq[k]) * h[k];
                    scale = std::max(scale, std::fabs(to_double(eq[k])) * std::fabs(h[k]));
                }
                max_resid = std::max(max_resid, std::fabs(acc) / scale);
            }
        }
    }
    res.max_path_residual = max_resid;

    // endpoint: every detected cylinder has modulus at most M'
    res.final_surface = surface_at(1.0);
    auto fin_info = validate_or_throw(res.final_surface);
    auto fin_pres = HomologyPresentation::build(fin_info.comb);
    double max_mod = 0;
    for (size_t di = 0; di < directions.size(); ++di) {
        auto cs_f = analyze_cylinders(res.final_surface, fin_info, fin_pres, directions[di], topt);
        for (const auto& cyl : cs_f.cylinders) {
            max_mod = std::max(max_mod, cyl.modulus);
            res.after_table.push_back({int(di), cyl.circ, cyl.ht, cyl.modulus});
        }
        for (const auto& cyl0 : dirs[di].cs.cylinders)
            res.before_table.push_back({int(di), cyl0.circ, cyl0.ht, cyl0.modulus});
    }
    res.endpoint_max_modulus = max_mod;
    if (max_mod > res.M_prime * (1 + 1e-9))
        throw Error("bound_moduli: endpoint modulus exceeds M'");
    for (const auto& e : res.path)
        if (e.m1 < M * (1 - 1e-9) || e.m1 > res.M_prime * (1 + 1e-9))
            throw Error("bound_moduli: a deformed cylinder left [M, M']");
    return res;
}

} // namespace flatgeom
