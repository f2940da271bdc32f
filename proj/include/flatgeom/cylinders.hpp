// Cylinder decomposition in a completely periodic direction, core classes
// and their intersection duals, and the per-cylinder shear and stretch
// deformations u_t^C, a_t^C.
#pragma once

#include "flatgeom/trace.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace flatgeom {

template <class R> struct Cylinder {
    R circumference{}; // rotated-frame units (direction scaled to (1,0))
    R height{};
    double circ = 0;    // original-frame values for reporting
    double ht = 0;
    double modulus = 0; // invariant under the rotation-scaling
    IntVec core_chain;  // chain over refined pairs, oriented east
    IntVec core_class;  // coordinates in the base surface's homology basis
    IntVec dual;        // gamma^* evaluated on the basis (intersection numbers)
    std::vector<int> faces;
    std::vector<int> bottom, top; // refined pair ids
    std::string boundary;
    int fastpath_poly = -1; // base polygon index when the cylinder is in normal form
};

template <class R> struct CylinderSet {
    PolygonSurface<R> base;
    Combinatorics base_comb;
    Vec2<R> direction;
    double dir_norm = 1.0;
    // refined complex (rotated frame)
    PolygonSurface<R> refined;
    std::vector<trace_detail::Piece<R>> pieces;
    IntMat lift; // refined pairs x base pairs
    std::vector<char> horizontal;
    std::vector<int> pair_sc;
    std::vector<int> cyl_of_face;
    std::vector<Vec2<R>> offset; // development offsets per refined face
    std::vector<int> piece_poly;        // base polygon of each refined face
    std::vector<Vec2<R>> piece_origin;  // chart offset in the rotated base polygon
    std::vector<Cylinder<R>> cylinders;
    TraceOptions options;

    double total_ch() const {
        double s = 0;
        for (const auto& c : cylinders) s += c.circ * c.ht;
        return s;
    }
};

namespace cyl_detail {

template <class R> Vec2<R> rotate_to_horizontal(const Vec2<R>& v, const Vec2<R>& w) {
    return v.cmul(w.conj());
}

template <class R>
PolygonSurface<R> rotate_surface(const PolygonSurface<R>& s, const Vec2<R>& w) {
    PolygonSurface<R> out = s;
    for (auto& poly : out.polygons)
        for (auto& e : poly) e = rotate_to_horizontal(e, w);
    return out;
}

template <class R>
PolygonSurface<R> unrotate_surface(const PolygonSurface<R>& s, const Vec2<R>& w) {
    R n2 = norm2(w);
    PolygonSurface<R> out = s;
    for (auto& poly : out.polygons)
        for (auto& e : poly) {
            Vec2<R> u = e.cmul(w);
            e = Vec2<R>(R(u.x / n2), R(u.y / n2));
        }
    return out;
}

} // namespace cyl_detail

// Decompose `surface` into cylinders in the given direction. `info` and
// `pres` must come from the same surface. Throws StepBoundExceeded if some
// separatrix does not close up within the step bound.
template <class R>
CylinderSet<R> analyze_cylinders(const PolygonSurface<R>& surface, const SurfaceInfo<R>& info,
                                 const HomologyPresentation& pres, const Vec2<R>& direction,
                                 const TraceOptions& opt = {}) {
    using trace_detail::Cmp;
    if (sgn_of(direction.x) == 0 && sgn_of(direction.y) == 0)
        throw ValidationError("direction must be nonzero");

    CylinderSet<R> cs;
    cs.base = surface;
    cs.base_comb = info.comb;
    cs.direction = direction;
    cs.dir_norm = std::sqrt(to_double(norm2(direction)));
    cs.options = opt;

    PolygonSurface<R> rot = cyl_detail::rotate_surface(surface, direction);
    TriSurface<R> tri = triangulate(rot);
    SurfaceInfo<R> tri_info = validate_or_throw(tri.surface);
    auto tr = trace_detail::trace_horizontal(tri, tri_info.comb, opt);
    auto ref = trace_detail::refine(tri, tri_info.comb, tr, int(surface.gluings.size()),
                                    opt.rel_tol);

    cs.refined = ref.surface;
    cs.pieces = ref.pieces;
    cs.lift = ref.lift;
    cs.horizontal = ref.horizontal;
    cs.pair_sc = ref.pair_sc;
    for (const auto& piece : cs.pieces) {
        cs.piece_poly.push_back(tri.face_poly[piece.src_face]);
        cs.piece_origin.push_back(tri.face_origin[piece.src_face]);
    }

    SurfaceInfo<R> ref_info = validate_or_throw(cs.refined);
    const Combinatorics& rcomb = ref_info.comb;
    const double tol = opt.rel_tol * detail::length_scale(cs.refined);
    Cmp<R> cmp{tol};

    const int nfaces = int(cs.refined.polygons.size());
    const int npairs = int(cs.refined.gluings.size());

    // connected components along non-horizontal edges
    cs.cyl_of_face.assign(nfaces, -1);
    int ncyl = 0;
    std::vector<std::vector<int>> comp_faces;
    for (int f0 = 0; f0 < nfaces; ++f0) {
        if (cs.cyl_of_face[f0] >= 0) continue;
        std::vector<int> stack{f0};
        cs.cyl_of_face[f0] = ncyl;
        comp_faces.push_back({f0});
        while (!stack.empty()) {
            int f = stack.back();
            stack.pop_back();
            for (size_t e = 0; e < cs.refined.polygons[f].size(); ++e) {
                int g = rcomb.pair_of[f][e];
                if (cs.horizontal[g]) continue;
                EdgeRef o = cs.refined.gluings[g][1 - rcomb.end_of[f][e]];
                if (cs.cyl_of_face[o.poly] < 0) {
                    cs.cyl_of_face[o.poly] = ncyl;
                    comp_faces.back().push_back(o.poly);
                    stack.push_back(o.poly);
                }
            }
        }
        ++ncyl;
    }

    // develop each component: translation offsets per face
    cs.offset.assign(nfaces, Vec2<R>{R(0), R(0)});
    std::vector<std::vector<Vec2<R>>> pos(nfaces);
    for (int f = 0; f < nfaces; ++f) pos[f] = cs.pieces[f].pos;
    for (auto& faces : comp_faces) {
        std::vector<int> order{faces[0]};
        std::vector<char> seen(nfaces, 0);
        seen[faces[0]] = 1;
        for (size_t head = 0; head < order.size(); ++head) {
            int f = order[head];
            for (size_t e = 0; e < cs.refined.polygons[f].size(); ++e) {
                int g = rcomb.pair_of[f][e];
                if (cs.horizontal[g]) continue;
                EdgeRef o = cs.refined.gluings[g][1 - rcomb.end_of[f][e]];
                if (seen[o.poly]) continue;
                seen[o.poly] = 1;
                int n2 = int(cs.refined.polygons[o.poly].size());
                // start of (f,e)  <->  end of partner side
                Vec2<R> here = Vec2<R>(cs.offset[f] + pos[f][e]);
                Vec2<R> there = pos[o.poly][(o.edge + 1) % n2];
                cs.offset[o.poly] = Vec2<R>(here - there);
                order.push_back(o.poly);
            }
        }
    }

    // cylinder records
    IntMat basis_chains(int(surface.gluings.size()), pres.rank());
    for (int j = 0; j < pres.rank(); ++j) {
        IntVec cls(pres.rank());
        cls[j] = 1;
        IntVec chain = pres.chain_of_class(cls);
        for (int e = 0; e < basis_chains.rows(); ++e) basis_chains.at(e, j) = chain[e];
    }
    IntMat lifted_basis = cs.lift.mul(basis_chains); // refined chains of basis classes
    IntMat rel_ref = polygon_relations(rcomb);
    IntMat solve_mat = lifted_basis.hstack(rel_ref);

    // east occurrence of each horizontal pair
    auto east_slot = [&](int g) {
        const EdgeRef& e0 = cs.refined.gluings[g][0];
        return sgn_of(cs.refined.polygons[e0.poly][e0.edge].x) > 0 ? 0 : 1;
    };

    for (int c = 0; c < ncyl; ++c) {
        Cylinder<R> cyl;
        cyl.faces = comp_faces[c];
        std::sort(cyl.faces.begin(), cyl.faces.end());

        // vertical extent
        bool first = true;
        R ymin{}, ymax{};
        for (int f : cyl.faces)
            for (const auto& q : pos[f]) {
                R y = R(cs.offset[f].y + q.y);
                if (first || y < ymin) ymin = y;
                if (first || y > ymax) ymax = y;
                first = false;
            }
        cyl.height = R(ymax - ymin);

        // bottom and top circles
        R csum(0), tsum(0);
        for (int g = 0; g < npairs; ++g) {
            if (!cs.horizontal[g]) continue;
            int es = east_slot(g);
            const EdgeRef& east = cs.refined.gluings[g][es];
            const EdgeRef& west = cs.refined.gluings[g][1 - es];
            R ye = R(cs.offset[east.poly].y + pos[east.poly][east.edge].y);
            R yw = R(cs.offset[west.poly].y + pos[west.poly][west.edge].y);
            if (cs.cyl_of_face[east.poly] == c && cmp.eq(ye, ymin)) {
                cyl.bottom.push_back(g);
                csum += abs_val(cs.refined.polygons[east.poly][east.edge].x);
            }
            if (cs.cyl_of_face[west.poly] == c && cmp.eq(yw, ymax)) {
                cyl.top.push_back(g);
                tsum += abs_val(cs.refined.polygons[west.poly][west.edge].x);
            }
        }
        cyl.circumference = csum;
        if (!cmp.eq(csum, tsum))
            throw Error("cylinder boundary circles have different lengths");

        // area consistency: sum of face areas = c * h
        R a2(0);
        for (int f : cyl.faces) a2 += polygon_area2(cs.refined.polygons[f]);
        if (!cmp.eq(R(a2 / R(2)), R(csum * cyl.height)))
            throw Error("cylinder area does not match circumference * height");

        cyl.circ = to_double(cyl.circumference) / cs.dir_norm;
        cyl.ht = to_double(cyl.height) / cs.dir_norm;
        cyl.modulus = to_double(cyl.height) / to_double(cyl.circumference);

        // core chain: bottom circle oriented east
        cyl.core_chain.assign(npairs, 0);
        for (int g : cyl.bottom) cyl.core_chain[g] = east_slot(g) == 0 ? 1 : -1;

        // express the core in the base homology basis
        IntVec sol_rhs = cyl.core_chain;
        auto sol = int_solve(solve_mat, sol_rhs);
        if (!sol) throw Error("core class is not expressible in the base homology basis");
        cyl.core_class.assign(sol->begin(), sol->begin() + pres.rank());

        // generic level for crossing counts: widest gap between vertex heights
        std::vector<double> ys;
        for (int f : cyl.faces)
            for (const auto& q : pos[f]) ys.push_back(to_double(cs.offset[f].y + q.y));
        std::sort(ys.begin(), ys.end());
        ys.erase(std::unique(ys.begin(), ys.end(),
                             [&](double a, double b) { return std::fabs(a - b) <= tol; }),
                 ys.end());
        double best_gap = -1, ystar = 0;
        for (size_t i = 0; i + 1 < ys.size(); ++i)
            if (ys[i + 1] - ys[i] > best_gap) {
                best_gap = ys[i + 1] - ys[i];
                ystar = (ys[i] + ys[i + 1]) / 2;
            }

        // crossing vector over refined pairs
        IntVec chi(npairs);
        for (int g = 0; g < npairs; ++g) {
            if (cs.horizontal[g]) continue;
            const EdgeRef& e0 = cs.refined.gluings[g][0];
            if (cs.cyl_of_face[e0.poly] != c) continue;
            int n2 = int(cs.refined.polygons[e0.poly].size());
            double y1 = to_double(cs.offset[e0.poly].y + pos[e0.poly][e0.edge].y);
            double y2 = to_double(cs.offset[e0.poly].y + pos[e0.poly][(e0.edge + 1) % n2].y);
            double lo = std::min(y1, y2), hi = std::max(y1, y2);
            if (lo < ystar && ystar < hi) chi[g] = (y2 > y1) ? 1 : -1;
        }
        IntVec lifted_chi = cs.lift.apply_transpose(chi); // on base pairs
        cyl.dual = basis_chains.apply_transpose(lifted_chi);

        // boundary description: saddle connections along the bottom circle
        std::ostringstream bd;
        bd << "bottom[";
        for (size_t i = 0; i < cyl.bottom.size(); ++i)
            bd << (i ? " " : "") << pair_label(cs, cyl.bottom[i]);
        bd << "] top[";
        for (size_t i = 0; i < cyl.top.size(); ++i)
            bd << (i ? " " : "") << pair_label(cs, cyl.top[i]);
        bd << "]";
        cyl.boundary = bd.str();

        cs.cylinders.push_back(std::move(cyl));
    }

    // normal-form (single parallelogram) detection, for exact deformations
    detect_fastpath(cs, info, tri, cmp);

    // deterministic order: by decreasing modulus, then circumference
    std::vector<int> perm(cs.cylinders.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end(), [&](int a, int b) {
        const auto& A = cs.cylinders[a];
        const auto& B = cs.cylinders[b];
        if (A.modulus != B.modulus) return A.modulus > B.modulus;
        if (A.circ != B.circ) return A.circ < B.circ;
        return A.faces < B.faces;
    });
    std::vector<Cylinder<R>> ordered;
    std::vector<int> new_id(cs.cylinders.size());
    for (size_t i = 0; i < perm.size(); ++i) {
        new_id[perm[i]] = int(i);
        ordered.push_back(std::move(cs.cylinders[perm[i]]));
    }
    cs.cylinders = std::move(ordered);
    for (auto& cf : cs.cyl_of_face) cf = new_id[cf];
    return cs;
}

template <class R> std::string pair_label(const CylinderSet<R>& cs, int g) {
    if (cs.pair_sc[g] >= 0) return "sc" + std::to_string(cs.pair_sc[g]);
    // fragment of a base edge: name it by the base pair
    for (int e = 0; e < cs.lift.cols(); ++e)
        if (cs.lift.at(g, e) != 0) return "e" + std::to_string(e);
    return "d?"; // fragment of a triangulation diagonal (never horizontal)
}

template <class R>
void detect_fastpath(CylinderSet<R>& cs, const SurfaceInfo<R>& info, const TriSurface<R>& tri,
                     const trace_detail::Cmp<R>& cmp) {
    // piece -> base polygon
    for (auto& cyl : cs.cylinders) {
        int base_poly = -1;
        bool ok = true;
        for (int f : cyl.faces) {
            int tp = tri.face_poly[cs.pieces[f].src_face];
            if (base_poly < 0) base_poly = tp;
            if (tp != base_poly) ok = false;
            if (cs.pieces[f].band != 0) ok = false; // polygon was cut
        }
        if (!ok || base_poly < 0) continue;
        // the whole polygon must be in this cylinder
        size_t tri_count = 0;
        for (size_t f = 0; f < tri.face_poly.size(); ++f)
            if (tri.face_poly[f] == base_poly) ++tri_count;
        if (tri_count != cyl.faces.size()) continue;
        // base polygon must have exactly two non-horizontal edges glued to
        // each other (rotated frame)
        const auto& poly = cs.base.polygons[base_poly];
        std::vector<int> sides;
        for (size_t e = 0; e < poly.size(); ++e) {
            Vec2<R> v = cyl_detail::rotate_to_horizontal(poly[e], cs.direction);
            if (cmp.sign(v.y) != 0) sides.push_back(int(e));
        }
        if (sides.size() != 2) continue;
        if (info.comb.pair_of[base_poly][sides[0]] != info.comb.pair_of[base_poly][sides[1]])
            continue;
        cyl.fastpath_poly = base_poly;
    }
}

// Horizontal decomposition with a fresh homology presentation.
template <class R>
CylinderSet<R> horizontal_cylinders(const PolygonSurface<R>& surface,
                                    const TraceOptions& opt = {}) {
    auto info = validate_or_throw(surface);
    auto pres = homology_basis(info);
    return analyze_cylinders(surface, info, pres, Vec2<R>{R(1), R(0)}, opt);
}

// ---------------------------------------------------------------------
// Deformations

template <class R> struct Deformed {
    PolygonSurface<R> surface;
    IntMat lift; // new pairs x old pairs: the image of each old edge class
};

namespace cyl_detail {

template <class R>
void check_fresh(const CylinderSet<R>& cs, const PolygonSurface<R>& surface) {
    if (!(cs.base == surface))
        throw StaleCylinder("cylinder set was computed from a different surface");
}

// B = W^{-1} A W where W is complex multiplication by conj(direction)
template <class R> Mat2<R> conjugated_matrix(const Mat2<R>& A, const Vec2<R>& w) {
    R n2 = norm2(w);
    Mat2<R> W{w.x, w.y, R(-w.y), w.x};
    Mat2<R> Winv{R(w.x / n2), R(-w.y / n2), R(w.y / n2), R(w.x / n2)};
    return Winv.mul(A).mul(W);
}

// Apply A (rotated frame) to the faces of the chosen cylinders of the
// refined complex and return the un-rotated result.
template <class R>
Deformed<R> general_deform(const CylinderSet<R>& cs,
                           const std::vector<std::pair<int, Mat2<R>>>& jobs) {
    PolygonSurface<R> work = cs.refined;
    for (const auto& [c, A] : jobs)
        for (int f = 0; f < int(work.polygons.size()); ++f)
            if (cs.cyl_of_face[f] == c)
                for (auto& e : work.polygons[f]) e = A.apply(e);
    Deformed<R> out;
    out.surface = unrotate_surface(work, cs.direction);
    out.lift = cs.lift;
    return out;
}

} // namespace cyl_detail

template <class R>
Deformed<R> stretch_cylinders(const PolygonSurface<R>& surface, const CylinderSet<R>& cs,
                              const std::vector<std::pair<int, R>>& factors);

// a_t^C with vertical scale factor (= e^t) applied only to cylinder `c`.
template <class R>
Deformed<R> stretch_cylinder_factor(const PolygonSurface<R>& surface, const CylinderSet<R>& cs,
                                    int c, const R& factor) {
    return stretch_cylinders(surface, cs, {{c, factor}});
}

inline Deformed<double> stretch_cylinder(const PolygonSurface<double>& surface,
                                         const CylinderSet<double>& cs, int c, double t) {
    return stretch_cylinder_factor(surface, cs, c, std::exp(t));
}

// u_t^C applied only to cylinder `c`. In normal form the re-gluing offset
// is stored modulo the circumference, so a full twist t = c/h returns the
// representation unchanged.
template <class R>
Deformed<R> shear_cylinder(const PolygonSurface<R>& surface, const CylinderSet<R>& cs, int c,
                           const R& t) {
    cyl_detail::check_fresh(cs, surface);
    const Cylinder<R>& cyl = cs.cylinders[c];
    if (cyl.fastpath_poly >= 0) {
        Deformed<R> out;
        out.surface = surface;
        out.lift = IntMat::identity(int(surface.gluings.size()));

        // reduce the twist offset into [0, c)
        const R cval = cyl.circumference;
        R raw = R(t * cyl.height);
        Int k;
        R delta;
        if constexpr (ScalarTraits<R>::exact) {
            Rat q = raw / cval;
            Int fl = q.get_num() / q.get_den();
            if (q < 0 && fl * q.get_den() != q.get_num()) fl -= 1;
            k = fl;
            delta = R(raw - R(cval * Rat(fl)));
        } else {
            double fl = std::floor(raw / cval);
            k = long(fl);
            delta = raw - cval * fl;
        }

        auto& poly = out.surface.polygons[cyl.fastpath_poly];
        trace_detail::Cmp<R> cmp{cs.options.rel_tol * detail::length_scale(surface)};
        R n2 = norm2(cs.direction);
        // W^{-1} of the horizontal offset (delta, 0)
        Vec2<R> shift{R(R(delta * cs.direction.x) / n2), R(R(delta * cs.direction.y) / n2)};
        int up_edge = -1;
        for (size_t e = 0; e < poly.size(); ++e) {
            Vec2<R> v = cyl_detail::rotate_to_horizontal(poly[e], cs.direction);
            if (cmp.sign(v.y) > 0) {
                up_edge = int(e);
                poly[e] = Vec2<R>(poly[e] + shift);
            } else if (cmp.sign(v.y) < 0) {
                poly[e] = Vec2<R>(poly[e] - shift);
            }
        }
        if (up_edge < 0) throw Error("normal-form cylinder has no side edge");

        // the wound-off part of the twist re-marks the side class by k cores
        if (k != 0) {
            IntVec core_base = cs.lift.apply_transpose(cyl.core_chain);
            int g_side = cs.base_comb.pair_of[cyl.fastpath_poly][up_edge];
            Int sgn = cs.base_comb.end_of[cyl.fastpath_poly][up_edge] == 0 ? k : -k;
            for (int e2 = 0; e2 < out.lift.rows(); ++e2)
                out.lift.at(e2, g_side) += sgn * core_base[e2];
        }
        return out;
    }
    return cyl_detail::general_deform(cs, {{c, Mat2<R>::shear(t)}});
}

// Simultaneous a^{E_i} stretches of several disjoint cylinders of one
// direction. Uses the exact normal-form route when every target admits it.
template <class R>
Deformed<R> stretch_cylinders(const PolygonSurface<R>& surface, const CylinderSet<R>& cs,
                              const std::vector<std::pair<int, R>>& factors) {
    cyl_detail::check_fresh(cs, surface);
    bool all_fast = true;
    for (const auto& [c, f] : factors) {
        if (sgn_of(f) <= 0) throw ValidationError("stretch factor must be positive");
        if (cs.cylinders[c].fastpath_poly < 0) all_fast = false;
    }
    if (all_fast) {
        Deformed<R> out;
        out.surface = surface;
        out.lift = IntMat::identity(int(surface.gluings.size()));
        trace_detail::Cmp<R> cmp{cs.options.rel_tol * detail::length_scale(surface)};
        for (const auto& [c, f] : factors) {
            Mat2<R> B = cyl_detail::conjugated_matrix(Mat2<R>::vstretch(f), cs.direction);
            auto& poly = out.surface.polygons[cs.cylinders[c].fastpath_poly];
            for (auto& e : poly) {
                Vec2<R> v = cyl_detail::rotate_to_horizontal(e, cs.direction);
                if (cmp.sign(v.y) != 0) e = B.apply(e);
            }
        }
        return out;
    }
    std::vector<std::pair<int, Mat2<R>>> jobs;
    for (const auto& [c, f] : factors) jobs.push_back({c, Mat2<R>::vstretch(f)});
    return cyl_detail::general_deform(cs, jobs);
}

} // namespace flatgeom
