// Ear-clipping triangulation of a glued polygon complex. Original edges
// survive unsubdivided; interior diagonals are added in glued pairs.
#pragma once

#include "flatgeom/surface.hpp"

namespace flatgeom {

template <class R> struct TriSurface {
    PolygonSurface<R> surface;   // every polygon a triangle
    std::vector<int> face_poly;  // original polygon of each triangle
    std::vector<Vec2<R>> face_origin; // chart offset of each triangle in its polygon
    // provenance per tri gluing pair: original pair (or -1 for a diagonal),
    // and +1/-1 depending on whether the tri pair's slot-0 direction agrees
    // with the original pair's slot-0 direction
    std::vector<int> orig_pair;
    std::vector<int> orig_sign;
    int num_orig_pairs = 0;
};

namespace detail {

template <class R>
bool point_in_closed_triangle(const Vec2<R>& a, const Vec2<R>& b, const Vec2<R>& c,
                              const Vec2<R>& p) {
    int s1 = sgn_of(cross(Vec2<R>(b - a), Vec2<R>(p - a)));
    int s2 = sgn_of(cross(Vec2<R>(c - b), Vec2<R>(p - b)));
    int s3 = sgn_of(cross(Vec2<R>(a - c), Vec2<R>(p - c)));
    return s1 >= 0 && s2 >= 0 && s3 >= 0;
}

// Fan-free ear clipping on vertex indices; returns triangles as index
// triples (ccw). Handles straight (angle pi) and reflex vertices.
template <class R>
std::vector<std::array<int, 3>> ear_clip(const std::vector<Vec2<R>>& vs) {
    const int n = int(vs.size());
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::vector<std::array<int, 3>> tris;
    int guard = 0;
    while (idx.size() > 3) {
        if (++guard > 4 * n * n)
            throw ValidationError("triangulation failed; polygon may be degenerate");
        bool clipped = false;
        const int m = int(idx.size());
        for (int k = 0; k < m; ++k) {
            int ia = idx[(k + m - 1) % m], ib = idx[k], ic = idx[(k + 1) % m];
            const Vec2<R>&a = vs[ia], &b = vs[ib], &c = vs[ic];
            if (sgn_of(cross(Vec2<R>(b - a), Vec2<R>(c - b))) <= 0) continue; // not strictly convex
            bool empty = true;
            for (int j : idx) {
                if (j == ia || j == ib || j == ic) continue;
                if (point_in_closed_triangle(a, b, c, vs[j])) {
                    empty = false;
                    break;
                }
            }
            if (!empty) continue;
            tris.push_back({ia, ib, ic});
            idx.erase(idx.begin() + k);
            clipped = true;
            break;
        }
        if (!clipped) throw ValidationError("triangulation failed; no ear found");
    }
    tris.push_back({idx[0], idx[1], idx[2]});
    return tris;
}

} // namespace detail

template <class R> TriSurface<R> triangulate(const PolygonSurface<R>& s) {
    TriSurface<R> out;
    out.num_orig_pairs = int(s.gluings.size());

    struct SideKey {
        int va, vb; // polygon-local vertex indices
    };
    // for each original side (p,i): its (face, side) in the triangulation
    std::vector<std::vector<std::pair<int, int>>> side_loc(s.polygons.size());
    // diagonal (p, va, vb) -> (face, side) awaiting its partner
    std::map<std::tuple<int, int, int>, std::pair<int, int>> open_diag;

    for (size_t p = 0; p < s.polygons.size(); ++p) {
        const auto& poly = s.polygons[p];
        const int n = int(poly.size());
        side_loc[p].assign(n, {-1, -1});
        auto vs = polygon_vertices(poly);
        auto tris = detail::ear_clip(vs);
        for (const auto& t : tris) {
            int face = int(out.surface.polygons.size());
            out.surface.polygons.push_back(
                {Vec2<R>(vs[t[1]] - vs[t[0]]), Vec2<R>(vs[t[2]] - vs[t[1]]),
                 Vec2<R>(vs[t[0]] - vs[t[2]])});
            out.face_poly.push_back(int(p));
            out.face_origin.push_back(vs[t[0]]);
            for (int e = 0; e < 3; ++e) {
                int va = t[e], vb = t[(e + 1) % 3];
                if (vb == (va + 1) % n) {
                    side_loc[p][va] = {face, e}; // original boundary side va
                } else {
                    auto key_rev = std::make_tuple(int(p), vb, va);
                    auto it = open_diag.find(key_rev);
                    if (it != open_diag.end()) {
                        out.surface.gluings.push_back(
                            {EdgeRef{it->second.first, it->second.second}, EdgeRef{face, e}});
                        out.orig_pair.push_back(-1);
                        out.orig_sign.push_back(0);
                        open_diag.erase(it);
                    } else {
                        open_diag[std::make_tuple(int(p), va, vb)] = {face, e};
                    }
                }
            }
        }
    }
    if (!open_diag.empty()) throw ValidationError("triangulation left an unmatched diagonal");

    for (size_t g = 0; g < s.gluings.size(); ++g) {
        const EdgeRef& e0 = s.gluings[g][0];
        const EdgeRef& e1 = s.gluings[g][1];
        auto [f0, s0] = side_loc[e0.poly][e0.edge];
        auto [f1, s1] = side_loc[e1.poly][e1.edge];
        out.surface.gluings.push_back({EdgeRef{f0, s0}, EdgeRef{f1, s1}});
        out.orig_pair.push_back(int(g));
        out.orig_sign.push_back(1); // slot 0 carries the original slot-0 direction
    }
    return out;
}

} // namespace flatgeom
