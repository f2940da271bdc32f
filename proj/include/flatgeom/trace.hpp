// Horizontal separatrix tracing and the refined complex: the surface cut
// along all horizontal saddle connections, so that every face lies in a
// single cylinder and every horizontal boundary is an actual edge.
#pragma once

#include "flatgeom/homology.hpp"
#include "flatgeom/triangulate.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace flatgeom {

struct TraceOptions {
    int max_crossings = 10000; // per separatrix
    double rel_tol = 1e-9;
};

namespace trace_detail {

template <class R> struct Cmp {
    double tol; // absolute; ignored in exact mode

    bool eq(const R& a, const R& b) const {
        if constexpr (ScalarTraits<R>::exact)
            return a == b;
        else
            return std::fabs(a - b) <= tol;
    }
    int sign(const R& a) const {
        if constexpr (ScalarTraits<R>::exact)
            return sgn(a);
        else
            return a > tol ? 1 : (a < -tol ? -1 : 0);
    }
    bool point_eq(const Vec2<R>& a, const Vec2<R>& b) const {
        return eq(a.x, b.x) && eq(a.y, b.y);
    }
};

template <class R> struct ChordEnd {
    bool at_vertex = false;
    int vertex = -1; // face-local vertex index if at_vertex
    int side = -1;   // else: side index and position along it
    R lambda{};
};

template <class R> struct Chord {
    R y; // height in the face chart
    ChordEnd<R> west, east;
    int sc = -1;
};

template <class R> struct TraceResult {
    std::vector<std::vector<Chord<R>>> face_chords;
    std::vector<R> sc_length; // per saddle connection, rotated-frame length
};

// All horizontal saddle connections, traced eastward from every corner
// whose interior sector strictly contains the east direction. Horizontal
// edges are saddle connections already and are not traced.
template <class R>
TraceResult<R> trace_horizontal(const TriSurface<R>& tri, const Combinatorics& comb,
                                const TraceOptions& opt) {
    const PolygonSurface<R>& S = tri.surface;
    const double tol = opt.rel_tol * detail::length_scale(S);
    Cmp<R> cmp{tol};
    auto verts = all_vertices(S);

    TraceResult<R> res;
    res.face_chords.resize(S.polygons.size());

    const Vec2<R> east{R(1), R(0)};
    for (size_t f0 = 0; f0 < S.polygons.size(); ++f0) {
        for (int c0 = 0; c0 < 3; ++c0) {
            const Vec2<R>& out = S.polygons[f0][c0];
            Vec2<R> in = -S.polygons[f0][(c0 + 2) % 3];
            int cue = cmp.sign(cross(out, east));
            int cew = cmp.sign(cross(east, in));
            int cuw = cmp.sign(cross(out, in));
            bool inside;
            if (cuw < 0)
                inside = cue > 0 || cew > 0; // reflex corner
            else
                inside = cue > 0 && cew > 0;
            if (!inside) continue;

            // march east from this corner
            int sc_id = int(res.sc_length.size());
            R length(0);
            int f = int(f0);
            Vec2<R> p = verts[f0][c0];
            ChordEnd<R> entry;
            entry.at_vertex = true;
            entry.vertex = c0;
            for (int step = 0;; ++step) {
                if (step > opt.max_crossings)
                    throw StepBoundExceeded(
                        "separatrix exceeded " + std::to_string(opt.max_crossings) +
                        " crossings; direction may not be completely periodic");
                const auto& vs = verts[f];
                int best_vertex = -1;
                R vdist{};
                for (int j = 0; j < 3; ++j) {
                    if (!cmp.eq(vs[j].y, p.y)) continue;
                    R d = R(vs[j].x - p.x);
                    if (cmp.sign(d) <= 0) continue;
                    if (best_vertex < 0 || d < vdist) {
                        best_vertex = j;
                        vdist = d;
                    }
                }
                int best_side = -1;
                R sdist{}, slam{};
                for (int s = 0; s < 3; ++s) {
                    const Vec2<R>& A = vs[s];
                    const Vec2<R>& B = vs[(s + 1) % 3];
                    R dy = R(B.y - A.y);
                    if (cmp.sign(dy) == 0) continue;
                    R lam = R(R(p.y - A.y) / dy);
                    double lamd = to_double(lam);
                    if (lamd <= 0 || lamd >= 1) continue;
                    R x = R(A.x + R(B.x - A.x) * lam);
                    R d = R(x - p.x);
                    if (cmp.sign(d) <= 0) continue;
                    if (best_side < 0 || d < sdist) {
                        best_side = s;
                        sdist = d;
                        slam = lam;
                    }
                }
                bool take_vertex =
                    best_vertex >= 0 &&
                    (best_side < 0 || to_double(vdist) <= to_double(sdist) + tol);
                if (!take_vertex && best_side < 0)
                    throw Error("separatrix trace lost inside a face");

                Chord<R> ch;
                ch.y = p.y;
                ch.west = entry;
                ch.sc = sc_id;
                if (take_vertex) {
                    ch.east.at_vertex = true;
                    ch.east.vertex = best_vertex;
                    res.face_chords[f].push_back(ch);
                    length += vdist;
                    break;
                }
                ch.east.at_vertex = false;
                ch.east.side = best_side;
                ch.east.lambda = slam;
                res.face_chords[f].push_back(ch);
                length += sdist;

                int g = comb.pair_of[f][best_side];
                EdgeRef other = tri.surface.gluings[g][1 - comb.end_of[f][best_side]];
                R lam2 = R(R(1) - slam);
                const auto& vs2 = verts[other.poly];
                const Vec2<R>& A2 = vs2[other.edge];
                const Vec2<R>& B2 = vs2[(other.edge + 1) % 3];
                p = Vec2<R>(A2 + Vec2<R>(B2 - A2) * lam2);
                entry = ChordEnd<R>{};
                entry.side = other.edge;
                entry.lambda = lam2;
                f = other.poly;
            }
            res.sc_length.push_back(length);
        }
    }
    return res;
}

// ---------------------------------------------------------------------
// Refinement. Every chord spans the full horizontal cross-section of its
// triangle, so cutting along chords slices each face into horizontal bands.

struct EdgeTag {
    int kind = 0;          // 0 = fragment of a triangle side, 1 = chord
    int side = -1;         // kind 0
    double l0 = 0, l1 = 0; // kind 0: lambda interval along the side
    int level = -1;        // kind 1: chord level index within the face
};

template <class R> struct Piece {
    int src_face = -1;
    int band = -1;
    std::vector<Vec2<R>> pos; // ccw vertex positions in the source chart
    std::vector<EdgeTag> tags;
};

template <class R> struct Refined {
    PolygonSurface<R> surface;
    std::vector<Piece<R>> pieces;
    IntMat lift;                    // refined pairs x orig pairs
    std::vector<char> horizontal;   // per refined pair
    std::vector<int> pair_sc;       // saddle connection id (chords), else -1
};

template <class R>
Refined<R> refine(const TriSurface<R>& tri, const Combinatorics& comb,
                  const TraceResult<R>& tr, int num_orig_pairs, double rel_tol) {
    const PolygonSurface<R>& S = tri.surface;
    const double tol = rel_tol * detail::length_scale(S);
    Cmp<R> cmp{tol};
    auto verts = all_vertices(S);
    const int nfaces = int(S.polygons.size());

    Refined<R> out;

    // distinct chord heights per face, ascending
    std::vector<std::vector<R>> levels(nfaces);
    std::vector<std::vector<int>> level_sc(nfaces);
    for (int f = 0; f < nfaces; ++f) {
        std::vector<const Chord<R>*> chs;
        for (const auto& c : tr.face_chords[f]) chs.push_back(&c);
        std::sort(chs.begin(), chs.end(), [&](const Chord<R>* a, const Chord<R>* b) {
            return to_double(a->y) < to_double(b->y);
        });
        for (const auto* c : chs) {
            if (!levels[f].empty() && cmp.eq(levels[f].back(), c->y))
                throw Error("two distinct chords at equal height in one face");
            levels[f].push_back(c->y);
            level_sc[f].push_back(c->sc);
        }
    }

    // slice faces into bands
    std::vector<std::vector<int>> face_pieces(nfaces);
    for (int f = 0; f < nfaces; ++f) {
        const auto& vs = verts[f];
        R ymin = vs[0].y, ymax = vs[0].y;
        for (int j = 1; j < 3; ++j) {
            if (vs[j].y < ymin) ymin = vs[j].y;
            if (vs[j].y > ymax) ymax = vs[j].y;
        }
        const int m = int(levels[f].size());
        for (int band = 0; band <= m; ++band) {
            R lo = band == 0 ? ymin : levels[f][band - 1];
            R hi = band == m ? ymax : levels[f][band];

            struct Frag {
                Vec2<R> a, b;
                EdgeTag tag;
            };
            std::vector<Frag> frags;
            for (int s = 0; s < 3; ++s) {
                const Vec2<R>& A = vs[s];
                const Vec2<R>& B = vs[(s + 1) % 3];
                R dy = R(B.y - A.y);
                R t0(0), t1(1);
                if (cmp.sign(dy) == 0) {
                    if (!(cmp.eq(A.y, lo) || cmp.eq(A.y, hi))) continue;
                } else {
                    R ta = R(R(lo - A.y) / dy);
                    R tb = R(R(hi - A.y) / dy);
                    if (tb < ta) std::swap(ta, tb);
                    t0 = ta < R(0) ? R(0) : ta;
                    t1 = tb > R(1) ? R(1) : tb;
                    if (!(t0 < t1) || cmp.eq(t0, t1)) continue;
                }
                Frag fr;
                fr.a = Vec2<R>(A + Vec2<R>(B - A) * t0);
                fr.b = Vec2<R>(A + Vec2<R>(B - A) * t1);
                fr.tag.kind = 0;
                fr.tag.side = s;
                fr.tag.l0 = to_double(t0);
                fr.tag.l1 = to_double(t1);
                frags.push_back(fr);
            }
            if (frags.empty()) continue;

            Piece<R> piece;
            piece.src_face = f;
            piece.band = band;
            auto connector_tag = [&](const R& y) {
                EdgeTag t;
                t.kind = 1;
                if (band > 0 && cmp.eq(y, lo))
                    t.level = band - 1;
                else if (band < m && cmp.eq(y, hi))
                    t.level = band;
                else
                    throw Error("refine: connector at a non-chord level");
                return t;
            };
            for (size_t k = 0; k < frags.size(); ++k) {
                const Frag& cur = frags[k];
                const Frag& prev = frags[(k + frags.size() - 1) % frags.size()];
                if (!cmp.point_eq(prev.b, cur.a)) {
                    piece.pos.push_back(prev.b);
                    piece.tags.push_back(connector_tag(prev.b.y));
                }
                piece.pos.push_back(cur.a);
                piece.tags.push_back(cur.tag);
            }
            if (piece.pos.size() < 3) throw Error("refine: degenerate piece");
            face_pieces[f].push_back(int(out.pieces.size()));
            out.pieces.push_back(std::move(piece));
        }
    }

    // refined faces as polygons
    for (const auto& piece : out.pieces) {
        std::vector<Vec2<R>> edges;
        const size_t n = piece.pos.size();
        for (size_t i = 0; i < n; ++i)
            edges.push_back(Vec2<R>(piece.pos[(i + 1) % n] - piece.pos[i]));
        out.surface.polygons.push_back(std::move(edges));
    }

    // gluings: chords first
    for (int f = 0; f < nfaces; ++f) {
        const int m = int(levels[f].size());
        for (int lev = 0; lev < m; ++lev) {
            EdgeRef east_occ, west_occ;
            int found = 0;
            for (int pid : face_pieces[f]) {
                const auto& piece = out.pieces[pid];
                for (size_t e = 0; e < piece.tags.size(); ++e) {
                    if (piece.tags[e].kind != 1 || piece.tags[e].level != lev) continue;
                    const Vec2<R>& v = out.surface.polygons[pid][e];
                    if (cmp.sign(v.x) > 0)
                        east_occ = EdgeRef{pid, int(e)};
                    else
                        west_occ = EdgeRef{pid, int(e)};
                    ++found;
                }
            }
            if (found != 2) throw Error("refine: chord does not have exactly two sides");
            out.surface.gluings.push_back({east_occ, west_occ});
            out.horizontal.push_back(1);
            out.pair_sc.push_back(level_sc[f][lev]);
        }
    }

    // gluings: side fragments, matched across each triangle pair
    out.lift = IntMat(0, 0); // resized below once the pair count is known
    std::vector<std::vector<Int>> lift_rows; // per refined pair, length num_orig_pairs
    for (size_t k = 0; k < out.surface.gluings.size(); ++k)
        lift_rows.push_back(IntVec(num_orig_pairs));

    struct FragOcc {
        int piece, edge;
        double l0, l1;
    };
    auto collect = [&](int face, int side) {
        std::vector<FragOcc> occ;
        for (int pid : face_pieces[face]) {
            const auto& piece = out.pieces[pid];
            for (size_t e = 0; e < piece.tags.size(); ++e)
                if (piece.tags[e].kind == 0 && piece.tags[e].side == side)
                    occ.push_back({pid, int(e), piece.tags[e].l0, piece.tags[e].l1});
        }
        std::sort(occ.begin(), occ.end(),
                  [](const FragOcc& a, const FragOcc& b) { return a.l0 < b.l0; });
        return occ;
    };
    for (size_t g = 0; g < tri.surface.gluings.size(); ++g) {
        const EdgeRef o0 = tri.surface.gluings[g][0];
        const EdgeRef o1 = tri.surface.gluings[g][1];
        auto f0 = collect(o0.poly, o0.edge);
        auto f1 = collect(o1.poly, o1.edge);
        if (f0.size() != f1.size())
            throw Error("refine: fragment counts disagree across a gluing");
        const size_t cnt = f0.size();
        bool horiz = cmp.sign(tri.surface.polygons[o0.poly][o0.edge].y) == 0;
        for (size_t k = 0; k < cnt; ++k) {
            const FragOcc& a = f0[k];
            const FragOcc& b = f1[cnt - 1 - k];
            out.surface.gluings.push_back(
                {EdgeRef{a.piece, a.edge}, EdgeRef{b.piece, b.edge}});
            out.horizontal.push_back(horiz ? 1 : 0);
            out.pair_sc.push_back(-1);
            IntVec row(num_orig_pairs);
            if (tri.orig_pair[g] >= 0) row[tri.orig_pair[g]] = tri.orig_sign[g];
            lift_rows.push_back(row);
        }
    }
    out.lift = IntMat::from_rows(lift_rows);
    if (out.lift.rows() != int(out.surface.gluings.size()))
        throw Error("refine: lift bookkeeping out of sync");
    return out;
}

} // namespace trace_detail

} // namespace flatgeom
