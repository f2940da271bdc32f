// Built-in example surfaces used by the CLI, the tests and the docs.
#pragma once

#include "flatgeom/surface.hpp"

#include <cmath>

namespace flatgeom {

// Rectangular torus [0,w] x [0,h], opposite sides glued.
template <class R> PolygonSurface<R> rect_torus(const R& w, const R& h) {
    PolygonSurface<R> s;
    s.polygons = {{{w, R(0)}, {R(0), h}, {R(-w), R(0)}, {R(0), R(-h)}}};
    s.gluings = {{EdgeRef{0, 0}, EdgeRef{0, 2}}, {EdgeRef{0, 1}, EdgeRef{0, 3}}};
    return s;
}

template <class R> PolygonSurface<R> square_torus() { return rect_torus<R>(R(1), R(1)); }

// L-shaped surface in H(2): a (w1+w2) x h1 block with a w1 x h2 block on
// top of its left part, opposite sides identified.
template <class R>
PolygonSurface<R> l_shape(const R& w1, const R& w2, const R& h1, const R& h2) {
    PolygonSurface<R> s;
    // ccw from the origin: bottom (two edges), right, notch, top, left (two edges)
    s.polygons = {{
        {w1, R(0)},      // 0 bottom left part
        {w2, R(0)},      // 1 bottom right part
        {R(0), h1},      // 2 right side
        {R(-w2), R(0)},  // 3 notch horizontal
        {R(0), h2},      // 4 notch vertical
        {R(-w1), R(0)},  // 5 top
        {R(0), R(-h2)},  // 6 left upper
        {R(0), R(-h1)},  // 7 left lower
    }};
    s.gluings = {
        {EdgeRef{0, 0}, EdgeRef{0, 5}}, // bottom-left <-> top
        {EdgeRef{0, 1}, EdgeRef{0, 3}}, // bottom-right <-> notch horizontal
        {EdgeRef{0, 2}, EdgeRef{0, 7}}, // right <-> left lower
        {EdgeRef{0, 4}, EdgeRef{0, 6}}, // notch vertical <-> left upper
    };
    return s;
}

template <class R> PolygonSurface<R> l_shape_2x2() {
    return l_shape<R>(R(1), R(1), R(1), R(1));
}

// Regular 2n-gon with opposite sides identified (float only: irrational
// coordinates). n = 4 gives the octagon surface in H(2).
inline PolygonSurface<double> regular_2ngon(int n) {
    PolygonSurface<double> s;
    const int sides = 2 * n;
    std::vector<Vec2<double>> edges(sides);
    const double pi = 3.14159265358979323846264338328;
    for (int k = 0; k < sides; ++k) {
        double ang = pi * (2 * k + n - 2) / double(sides) + pi / 2.0;
        edges[k] = {std::cos(ang), std::sin(ang)};
    }
    s.polygons = {edges};
    for (int k = 0; k < n; ++k) s.gluings.push_back({EdgeRef{0, k}, EdgeRef{0, k + n}});
    return s;
}

inline PolygonSurface<double> octagon_surface() { return regular_2ngon(4); }
inline PolygonSurface<double> hexagon_torus() { return regular_2ngon(3); }

// Two stacked rectangles A (wa x ha, below) and B (wb x hb, above) with a
// length-`slit` gluing between them and the remainders re-glued straight;
// each rectangle keeps its own side identification. For wa=wb=ha=hb=1,
// slit=1/2 this is the two-square slit torus in H(1,1): two horizontal
// cylinders of equal circumference.
//
// Requires 0 < slit < min(wa, wb).
template <class R>
PolygonSurface<R> slit_stack(const R& wa, const R& ha, const R& wb, const R& hb,
                             const R& slit) {
    PolygonSurface<R> s;
    // A: bottom [0,slit],[slit,wa]; right; top [wa,slit],[slit,0]; left
    s.polygons.push_back({{slit, R(0)},
                          {R(wa - slit), R(0)},
                          {R(0), ha},
                          {R(slit - wa), R(0)},
                          {R(-slit), R(0)},
                          {R(0), R(-ha)}});
    s.polygons.push_back({{slit, R(0)},
                          {R(wb - slit), R(0)},
                          {R(0), hb},
                          {R(slit - wb), R(0)},
                          {R(-slit), R(0)},
                          {R(0), R(-hb)}});
    s.gluings = {
        {EdgeRef{0, 4}, EdgeRef{1, 0}}, // A.top[0,slit]  <-> B.bot[0,slit]
        {EdgeRef{1, 4}, EdgeRef{0, 0}}, // B.top[0,slit]  <-> A.bot[0,slit]
        {EdgeRef{0, 3}, EdgeRef{0, 1}}, // A.top rest     <-> A.bot rest
        {EdgeRef{1, 3}, EdgeRef{1, 1}}, // B.top rest     <-> B.bot rest
        {EdgeRef{0, 2}, EdgeRef{0, 5}}, // A sides
        {EdgeRef{1, 2}, EdgeRef{1, 5}}, // B sides
    };
    return s;
}

template <class R> PolygonSurface<R> two_square_slit() {
    return slit_stack<R>(R(1), R(1), R(1), R(1), R(R(1) / R(2)));
}

// Two-cylinder surface in H(1,1) whose horizontal cylinders have
// circumferences (2,1) and heights (2,1): slit_stack(2,2,1,1,1/2).
template <class R> PolygonSurface<R> ratio_two_surface() {
    return slit_stack<R>(R(2), R(2), R(1), R(1), R(R(1) / R(2)));
}

// Two cylinders of circumference 2 glued along full interfaces, the lower
// interface split 1+1 and the upper a single saddle connection; H(2).
// The two cores are equal in H_1(X, Sigma); their duals coincide.
template <class R> PolygonSurface<R> sandwich_surface(const R& h1, const R& h2) {
    PolygonSurface<R> s;
    s.polygons.push_back({{R(1), R(0)},   // e1
                          {R(1), R(0)},   // e2
                          {R(0), h1},     // side
                          {R(-2), R(0)},  // E3
                          {R(0), R(-h1)}});
    s.polygons.push_back({{R(2), R(0)},   // E3'
                          {R(0), h2},     // side
                          {R(-1), R(0)},  // e2'
                          {R(-1), R(0)},  // e1'
                          {R(0), R(-h2)}});
    s.gluings = {
        {EdgeRef{0, 0}, EdgeRef{1, 3}}, // e1 <-> e1'
        {EdgeRef{0, 1}, EdgeRef{1, 2}}, // e2 <-> e2'
        {EdgeRef{0, 3}, EdgeRef{1, 0}}, // E3 <-> E3'
        {EdgeRef{0, 2}, EdgeRef{0, 4}},
        {EdgeRef{1, 1}, EdgeRef{1, 4}},
    };
    return s;
}

// Torus of width c + d + 1 carrying two vertical cylinders of width `x`
// and `y` inserted into vertical slits of height `eps` in the interior
// walls. Edge y - edge x equals d - c by construction when y = x + d - c.
// Used by the degeneration module.
//
// Polygons: R1 (bottom edge c), R2 (bottom edge d), R3 (width 1), Q1, Q2
// (the inserted cylinders, glued top-to-bottom). Walls R1|R2 and R2|R3 are
// split at heights t and t+eps; the middle piece routes through Q1 / Q2.
template <class R> struct CautionarySurfaceSpec {
    Vec2<R> c, d, x, y; // horizontal periods (may have an imaginary part)
    R eps, t;
};

template <class R>
PolygonSurface<R> cautionary_surface(const CautionarySurfaceSpec<R>& sp) {
    PolygonSurface<R> s;
    const R one(1);
    auto wall_poly = [&](const Vec2<R>& w) {
        // bottom, right low/mid/high, top, left high/mid/low
        return std::vector<Vec2<R>>{w,
                                    {R(0), sp.t},
                                    {R(0), sp.eps},
                                    {R(0), R(one - sp.t - sp.eps)},
                                    -w,
                                    {R(0), R(-(one - sp.t - sp.eps))},
                                    {R(0), R(-sp.eps)},
                                    {R(0), R(-sp.t)}};
    };
    s.polygons.push_back(wall_poly(sp.c));               // 0: R1
    s.polygons.push_back(wall_poly(sp.d));               // 1: R2
    s.polygons.push_back(wall_poly(Vec2<R>{one, R(0)})); // 2: R3
    // Q1 = [0,x] x [0,eps], top-bottom glued; sides go into wall R1|R2
    s.polygons.push_back({sp.x, {R(0), sp.eps}, -sp.x, {R(0), R(-sp.eps)}});
    s.polygons.push_back({sp.y, {R(0), sp.eps}, -sp.y, {R(0), R(-sp.eps)}});

    auto wall = [&](int left, int right, int q) {
        // left polygon's right side pieces: edges 1,2,3 (low, mid, high)
        // right polygon's left side pieces: edges 5,6,7 (high, mid, low)
        s.gluings.push_back({EdgeRef{left, 1}, EdgeRef{right, 7}}); // low
        s.gluings.push_back({EdgeRef{left, 3}, EdgeRef{right, 5}}); // high
        if (q < 0) {
            s.gluings.push_back({EdgeRef{left, 2}, EdgeRef{right, 6}});
        } else {
            s.gluings.push_back({EdgeRef{left, 2}, EdgeRef{q, 3}});  // wall mid <-> Q left
            s.gluings.push_back({EdgeRef{q, 1}, EdgeRef{right, 6}}); // Q right <-> wall mid
        }
    };
    wall(0, 1, 3);  // R1 | Q1 | R2
    wall(1, 2, 4);  // R2 | Q2 | R3
    wall(2, 0, -1); // R3 | R1 (wraps around)
    for (int p = 0; p < 3; ++p) s.gluings.push_back({EdgeRef{p, 0}, EdgeRef{p, 4}});
    s.gluings.push_back({EdgeRef{3, 0}, EdgeRef{3, 2}}); // Q1 top-bottom
    s.gluings.push_back({EdgeRef{4, 0}, EdgeRef{4, 2}}); // Q2 top-bottom
    return s;
}

} // namespace flatgeom
