// Planar vectors over a generic scalar, 2x2 matrices, polygon predicates.
#pragma once

#include "flatgeom/errors.hpp"
#include "flatgeom/numeric.hpp"

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

namespace flatgeom {

template <class R> struct Vec2 {
    R x{}, y{};

    Vec2() = default;
    Vec2(R x_, R y_) : x(std::move(x_)), y(std::move(y_)) {}

    Vec2 operator+(const Vec2& o) const { return {R(x + o.x), R(y + o.y)}; }
    Vec2 operator-(const Vec2& o) const { return {R(x - o.x), R(y - o.y)}; }
    Vec2 operator-() const { return {R(-x), R(-y)}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
    Vec2 operator*(const R& s) const { return {R(x * s), R(y * s)}; }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }
    bool operator!=(const Vec2& o) const { return !(*this == o); }

    // complex multiplication, reading the vector as x + iy
    Vec2 cmul(const Vec2& o) const {
        return {R(x * o.x - y * o.y), R(x * o.y + y * o.x)};
    }
    Vec2 conj() const { return {x, R(-y)}; }

    std::complex<double> to_complex() const {
        return {to_double(x), to_double(y)};
    }
};

template <class R> inline R cross(const Vec2<R>& a, const Vec2<R>& b) {
    return R(a.x * b.y - a.y * b.x);
}
template <class R> inline R dot(const Vec2<R>& a, const Vec2<R>& b) {
    return R(a.x * b.x + a.y * b.y);
}
template <class R> inline R norm2(const Vec2<R>& a) { return dot(a, a); }

inline int sgn_of(double x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }
inline int sgn_of(const Rat& x) { return sgn(x); }

template <class R> struct Mat2 {
    R a{}, b{}, c{}, d{}; // row-major [[a,b],[c,d]]

    Vec2<R> apply(const Vec2<R>& v) const {
        return {R(a * v.x + b * v.y), R(c * v.x + d * v.y)};
    }
    R det() const { return R(a * d - b * c); }
    Mat2 mul(const Mat2& o) const {
        return {R(a * o.a + b * o.c), R(a * o.b + b * o.d),
                R(c * o.a + d * o.c), R(c * o.b + d * o.d)};
    }
    static Mat2 identity() { return {R(1), R(0), R(0), R(1)}; }
    static Mat2 shear(const R& t) { return {R(1), t, R(0), R(1)}; }
    static Mat2 vstretch(const R& s) { return {R(1), R(0), R(0), s}; }
};

// Vertex positions of a polygon given by its ccw edge vectors, basepoint 0.
// vs[i] is the start of edge i.
template <class R>
std::vector<Vec2<R>> polygon_vertices(const std::vector<Vec2<R>>& edges) {
    std::vector<Vec2<R>> vs;
    vs.reserve(edges.size());
    Vec2<R> p{R(0), R(0)};
    for (const auto& e : edges) {
        vs.push_back(p);
        p += e;
    }
    return vs;
}

// Twice the signed area (shoelace).
template <class R> R polygon_area2(const std::vector<Vec2<R>>& edges) {
    R acc(0);
    Vec2<R> p{R(0), R(0)};
    for (const auto& e : edges) {
        acc += cross(p, Vec2<R>(p + e));
        p += e;
    }
    return acc;
}

// Interior angle at the corner between incoming edge `prev` and outgoing
// edge `next`, in (0, 2pi]. Always evaluated in doubles; the exact kernel
// never depends on angle values.
template <class R> double corner_angle(const Vec2<R>& prev, const Vec2<R>& next) {
    std::complex<double> in = -prev.to_complex();
    std::complex<double> out = next.to_complex();
    double ang = std::arg(in) - std::arg(out);
    const double two_pi = 6.283185307179586476925286766559;
    while (ang <= 1e-12) ang += two_pi;
    while (ang > two_pi + 1e-12) ang -= two_pi;
    return ang;
}

namespace detail {

template <class R>
int orient(const Vec2<R>& a, const Vec2<R>& b, const Vec2<R>& c) {
    return sgn_of(cross(Vec2<R>(b - a), Vec2<R>(c - a)));
}

// c collinear with a-b assumed; is c within the closed box of a,b?
template <class R>
bool within_box(const Vec2<R>& a, const Vec2<R>& b, const Vec2<R>& c) {
    return sgn_of(R(c.x - a.x)) * sgn_of(R(c.x - b.x)) <= 0 &&
           sgn_of(R(c.y - a.y)) * sgn_of(R(c.y - b.y)) <= 0;
}

// closed-segment intersection test
template <class R>
bool segments_intersect(const Vec2<R>& p1, const Vec2<R>& p2,
                        const Vec2<R>& q1, const Vec2<R>& q2) {
    int o1 = orient(p1, p2, q1), o2 = orient(p1, p2, q2);
    int o3 = orient(q1, q2, p1), o4 = orient(q1, q2, p2);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && within_box(p1, p2, q1)) return true;
    if (o2 == 0 && within_box(p1, p2, q2)) return true;
    if (o3 == 0 && within_box(q1, q2, p1)) return true;
    if (o4 == 0 && within_box(q1, q2, p2)) return true;
    return false;
}

} // namespace detail

// Simple polygon test: non-adjacent edges must not meet at all, and no
// corner may have zero angle (an edge doubling straight back). Straight
// corners (angle pi) are allowed; they host marked points.
template <class R> bool polygon_is_simple(const std::vector<Vec2<R>>& edges) {
    const size_t n = edges.size();
    if (n < 2) return false;
    for (const auto& e : edges)
        if (e.x == R(0) && e.y == R(0)) return false;
    for (size_t i = 0; i < n; ++i) {
        const auto& e = edges[i];
        const auto& f = edges[(i + 1) % n];
        if (sgn_of(cross(e, f)) == 0 && sgn_of(dot(e, f)) < 0) return false;
    }
    auto vs = polygon_vertices(edges);
    for (size_t i = 0; i < n; ++i) {
        Vec2<R> a1 = vs[i], a2 = vs[(i + 1) % n];
        for (size_t j = i + 1; j < n; ++j) {
            bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) continue;
            Vec2<R> b1 = vs[j], b2 = vs[(j + 1) % n];
            if (detail::segments_intersect(a1, a2, b1, b2)) return false;
        }
    }
    return true;
}

} // namespace flatgeom
