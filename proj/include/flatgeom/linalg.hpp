// Small dense linear algebra over complex numbers with entries in R
// (double or exact rationals). Pivoting is by magnitude in float mode and
// by first nonzero entry in exact mode.
#pragma once

#include "flatgeom/geometry.hpp"

#include <vector>

namespace flatgeom {

template <class R> using CVec = std::vector<Vec2<R>>;
template <class R> using CMat = std::vector<CVec<R>>; // rows

template <class R> Vec2<R> cdiv(const Vec2<R>& a, const Vec2<R>& b) {
    R n2 = norm2(b);
    Vec2<R> num = a.cmul(b.conj());
    return {R(num.x / n2), R(num.y / n2)};
}

template <class R> double cmag(const Vec2<R>& a) { return std::sqrt(to_double(norm2(a))); }

template <class R> bool cis_zero(const Vec2<R>& a, double tol) {
    if constexpr (ScalarTraits<R>::exact)
        return a.x == 0 && a.y == 0;
    else
        return cmag(a) <= tol;
}

// Reduced row echelon form in place; returns the pivot columns.
template <class R> std::vector<int> rref(CMat<R>& m, double tol) {
    std::vector<int> pivots;
    if (m.empty()) return pivots;
    const int rows = int(m.size()), cols = int(m[0].size());
    int r = 0;
    for (int col = 0; col < cols && r < rows; ++col) {
        int best = -1;
        double best_mag = tol;
        for (int i = r; i < rows; ++i) {
            if (cis_zero(m[i][col], tol)) continue;
            if constexpr (ScalarTraits<R>::exact) {
                best = i;
                break;
            } else {
                double mag = cmag(m[i][col]);
                if (mag > best_mag) {
                    best_mag = mag;
                    best = i;
                }
            }
        }
        if (best < 0) continue;
        std::swap(m[r], m[best]);
        Vec2<R> piv = m[r][col];
        for (int j = 0; j < cols; ++j) m[r][j] = cdiv(m[r][j], piv);
        m[r][col] = Vec2<R>{R(1), R(0)}; // kill residual rounding
        for (int i = 0; i < rows; ++i) {
            if (i == r || cis_zero(m[i][col], 0)) continue;
            Vec2<R> f = m[i][col];
            for (int j = 0; j < cols; ++j) m[i][j] -= f.cmul(m[r][j]);
            m[i][col] = Vec2<R>{R(0), R(0)};
        }
        pivots.push_back(col);
        ++r;
    }
    return pivots;
}

template <class R> int rank_of(CMat<R> m, double tol) { return int(rref(m, tol).size()); }

// Columns spanning {x : M x = 0}, returned as rows of the result.
template <class R> CMat<R> nullspace(CMat<R> m, double tol) {
    const int cols = m.empty() ? 0 : int(m[0].size());
    auto pivots = rref(m, tol);
    std::vector<char> is_pivot(cols, 0);
    for (int p : pivots) is_pivot[p] = 1;
    CMat<R> out;
    for (int f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        CVec<R> v(cols, Vec2<R>{R(0), R(0)});
        v[f] = Vec2<R>{R(1), R(0)};
        for (size_t i = 0; i < pivots.size(); ++i)
            v[pivots[i]] = -m[i][f];
        out.push_back(std::move(v));
    }
    return out;
}

template <class R> CMat<R> cmat_mul(const CMat<R>& a, const CMat<R>& b) {
    const int n = int(a.size()), k = a.empty() ? 0 : int(a[0].size());
    const int mcols = b.empty() ? 0 : int(b[0].size());
    CMat<R> out(n, CVec<R>(mcols, Vec2<R>{R(0), R(0)}));
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < k; ++l) {
            if (cis_zero(a[i][l], 0)) continue;
            for (int j = 0; j < mcols; ++j) out[i][j] += a[i][l].cmul(b[l][j]);
        }
    return out;
}

// plain (non-conjugated) pairing of a covector with a vector
template <class R> Vec2<R> cpair(const CVec<R>& w, const CVec<R>& v) {
    Vec2<R> acc{R(0), R(0)};
    for (size_t i = 0; i < w.size(); ++i) acc += w[i].cmul(v[i]);
    return acc;
}

template <class R> double cvec_mag(const CVec<R>& v) {
    double s = 0;
    for (const auto& z : v) s += to_double(norm2(z));
    return std::sqrt(s);
}

template <class R> double cmat_scale(const CMat<R>& m) {
    double s = 0;
    for (const auto& row : m)
        for (const auto& z : row) s = std::max(s, cmag(z));
    return s > 0 ? s : 1.0;
}

} // namespace flatgeom
