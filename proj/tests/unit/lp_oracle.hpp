// Brute-force oracle for the coordinate-bounding LP: enumerate the
// vertices of the feasible polytope in (u, t) space and take the best.
#pragma once

#include "flatgeom/lp.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace flatgeom::oracle {

// Solve the instance by vertex enumeration over active-constraint subsets.
// Valid for small dimensions only. Returns the optimal sup-norm bound, or
// infinity if enumeration found nothing (should not happen on valid input).
inline double bound_optimum_bruteforce(const BoundInstance& inst) {
    const int n = int(inst.v.size());
    std::vector<int> fixed, moved;
    for (int i = 0; i < n; ++i) (inst.v[i] < inst.H ? fixed : moved).push_back(i);
    if (moved.empty()) return inst.H;

    // directions of V vanishing on the fixed coordinates (Gaussian kernel)
    std::vector<std::vector<double>> M;
    const int d0 = int(inst.subspace.size());
    for (int f : fixed) {
        std::vector<double> row(d0);
        for (int k = 0; k < d0; ++k) row[k] = inst.subspace[k][f];
        M.push_back(row);
    }
    std::vector<int> piv;
    int r = 0;
    for (int col = 0; col < d0 && r < int(M.size()); ++col) {
        int best = -1;
        double mag = 1e-10;
        for (int i = r; i < int(M.size()); ++i)
            if (std::fabs(M[i][col]) > mag) {
                mag = std::fabs(M[i][col]);
                best = i;
            }
        if (best < 0) continue;
        std::swap(M[r], M[best]);
        for (int j = 0; j < d0; ++j)
            if (j != col) M[r][j] /= M[r][col];
        M[r][col] = 1;
        for (int i = 0; i < int(M.size()); ++i) {
            if (i == r) continue;
            double f2 = M[i][col];
            for (int j = 0; j < d0; ++j) M[i][j] -= f2 * M[r][j];
        }
        piv.push_back(col);
        ++r;
    }
    std::vector<char> is_piv(d0, 0);
    for (int p : piv) is_piv[p] = 1;
    std::vector<std::vector<double>> W;
    for (int fc = 0; fc < d0; ++fc) {
        if (is_piv[fc]) continue;
        std::vector<double> alpha(d0, 0.0);
        alpha[fc] = 1;
        for (size_t i = 0; i < piv.size(); ++i) alpha[piv[i]] = -M[i][fc];
        std::vector<double> w(n, 0.0);
        for (int k = 0; k < d0; ++k)
            for (int j = 0; j < n; ++j) w[j] += alpha[k] * inst.subspace[k][j];
        W.push_back(w);
    }
    const int d = int(W.size());

    // constraints on (u, t): for moved j:  v_j + (Wu)_j >= H,  v_j + (Wu)_j <= t
    struct Row {
        std::vector<double> a; // length d+1
        double b;              // a . (u,t) <= b
    };
    std::vector<Row> rows;
    for (int j : moved) {
        Row lo, hi;
        lo.a.assign(d + 1, 0.0);
        hi.a.assign(d + 1, 0.0);
        for (int k = 0; k < d; ++k) {
            lo.a[k] = -W[k][j];
            hi.a[k] = W[k][j];
        }
        hi.a[d] = -1;
        lo.b = inst.v[j] - inst.H;
        hi.b = -inst.v[j];
        rows.push_back(lo);
        rows.push_back(hi);
    }

    const int dim = d + 1;
    const int m = int(rows.size());
    double best = std::numeric_limits<double>::infinity();

    // enumerate dim-subsets of constraints, solve as equalities
    std::vector<int> idx(dim);
    auto solve_subset = [&](const std::vector<int>& sel) {
        std::vector<std::vector<double>> A(dim, std::vector<double>(dim + 1));
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j) A[i][j] = rows[sel[i]].a[j];
            A[i][dim] = rows[sel[i]].b;
        }
        for (int col = 0; col < dim; ++col) {
            int p = -1;
            double mag = 1e-9;
            for (int i = col; i < dim; ++i)
                if (std::fabs(A[i][col]) > mag) {
                    mag = std::fabs(A[i][col]);
                    p = i;
                }
            if (p < 0) return;
            std::swap(A[col], A[p]);
            for (int i = 0; i < dim; ++i) {
                if (i == col) continue;
                double f = A[i][col] / A[col][col];
                for (int j = col; j <= dim; ++j) A[i][j] -= f * A[col][j];
            }
        }
        std::vector<double> x(dim);
        for (int i = 0; i < dim; ++i) x[i] = A[i][dim] / A[i][i];
        // feasibility
        for (const Row& rw : rows) {
            double acc = 0;
            for (int j = 0; j < dim; ++j) acc += rw.a[j] * x[j];
            if (acc > rw.b + 1e-7) return;
        }
        best = std::min(best, x[d]);
    };

    std::vector<int> sel;
    std::function<void(int)> rec = [&](int from) {
        if (int(sel.size()) == dim) {
            solve_subset(sel);
            return;
        }
        for (int i = from; i < m; ++i) {
            sel.push_back(i);
            rec(i + 1);
            sel.pop_back();
        }
    };
    rec(0);

    // the input point itself is feasible; include it as a fallback vertex
    double vmax = 0;
    for (int j : moved) vmax = std::max(vmax, inst.v[j]);
    best = std::min(best, vmax);
    return best;
}

} // namespace flatgeom::oracle
