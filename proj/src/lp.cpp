#include "flatgeom/lp.hpp"

#include "flatgeom/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace flatgeom {

namespace {

constexpr double kEps = 1e-11;

// Tableau simplex over the dictionary
//   basic = b - N x_nonbasic, objective row appended last.
// Columns: structural + slack (+ artificial in phase 1).
struct Tableau {
    int m, n; // constraints, total columns (without rhs)
    int eligible; // columns allowed to enter the basis
    std::vector<std::vector<double>> t; // (m+1) x (n+1); last row objective, last col rhs
    std::vector<int> basis;             // basic column per row

    double& at(int i, int j) { return t[i][j]; }

    void pivot(int row, int col) {
        double piv = t[row][col];
        for (int j = 0; j <= n; ++j) t[row][j] /= piv;
        for (int i = 0; i <= m; ++i) {
            if (i == row) continue;
            double f = t[i][col];
            if (f == 0) continue;
            for (int j = 0; j <= n; ++j) t[i][j] -= f * t[row][j];
        }
        basis[row] = col;
    }

    // Bland: entering = lowest-index column with negative reduced cost;
    // leaving = lowest-index basic variable among the min-ratio rows.
    // Returns false if optimal, throws if unbounded.
    bool step() {
        int col = -1;
        for (int j = 0; j < eligible; ++j)
            if (t[m][j] < -kEps) {
                col = j;
                break;
            }
        if (col < 0) return false;
        int row = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) {
            if (t[i][col] <= kEps) continue;
            double ratio = t[i][n] / t[i][col];
            if (ratio < best - kEps || (ratio < best + kEps && (row < 0 || basis[i] < basis[row]))) {
                best = ratio;
                row = i;
            }
        }
        if (row < 0) throw Error("simplex: objective unbounded below");
        pivot(row, col);
        return true;
    }

    void run() {
        int guard = 0;
        while (step())
            if (++guard > 100000) throw Error("simplex: iteration bound hit");
    }
};

} // namespace

SimplexResult simplex_solve(const std::vector<std::vector<double>>& A,
                            const std::vector<double>& b, const std::vector<double>& c) {
    const int m = int(A.size());
    const int n = int(c.size());

    // columns: n structural, m slack, up to m artificial
    std::vector<int> art_of_row(m, -1);
    int n_art = 0;
    for (int i = 0; i < m; ++i)
        if (b[i] < 0) art_of_row[i] = n_art++;
    const int total = n + m + n_art;

    Tableau tab;
    tab.m = m;
    tab.n = total;
    tab.eligible = total;
    tab.t.assign(m + 1, std::vector<double>(total + 1, 0.0));
    tab.basis.assign(m, -1);

    for (int i = 0; i < m; ++i) {
        double sign = b[i] < 0 ? -1.0 : 1.0;
        for (int j = 0; j < n; ++j) tab.at(i, j) = sign * A[i][j];
        tab.at(i, n + i) = sign; // slack
        tab.at(i, total) = sign * b[i];
        if (art_of_row[i] >= 0) {
            tab.at(i, n + m + art_of_row[i]) = 1.0;
            tab.basis[i] = n + m + art_of_row[i];
        } else {
            tab.basis[i] = n + i;
        }
    }

    SimplexResult res;
    if (n_art > 0) {
        // phase 1: minimize the sum of artificials
        for (int j = n + m; j < total; ++j) tab.at(m, j) = 1.0;
        for (int i = 0; i < m; ++i)
            if (art_of_row[i] >= 0)
                for (int j = 0; j <= total; ++j) tab.at(m, j) -= tab.at(i, j);
        tab.run();
        if (tab.at(m, total) < -1e-7) return res; // infeasible
        // pivot remaining artificials out of the basis if possible
        for (int i = 0; i < m; ++i) {
            if (tab.basis[i] < n + m) continue;
            int col = -1;
            for (int j = 0; j < n + m; ++j)
                if (std::fabs(tab.at(i, j)) > 1e-8) {
                    col = j;
                    break;
                }
            if (col >= 0) tab.pivot(i, col);
        }
    }

    // phase 2: artificials may no longer enter the basis
    tab.eligible = n + m;
    for (int j = 0; j <= total; ++j) tab.at(m, j) = 0.0;
    for (int j = 0; j < n; ++j) tab.at(m, j) = c[j];
    for (int i = 0; i < m; ++i) {
        int bj = tab.basis[i];
        if (bj < n && c[bj] != 0)
            for (int j = 0; j <= total; ++j) tab.at(m, j) -= c[bj] * tab.t[i][j];
    }
    try {
        tab.run();
    } catch (const Error&) {
        res.feasible = true;
        res.bounded = false;
        return res;
    }

    res.feasible = true;
    res.x.assign(n, 0.0);
    for (int i = 0; i < m; ++i)
        if (tab.basis[i] < n) res.x[tab.basis[i]] = tab.at(i, total);
    res.value = 0;
    for (int j = 0; j < n; ++j) res.value += c[j] * res.x[j];
    return res;
}

namespace {

// basis of {alpha : span^T alpha has zeros at the fixed coordinates},
// returned as vectors of R^n (combinations of the span rows)
std::vector<std::vector<double>> restricted_directions(
    const std::vector<std::vector<double>>& span, const std::vector<int>& fixed) {
    const int d = int(span.size());
    if (d == 0) return {};
    const int n = int(span[0].size());
    // Gaussian elimination on the (|fixed| x d) matrix M[f][k] = span[k][fixed[f]]
    std::vector<std::vector<double>> M;
    for (int f : fixed) {
        std::vector<double> row(d);
        for (int k = 0; k < d; ++k) row[k] = span[k][f];
        M.push_back(row);
    }
    // kernel of M
    const int rows = int(M.size());
    std::vector<int> pivot_col;
    int r = 0;
    for (int col = 0; col < d && r < rows; ++col) {
        int best = -1;
        double mag = 1e-10;
        for (int i = r; i < rows; ++i)
            if (std::fabs(M[i][col]) > mag) {
                mag = std::fabs(M[i][col]);
                best = i;
            }
        if (best < 0) continue;
        std::swap(M[r], M[best]);
        double piv = M[r][col];
        for (int j = 0; j < d; ++j) M[r][j] /= piv;
        for (int i = 0; i < rows; ++i) {
            if (i == r) continue;
            double f2 = M[i][col];
            for (int j = 0; j < d; ++j) M[i][j] -= f2 * M[r][j];
        }
        pivot_col.push_back(col);
        ++r;
    }
    std::vector<char> is_piv(d, 0);
    for (int p : pivot_col) is_piv[p] = 1;
    std::vector<std::vector<double>> out;
    for (int fcol = 0; fcol < d; ++fcol) {
        if (is_piv[fcol]) continue;
        std::vector<double> alpha(d, 0.0);
        alpha[fcol] = 1.0;
        for (size_t i = 0; i < pivot_col.size(); ++i) alpha[pivot_col[i]] = -M[i][fcol];
        std::vector<double> w(n, 0.0);
        for (int k = 0; k < d; ++k)
            if (alpha[k] != 0)
                for (int j = 0; j < n; ++j) w[j] += alpha[k] * span[k][j];
        out.push_back(std::move(w));
    }
    return out;
}

} // namespace

BoundResult linalg_bound(const BoundInstance& inst) {
    const int n = int(inst.v.size());
    if (inst.H <= 1.0) throw ValidationError("linalg_bound: H must exceed 1");
    for (double x : inst.v)
        if (x < -1e-10) throw ValidationError("linalg_bound: v has a negative coordinate");

    BoundResult res;
    for (int i = 0; i < n; ++i)
        (inst.v[i] < inst.H ? res.fixed : res.moved).push_back(i);

    if (res.moved.empty()) {
        res.v_prime = inst.v;
        res.H_local = inst.H;
        return res;
    }

    auto W = restricted_directions(inst.subspace, res.fixed);
    const int d = int(W.size());
    const int nf = int(res.moved.size());

    // LP variables: u+ (d), u- (d), t; constraints per moved coordinate j:
    //   -(Wu)_j <= v_j - H   and   (Wu)_j - t <= -v_j
    auto build_rows = [&](std::vector<std::vector<double>>& A, std::vector<double>& b) {
        for (int jj = 0; jj < nf; ++jj) {
            int j = res.moved[jj];
            std::vector<double> lo(2 * d + 1, 0.0), hi(2 * d + 1, 0.0);
            for (int k = 0; k < d; ++k) {
                lo[k] = -W[k][j];
                lo[d + k] = W[k][j];
                hi[k] = W[k][j];
                hi[d + k] = -W[k][j];
            }
            hi[2 * d] = -1.0;
            A.push_back(lo);
            b.push_back(inst.v[j] - inst.H);
            A.push_back(hi);
            b.push_back(-inst.v[j]);
        }
    };

    std::vector<std::vector<double>> A;
    std::vector<double> b;
    build_rows(A, b);
    std::vector<double> c(2 * d + 1, 0.0);
    c[2 * d] = 1.0;
    SimplexResult lp = simplex_solve(A, b, c);
    if (!lp.feasible || !lp.bounded)
        throw Error("linalg_bound: defective LP (the input point is always feasible)");
    double t_star = lp.value;

    // lexicographic polish: among optimal vertices, minimize the moved
    // coordinates one by one in index order
    std::vector<double> u(d, 0.0);
    {
        std::vector<std::vector<double>> A2 = A;
        std::vector<double> b2 = b;
        std::vector<double> trow(2 * d + 1, 0.0);
        trow[2 * d] = 1.0;
        A2.push_back(trow);
        b2.push_back(t_star + 1e-9);
        for (int jj = 0; jj < nf; ++jj) {
            int j = res.moved[jj];
            std::vector<double> cj(2 * d + 1, 0.0);
            for (int k = 0; k < d; ++k) {
                cj[k] = W[k][j];
                cj[d + k] = -W[k][j];
            }
            SimplexResult sub = simplex_solve(A2, b2, cj);
            if (!sub.feasible) throw Error("linalg_bound: polish step infeasible");
            for (int k = 0; k < d; ++k) u[k] = sub.x[k] - sub.x[d + k];
            // pin this coordinate and continue with the next one
            std::vector<double> dn(cj.size());
            for (size_t q = 0; q < cj.size(); ++q) dn[q] = -cj[q];
            A2.push_back(cj);
            b2.push_back(sub.value + 1e-9);
            A2.push_back(dn);
            b2.push_back(-sub.value + 1e-9);
        }
    }

    res.v_prime = inst.v;
    double hloc = inst.H;
    for (int jj = 0; jj < nf; ++jj) {
        int j = res.moved[jj];
        double delta = 0;
        for (int k = 0; k < d; ++k) delta += u[k] * W[k][j];
        res.v_prime[j] = inst.v[j] + delta;
        hloc = std::max(hloc, res.v_prime[j]);
    }
    res.H_local = hloc;

    // enforce the stated output contract
    for (int j : res.moved) {
        if (res.v_prime[j] < inst.H - 1e-7)
            throw Error("linalg_bound: moved coordinate fell below H");
        if (res.v_prime[j] > t_star + 1e-6)
            throw Error("linalg_bound: moved coordinate exceeds the optimum");
    }
    return res;
}

double estimate_global_bound(const std::vector<std::vector<double>>& subspace, double H,
                             int samples, unsigned long seed) {
    if (subspace.empty()) return H;
    const int n = int(subspace[0].size());
    if (n > 6) throw ValidationError("estimate_global_bound: supported for n <= 6 only");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    double best = H;
    int accepted = 0;
    for (int trial = 0; trial < samples * 20 && accepted < samples; ++trial) {
        std::vector<double> v(n, 0.0);
        for (const auto& row : subspace) {
            double c = d(rng);
            for (int j = 0; j < n; ++j) v[j] += c * row[j];
        }
        bool nonneg = true;
        double vmax = 0;
        for (double x : v) {
            nonneg = nonneg && x >= 0;
            vmax = std::max(vmax, std::fabs(x));
        }
        if (!nonneg || vmax == 0) continue;
        // scale so the fixed coordinates sweep the cube [0, H]^fixed
        double scale = (0.5 + 1.5 * std::generate_canonical<double, 32>(rng)) * H / vmax;
        for (double& x : v) x *= scale;
        ++accepted;
        BoundInstance inst{subspace, v, H};
        best = std::max(best, linalg_bound(inst).H_local);
    }
    return best;
}

} // namespace flatgeom
