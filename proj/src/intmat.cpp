#include "flatgeom/intmat.hpp"

#include "flatgeom/errors.hpp"

#include <cstdlib>

namespace flatgeom {

IntMat IntMat::identity(int n) {
    IntMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMat IntMat::from_columns(const std::vector<IntVec>& cols) {
    if (cols.empty()) return IntMat(0, 0);
    IntMat m(int(cols[0].size()), int(cols.size()));
    for (int j = 0; j < m.cols(); ++j)
        for (int i = 0; i < m.rows(); ++i) m.at(i, j) = cols[j][i];
    return m;
}

IntMat IntMat::from_rows(const std::vector<IntVec>& rows) {
    if (rows.empty()) return IntMat(0, 0);
    IntMat m(int(rows.size()), int(rows[0].size()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) m.at(i, j) = rows[i][j];
    return m;
}

IntMat IntMat::mul(const IntMat& o) const {
    IntMat r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const Int& aik = at(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < o.cols_; ++j) r.at(i, j) += aik * o.at(k, j);
        }
    return r;
}

IntMat IntMat::transpose() const {
    IntMat r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

IntMat IntMat::hstack(const IntMat& o) const {
    IntMat r(rows_, cols_ + o.cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
        for (int j = 0; j < o.cols_; ++j) r.at(i, cols_ + j) = o.at(i, j);
    }
    return r;
}

IntVec IntMat::apply(const IntVec& v) const {
    IntVec r(rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (at(i, j) != 0) r[i] += at(i, j) * v[j];
    return r;
}

IntVec IntMat::apply_transpose(const IntVec& v) const {
    IntVec r(cols_);
    for (int i = 0; i < rows_; ++i)
        if (v[i] != 0)
            for (int j = 0; j < cols_; ++j)
                if (at(i, j) != 0) r[j] += at(i, j) * v[i];
    return r;
}

IntMat IntMat::col_range(int j0, int j1) const {
    IntMat r(rows_, j1 - j0);
    for (int i = 0; i < rows_; ++i)
        for (int j = j0; j < j1; ++j) r.at(i, j - j0) = at(i, j);
    return r;
}

IntVec IntMat::column(int j) const {
    IntVec r(rows_);
    for (int i = 0; i < rows_; ++i) r[i] = at(i, j);
    return r;
}

IntVec IntMat::row(int i) const {
    IntVec r(cols_);
    for (int j = 0; j < cols_; ++j) r[j] = at(i, j);
    return r;
}

bool IntMat::is_zero() const {
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (at(i, j) != 0) return false;
    return true;
}

namespace {

struct Worker {
    IntMat A, U, Uinv, V, Vinv;

    explicit Worker(const IntMat& m)
        : A(m), U(IntMat::identity(m.rows())), Uinv(IntMat::identity(m.rows())),
          V(IntMat::identity(m.cols())), Vinv(IntMat::identity(m.cols())) {}

    void swap_rows(int i, int j) {
        if (i == j) return;
        for (int k = 0; k < A.cols(); ++k) std::swap(A.at(i, k), A.at(j, k));
        for (int k = 0; k < U.cols(); ++k) std::swap(U.at(i, k), U.at(j, k));
        for (int k = 0; k < Uinv.rows(); ++k) std::swap(Uinv.at(k, i), Uinv.at(k, j));
    }
    void swap_cols(int i, int j) {
        if (i == j) return;
        for (int k = 0; k < A.rows(); ++k) std::swap(A.at(k, i), A.at(k, j));
        for (int k = 0; k < V.rows(); ++k) std::swap(V.at(k, i), V.at(k, j));
        for (int k = 0; k < Vinv.cols(); ++k) std::swap(Vinv.at(i, k), Vinv.at(j, k));
    }
    // row_j += c * row_i
    void add_row(int i, int j, const Int& c) {
        for (int k = 0; k < A.cols(); ++k) A.at(j, k) += c * A.at(i, k);
        for (int k = 0; k < U.cols(); ++k) U.at(j, k) += c * U.at(i, k);
        for (int k = 0; k < Uinv.rows(); ++k) Uinv.at(k, i) -= c * Uinv.at(k, j);
    }
    // col_j += c * col_i
    void add_col(int i, int j, const Int& c) {
        for (int k = 0; k < A.rows(); ++k) A.at(k, j) += c * A.at(k, i);
        for (int k = 0; k < V.rows(); ++k) V.at(k, j) += c * V.at(k, i);
        for (int k = 0; k < Vinv.cols(); ++k) Vinv.at(i, k) -= c * Vinv.at(j, k);
    }
    void negate_row(int i) {
        for (int k = 0; k < A.cols(); ++k) A.at(i, k) = -A.at(i, k);
        for (int k = 0; k < U.cols(); ++k) U.at(i, k) = -U.at(i, k);
        for (int k = 0; k < Uinv.rows(); ++k) Uinv.at(k, i) = -Uinv.at(k, i);
    }
};

} // namespace

Smith smith_normal_form(const IntMat& A0) {
    Worker w(A0);
    const int m = A0.rows(), n = A0.cols();
    int t = 0;
    while (t < m && t < n) {
        // smallest nonzero entry of the trailing block becomes the pivot
        int pi = -1, pj = -1;
        for (int i = t; i < m; ++i)
            for (int j = t; j < n; ++j) {
                const Int& x = w.A.at(i, j);
                if (x == 0) continue;
                if (pi < 0 || cmp(abs(x), abs(w.A.at(pi, pj))) < 0) { pi = i; pj = j; }
            }
        if (pi < 0) break;
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        bool clean = true;
        for (int i = t + 1; i < m; ++i) {
            if (w.A.at(i, t) == 0) continue;
            Int q = w.A.at(i, t) / w.A.at(t, t);
            if (q != 0) w.add_row(t, i, -q);
            if (w.A.at(i, t) != 0) clean = false;
        }
        for (int j = t + 1; j < n; ++j) {
            if (w.A.at(t, j) == 0) continue;
            Int q = w.A.at(t, j) / w.A.at(t, t);
            if (q != 0) w.add_col(t, j, -q);
            if (w.A.at(t, j) != 0) clean = false;
        }
        if (!clean) continue; // pivot shrank; re-pick in the same block
        // divisor chain: the pivot must divide the whole trailing block
        bool divides = true;
        for (int i = t + 1; i < m && divides; ++i)
            for (int j = t + 1; j < n; ++j)
                if (w.A.at(i, j) % w.A.at(t, t) != 0) {
                    w.add_row(i, t, 1);
                    divides = false;
                    break;
                }
        if (!divides) continue;
        if (w.A.at(t, t) < 0) w.negate_row(t);
        ++t;
    }
    Smith s;
    s.U = w.U;
    s.Uinv = w.Uinv;
    s.V = w.V;
    s.Vinv = w.Vinv;
    s.D = w.A;
    s.rank = t;
    for (int i = 0; i < t; ++i) s.divisors.push_back(w.A.at(i, i));
    return s;
}

int int_rank(const IntMat& A) { return smith_normal_form(A).rank; }

IntMat int_kernel(const IntMat& A) {
    Smith s = smith_normal_form(A);
    // A x = 0  <=>  D y = 0 with x = V y  <=>  y_i = 0 for i < rank
    return s.V.col_range(s.rank, A.cols());
}

std::optional<IntVec> int_solve(const IntMat& A, const IntVec& b) {
    Smith s = smith_normal_form(A);
    IntVec ub(A.rows());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.rows(); ++j)
            if (s.U.at(i, j) != 0) ub[i] += s.U.at(i, j) * b[j];
    IntVec y(A.cols());
    for (int i = 0; i < A.rows(); ++i) {
        if (i < s.rank) {
            if (ub[i] % s.D.at(i, i) != 0) return std::nullopt;
            if (i < A.cols()) y[i] = ub[i] / s.D.at(i, i);
        } else if (ub[i] != 0) {
            return std::nullopt;
        }
    }
    return s.V.apply(y);
}

std::optional<IntMat> int_solve_mat(const IntMat& A, const IntMat& B) {
    Smith s = smith_normal_form(A);
    IntMat UB = s.U.mul(B);
    IntMat Y(A.cols(), B.cols());
    for (int j = 0; j < B.cols(); ++j) {
        for (int i = 0; i < A.rows(); ++i) {
            if (i < s.rank) {
                if (UB.at(i, j) % s.D.at(i, i) != 0) return std::nullopt;
                if (i < A.cols()) Y.at(i, j) = UB.at(i, j) / s.D.at(i, i);
            } else if (UB.at(i, j) != 0) {
                return std::nullopt;
            }
        }
    }
    return s.V.mul(Y);
}

} // namespace flatgeom
