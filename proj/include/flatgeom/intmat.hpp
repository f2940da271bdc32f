// Dense integer matrices over GMP integers and Smith normal form with
// unimodular transforms. Everything downstream of homology stays exact.
#pragma once

#include <gmpxx.h>
#include <optional>
#include <vector>

namespace flatgeom {

using Int = mpz_class;
using IntVec = std::vector<Int>;

class IntMat {
  public:
    IntMat() : rows_(0), cols_(0) {}
    IntMat(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols) {}

    static IntMat identity(int n);
    static IntMat from_columns(const std::vector<IntVec>& cols);
    static IntMat from_rows(const std::vector<IntVec>& rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Int& at(int i, int j) { return a_[size_t(i) * cols_ + j]; }
    const Int& at(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

    IntMat mul(const IntMat& o) const;
    IntMat transpose() const;
    IntMat hstack(const IntMat& o) const;
    IntVec apply(const IntVec& v) const;          // this * v
    IntVec apply_transpose(const IntVec& v) const; // this^T * v
    IntMat col_range(int j0, int j1) const;
    IntVec column(int j) const;
    IntVec row(int i) const;
    bool is_zero() const;
    bool operator==(const IntMat& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

  private:
    int rows_, cols_;
    std::vector<Int> a_;
};

// U * A * V = D diagonal with d1 | d2 | ... ; U, V unimodular.
struct Smith {
    IntMat U, Uinv, V, Vinv, D;
    int rank = 0;
    std::vector<Int> divisors; // the nonzero diagonal entries
};

Smith smith_normal_form(const IntMat& A);

int int_rank(const IntMat& A);

// Basis of the integer kernel {x : A x = 0}, as matrix columns.
IntMat int_kernel(const IntMat& A);

// One integer solution of A x = b, if any.
std::optional<IntVec> int_solve(const IntMat& A, const IntVec& b);

// One integer solution X of A X = B (columnwise), if all columns solve.
std::optional<IntMat> int_solve_mat(const IntMat& A, const IntMat& B);

} // namespace flatgeom
