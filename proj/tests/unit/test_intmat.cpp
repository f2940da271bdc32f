#include <doctest.h>

#include "flatgeom/intmat.hpp"

#include <random>

using namespace flatgeom;

namespace {

IntMat random_mat(std::mt19937_64& rng, int m, int n, int lo = -4, int hi = 4) {
    std::uniform_int_distribution<int> d(lo, hi);
    IntMat a(m, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) a.at(i, j) = d(rng);
    return a;
}

} // namespace

TEST_CASE("smith normal form invariants on random matrices") {
    std::mt19937_64 rng(12345);
    for (int trial = 0; trial < 40; ++trial) {
        int m = 1 + int(rng() % 7), n = 1 + int(rng() % 7);
        IntMat a = random_mat(rng, m, n);
        Smith s = smith_normal_form(a);
        // U A V = D
        IntMat lhs = s.U.mul(a).mul(s.V);
        CHECK(lhs == s.D);
        // transforms are mutually inverse
        CHECK(s.U.mul(s.Uinv) == IntMat::identity(m));
        CHECK(s.V.mul(s.Vinv) == IntMat::identity(n));
        // D diagonal, nonnegative, divisor chain
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) CHECK(s.D.at(i, j) == 0);
        for (int i = 0; i + 1 < s.rank; ++i) {
            CHECK(s.D.at(i, i) > 0);
            CHECK(s.D.at(i + 1, i + 1) % s.D.at(i, i) == 0);
        }
    }
}

TEST_CASE("integer kernel and solve") {
    std::mt19937_64 rng(999);
    for (int trial = 0; trial < 30; ++trial) {
        int m = 1 + int(rng() % 5), n = 1 + int(rng() % 5);
        IntMat a = random_mat(rng, m, n);
        IntMat k = int_kernel(a);
        CHECK(a.mul(k).is_zero());
        CHECK(int_rank(a) + k.cols() == n);

        // a * x with random integer x must be solvable
        IntVec x(n);
        for (int j = 0; j < n; ++j) x[j] = int(rng() % 9) - 4;
        IntVec b = a.apply(x);
        auto sol = int_solve(a, b);
        REQUIRE(sol.has_value());
        CHECK(a.apply(*sol) == b);
    }
}

TEST_CASE("unsolvable system is reported") {
    IntMat a(2, 1);
    a.at(0, 0) = 2;
    a.at(1, 0) = 0;
    IntVec b{Int(1), Int(0)};
    CHECK(!int_solve(a, b).has_value());
    IntVec b2{Int(2), Int(1)};
    CHECK(!int_solve(a, b2).has_value());
}
