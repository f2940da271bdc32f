// Dense two-phase simplex (Bland's rule) and the coordinate-bounding
// linear program: given v in V with nonnegative coordinates and a bound
// H > 1, move only the coordinates >= H, keep them >= H, and minimize
// their maximum.
#pragma once

#include <optional>
#include <vector>

namespace flatgeom {

struct SimplexResult {
    bool feasible = false;
    bool bounded = true;
    double value = 0;
    std::vector<double> x;
};

// min c.x  s.t.  A x <= b, x >= 0. Deterministic (Bland's rule).
SimplexResult simplex_solve(const std::vector<std::vector<double>>& A,
                            const std::vector<double>& b, const std::vector<double>& c);

struct BoundInstance {
    std::vector<std::vector<double>> subspace; // rows spanning V in R^n
    std::vector<double> v;                     // point of V with v >= 0
    double H = 2.0;                            // > 1
};

struct BoundResult {
    std::vector<double> v_prime;
    double H_local = 0;      // max over the moved coordinates (H if none)
    std::vector<int> fixed;  // indices with v_i < H
    std::vector<int> moved;  // the complement
};

// The deformation step of the modulus-bounding argument:
//   v' in V, v'_i = v_i for v_i < H, v'_j in [H, H_local] otherwise,
//   H_local minimal (sup-norm over the moved coordinates), ties between
//   optimal vertices broken lexicographically.
BoundResult linalg_bound(const BoundInstance& instance);

// Estimate of the global bound H'(V, H) = sup over v of H_local(v). The
// supremum exists by compactness but has no closed form; this samples the
// cone V with all coordinates nonnegative (n <= 6) and reports the largest
// per-instance bound seen. Deterministic for a fixed seed.
double estimate_global_bound(const std::vector<std::vector<double>>& subspace, double H,
                             int samples = 2000, unsigned long seed = 0);

} // namespace flatgeom
