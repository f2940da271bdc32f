// Scalar abstraction: the geometric core is generic over the coordinate
// ring, instantiated with double (default) or exact Gaussian rationals.
#pragma once

#include <cmath>
#include <cstdint>
#include <gmpxx.h>
#include <string>

namespace flatgeom {

using Rat = mpq_class;

template <class R> struct ScalarTraits;

template <> struct ScalarTraits<double> {
    static constexpr bool exact = false;
    static double to_double(double x) { return x; }
    static double from_double(double x) { return x; }
    static double from_int(const mpz_class& z) { return z.get_d(); }
    static double abs(double x) { return std::fabs(x); }
};

template <> struct ScalarTraits<Rat> {
    static constexpr bool exact = true;
    static double to_double(const Rat& x) { return x.get_d(); }
    // double -> rational is exact (doubles are dyadic rationals)
    static Rat from_double(double x) { return Rat(x); }
    static Rat from_int(const mpz_class& z) { return Rat(z); }
    static Rat abs(const Rat& x) { return x < 0 ? Rat(-x) : x; }
};

template <class R> inline double to_double(const R& x) { return ScalarTraits<R>::to_double(x); }
template <class R> inline R abs_val(const R& x) { return ScalarTraits<R>::abs(x); }

// gmpxx expression templates: collapse to a value first
template <class T, class U> inline double to_double(const __gmp_expr<T, U>& x) {
    return mpq_class(x).get_d();
}
template <class T, class U> inline mpq_class abs_val(const __gmp_expr<T, U>& x) {
    mpq_class v(x);
    return v < 0 ? mpq_class(-v) : v;
}

// Sign with a relative tolerance in float mode, exact in rational mode.
// `scale` should be a characteristic magnitude of the quantities involved.
inline int sign_tol(double x, double scale, double rel_tol = 1e-9) {
    double tol = rel_tol * (scale > 1.0 ? scale : 1.0);
    if (x > tol) return 1;
    if (x < -tol) return -1;
    return 0;
}
inline int sign_tol(const Rat& x, const Rat&, double = 0.0) {
    return sgn(x);
}

inline std::string rat_to_string(const Rat& x) { return x.get_str(); }

} // namespace flatgeom
