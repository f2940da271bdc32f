#include <doctest.h>

#include "flatgeom/builders.hpp"
#include "flatgeom/cylinders.hpp"

using namespace flatgeom;

namespace {

template <class R> CylinderSet<R> cyls(const PolygonSurface<R>& s, const Vec2<R>& dir) {
    auto info = validate_or_throw(s);
    auto pres = homology_basis(info);
    return analyze_cylinders(s, info, pres, dir);
}

} // namespace

TEST_CASE("unit square torus: one horizontal cylinder c=h=m=1") {
    auto s = square_torus<double>();
    auto cs = horizontal_cylinders(s);
    REQUIRE(cs.cylinders.size() == 1);
    const auto& c = cs.cylinders[0];
    CHECK(c.circ == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.ht == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.modulus == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.fastpath_poly == 0);
    // core period is the positive circumference
    auto info = validate_or_throw(s);
    auto pres = homology_basis(info);
    auto p = period(s, pres, c.core_class);
    CHECK(p.x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.y == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("2x1 rectangle torus: c=2, h=1, m=0.5") {
    auto cs = horizontal_cylinders(rect_torus<double>(2, 1));
    REQUIRE(cs.cylinders.size() == 1);
    CHECK(cs.cylinders[0].circ == doctest::Approx(2.0));
    CHECK(cs.cylinders[0].ht == doctest::Approx(1.0));
    CHECK(cs.cylinders[0].modulus == doctest::Approx(0.5));
}

TEST_CASE("two-square slit torus: two horizontal cylinders, equal circumference") {
    auto s = two_square_slit<double>();
    auto cs = horizontal_cylinders(s);
    REQUIRE(cs.cylinders.size() == 2);
    CHECK(cs.cylinders[0].circ == doctest::Approx(cs.cylinders[1].circ));
    CHECK(cs.cylinders[0].circ == doctest::Approx(1.0));
    CHECK(cs.total_ch() == doctest::Approx(area(s)).epsilon(1e-10));
}

TEST_CASE("L-shape: two horizontal cylinders tile the surface") {
    auto s = l_shape_2x2<double>();
    auto cs = horizontal_cylinders(s);
    REQUIRE(cs.cylinders.size() == 2);
    bool found_wide = false, found_narrow = false;
    for (const auto& c : cs.cylinders) {
        if (std::abs(c.circ - 2.0) < 1e-9 && std::abs(c.ht - 1.0) < 1e-9) found_wide = true;
        if (std::abs(c.circ - 1.0) < 1e-9 && std::abs(c.ht - 1.0) < 1e-9) found_narrow = true;
    }
    CHECK(found_wide);
    CHECK(found_narrow);
    CHECK(cs.total_ch() == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("conservation: sum of c*h equals area on the corpus, both modes") {
    auto s1 = octagon_surface();
    auto cs1 = horizontal_cylinders(s1);
    CHECK(cs1.total_ch() == doctest::Approx(area(s1)).epsilon(1e-10));

    auto s2 = ratio_two_surface<Rat>();
    auto info2 = validate_or_throw(s2);
    auto pres2 = homology_basis(info2);
    auto cs2 = analyze_cylinders(s2, info2, pres2, Vec2<Rat>{Rat(1), Rat(0)});
    Rat total(0);
    for (const auto& c : cs2.cylinders) total += c.circumference * c.height;
    CHECK(total == area2(s2) / 2); // exact in rational mode

    auto s3 = cautionary_surface<double>({{2, 0}, {5, 0}, {4, 0}, {7, 0}, 0.25, 0.25});
    auto cs3 = horizontal_cylinders(s3);
    CHECK(cs3.total_ch() == doctest::Approx(area(s3)).epsilon(1e-10));
}

TEST_CASE("vertical direction via rotation: torus and cautionary cylinders") {
    auto s = square_torus<double>();
    auto cs = cyls(s, Vec2<double>{0, 1});
    REQUIRE(cs.cylinders.size() == 1);
    CHECK(cs.cylinders[0].circ == doctest::Approx(1.0));
    CHECK(cs.cylinders[0].modulus == doctest::Approx(1.0));

    // cautionary surface: the two inserted cylinders dominate vertically
    auto c5 = cautionary_surface<double>({{2, 0}, {5, 0}, {4, 0}, {7, 0}, 0.25, 0.25});
    auto csv = cyls(c5, Vec2<double>{0, 1});
    REQUIRE(csv.cylinders.size() >= 2);
    // moduli sorted decreasing; the big ones are width/eps = 28 and 16
    CHECK(csv.cylinders[0].modulus == doctest::Approx(28.0).epsilon(1e-9));
    CHECK(csv.cylinders[1].modulus == doctest::Approx(16.0).epsilon(1e-9));
    CHECK(csv.total_ch() == doctest::Approx(area(c5)).epsilon(1e-10));
}

TEST_CASE("ratio-two surface: circumference ratio 2, heights (2,1)") {
    auto cs = horizontal_cylinders(ratio_two_surface<double>());
    REQUIRE(cs.cylinders.size() == 2);
    const auto& big = cs.cylinders[0].circ > cs.cylinders[1].circ ? cs.cylinders[0]
                                                                  : cs.cylinders[1];
    const auto& small = cs.cylinders[0].circ > cs.cylinders[1].circ ? cs.cylinders[1]
                                                                    : cs.cylinders[0];
    CHECK(big.circ == doctest::Approx(2.0));
    CHECK(big.ht == doctest::Approx(2.0));
    CHECK(small.circ == doctest::Approx(1.0));
    CHECK(small.ht == doctest::Approx(1.0));
}

TEST_CASE("duals: integral, antisymmetric on horizontal vs vertical cores") {
    auto s = square_torus<double>();
    auto info = validate_or_throw(s);
    auto pres = homology_basis(info);
    auto ch = analyze_cylinders(s, info, pres, Vec2<double>{1, 0});
    auto cv = analyze_cylinders(s, info, pres, Vec2<double>{0, 1});
    REQUIRE(ch.cylinders.size() == 1);
    REQUIRE(cv.cylinders.size() == 1);
    const auto& gh = ch.cylinders[0];
    const auto& gv = cv.cylinders[0];

    // <gamma_h, gamma_v> = - <gamma_v, gamma_h>, computed independently
    Int lhs(0), rhs(0);
    for (int j = 0; j < pres.rank(); ++j) {
        lhs += gh.dual[j] * gv.core_class[j];
        rhs += gv.dual[j] * gh.core_class[j];
    }
    CHECK(lhs == -rhs);
    CHECK((lhs == 1 || lhs == -1)); // torus: the cores cross once
}

TEST_CASE("sandwich surface: the two cores are equal in H1(X,Sigma)") {
    auto s = sandwich_surface<double>(1.0, 2.0);
    auto info = validate_or_throw(s);
    auto pres = homology_basis(info);
    auto cs = analyze_cylinders(s, info, pres, Vec2<double>{1, 0});
    REQUIRE(cs.cylinders.size() == 2);
    CHECK(cs.cylinders[0].core_class == cs.cylinders[1].core_class);
    // duals agree after projection to the absolute subspace
    const IntMat& abs = pres.absolute_cycle_basis();
    for (int j = 0; j < abs.cols(); ++j) {
        Int a(0), b(0);
        for (int i = 0; i < pres.rank(); ++i) {
            a += cs.cylinders[0].dual[i] * abs.at(i, j);
            b += cs.cylinders[1].dual[i] * abs.at(i, j);
        }
        CHECK(a == b);
    }
}

TEST_CASE("step bound: an irrational direction fails with StepBoundExceeded") {
    auto s = square_torus<double>();
    TraceOptions opt;
    opt.max_crossings = 300;
    auto info = validate_or_throw(s);
    auto pres = homology_basis(info);
    CHECK_THROWS_AS(
        analyze_cylinders(s, info, pres, Vec2<double>{1.0, 1.4142135623730951}, opt),
        StepBoundExceeded);
}

TEST_CASE("exact mode: slit torus cylinders have rational data") {
    auto s = two_square_slit<Rat>();
    auto info = validate_or_throw(s);
    auto pres = homology_basis(info);
    auto cs = analyze_cylinders(s, info, pres, Vec2<Rat>{Rat(1), Rat(0)});
    REQUIRE(cs.cylinders.size() == 2);
    CHECK(cs.cylinders[0].circumference == Rat(1));
    CHECK(cs.cylinders[0].height == Rat(1));
    auto p = period(s, pres, cs.cylinders[0].core_class);
    CHECK(p.x == Rat(1));
    CHECK(p.y == Rat(0));
}
