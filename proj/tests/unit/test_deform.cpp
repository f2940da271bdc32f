#include <doctest.h>

#include "flatgeom/builders.hpp"
#include "flatgeom/cylinders.hpp"

#include <cmath>

using namespace flatgeom;

namespace {

template <class R>
Vec2<R> period_after(const Deformed<R>& d, const HomologyPresentation& pres, const IntVec& cls) {
    IntVec chain = pres.chain_of_class(cls);
    IntVec lifted = d.lift.apply(chain);
    return period_of_chain(d.surface, lifted);
}

} // namespace

TEST_CASE("stretch: t = 0 is the identity on the stored representation") {
    auto s = square_torus<double>();
    auto cs = horizontal_cylinders(s);
    auto d = stretch_cylinder(s, cs, 0, 0.0);
    CHECK(d.surface == s);
}

TEST_CASE("torus stretch t = ln 2: modulus 1 -> 2, area 1 -> 2") {
    auto s = square_torus<double>();
    auto cs = horizontal_cylinders(s);
    auto d = stretch_cylinder(s, cs, 0, std::log(2.0));
    CHECK(area(d.surface) == doctest::Approx(2.0).epsilon(1e-12));
    auto cs2 = horizontal_cylinders(d.surface);
    REQUIRE(cs2.cylinders.size() == 1);
    CHECK(cs2.cylinders[0].modulus == doctest::Approx(2.0).epsilon(1e-12));
    // area changes by (e^t - 1) * h * c
    CHECK(area(d.surface) - area(s) == doctest::Approx((2.0 - 1.0) * 1.0 * 1.0).epsilon(1e-12));
}

TEST_CASE("stretching one cylinder leaves the other untouched (slit torus)") {
    auto s = two_square_slit<double>();
    auto cs = horizontal_cylinders(s);
    REQUIRE(cs.cylinders.size() == 2);
    auto d = stretch_cylinder(s, cs, 0, 0.7);
    auto cs2 = horizontal_cylinders(d.surface);
    REQUIRE(cs2.cylinders.size() == 2);
    // the untouched cylinder still has c = h = 1
    bool found = false;
    for (const auto& c : cs2.cylinders)
        if (std::abs(c.circ - 1.0) < 1e-12 && std::abs(c.ht - 1.0) < 1e-12) found = true;
    CHECK(found);
    // periods of classes supported away from the stretched cylinder are fixed
    auto info = validate_or_throw(s);
    auto pres = homology_basis(info);
    const auto& other = cs.cylinders[1];
    auto before = period(s, pres, other.core_class);
    auto after = period_after(d, pres, other.core_class);
    CHECK(after.x == doctest::Approx(before.x).epsilon(1e-12));
    CHECK(after.y == doctest::Approx(before.y).epsilon(1e-12));
}

TEST_CASE("stretch semigroup: a_{t1} a_{t2} = a_{t1+t2} on period vectors") {
    auto s = two_square_slit<double>();
    auto info = validate_or_throw(s);
    auto pres = homology_basis(info);
    auto cs = horizontal_cylinders(s);
    const double t1 = 0.31, t2 = 0.55;

    auto d1 = stretch_cylinder(s, cs, 0, t1);
    auto cs1 = horizontal_cylinders(d1.surface);
    auto d12 = stretch_cylinder(d1.surface, cs1, 0, t2);

    auto d_sum = stretch_cylinder(s, cs, 0, t1 + t2);

    for (int j = 0; j < pres.rank(); ++j) {
        IntVec cls(pres.rank());
        cls[j] = 1;
        auto a = period_after(d12, pres, cls); // lifts are identities on the fast path
        auto b = period_after(d_sum, pres, cls);
        CHECK(a.x == doctest::Approx(b.x).epsilon(1e-12));
        CHECK(a.y == doctest::Approx(b.y).epsilon(1e-12));
    }
}

TEST_CASE("full twist u_{1/m} is the identity on the stored representation") {
    // float torus
    auto s = square_torus<double>();
    auto cs = horizontal_cylinders(s);
    double full = cs.cylinders[0].circ / cs.cylinders[0].ht; // t = c/h = 1/m
    auto d = shear_cylinder(s, cs, 0, full);
    REQUIRE(d.surface.polygons.size() == 1);
    for (size_t e = 0; e < 4; ++e) {
        CHECK(d.surface.polygons[0][e].x == doctest::Approx(s.polygons[0][e].x).epsilon(1e-14));
        CHECK(d.surface.polygons[0][e].y == doctest::Approx(s.polygons[0][e].y).epsilon(1e-14));
    }
    // the remarking winds once around the core
    IntVec side_chain(s.gluings.size());
    side_chain[1] = 1; // vertical pair
    IntVec lifted = d.lift.apply(side_chain);
    CHECK(lifted != side_chain);
    auto p = period_of_chain(d.surface, lifted);
    CHECK(p.x == doctest::Approx(1.0).epsilon(1e-12)); // 0 + t*h = 1
    CHECK(p.y == doctest::Approx(1.0).epsilon(1e-12));

    // exact mode: bit-exact identity on a taller cylinder
    auto se = rect_torus<Rat>(Rat(3), Rat(2));
    auto infoe = validate_or_throw(se);
    auto prese = homology_basis(infoe);
    auto cse = analyze_cylinders(se, infoe, prese, Vec2<Rat>{Rat(1), Rat(0)});
    Rat fulle = cse.cylinders[0].circumference / cse.cylinders[0].height; // 3/2
    auto de = shear_cylinder(se, cse, 0, fulle);
    CHECK(de.surface == se);
}

TEST_CASE("shear preserves area exactly in rational mode") {
    auto s = ratio_two_surface<Rat>();
    auto info = validate_or_throw(s);
    auto pres = homology_basis(info);
    auto cs = analyze_cylinders(s, info, pres, Vec2<Rat>{Rat(1), Rat(0)});
    Rat a0 = area2(s);
    auto d = shear_cylinder(s, cs, 0, Rat(7, 3));
    CHECK(area2(d.surface) == a0);
    CHECK(validate(d.surface).pass);
}

TEST_CASE("offset advances by t*h and is stored modulo c") {
    auto s = rect_torus<Rat>(Rat(2), Rat(1));
    auto info = validate_or_throw(s);
    auto pres = homology_basis(info);
    auto cs = analyze_cylinders(s, info, pres, Vec2<Rat>{Rat(1), Rat(0)});
    // t = 1/2: offset 1/2; side (0,1) -> (1/2, 1)
    auto d = shear_cylinder(s, cs, 0, Rat(1, 2));
    CHECK(d.surface.polygons[0][1] == Vec2<Rat>(Rat(1, 2), Rat(1)));
    // t = 5/2: raw offset 5/2 wraps to 1/2 modulo c = 2
    auto d2 = shear_cylinder(s, cs, 0, Rat(5, 2));
    CHECK(d2.surface.polygons[0][1] == Vec2<Rat>(Rat(1, 2), Rat(1)));
    // and the remarking differs by one core
    IntVec side(s.gluings.size());
    side[1] = 1;
    IntVec l1 = d.lift.apply(side), l2 = d2.lift.apply(side);
    auto p1 = period_of_chain(d.surface, l1);
    auto p2 = period_of_chain(d2.surface, l2);
    CHECK(Rat(p1.x + Rat(2)) == p2.x);
    CHECK(p1.y == p2.y);
}

TEST_CASE("general-path deformation: L-shape narrow cylinder stretch") {
    auto s = l_shape_2x2<double>();
    auto cs = horizontal_cylinders(s);
    REQUIRE(cs.cylinders.size() == 2);
    int narrow = cs.cylinders[0].circ < cs.cylinders[1].circ ? 0 : 1;
    CHECK(cs.cylinders[narrow].fastpath_poly < 0); // not in normal form
    auto d = stretch_cylinder(s, cs, narrow, std::log(3.0));
    CHECK(validate(d.surface).pass);
    CHECK(area(d.surface) == doctest::Approx(3.0 + (3.0 - 1.0) * 1.0).epsilon(1e-10));
    auto cs2 = horizontal_cylinders(d.surface);
    double max_mod = 0;
    for (const auto& c : cs2.cylinders) max_mod = std::max(max_mod, c.modulus);
    CHECK(max_mod == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(cs2.total_ch() == doctest::Approx(area(d.surface)).epsilon(1e-10));
}

TEST_CASE("stale cylinder handle is rejected") {
    auto s = square_torus<double>();
    auto cs = horizontal_cylinders(s);
    auto other = rect_torus<double>(2, 1);
    CHECK_THROWS_AS(stretch_cylinder(other, cs, 0, 0.1), StaleCylinder);
}
