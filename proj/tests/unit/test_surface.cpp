#include <doctest.h>

#include "flatgeom/builders.hpp"
#include "flatgeom/surface.hpp"
#include "oracles.hpp"

#include <random>

using namespace flatgeom;

namespace {

template <class R> std::vector<PolygonSurface<R>> corpus() {
    std::vector<PolygonSurface<R>> v;
    v.push_back(square_torus<R>());
    v.push_back(rect_torus<R>(R(2), R(1)));
    v.push_back(rect_torus<R>(R(1), R(10)));
    v.push_back(l_shape_2x2<R>());
    v.push_back(l_shape<R>(R(2), R(1), R(1), R(3)));
    v.push_back(two_square_slit<R>());
    v.push_back(ratio_two_surface<R>());
    v.push_back(sandwich_surface<R>(R(1), R(2)));
    v.push_back(cautionary_surface<R>({{R(2), R(0)},
                                       {R(5), R(0)},
                                       {R(4), R(0)},
                                       {R(7), R(0)},
                                       R(R(1) / R(4)),
                                       R(R(1) / R(4))}));
    return v;
}

} // namespace

TEST_CASE("square torus validates with kappa={0}, g=1, area=1") {
    auto s = square_torus<double>();
    auto rep = validate(s);
    REQUIRE(rep.pass);
    CHECK(rep.info->genus() == 1);
    CHECK(rep.info->kappa() == std::vector<long>{0});
    CHECK(rep.info->area() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("octagon surface: kappa={2}, g=2 (angle-sum oracle agrees)") {
    auto s = octagon_surface();
    auto rep = validate(s);
    REQUIRE(rep.pass);
    CHECK(rep.info->genus() == 2);
    CHECK(rep.info->kappa() == std::vector<long>{2});
    CHECK(oracle::angle_sum_orders(s) == rep.info->kappa());
}

TEST_CASE("perturbed square fails closure") {
    auto s = square_torus<double>();
    s.polygons[0][0].x += 0.1;
    auto rep = validate(s);
    CHECK(!rep.pass);
    bool closure_failed = false;
    for (auto& c : rep.checks)
        if (c.name == "closure" && !c.pass) closure_failed = true;
    CHECK(closure_failed);
}

TEST_CASE("unmatched and mismatched gluings are reported") {
    auto s = square_torus<double>();
    s.gluings.pop_back();
    CHECK(!validate(s).pass);

    auto s2 = rect_torus<double>(2, 1);
    s2.gluings[0] = {EdgeRef{0, 0}, EdgeRef{0, 1}}; // bottom glued to right side
    CHECK(!validate(s2).pass);
}

TEST_CASE("L-shape: area 3 via shoelace oracle, kappa={2}") {
    auto s = l_shape_2x2<double>();
    auto rep = validate(s);
    REQUIRE(rep.pass);
    CHECK(rep.info->kappa() == std::vector<long>{2});
    CHECK(rep.info->genus() == 2);
    CHECK(rep.info->area() == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(oracle::shoelace_area(s) == doctest::Approx(rep.info->area()).epsilon(1e-12));
}

TEST_CASE("slit constructions land in H(1,1)") {
    auto s = two_square_slit<double>();
    auto rep = validate(s);
    REQUIRE(rep.pass);
    CHECK(rep.info->genus() == 2);
    CHECK(rep.info->kappa() == std::vector<long>{1, 1});
    CHECK(oracle::angle_sum_orders(s) == std::vector<long>{1, 1});

    auto r2 = ratio_two_surface<double>();
    auto rep2 = validate(r2);
    REQUIRE(rep2.pass);
    CHECK(rep2.info->kappa() == std::vector<long>{1, 1});
}

TEST_CASE("sandwich surface is a torus with three marked points") {
    auto s = sandwich_surface<double>(1.0, 2.0);
    auto rep = validate(s);
    REQUIRE(rep.pass);
    CHECK(rep.info->genus() == 1);
    CHECK(rep.info->kappa() == std::vector<long>{0, 0, 0});
}

TEST_CASE("hexagon torus has two marked points") {
    auto rep = validate(hexagon_torus());
    REQUIRE(rep.pass);
    CHECK(rep.info->genus() == 1);
    CHECK(rep.info->kappa() == std::vector<long>{0, 0});
}

TEST_CASE("cautionary surface validates (genus 3, two double zeros)") {
    auto s = cautionary_surface<double>({{2, 0}, {5, 0}, {4, 0}, {7, 0}, 0.25, 0.25});
    auto rep = validate(s);
    REQUIRE(rep.pass);
    CHECK(rep.info->genus() == 3);
    CHECK(rep.info->kappa() == std::vector<long>{2, 2, 0, 0, 0, 0, 0});
    CHECK(oracle::angle_sum_orders(s) == rep.info->kappa());
}

TEST_CASE("corpus: kappa sums to 2g-2 and n = |kappa| (float and exact)") {
    for (const auto& s : corpus<double>()) {
        auto rep = validate(s);
        REQUIRE(rep.pass);
        for (const auto& comp : rep.info->components) {
            long sum = 0;
            for (long k : comp.kappa) sum += k;
            CHECK(sum == 2 * comp.genus - 2);
            CHECK(int(comp.kappa.size()) == comp.num_marked);
        }
    }
    for (const auto& s : corpus<Rat>()) CHECK(validate(s).pass);
}

TEST_CASE("apply_matrix: identity, determinant scaling, composition") {
    auto s = square_torus<double>();
    auto id = apply_matrix(s, Mat2<double>::identity());
    CHECK(id == s);

    // shear preserves area
    auto sheared = apply_matrix(s, Mat2<double>::shear(1.0));
    CHECK(area(sheared) == doctest::Approx(1.0).epsilon(1e-12));

    // a_t with t = ln 2 doubles the area
    auto stretched = apply_matrix(s, Mat2<double>::vstretch(2.0));
    CHECK(area(stretched) == doctest::Approx(2.0).epsilon(1e-12));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (const auto& surf : corpus<double>()) {
        double a0 = area(surf);
        for (int trial = 0; trial < 3; ++trial) {
            Mat2<double> m1{1 + d(rng) * 0.5, d(rng), d(rng), 1 + d(rng) * 0.5};
            Mat2<double> m2{1 + d(rng) * 0.5, d(rng), d(rng), 1 + d(rng) * 0.5};
            if (m1.det() <= 0 || m2.det() <= 0) continue;
            CHECK(area(apply_matrix(surf, m1)) ==
                  doctest::Approx(m1.det() * a0).epsilon(1e-12));
            auto two_step = apply_matrix(apply_matrix(surf, m1), m2);
            auto one_step = apply_matrix(surf, m2.mul(m1));
            for (size_t p = 0; p < surf.polygons.size(); ++p)
                for (size_t e = 0; e < surf.polygons[p].size(); ++e) {
                    CHECK(two_step.polygons[p][e].x ==
                          doctest::Approx(one_step.polygons[p][e].x).epsilon(1e-12));
                    CHECK(two_step.polygons[p][e].y ==
                          doctest::Approx(one_step.polygons[p][e].y).epsilon(1e-12));
                }
        }
    }

    CHECK_THROWS_AS(apply_matrix(s, Mat2<double>{1, 0, 0, -1}), ValidationError);
}

TEST_CASE("validate is idempotent and side-effect free") {
    auto s = two_square_slit<double>();
    auto r1 = validate(s);
    auto r2 = validate(s);
    REQUIRE(r1.pass);
    REQUIRE(r2.pass);
    CHECK(r1.info->kappa() == r2.info->kappa());
    CHECK(r1.info->area() == r2.info->area());
    auto copy = s;
    validate(s);
    CHECK(copy == s);
}
