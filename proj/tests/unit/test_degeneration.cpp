#include <doctest.h>

#include "flatgeom/builders.hpp"
#include "flatgeom/degeneration.hpp"

#include <cmath>

using namespace flatgeom;

namespace {

std::vector<double> grid5() { return {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}; }
std::vector<double> grid4() { return {1e-1, 1e-2, 1e-3, 1e-4}; }

CVec<double> ann_covector(const CollapseData& cd, int col, double scale) {
    CVec<double> xi(cd.pres_base.rank(), Vec2<double>{0, 0});
    for (int i = 0; i < cd.pres_base.rank(); ++i)
        xi[i] = {cd.annihilator.at(i, col).get_d() * scale,
                 cd.annihilator.at(i, col).get_d() * scale * 0.5};
    return xi;
}

} // namespace

TEST_CASE("family validation: broken coefficients are rejected") {
    auto fam = family_slit_closing();
    // evaluate at eps0 reproduces the base surface
    auto s = evaluate_family(fam, fam.eps0);
    CHECK(s == fam.base);

    // pollute a schedule so closure fails identically
    Family bad = fam;
    bad.schedule[0].alpha = {0.3, 0};
    CHECK_THROWS_AS(validate_family(bad), ValidationError);

    // eps out of range
    CHECK_THROWS_AS(evaluate_family(fam, 0.0), ValidationError);
    CHECK_THROWS_AS(evaluate_family(fam, 2 * fam.eps0), ValidationError);
}

TEST_CASE("shear family: no vanishing edges, identity collapse") {
    auto fam = family_shear();
    auto cd = auto_collapse(fam);
    CHECK(cd.dim_V() == 0);
    CHECK(cd.dim_Ann() == cd.pres_base.rank());
    CHECK(cd.limit.polygons.size() == fam.base.polygons.size());
    CHECK(int_rank(cd.f_star) == cd.pres_base.rank());
}

TEST_CASE("slit closing: V is spanned by the slit class; limit splits in two tori") {
    auto fam = family_slit_closing();
    auto cd = auto_collapse(fam);
    CHECK(cd.dim_V() == 1);
    CHECK(cd.pres_base.rank() == 5);
    CHECK(cd.pres_limit.rank() == 4);
    CHECK(cd.limit_info.comb.num_components == 2);
    for (const auto& comp : cd.limit_info.components) {
        CHECK(comp.genus == 1);
        CHECK(comp.num_marked == 1); // the slit collapsed to a marked point
    }
    // the vanishing class really is the slit class
    IntVec slit_chain(fam.base.gluings.size());
    slit_chain[0] = 1;
    IntVec slit_cls = cd.pres_base.class_of_chain(slit_chain);
    IntVec push = cd.pushforward(slit_cls);
    for (const Int& c : push) CHECK(c == 0);

    // rank-nullity and the two collapse maps
    CHECK(cd.dim_V() + cd.dim_Ann() == cd.pres_base.rank());
    CHECK(int_rank(cd.f_star) == cd.pres_limit.rank());             // surjective
    CHECK(int_rank(cd.f_star.transpose()) == cd.pres_limit.rank()); // f^* injective
}

TEST_CASE("collapsing an entire polygon: it is deleted, rank drop = dim V") {
    auto fam = family_collapsing_polygon();
    auto cd = auto_collapse(fam);
    CHECK(cd.limit.polygons.size() == 1);
    CHECK(cd.pres_base.rank() - cd.pres_limit.rank() == cd.dim_V());
    CHECK(cd.dim_V() == 2);
    // limit is a torus with two marked points
    CHECK(cd.limit_info.components[0].genus == 1);
    CHECK(cd.limit_info.components[0].num_marked == 2);
}

TEST_CASE("pushforward and pullback: kernel, section, annihilator") {
    auto fam = family_slit_closing();
    auto cd = auto_collapse(fam);

    // classes in V push to zero
    for (int col = 0; col < cd.vanishing.cols(); ++col) {
        IntVec v = cd.vanishing.column(col);
        for (const Int& c : cd.pushforward(v)) CHECK(c == 0);
    }
    // pullback then pushforward is the identity on limit classes
    for (int k = 0; k < cd.pres_limit.rank(); ++k) {
        IntVec unit(cd.pres_limit.rank());
        unit[k] = 1;
        IntVec round = cd.pushforward(cd.pullback_class(unit));
        CHECK(round == unit);
    }
    // pulled-back covectors annihilate V
    for (int k = 0; k < cd.pres_limit.rank(); ++k) {
        CVec<double> phi(cd.pres_limit.rank(), Vec2<double>{0, 0});
        phi[k] = {1, 0};
        CVec<double> pb = cd.pullback(phi);
        for (int col = 0; col < cd.vanishing.cols(); ++col) {
            double acc = 0;
            for (int i = 0; i < cd.pres_base.rank(); ++i)
                acc += pb[i].x * cd.vanishing.at(i, col).get_d();
            CHECK(std::fabs(acc) <= 1e-12);
        }
    }
}

TEST_CASE("auto collapse refuses divergent schedules") {
    auto fam = cautionary_family(2.0, 5.0);
    CHECK_THROWS_AS(auto_collapse(fam), DivergentEdge);
    auto cd = collapse(fam);
    CHECK(cd.explicit_mode);
}

TEST_CASE("cautionary family: the relation holds, the limit equation fails by |d-c|") {
    auto fam = cautionary_family(2.0, 5.0);
    REQUIRE(fam.equations.size() == 1);

    // y - x - (d - c) = 0 at every sampled eps, to 1e-12
    auto cd = collapse(fam);
    auto reports = limit_equation_check(fam, cd, fam.equations, grid4());
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].family_residual <= 1e-12);
    // the pushed-forward equation fails on the limit with residual |d - c| = 3
    CHECK(reports[0].limit_residual == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(!reports[0].limit_satisfied);

    // x and y push forward to the same class with limit period zero
    IntVec ux(fam.base.gluings.size()), uy(fam.base.gluings.size());
    ux[14] = 1;
    uy[15] = 1;
    IntVec px = cd.pushforward(cd.pres_base.class_of_chain(ux));
    IntVec py = cd.pushforward(cd.pres_base.class_of_chain(uy));
    CHECK(px == py);
    Vec2<double> plim{0, 0};
    auto limp = period_coordinates(cd.limit, cd.pres_limit);
    for (int k = 0; k < cd.pres_limit.rank(); ++k) plim += limp[k] * px[k].get_d();
    CHECK(cmag(plim) <= 1e-12);

    // rank-nullity on the explicit collapse
    CHECK(cd.dim_V() + cd.dim_Ann() == cd.pres_base.rank());
    CHECK(int_rank(cd.f_star) == cd.pres_limit.rank());

    // c = d is rejected
    CHECK_THROWS_AS(cautionary_family(2.0, 2.0), ValidationError);
}

TEST_CASE("continuity at desk scale: log-log slopes at least 0.9") {
    for (auto fam : {family_slit_closing(0.1), family_collapsing_polygon(0.1),
                     family_shear(0.1)}) {
        auto cd = auto_collapse(fam);
        auto rep = convergence_report(fam, cd, grid5());
        CHECK(rep.min_slope >= 0.9);
        for (const auto& row : rep.rows)
            if (!row.constant) CHECK(row.residual.back() < row.residual.front());
    }
    // the cautionary family converges on the section classes
    auto fam = cautionary_family(2.0, 5.0);
    auto cd = collapse(fam);
    auto rep = convergence_report(fam, cd, grid4());
    CHECK(rep.min_slope >= 0.9);
}

TEST_CASE("xi perturbation: Ann(V) directions carry over to the limit") {
    auto fam = family_slit_closing(0.1);
    auto cd = auto_collapse(fam);

    // xi = 0: plain convergence of the family
    CVec<double> zero(cd.pres_base.rank(), Vec2<double>{0, 0});
    auto rep0 = xi_perturbation_test(fam, cd, zero, {}, grid5());
    CHECK(rep0.slope >= 0.9);
    CHECK(rep0.residual.back() <= 1e-4);

    // constant small xi in Ann(V)
    CVec<double> xi = ann_covector(cd, 0, 5e-3);
    auto rep1 = xi_perturbation_test(fam, cd, xi, {}, grid5());
    CHECK(rep1.slope >= 0.9);
    CHECK(rep1.residual.back() <= 1e-4);

    // xi_n = xi + (1/n) xi': converges to the same limit
    CVec<double> xi2 = ann_covector(cd, cd.dim_Ann() > 1 ? 1 : 0, 2e-3);
    std::vector<CVec<double>> seq;
    auto g = grid5();
    for (size_t n = 0; n < g.size(); ++n) {
        CVec<double> xin = xi;
        for (int i = 0; i < cd.pres_base.rank(); ++i)
            xin[i] += xi2[i] * (1.0 / double(n + 1));
        seq.push_back(xin);
    }
    auto rep2 = xi_perturbation_test(fam, cd, xi, seq, grid5());
    CHECK(rep2.residual.back() < rep2.residual.front());
    CHECK(rep2.residual.back() <= 2e-3);

    // an oversized perturbation is rejected
    CVec<double> huge = ann_covector(cd, 0, 50.0);
    CHECK_THROWS_AS(xi_perturbation_test(fam, cd, huge, {}, grid5()), ValidationError);
}
