// Regenerates the JSON example files under data/.

#include "flatgeom/builders.hpp"
#include "flatgeom/degeneration.hpp"
#include "flatgeom/jsonio.hpp"

#include <iostream>

using namespace flatgeom;

int main(int argc, char** argv) {
    std::string dir = argc > 1 ? argv[1] : "data";
    auto put = [&](const std::string& name, const Json& j) {
        save_json_file(dir + "/" + name, j);
        std::cout << dir << "/" << name << "\n";
    };

    put("torus.json", surface_to_json(square_torus<double>()));
    put("torus_2x1.json", surface_to_json(rect_torus<double>(2, 1)));
    put("tall_cyl.json", surface_to_json(rect_torus<double>(1, 10)));
    put("l_shape.json", surface_to_json(l_shape_2x2<double>()));
    put("octagon.json", surface_to_json(octagon_surface()));
    put("hexagon.json", surface_to_json(hexagon_torus()));
    put("two_square_slit.json", surface_to_json(two_square_slit<double>()));
    put("ratio_two.json", surface_to_json(ratio_two_surface<double>()));
    put("sandwich.json", surface_to_json(sandwich_surface<double>(1, 2)));
    put("cautionary_surface.json",
        surface_to_json(cautionary_surface<double>(
            {{2, 0}, {5, 0}, {4, 0}, {7, 0}, 0.25, 0.25})));

    put("cautionary.json", family_to_json(cautionary_family(2.0, 5.0)));
    put("slit_family.json", family_to_json(family_slit_closing()));
    put("bubble_family.json", family_to_json(family_collapsing_polygon()));

    // a tall two-cylinder surface with the coupled-heights model attached
    {
        auto s = slit_stack<double>(2, 100, 1, 50, 0.5);
        auto info = validate_or_throw(s);
        auto pres = homology_basis(info);
        auto cs = analyze_cylinders(s, info, pres, Vec2<double>{1, 0});
        int a = cs.cylinders[0].circ > cs.cylinders[1].circ ? 0 : 1;
        int b = 1 - a;
        auto omega = period_vector(s, pres);
        Json j = surface_to_json(s);
        Json span = Json::array();
        Json row1 = Json::array(), row2 = Json::array();
        for (int k = 0; k < pres.rank(); ++k) {
            row1.push_back(omega[k].x);
            row1.push_back(omega[k].y);
            row2.push_back(2.0 * cs.cylinders[a].dual[k].get_d() +
                           cs.cylinders[b].dual[k].get_d());
            row2.push_back(0.0);
        }
        span.push_back(row1);
        span.push_back(row2);
        j["model"] = {{"span", span}};
        put("coupled_tall.json", j);
    }

    // product models over tori
    {
        auto torus = surface_to_json(square_torus<double>());
        auto diag_span = [&](int copies, double scale2) {
            Json span = Json::array();
            for (int jj = 0; jj < 2; ++jj) {
                Json row = Json::array();
                for (int c = 0; c < copies; ++c)
                    for (int k = 0; k < 2; ++k)
                        for (int reim = 0; reim < 2; ++reim)
                            row.push_back((k == jj && reim == 0) ? (c == 0 ? 1.0 : scale2)
                                                                 : 0.0);
                span.push_back(row);
            }
            return span;
        };
        Json diag;
        diag["components"] = {torus, torus};
        diag["model"] = {{"span", diag_span(2, 1.0)}};
        put("product_diagonal.json", diag);

        // (diagonal on two components) x (full stratum on the third)
        Json split;
        split["components"] = {torus, torus, torus};
        Json span = Json::array();
        for (int jj = 0; jj < 2; ++jj) {
            Json row = Json::array();
            for (int c = 0; c < 3; ++c)
                for (int k = 0; k < 2; ++k)
                    for (int reim = 0; reim < 2; ++reim)
                        row.push_back((c < 2 && k == jj && reim == 0) ? 1.0 : 0.0);
            span.push_back(row);
        }
        for (int jj = 0; jj < 2; ++jj) {
            for (int reim = 0; reim < 2; ++reim) {
                Json row = Json::array();
                for (int idx = 0; idx < 12; ++idx) row.push_back(0.0);
                row[8 + 2 * jj + reim] = 1.0;
                span.push_back(row);
            }
        }
        split["model"] = {{"span", span}};
        put("product_split.json", split);
    }

    // pairs ((X, omega), (X, sqrt2 omega)) over the L-shaped H(2) surface
    {
        auto s = l_shape_2x2<double>();
        auto info = validate_or_throw(s);
        auto pres = homology_basis(info);
        double r2 = std::sqrt(2.0);
        Json j;
        j["components"] = {surface_to_json(s),
                           surface_to_json(apply_matrix(s, Mat2<double>{r2, 0, 0, r2}))};
        Json span = Json::array();
        for (int k = 0; k < pres.rank(); ++k) {
            Json row = Json::array();
            for (int idx = 0; idx < 4 * pres.rank(); ++idx) row.push_back(0.0);
            row[2 * k] = 1.0;
            row[2 * pres.rank() + 2 * k] = r2;
            span.push_back(row);
        }
        j["model"] = {{"span", span}};
        put("product_sqrt2.json", j);
    }
    return 0;
}
