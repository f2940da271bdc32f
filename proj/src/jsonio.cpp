#include "flatgeom/jsonio.hpp"

#include <cstdio>
#include <fstream>

namespace flatgeom {

std::string fmt_num(double x) {
    if (x == 0.0) x = 0.0; // normalize -0
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", x);
    return buf;
}

std::string fmt_complex(const Vec2<double>& z) {
    return fmt_num(z.x) + (z.y >= 0 ? "+" : "") + fmt_num(z.y) + "i";
}

namespace {

double number_from(const Json& j) {
    if (j.is_string()) return Rat(j.get<std::string>()).get_d();
    return j.get<double>();
}

Rat rat_from(const Json& j) {
    if (j.is_string()) {
        Rat q(j.get<std::string>());
        q.canonicalize();
        return q;
    }
    return Rat(j.get<double>()); // exact: doubles are dyadic rationals
}

template <class R, class Conv>
PolygonSurface<R> surface_from(const Json& j, Conv conv) {
    if (!j.contains("polygons") || !j.contains("gluings"))
        throw ParseError("surface: expected 'polygons' and 'gluings'");
    PolygonSurface<R> s;
    for (const auto& poly : j.at("polygons")) {
        std::vector<Vec2<R>> edges;
        for (const auto& e : poly) {
            if (!e.is_array() || e.size() != 2)
                throw ParseError("surface: edge must be [re, im]");
            edges.push_back({conv(e[0]), conv(e[1])});
        }
        s.polygons.push_back(std::move(edges));
    }
    for (const auto& g : j.at("gluings")) {
        if (!g.is_array() || g.size() != 2 || !g[0].is_array() || g[0].size() != 2 ||
            !g[1].is_array() || g[1].size() != 2)
            throw ParseError("surface: gluing must be [[poly,edge],[poly,edge]]");
        s.gluings.push_back({EdgeRef{g[0][0].get<int>(), g[0][1].get<int>()},
                             EdgeRef{g[1][0].get<int>(), g[1][1].get<int>()}});
    }
    return s;
}

Json rat_to_json(const Rat& q) {
    // emit a plain number when the double round-trips exactly
    double d = q.get_d();
    if (Rat(d) == q) return Json(d);
    return Json(q.get_str());
}

} // namespace

PolygonSurface<double> surface_from_json(const Json& j) {
    return surface_from<double>(j, number_from);
}

PolygonSurface<Rat> surface_from_json_exact(const Json& j) {
    return surface_from<Rat>(j, rat_from);
}

Json surface_to_json(const PolygonSurface<double>& s) {
    Json j;
    j["polygons"] = Json::array();
    for (const auto& poly : s.polygons) {
        Json jp = Json::array();
        for (const auto& e : poly) jp.push_back({e.x, e.y});
        j["polygons"].push_back(jp);
    }
    j["gluings"] = Json::array();
    for (const auto& g : s.gluings)
        j["gluings"].push_back({{g[0].poly, g[0].edge}, {g[1].poly, g[1].edge}});
    return j;
}

Json surface_to_json(const PolygonSurface<Rat>& s) {
    Json j;
    j["polygons"] = Json::array();
    for (const auto& poly : s.polygons) {
        Json jp = Json::array();
        for (const auto& e : poly) jp.push_back({rat_to_json(e.x), rat_to_json(e.y)});
        j["polygons"].push_back(jp);
    }
    j["gluings"] = Json::array();
    for (const auto& g : s.gluings)
        j["gluings"].push_back({{g[0].poly, g[0].edge}, {g[1].poly, g[1].edge}});
    return j;
}

template <class R> CMat<R> model_rows_from_json(const Json& rows_json, int ambient) {
    CMat<R> rows;
    for (const auto& row : rows_json) {
        if (!row.is_array() || int(row.size()) != 2 * ambient)
            throw ParseError("model row must interleave re,im over " +
                             std::to_string(ambient) + " coordinates");
        CVec<R> v;
        for (int i = 0; i < ambient; ++i) {
            if constexpr (ScalarTraits<R>::exact)
                v.push_back({rat_from(row[2 * i]), rat_from(row[2 * i + 1])});
            else
                v.push_back({number_from(row[2 * i]), number_from(row[2 * i + 1])});
        }
        rows.push_back(std::move(v));
    }
    return rows;
}

template CMat<double> model_rows_from_json<double>(const Json&, int);
template CMat<Rat> model_rows_from_json<Rat>(const Json&, int);

LocalModel<double> model_from_json(const Json& j, int ambient) {
    if (j.contains("span"))
        return LocalModel<double>::from_span(ambient,
                                             model_rows_from_json<double>(j.at("span"), ambient));
    if (j.contains("equations"))
        return LocalModel<double>::from_equations(
            ambient, model_rows_from_json<double>(j.at("equations"), ambient));
    throw ParseError("model block needs 'span' or 'equations'");
}

Family family_from_json(const Json& j) {
    Family fam;
    fam.base = surface_from_json(j);
    if (!j.contains("eps0")) throw ParseError("family: missing 'eps0'");
    fam.eps0 = number_from(j.at("eps0"));
    fam.schedule.assign(fam.base.gluings.size(), EdgeSchedule{});
    for (size_t g = 0; g < fam.schedule.size(); ++g) {
        const EdgeRef& e0 = fam.base.gluings[g][0];
        fam.schedule[g].alpha = fam.base.polygons[e0.poly][e0.edge];
    }
    if (j.contains("schedule")) {
        for (const auto& [key, val] : j.at("schedule").items()) {
            int g = std::stoi(key);
            if (g < 0 || g >= int(fam.schedule.size()))
                throw ParseError("family: schedule key out of range: " + key);
            if (!val.is_array() || val.size() != 3)
                throw ParseError("family: schedule entry must be [alpha, beta, gamma]");
            auto cv = [&](const Json& p) {
                return Vec2<double>{number_from(p[0]), number_from(p[1])};
            };
            fam.schedule[g] = {cv(val[0]), cv(val[1]), cv(val[2])};
        }
    }
    if (j.contains("collapse")) {
        const Json& c = j.at("collapse");
        ExplicitCollapse ec;
        ec.limit = surface_from_json(c.at("limit"));
        const Json& gm = c.at("gen_map");
        ec.gen_map = IntMat(int(ec.limit.gluings.size()), int(fam.base.gluings.size()));
        if (int(gm.size()) != ec.gen_map.rows()) throw ParseError("family: gen_map shape");
        for (int i = 0; i < ec.gen_map.rows(); ++i) {
            if (int(gm[i].size()) != ec.gen_map.cols())
                throw ParseError("family: gen_map shape");
            for (int k = 0; k < ec.gen_map.cols(); ++k)
                ec.gen_map.at(i, k) = gm[i][k].get<long>();
        }
        fam.explicit_collapse = std::move(ec);
    }
    if (j.contains("equations")) {
        auto info = validate_or_throw(fam.base);
        auto pres = HomologyPresentation::build(info.comb);
        for (const auto& eq : j.at("equations")) {
            CVec<double> w;
            const Json& co = eq.at("coefficients");
            if (int(co.size()) != 2 * pres.rank())
                throw ParseError("family: equation coefficients must interleave re,im");
            for (int i = 0; i < pres.rank(); ++i)
                w.push_back({number_from(co[2 * i]), number_from(co[2 * i + 1])});
            Vec2<double> k{0, 0};
            if (eq.contains("constant"))
                k = {number_from(eq.at("constant")[0]), number_from(eq.at("constant")[1])};
            fam.equations.push_back({w, k});
        }
    }
    validate_family(fam);
    return fam;
}

Json family_to_json(const Family& fam) {
    Json j = surface_to_json(fam.base);
    j["eps0"] = fam.eps0;
    Json sched = Json::object();
    for (size_t g = 0; g < fam.schedule.size(); ++g) {
        const auto& e = fam.schedule[g];
        const EdgeRef& e0 = fam.base.gluings[g][0];
        Vec2<double> base_v = fam.base.polygons[e0.poly][e0.edge];
        bool constant = e.beta.x == 0 && e.beta.y == 0 && e.gamma.x == 0 && e.gamma.y == 0 &&
                        e.alpha.x == base_v.x && e.alpha.y == base_v.y;
        if (constant) continue;
        sched[std::to_string(g)] = {{e.alpha.x, e.alpha.y},
                                    {e.beta.x, e.beta.y},
                                    {e.gamma.x, e.gamma.y}};
    }
    j["schedule"] = sched;
    if (fam.explicit_collapse) {
        Json c;
        c["limit"] = surface_to_json(fam.explicit_collapse->limit);
        Json gm = Json::array();
        for (int i = 0; i < fam.explicit_collapse->gen_map.rows(); ++i) {
            Json row = Json::array();
            for (int k = 0; k < fam.explicit_collapse->gen_map.cols(); ++k)
                row.push_back(fam.explicit_collapse->gen_map.at(i, k).get_si());
            gm.push_back(row);
        }
        c["gen_map"] = gm;
        j["collapse"] = c;
    }
    if (!fam.equations.empty()) {
        Json eqs = Json::array();
        for (const auto& [w, k] : fam.equations) {
            Json co = Json::array();
            for (const auto& z : w) {
                co.push_back(z.x);
                co.push_back(z.y);
            }
            eqs.push_back({{"coefficients", co}, {"constant", {k.x, k.y}}});
        }
        j["equations"] = eqs;
    }
    return j;
}

ProductModel<double> product_model_from_json(const Json& j) {
    if (!j.contains("components") || !j.contains("model"))
        throw ParseError("product file needs 'components' and 'model'");
    std::vector<PolygonSurface<double>> comps;
    for (const auto& c : j.at("components")) comps.push_back(surface_from_json(c));
    // ambient dimension: sum of the component ranks
    int ambient = 0;
    for (const auto& c : comps) {
        auto info = validate_or_throw(c);
        ambient += HomologyPresentation::build(info.comb).rank();
    }
    const Json& mj = j.at("model");
    CMat<double> rows;
    if (mj.contains("span")) {
        rows = model_rows_from_json<double>(mj.at("span"), ambient);
    } else if (mj.contains("equations")) {
        CMat<double> eq = model_rows_from_json<double>(mj.at("equations"), ambient);
        rows = nullspace(eq, 1e-12 * cmat_scale(eq));
    } else {
        throw ParseError("product model needs 'span' or 'equations'");
    }
    return make_product_model(std::move(comps), std::move(rows));
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError(std::string("invalid JSON in ") + path + ": " + e.what());
    }
    return j;
}

void save_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << j.dump(2) << "\n";
}

} // namespace flatgeom
