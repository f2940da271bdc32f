// Polygonal translation surfaces: validation, stratum data, GL+(2,R) action.
#pragma once

#include "flatgeom/errors.hpp"
#include "flatgeom/geometry.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace flatgeom {

struct EdgeRef {
    int poly = -1;
    int edge = -1;
    bool operator==(const EdgeRef& o) const { return poly == o.poly && edge == o.edge; }
    bool operator<(const EdgeRef& o) const {
        return poly != o.poly ? poly < o.poly : edge < o.edge;
    }
};

template <class R> struct PolygonSurface {
    std::vector<std::vector<Vec2<R>>> polygons;   // ccw edge vectors per polygon
    std::vector<std::array<EdgeRef, 2>> gluings;  // involutive perfect matching

    bool operator==(const PolygonSurface& o) const {
        return polygons == o.polygons && gluings == o.gluings;
    }
};

struct Corner {
    int poly = -1;
    int idx = -1;
    bool operator<(const Corner& o) const {
        return poly != o.poly ? poly < o.poly : idx < o.idx;
    }
    bool operator==(const Corner& o) const { return poly == o.poly && idx == o.idx; }
};

// Pure combinatorics of a glued polygon complex; scalar-independent.
struct Combinatorics {
    int num_polys = 0;
    int num_pairs = 0;
    std::vector<std::vector<int>> pair_of;   // [poly][edge] -> gluing pair
    std::vector<std::vector<int>> end_of;    // [poly][edge] -> 0/1 slot in pair
    std::vector<std::vector<int>> vclass_of; // [poly][corner] -> vertex class
    std::vector<std::vector<Corner>> vclasses;
    std::vector<int> comp_of_poly;
    int num_components = 1;

    EdgeRef partner(const EdgeRef& e, const std::vector<std::array<EdgeRef, 2>>& gluings) const {
        int p = pair_of[e.poly][e.edge];
        return gluings[p][1 - end_of[e.poly][e.edge]];
    }
};

struct ComponentStratum {
    int genus = 0;
    int num_marked = 0;
    std::vector<long> kappa; // sorted descending
};

template <class R> struct SurfaceInfo {
    Combinatorics comb;
    std::vector<double> vclass_angle;       // per vertex class
    std::vector<long> vclass_order;         // k with angle = 2pi(k+1)
    std::vector<ComponentStratum> components;
    R total_area2{};                        // twice the flat area

    double area() const { return to_double(total_area2) / 2.0; }
    R area2() const { return total_area2; }
    std::vector<long> kappa() const {
        std::vector<long> k = vclass_order;
        std::sort(k.rbegin(), k.rend());
        return k;
    }
    int genus() const {
        if (components.size() != 1) throw Error("genus(): surface is not connected");
        return components[0].genus;
    }
    int num_marked_points() const { return int(vclass_order.size()); }
};

struct CheckResult {
    std::string name;
    bool pass = true;
    std::string message;
};

template <class R> struct ValidationReport {
    bool pass = false;
    std::vector<CheckResult> checks;
    std::optional<SurfaceInfo<R>> info; // present iff pass

    std::string summary() const {
        std::string s;
        for (const auto& c : checks) {
            s += (c.pass ? "ok   " : "FAIL ");
            s += c.name;
            if (!c.message.empty()) s += ": " + c.message;
            s += "\n";
        }
        return s;
    }
};

namespace detail {

inline void add_check(std::vector<CheckResult>& cs, const std::string& name, bool ok,
                      const std::string& msg = "") {
    cs.push_back({name, ok, ok ? "" : msg});
}

template <class R> double length_scale(const PolygonSurface<R>& s) {
    double m = 0;
    for (const auto& poly : s.polygons)
        for (const auto& e : poly) {
            m = std::max(m, std::fabs(to_double(e.x)));
            m = std::max(m, std::fabs(to_double(e.y)));
        }
    return m > 0 ? m : 1.0;
}

} // namespace detail

// Full validation; on success the report carries cached derived data.
template <class R> ValidationReport<R> validate(const PolygonSurface<R>& s) {
    constexpr double kRelTol = 1e-9;
    ValidationReport<R> rep;
    auto& cs = rep.checks;
    const double scale = detail::length_scale(s);

    bool structural = !s.polygons.empty();
    detail::add_check(cs, "nonempty", structural, "surface has no polygons");

    for (size_t p = 0; p < s.polygons.size() && structural; ++p) {
        const auto& poly = s.polygons[p];
        if (poly.size() < 3) {
            detail::add_check(cs, "polygon_size", false,
                              "polygon " + std::to_string(p) + " has fewer than 3 edges");
            structural = false;
        }
    }
    if (!structural) return rep;

    // closure
    bool closure_ok = true;
    std::string closure_msg;
    for (size_t p = 0; p < s.polygons.size(); ++p) {
        Vec2<R> sum{R(0), R(0)};
        for (const auto& e : s.polygons[p]) sum += e;
        bool ok;
        if constexpr (ScalarTraits<R>::exact)
            ok = (sum.x == 0 && sum.y == 0);
        else
            ok = std::fabs(to_double(sum.x)) <= kRelTol * scale &&
                 std::fabs(to_double(sum.y)) <= kRelTol * scale;
        if (!ok) {
            closure_ok = false;
            closure_msg = "polygon " + std::to_string(p) + " does not close up";
            break;
        }
    }
    detail::add_check(cs, "closure", closure_ok, closure_msg);

    // embeddedness and orientation
    bool shape_ok = true;
    std::string shape_msg;
    for (size_t p = 0; p < s.polygons.size() && shape_ok; ++p) {
        if (!polygon_is_simple(s.polygons[p])) {
            shape_ok = false;
            shape_msg = "polygon " + std::to_string(p) + " is not embedded";
        } else if (sgn_of(polygon_area2(s.polygons[p])) <= 0) {
            shape_ok = false;
            shape_msg = "polygon " + std::to_string(p) + " is not positively oriented";
        }
    }
    detail::add_check(cs, "embedded", shape_ok, shape_msg);

    // gluing structure: perfect involutive matching with negated vectors
    bool glue_ok = true;
    std::string glue_msg;
    std::map<EdgeRef, int> seen;
    for (size_t g = 0; g < s.gluings.size() && glue_ok; ++g) {
        for (const EdgeRef& e : s.gluings[g]) {
            if (e.poly < 0 || e.poly >= int(s.polygons.size()) || e.edge < 0 ||
                e.edge >= int(s.polygons[e.poly].size())) {
                glue_ok = false;
                glue_msg = "gluing refers to a nonexistent edge";
                break;
            }
            if (seen.count(e)) {
                glue_ok = false;
                glue_msg = "edge glued more than once";
                break;
            }
            seen[e] = int(g);
        }
        if (glue_ok && s.gluings[g][0] == s.gluings[g][1]) {
            glue_ok = false;
            glue_msg = "edge glued to itself";
        }
    }
    if (glue_ok) {
        size_t total_edges = 0;
        for (const auto& poly : s.polygons) total_edges += poly.size();
        if (seen.size() != total_edges) {
            glue_ok = false;
            glue_msg = "unmatched edge: " + std::to_string(total_edges - seen.size()) +
                       " edge(s) not glued";
        }
    }
    if (glue_ok) {
        for (const auto& g : s.gluings) {
            Vec2<R> a = s.polygons[g[0].poly][g[0].edge];
            Vec2<R> b = s.polygons[g[1].poly][g[1].edge];
            Vec2<R> sum = a + b;
            bool ok;
            if constexpr (ScalarTraits<R>::exact)
                ok = (sum.x == 0 && sum.y == 0);
            else
                ok = std::fabs(to_double(sum.x)) <= kRelTol * scale &&
                     std::fabs(to_double(sum.y)) <= kRelTol * scale;
            if (!ok) {
                glue_ok = false;
                glue_msg = "glued edges are not translates (vectors do not negate)";
                break;
            }
        }
    }
    detail::add_check(cs, "gluing", glue_ok, glue_msg);

    if (!(closure_ok && shape_ok && glue_ok)) return rep;

    // combinatorics: pairs, vertex classes, components
    SurfaceInfo<R> info;
    Combinatorics& comb = info.comb;
    comb.num_polys = int(s.polygons.size());
    comb.num_pairs = int(s.gluings.size());
    comb.pair_of.resize(s.polygons.size());
    comb.end_of.resize(s.polygons.size());
    for (size_t p = 0; p < s.polygons.size(); ++p) {
        comb.pair_of[p].assign(s.polygons[p].size(), -1);
        comb.end_of[p].assign(s.polygons[p].size(), -1);
    }
    for (size_t g = 0; g < s.gluings.size(); ++g)
        for (int end = 0; end < 2; ++end) {
            const EdgeRef& e = s.gluings[g][end];
            comb.pair_of[e.poly][e.edge] = int(g);
            comb.end_of[e.poly][e.edge] = end;
        }

    // vertex classes by walking corners around each vertex
    comb.vclass_of.resize(s.polygons.size());
    for (size_t p = 0; p < s.polygons.size(); ++p)
        comb.vclass_of[p].assign(s.polygons[p].size(), -1);
    for (size_t p = 0; p < s.polygons.size(); ++p) {
        for (size_t i = 0; i < s.polygons[p].size(); ++i) {
            if (comb.vclass_of[p][i] >= 0) continue;
            int cls = int(comb.vclasses.size());
            comb.vclasses.push_back({});
            Corner c{int(p), int(i)};
            while (comb.vclass_of[c.poly][c.idx] < 0) {
                comb.vclass_of[c.poly][c.idx] = cls;
                comb.vclasses[cls].push_back(c);
                int n = int(s.polygons[c.poly].size());
                int prev = (c.idx + n - 1) % n;
                EdgeRef in{c.poly, prev};
                EdgeRef out = comb.partner(in, s.gluings);
                c = Corner{out.poly, out.edge};
            }
        }
    }

    // cone angles
    bool angle_ok = true;
    std::string angle_msg;
    const double two_pi = 6.283185307179586476925286766559;
    for (size_t v = 0; v < comb.vclasses.size(); ++v) {
        double total = 0;
        for (const Corner& c : comb.vclasses[v]) {
            int n = int(s.polygons[c.poly].size());
            int prev = (c.idx + n - 1) % n;
            total += corner_angle(s.polygons[c.poly][prev], s.polygons[c.poly][c.idx]);
        }
        double turns = total / two_pi;
        long k = std::lround(turns) - 1;
        if (k < 0 || std::fabs(turns - double(k + 1)) > kRelTol * double(k + 1)) {
            angle_ok = false;
            angle_msg = "vertex class " + std::to_string(v) +
                        " has cone angle " + std::to_string(turns) +
                        " turns (not a positive multiple of 2pi)";
            break;
        }
        info.vclass_angle.push_back(total);
        info.vclass_order.push_back(k);
    }
    detail::add_check(cs, "cone_angles", angle_ok, angle_msg);
    if (!angle_ok) return rep;

    // connected components of the polygon complex
    comb.comp_of_poly.assign(s.polygons.size(), -1);
    int ncomp = 0;
    for (size_t p0 = 0; p0 < s.polygons.size(); ++p0) {
        if (comb.comp_of_poly[p0] >= 0) continue;
        std::vector<int> stack{int(p0)};
        comb.comp_of_poly[p0] = ncomp;
        while (!stack.empty()) {
            int p = stack.back();
            stack.pop_back();
            for (size_t i = 0; i < s.polygons[p].size(); ++i) {
                EdgeRef q = comb.partner({p, int(i)}, s.gluings);
                if (comb.comp_of_poly[q.poly] < 0) {
                    comb.comp_of_poly[q.poly] = ncomp;
                    stack.push_back(q.poly);
                }
            }
        }
        ++ncomp;
    }
    comb.num_components = ncomp;

    // per-component stratum data; Euler characteristic fixes the genus
    bool stratum_ok = true;
    std::string stratum_msg;
    info.components.resize(ncomp);
    std::vector<int> edges_in(ncomp, 0), faces_in(ncomp, 0), verts_in(ncomp, 0);
    for (size_t p = 0; p < s.polygons.size(); ++p) faces_in[comb.comp_of_poly[p]]++;
    for (const auto& g : s.gluings) edges_in[comb.comp_of_poly[g[0].poly]]++;
    for (size_t v = 0; v < comb.vclasses.size(); ++v) {
        int comp = comb.comp_of_poly[comb.vclasses[v][0].poly];
        verts_in[comp]++;
        info.components[comp].kappa.push_back(info.vclass_order[v]);
    }
    for (int c = 0; c < ncomp && stratum_ok; ++c) {
        int chi = verts_in[c] - edges_in[c] + faces_in[c];
        if (chi % 2 != 0 || chi > 2) {
            stratum_ok = false;
            stratum_msg = "component " + std::to_string(c) + " has invalid Euler characteristic";
            break;
        }
        auto& comp = info.components[c];
        comp.genus = (2 - chi) / 2;
        comp.num_marked = verts_in[c];
        std::sort(comp.kappa.rbegin(), comp.kappa.rend());
        long ksum = 0;
        for (long k : comp.kappa) ksum += k;
        if (ksum != 2L * comp.genus - 2) {
            stratum_ok = false;
            stratum_msg = "component " + std::to_string(c) +
                          ": zero orders do not sum to 2g-2";
        }
    }
    detail::add_check(cs, "stratum", stratum_ok, stratum_msg);
    if (!stratum_ok) return rep;

    info.total_area2 = R(0);
    for (const auto& poly : s.polygons) info.total_area2 += polygon_area2(poly);

    rep.pass = true;
    rep.info = std::move(info);
    return rep;
}

// Validate and throw on failure; returns the cached derived data.
template <class R> SurfaceInfo<R> validate_or_throw(const PolygonSurface<R>& s) {
    auto rep = validate(s);
    if (!rep.pass) {
        std::string why;
        for (const auto& c : rep.checks)
            if (!c.pass) why += (why.empty() ? "" : "; ") + c.name + ": " + c.message;
        throw ValidationError("invalid surface: " + why);
    }
    return *rep.info;
}

template <class R> R area2(const PolygonSurface<R>& s) {
    R acc(0);
    for (const auto& poly : s.polygons) acc += polygon_area2(poly);
    return acc;
}

template <class R> double area(const PolygonSurface<R>& s) {
    return to_double(area2(s)) / 2.0;
}

// GL+(2,R) acting on the plane coordinates of every edge vector.
template <class R>
PolygonSurface<R> apply_matrix(const PolygonSurface<R>& s, const Mat2<R>& m) {
    if (sgn_of(m.det()) <= 0) throw ValidationError("apply_matrix: determinant must be positive");
    PolygonSurface<R> out = s;
    for (auto& poly : out.polygons)
        for (auto& e : poly) e = m.apply(e);
    return out;
}

// Marked-point-to-marked-point positions: vs[p][i] = start vertex of edge i.
template <class R>
std::vector<std::vector<Vec2<R>>> all_vertices(const PolygonSurface<R>& s) {
    std::vector<std::vector<Vec2<R>>> out;
    out.reserve(s.polygons.size());
    for (const auto& poly : s.polygons) out.push_back(polygon_vertices(poly));
    return out;
}

// Restriction of a multi-component surface to one connected component.
template <class R>
PolygonSurface<R> component_surface(const PolygonSurface<R>& s, const Combinatorics& comb,
                                    int comp) {
    PolygonSurface<R> out;
    std::vector<int> new_index(s.polygons.size(), -1);
    for (size_t p = 0; p < s.polygons.size(); ++p)
        if (comb.comp_of_poly[p] == comp) {
            new_index[p] = int(out.polygons.size());
            out.polygons.push_back(s.polygons[p]);
        }
    for (const auto& g : s.gluings)
        if (comb.comp_of_poly[g[0].poly] == comp)
            out.gluings.push_back({EdgeRef{new_index[g[0].poly], g[0].edge},
                                   EdgeRef{new_index[g[1].poly], g[1].edge}});
    return out;
}

} // namespace flatgeom
