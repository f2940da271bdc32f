// Local linear models of invariant subvarieties: a subspace T of period
// space together with M-parallelism of cylinders, the linear systems that
// constrain height deformations, and twist/stretch tangent directions.
#pragma once

#include "flatgeom/cylinders.hpp"
#include "flatgeom/linalg.hpp"

#include <Eigen/Dense>

namespace flatgeom {

template <class R> struct LocalModel {
    int ambient = 0;      // dimension of period space, 2g + n - 1
    CMat<R> span;         // spanning vectors of T, as rows
    double tol = 1e-9;    // float-mode residual threshold

    int dim() const { return rank_of(span, tol * cmat_scale(span)); }

    static LocalModel full(int ambient_dim) {
        LocalModel m;
        m.ambient = ambient_dim;
        m.span.assign(ambient_dim, CVec<R>(ambient_dim, Vec2<R>{R(0), R(0)}));
        for (int i = 0; i < ambient_dim; ++i) m.span[i][i] = Vec2<R>{R(1), R(0)};
        return m;
    }

    static LocalModel from_span(int ambient_dim, CMat<R> rows) {
        LocalModel m;
        m.ambient = ambient_dim;
        m.span = std::move(rows);
        for (const auto& row : m.span)
            if (int(row.size()) != ambient_dim)
                throw ValidationError("model span vector has the wrong dimension");
        return m;
    }

    // T = {v : sum_i w_i v_i = 0 for every equation w}
    static LocalModel from_equations(int ambient_dim, const CMat<R>& eq_rows) {
        for (const auto& row : eq_rows)
            if (int(row.size()) != ambient_dim)
                throw ValidationError("model equation has the wrong dimension");
        LocalModel m;
        m.ambient = ambient_dim;
        CMat<R> w = eq_rows;
        m.span = nullspace(w, 1e-12 * cmat_scale(w));
        return m;
    }

    // least-squares membership residual (exact rank test in rational mode)
    double membership_residual(const CVec<R>& v) const {
        if constexpr (ScalarTraits<R>::exact) {
            CMat<R> stacked = span;
            stacked.push_back(v);
            return rank_of(stacked, 0) == rank_of(span, 0) ? 0.0 : 1.0;
        } else {
            const int n = ambient;
            Eigen::MatrixXcd S(n, int(span.size()));
            for (int j = 0; j < int(span.size()); ++j)
                for (int i = 0; i < n; ++i)
                    S(i, j) = std::complex<double>(to_double(span[j][i].x),
                                                   to_double(span[j][i].y));
            Eigen::VectorXcd b(n);
            for (int i = 0; i < n; ++i)
                b(i) = std::complex<double>(to_double(v[i].x), to_double(v[i].y));
            double bn = b.norm();
            if (bn == 0) return 0.0;
            Eigen::VectorXcd coef = S.colPivHouseholderQr().solve(b);
            return (S * coef - b).norm() / bn;
        }
    }

    bool contains(const CVec<R>& v) const { return membership_residual(v) <= tol; }

    // does the covector w vanish on all of T?
    bool annihilates(const CVec<R>& w) const {
        double s = cvec_mag(w);
        for (const auto& row : span) {
            Vec2<R> val = cpair(w, row);
            if constexpr (ScalarTraits<R>::exact) {
                if (!(val.x == 0 && val.y == 0)) return false;
            } else {
                double rowmag = cvec_mag(row);
                if (cmag(val) > tol * std::max(1.0, s * rowmag)) return false;
            }
        }
        return true;
    }

    // annihilator covectors of T, as rows
    CMat<R> annihilator() const {
        CMat<R> w = span;
        return nullspace(w, tol * cmat_scale(w));
    }
};

// The model's base point: the surface's period coordinate vector.
template <class R>
CVec<R> period_vector(const PolygonSurface<R>& s, const HomologyPresentation& pres) {
    CVec<R> v;
    for (const auto& p : period_coordinates(s, pres)) v.push_back(p);
    return v;
}

// The surface whose period coordinates differ from s by the tangent
// vector: every edge period is shifted by the value on its class. Polygon
// closure is preserved because tangent vectors kill the relations.
template <class R>
PolygonSurface<R> deform_periods(const PolygonSurface<R>& s, const HomologyPresentation& pres,
                                 const CVec<R>& tangent) {
    PolygonSurface<R> out = s;
    for (size_t g = 0; g < s.gluings.size(); ++g) {
        IntVec unit(s.gluings.size());
        unit[g] = 1;
        IntVec cls = pres.class_of_chain(unit);
        Vec2<R> shift{R(0), R(0)};
        for (int k = 0; k < pres.rank(); ++k)
            if (cls[k] != 0) shift += tangent[k] * ScalarTraits<R>::from_int(cls[k]);
        const EdgeRef& e0 = s.gluings[g][0];
        const EdgeRef& e1 = s.gluings[g][1];
        out.polygons[e0.poly][e0.edge] += shift;
        out.polygons[e1.poly][e1.edge] -= shift;
    }
    return out;
}

// Restriction of T to the absolute cycle subspace: the image p(T),
// expressed on the absolute cycle basis. Returns the spanning rows.
template <class R>
CMat<R> absolute_projection(const HomologyPresentation& pres, const CMat<R>& span_rows) {
    const IntMat& abs = pres.absolute_cycle_basis();
    CMat<R> out;
    for (const auto& row : span_rows) {
        if (int(row.size()) != pres.rank())
            throw ValidationError("absolute_projection: covector has the wrong dimension");
        CVec<R> pr(abs.cols(), Vec2<R>{R(0), R(0)});
        for (int j = 0; j < abs.cols(); ++j)
            for (int i = 0; i < pres.rank(); ++i)
                if (abs.at(i, j) != 0)
                    pr[j] += row[i] * ScalarTraits<R>::from_int(abs.at(i, j));
        out.push_back(std::move(pr));
    }
    return out;
}

// ---------------------------------------------------------------------
// M-parallelism

template <class R> struct ParallelClasses {
    std::vector<std::vector<int>> members; // cylinder indices, each sorted
    std::vector<std::vector<R>> ratio;     // ratio to the first member
    std::vector<int> class_of;             // cylinder -> class
};

template <class R> CVec<R> int_covector(const IntVec& v) {
    CVec<R> out;
    out.reserve(v.size());
    for (const Int& z : v) out.push_back(Vec2<R>{ScalarTraits<R>::from_int(z), R(0)});
    return out;
}

// C_i ~ C_j iff gamma_i - c gamma_j annihilates T, with c the ratio of the
// (consistently oriented, hence positive) core periods.
template <class R>
ParallelClasses<R> m_parallel_classes(const LocalModel<R>& model, const CylinderSet<R>& cs) {
    const int n = int(cs.cylinders.size());
    auto pair_test = [&](int i, int j, R* ratio_out) {
        const auto& ci = cs.cylinders[i];
        const auto& cj = cs.cylinders[j];
        if (sgn_of(ci.circumference) <= 0 || sgn_of(cj.circumference) <= 0)
            throw Error("cylinder with nonpositive core period");
        R c = R(ci.circumference / cj.circumference);
        CVec<R> w(model.ambient, Vec2<R>{R(0), R(0)});
        for (int k = 0; k < model.ambient; ++k) {
            R wi = ScalarTraits<R>::from_int(ci.core_class[k]);
            R wj = ScalarTraits<R>::from_int(cj.core_class[k]);
            w[k] = Vec2<R>{R(wi - c * wj), R(0)};
        }
        if (ratio_out) *ratio_out = c;
        return model.annihilates(w);
    };

    std::vector<std::vector<char>> rel(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i) {
        rel[i][i] = 1;
        for (int j = i + 1; j < n; ++j) {
            bool p = pair_test(i, j, nullptr);
            bool q = pair_test(j, i, nullptr);
            if (p != q) throw Error("M-parallelism is not symmetric at tolerance");
            rel[i][j] = rel[j][i] = p;
        }
    }
    // transitivity must hold for a genuine linear model
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (rel[i][j] && rel[j][k] && !rel[i][k])
                    throw Error("M-parallelism is not transitive at tolerance");

    ParallelClasses<R> out;
    out.class_of.assign(n, -1);
    for (int i = 0; i < n; ++i) {
        if (out.class_of[i] >= 0) continue;
        int cls = int(out.members.size());
        out.members.push_back({});
        out.ratio.push_back({});
        for (int j = i; j < n; ++j) {
            if (out.class_of[j] >= 0 || !rel[i][j]) continue;
            out.class_of[j] = cls;
            out.members[cls].push_back(j);
            R r;
            pair_test(j, i, &r);
            out.ratio[cls].push_back(r);
        }
    }
    return out;
}

// ---------------------------------------------------------------------
// Height systems (which combinations of the gamma_i^* stay tangent)

template <class R> struct HeightSystem {
    std::vector<std::vector<R>> equations; // RREF rows on R^n
    std::vector<std::vector<R>> tangent;   // basis of the solution space, rows
    bool current_satisfies = false;
    double residual = 0; // of the current heights
};

namespace linmodel_detail {

// real RREF via the complex kernel
template <class R>
std::vector<std::vector<R>> real_rref(std::vector<std::vector<R>> rows, double tol,
                                      std::vector<std::vector<R>>* null_rows) {
    CMat<R> m;
    for (const auto& r : rows) {
        CVec<R> cr;
        for (const auto& x : r) cr.push_back(Vec2<R>{x, R(0)});
        m.push_back(std::move(cr));
    }
    auto piv = rref(m, tol);
    std::vector<std::vector<R>> out;
    for (size_t i = 0; i < piv.size(); ++i) {
        std::vector<R> r;
        for (const auto& z : m[i]) r.push_back(z.x);
        out.push_back(std::move(r));
    }
    if (null_rows) {
        null_rows->clear();
        for (const auto& nv : nullspace(m, tol)) {
            std::vector<R> r;
            for (const auto& z : nv) r.push_back(z.x);
            null_rows->push_back(std::move(r));
        }
    }
    return out;
}

} // namespace linmodel_detail

// {h in R^n : sum_i h_i gamma_i^* in T} for the cylinders of one
// M-parallel class, as an RREF equation system plus a solution basis.
// The Cylinder Deformation Theorem makes the current heights a solution
// whenever T really is tangent to an invariant subvariety.
template <class R>
HeightSystem<R> height_equations(const LocalModel<R>& model, const CylinderSet<R>& cs,
                                 const std::vector<int>& members) {
    const int n = int(members.size());
    // D: ambient x n, columns are the duals
    CMat<R> ann = model.annihilator(); // rows w with w(T) = 0
    // rows of (W D): each annihilator row applied to each dual column
    std::vector<std::vector<R>> real_rows;
    for (const auto& w : ann) {
        std::vector<R> re(n), im(n);
        for (int j = 0; j < n; ++j) {
            Vec2<R> val{R(0), R(0)};
            const IntVec& dual = cs.cylinders[members[j]].dual;
            for (int i = 0; i < model.ambient; ++i)
                if (dual[i] != 0) val += w[i] * ScalarTraits<R>::from_int(dual[i]);
            re[j] = val.x;
            im[j] = val.y;
        }
        real_rows.push_back(std::move(re));
        real_rows.push_back(std::move(im));
    }

    HeightSystem<R> sys;
    double scale = 1.0;
    for (const auto& r : real_rows)
        for (const auto& x : r) scale = std::max(scale, std::fabs(to_double(x)));
    sys.equations =
        linmodel_detail::real_rref<R>(real_rows, model.tol * scale, &sys.tangent);
    if (sys.equations.empty()) {
        // no constraints: the whole R^n, with the standard basis
        sys.tangent.assign(n, std::vector<R>(n, R(0)));
        for (int i = 0; i < n; ++i) sys.tangent[i][i] = R(1);
    }

    // current heights
    double res = 0;
    for (const auto& eq : sys.equations) {
        double acc = 0;
        double eqscale = 1.0;
        for (int j = 0; j < n; ++j) {
            acc += to_double(eq[j]) * cs.cylinders[members[j]].ht;
            eqscale = std::max(eqscale, std::fabs(to_double(eq[j])));
        }
        res = std::max(res, std::fabs(acc) / eqscale);
    }
    sys.residual = res;
    sys.current_satisfies = res <= 1e-9 * std::max(1.0, cs.dir_norm);
    return sys;
}

// sum_i h_i gamma_i^*: the twist/stretch tangent direction of a class.
// Throws if the heights violate the class's height system or if the
// resulting vector fails the T-membership check.
template <class R>
CVec<R> cdt_direction(const LocalModel<R>& model, const CylinderSet<R>& cs,
                      const std::vector<int>& members, const std::vector<double>& heights,
                      double* residual_out = nullptr) {
    const int n = int(members.size());
    HeightSystem<R> sys = height_equations(model, cs, members);
    for (const auto& eq : sys.equations) {
        double acc = 0, scale = 1.0;
        for (int j = 0; j < n; ++j) {
            acc += to_double(eq[j]) * heights[j];
            scale = std::max(scale, std::fabs(to_double(eq[j])) * std::fabs(heights[j]));
        }
        if (std::fabs(acc) > 1e-9 * scale)
            throw ValidationError("heights violate the class height equations");
    }
    CVec<R> dir(model.ambient, Vec2<R>{R(0), R(0)});
    for (int j = 0; j < n; ++j) {
        const IntVec& dual = cs.cylinders[members[j]].dual;
        R h = ScalarTraits<R>::from_double(heights[j]);
        for (int i = 0; i < model.ambient; ++i)
            if (dual[i] != 0)
                dir[i] += Vec2<R>{R(ScalarTraits<R>::from_int(dual[i]) * h), R(0)};
    }
    double res = model.membership_residual(dir);
    if (residual_out) *residual_out = res;
    bool zero = true;
    for (const auto& z : dir)
        if (!(to_double(z.x) == 0 && to_double(z.y) == 0)) zero = false;
    if (!zero && res > 1e-9)
        throw ValidationError("cdt direction is not in the model tangent space");
    return dir;
}

} // namespace flatgeom
