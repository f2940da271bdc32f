// One-parameter degenerating families of translation surfaces: per-edge
// period schedules alpha + beta*eps + gamma/eps, collapse maps onto the
// limit surface, vanishing cycles, and limit-equation checks.
#pragma once

#include "flatgeom/linmodel.hpp"

#include <optional>

namespace flatgeom {

struct EdgeSchedule {
    Vec2<double> alpha{0, 0}, beta{0, 0}, gamma{0, 0};

    Vec2<double> at(double eps) const {
        return {alpha.x + beta.x * eps + gamma.x / eps,
                alpha.y + beta.y * eps + gamma.y / eps};
    }
    bool divergent() const { return gamma.x != 0 || gamma.y != 0; }
    bool vanishing() const {
        return alpha.x == 0 && alpha.y == 0 && !divergent();
    }
};

// Explicit collapse payload for families whose pushforward cannot be read
// off from vanishing edges (divergent schedules).
struct ExplicitCollapse {
    PolygonSurface<double> limit;
    IntMat gen_map; // limit-pair chain per base pair: E_limit x E_base
};

struct Family {
    PolygonSurface<double> base; // the surface at eps0
    double eps0 = 0.1;
    std::vector<EdgeSchedule> schedule; // one per gluing pair (slot-0 direction)
    std::optional<ExplicitCollapse> explicit_collapse;

    // equations carried with the family file: (class coefficients, constant)
    std::vector<std::pair<CVec<double>, Vec2<double>>> equations;
};

// Throws unless polygon closure holds identically in the coefficients and
// the schedule at eps0 reproduces the base surface.
void validate_family(const Family& fam);

PolygonSurface<double> evaluate_family(const Family& fam, double eps);

struct CollapseData {
    bool explicit_mode = false;
    PolygonSurface<double> limit;
    SurfaceInfo<double> limit_info;
    HomologyPresentation pres_base, pres_limit;
    IntMat gen_map;  // E_limit x E_base
    IntMat f_star;   // rank_limit x rank_base (surjective)
    IntMat section;  // rank_base x rank_limit, f_star * section = id
    IntMat vanishing;   // basis of V = ker f_star, rank_base x dim V
    IntMat annihilator; // basis covectors of Ann(V), rank_base x dim Ann(V)

    int dim_V() const { return vanishing.cols(); }
    int dim_Ann() const { return annihilator.cols(); }

    IntVec pushforward(const IntVec& base_class) const { return f_star.apply(base_class); }
    IntVec pullback_class(const IntVec& limit_class) const { return section.apply(limit_class); }
    // f^* on covectors: phi -> phi o f_star
    CVec<double> pullback(const CVec<double>& limit_covector) const;
};

// Collapse by deleting vanishing edges and fully collapsed polygons.
// Requires every gamma to vanish; throws DivergentEdge otherwise.
CollapseData auto_collapse(const Family& fam);

// auto_collapse, or the family's explicit data when present
CollapseData collapse(const Family& fam);

struct EquationReport {
    Vec2<double> family_value{0, 0};  // max |w . periods - k| over the eps grid
    double family_residual = 0;
    double limit_residual = 0;
    bool limit_satisfied = false;
};

// Push each equation forward along f_star and evaluate it on the limit.
std::vector<EquationReport> limit_equation_check(
    const Family& fam, const CollapseData& cd,
    const std::vector<std::pair<CVec<double>, Vec2<double>>>& equations,
    const std::vector<double>& eps_grid);

struct ConvergenceRow {
    int basis_class = 0;
    std::vector<double> residual; // per grid point
    double slope = 0;             // log-log fit
    bool constant = false;        // residuals at rounding level
};

struct ConvergenceReport {
    std::vector<double> eps_grid;
    std::vector<ConvergenceRow> rows;
    double min_slope = 0; // over non-constant rows
};

// |period(delta, eps) - period(f_star delta, limit)| for basis classes.
// In explicit mode only the section images of the limit basis are checked
// (other classes may diverge by design).
ConvergenceReport convergence_report(const Family& fam, const CollapseData& cd,
                                     const std::vector<double>& eps_grid);

struct XiOptions {
    double max_norm_rel = 0.25; // relative to the shortest limit edge
};

struct XiReport {
    std::vector<double> eps_grid;
    std::vector<double> residual;
    double slope = 0;
    bool converged = false;
};

// Numerical check of the locally-constant Ann(V) statement: the periods of
// family(eps) + xi_n converge to limit + xi when xi_n -> xi inside Ann(V).
XiReport xi_perturbation_test(const Family& fam, const CollapseData& cd,
                              const CVec<double>& xi,
                              const std::vector<CVec<double>>& xi_sequence,
                              const std::vector<double>& eps_grid,
                              const XiOptions& opt = {});

// ---------------------------------------------------------------------
// Built-in families

// A slit between two square tori that closes up as eps -> 0; the limit is
// a pair of tori with the slit collapsed to a marked point.
Family family_slit_closing(double eps0 = 0.25);

// A torus with a small square bubble whose polygon collapses entirely.
Family family_collapsing_polygon(double eps0 = 0.1);

// A shear family with no vanishing edges: the collapse is the identity.
Family family_shear(double eps0 = 0.5);

// The discontinuity example: a torus with two tall thin vertical cylinders
// whose crossing periods x = 1/eps and y = x + (d - c) diverge while the
// relation y - x = d - c holds identically. Comes with explicit collapse
// data (x and y push forward to zero) and its defining equation.
Family cautionary_family(const Vec2<double>& c, const Vec2<double>& d, double eps0 = 0.1,
                         double t = 0.25);

inline Family cautionary_family(double c, double d) {
    return cautionary_family(Vec2<double>{c, 0}, Vec2<double>{d, 0});
}

} // namespace flatgeom
