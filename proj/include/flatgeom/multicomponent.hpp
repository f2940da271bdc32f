// Products of strata: multi-component models, the direct-sum prime
// criterion, prime factorization, and the rank/period conclusions that
// hold for prime models.
#pragma once

#include "flatgeom/linmodel.hpp"

namespace flatgeom {

template <class R> struct ProductComponent {
    PolygonSurface<R> surface;
    SurfaceInfo<R> info;
    HomologyPresentation pres;
};

template <class R> ProductComponent<R> make_component(PolygonSurface<R> s) {
    ProductComponent<R> c{std::move(s), {}, {}};
    c.info = validate_or_throw(c.surface);
    if (c.info.comb.num_components != 1)
        throw ValidationError("product component must be connected");
    c.pres = homology_basis(c.info);
    return c;
}

template <class R> struct ProductModel {
    std::vector<ProductComponent<R>> components;
    CMat<R> span; // rows spanning T inside the direct sum of period spaces
    double tol = 1e-9;

    int num_components() const { return int(components.size()); }
    int total_rank() const {
        int n = 0;
        for (const auto& c : components) n += c.pres.rank();
        return n;
    }
    std::vector<int> offsets() const {
        std::vector<int> off{0};
        for (const auto& c : components) off.push_back(off.back() + c.pres.rank());
        return off;
    }
    int dim() const { return rank_of(span, tol * cmat_scale(span)); }
};

template <class R>
ProductModel<R> make_product_model(std::vector<PolygonSurface<R>> surfaces, CMat<R> span) {
    ProductModel<R> m;
    for (auto& s : surfaces) m.components.push_back(make_component(std::move(s)));
    m.span = std::move(span);
    const int n = m.total_rank();
    for (const auto& row : m.span)
        if (int(row.size()) != n)
            throw ValidationError("product model span has the wrong dimension");
    if (int(m.span.size()) > 0) {
        // the tuple of period vectors must lie in T
        CVec<R> omega;
        for (const auto& c : m.components)
            for (const auto& p : period_coordinates(c.surface, c.pres)) omega.push_back(p);
        LocalModel<R> t = LocalModel<R>::from_span(n, m.span);
        if (!t.contains(omega))
            throw ValidationError("product model: the base period tuple is not in T");
    }
    return m;
}

namespace multi_detail {

// dim(T cap H(S)) where H(S) is the coordinate block of the components in S
template <class R>
int dim_intersection(const ProductModel<R>& m, const std::vector<char>& in_S) {
    auto off = m.offsets();
    // coefficient constraints: rows restricted to the complement must vanish
    CMat<R> constraint; // (#complement coords) x (#span rows)
    for (int c = 0; c < m.num_components(); ++c) {
        if (in_S[c]) continue;
        for (int j = off[c]; j < off[c + 1]; ++j) {
            CVec<R> row;
            for (const auto& s : m.span) row.push_back(s[j]);
            constraint.push_back(std::move(row));
        }
    }
    double tol = m.tol * cmat_scale(m.span);
    int nullity = constraint.empty() ? int(m.span.size())
                                     : int(nullspace(constraint, tol).size());
    int dependent = int(m.span.size()) - m.dim();
    return nullity - dependent;
}

} // namespace multi_detail

struct PrimeWitness {
    bool prime = true;
    std::vector<char> side; // a splitting bipartition when not prime
};

// Not prime iff some bipartition of the components realizes
// T = (T cap H(S)) + (T cap H(S^c)) with the dimensions adding up.
template <class R> PrimeWitness is_prime(const ProductModel<R>& m) {
    const int k = m.num_components();
    if (k < 2) throw ValidationError("is_prime: at least two components required");
    const int dimT = m.dim();
    PrimeWitness w;
    for (unsigned mask = 1; mask < (1u << (k - 1)); ++mask) {
        std::vector<char> side(k, 0);
        for (int c = 1; c < k; ++c) side[c] = (mask >> (c - 1)) & 1;
        std::vector<char> other(k);
        for (int c = 0; c < k; ++c) other[c] = !side[c];
        int da = multi_detail::dim_intersection(m, side);
        int db = multi_detail::dim_intersection(m, other);
        if (da + db == dimT) {
            w.prime = false;
            w.side = side;
            return w;
        }
    }
    return w;
}

// Restriction of the model to a sub-collection of components: the span of
// T cap H(S), written in the S coordinates.
template <class R>
ProductModel<R> restrict_model(const ProductModel<R>& m, const std::vector<char>& in_S) {
    auto off = m.offsets();
    CMat<R> constraint;
    for (int c = 0; c < m.num_components(); ++c) {
        if (in_S[c]) continue;
        for (int j = off[c]; j < off[c + 1]; ++j) {
            CVec<R> row;
            for (const auto& s : m.span) row.push_back(s[j]);
            constraint.push_back(std::move(row));
        }
    }
    double tol = m.tol * cmat_scale(m.span);
    CMat<R> coeffs = constraint.empty()
                         ? CMat<R>{}
                         : nullspace(constraint, tol);
    if (constraint.empty()) {
        coeffs.assign(m.span.size(), CVec<R>(m.span.size(), Vec2<R>{R(0), R(0)}));
        for (size_t i = 0; i < m.span.size(); ++i) coeffs[i][i] = Vec2<R>{R(1), R(0)};
    }
    ProductModel<R> out;
    for (int c = 0; c < m.num_components(); ++c)
        if (in_S[c]) out.components.push_back(m.components[c]);
    for (const auto& a : coeffs) {
        CVec<R> full(m.total_rank(), Vec2<R>{R(0), R(0)});
        for (size_t i = 0; i < m.span.size(); ++i)
            for (int j = 0; j < m.total_rank(); ++j) full[j] += a[i].cmul(m.span[i][j]);
        CVec<R> restricted;
        for (int c = 0; c < m.num_components(); ++c)
            if (in_S[c])
                for (int j = off[c]; j < off[c + 1]; ++j) restricted.push_back(full[j]);
        out.span.push_back(std::move(restricted));
    }
    out.tol = m.tol;
    return out;
}

struct FactorizationEntry {
    std::vector<int> members; // global component indices
};

// Recursive factorization into prime blocks. The block structure is
// unique; the recursion order does not matter.
template <class R>
std::vector<FactorizationEntry> prime_factorization(const ProductModel<R>& m,
                                                    std::vector<int> labels = {}) {
    if (labels.empty())
        for (int c = 0; c < m.num_components(); ++c) labels.push_back(c);
    if (m.num_components() == 1) return {FactorizationEntry{labels}};
    PrimeWitness w = is_prime(m);
    if (w.prime) return {FactorizationEntry{labels}};
    std::vector<char> other(m.num_components());
    for (int c = 0; c < m.num_components(); ++c) other[c] = !w.side[c];
    auto pick_labels = [&](const std::vector<char>& side) {
        std::vector<int> out;
        for (int c = 0; c < m.num_components(); ++c)
            if (side[c]) out.push_back(labels[c]);
        return out;
    };
    auto left = prime_factorization(restrict_model(m, w.side), pick_labels(w.side));
    auto right = prime_factorization(restrict_model(m, other), pick_labels(other));
    left.insert(left.end(), right.begin(), right.end());
    std::sort(left.begin(), left.end(),
              [](const FactorizationEntry& a, const FactorizationEntry& b) {
                  return a.members < b.members;
              });
    return left;
}

// ---------------------------------------------------------------------
// Conclusions that hold when the model is the tangent space of a prime
// invariant subvariety: absolute periods of one component determine all
// others (every E_i = 0), and all components have the same rank.

struct PrimeConclusions {
    std::vector<int> kernel_dims;  // dim E_i per component
    bool periods_determined = false; // statement: all E_i = 0
    std::vector<double> ranks;     // per component, (dim_C pi_i p(T)) / 2
    bool ranks_equal = false;
    bool pass = false;
};

template <class R> PrimeConclusions check_prime_conclusions(const ProductModel<R>& m) {
    if (!is_prime(m).prime)
        throw ValidationError("check_prime_conclusions: model is not prime");
    auto off = m.offsets();
    const int k = m.num_components();

    // p(T): project every span row to the absolute part, component-wise
    CMat<R> proj;
    std::vector<int> abs_off{0};
    for (int c = 0; c < k; ++c)
        abs_off.push_back(abs_off.back() + m.components[c].pres.absolute_rank());
    for (const auto& row : m.span) {
        CVec<R> pr;
        for (int c = 0; c < k; ++c) {
            CVec<R> part(row.begin() + off[c], row.begin() + off[c + 1]);
            auto pc = absolute_projection(m.components[c].pres, CMat<R>{part});
            for (const auto& z : pc[0]) pr.push_back(z);
        }
        proj.push_back(std::move(pr));
    }
    double tol = m.tol * std::max(1.0, cmat_scale(proj));
    int dim_pT = rank_of(proj, tol);

    PrimeConclusions out;
    for (int c = 0; c < k; ++c) {
        // E_c: vectors of p(T) vanishing on component c
        CMat<R> constraint;
        for (int j = abs_off[c]; j < abs_off[c + 1]; ++j) {
            CVec<R> row;
            for (const auto& s : proj) row.push_back(s[j]);
            constraint.push_back(std::move(row));
        }
        int nullity = int(nullspace(constraint, tol).size());
        int dependent = int(proj.size()) - dim_pT;
        out.kernel_dims.push_back(nullity - dependent);

        // rank_c: half the dimension of the projection to component c
        CMat<R> pi_c;
        for (const auto& s : proj)
            pi_c.push_back(CVec<R>(s.begin() + abs_off[c], s.begin() + abs_off[c + 1]));
        out.ranks.push_back(rank_of(pi_c, tol) / 2.0);
    }
    out.periods_determined = true;
    for (int d : out.kernel_dims)
        if (d != 0) out.periods_determined = false;
    out.ranks_equal = true;
    for (double r : out.ranks)
        if (std::fabs(r - out.ranks[0]) > 1e-9) out.ranks_equal = false;
    out.pass = out.periods_determined && out.ranks_equal;
    return out;
}

// ---------------------------------------------------------------------
// convenience constructors

// the diagonal embedding of one stratum in the k-fold product
template <class R>
ProductModel<R> diagonal_model(const PolygonSurface<R>& s, int copies = 2) {
    auto comp = make_component(s);
    int r = comp.pres.rank();
    CMat<R> span;
    for (int j = 0; j < r; ++j) {
        CVec<R> row(r * copies, Vec2<R>{R(0), R(0)});
        for (int c = 0; c < copies; ++c) row[c * r + j] = Vec2<R>{R(1), R(0)};
        span.push_back(std::move(row));
    }
    std::vector<PolygonSurface<R>> surfaces(copies, s);
    return make_product_model(std::move(surfaces), std::move(span));
}

// pairs ((X, omega), (X, lambda omega)) for a real scale factor lambda
inline ProductModel<double> scaled_pair_model(const PolygonSurface<double>& s, double lambda) {
    auto comp = make_component(s);
    int r = comp.pres.rank();
    CMat<double> span;
    for (int j = 0; j < r; ++j) {
        CVec<double> row(2 * r, Vec2<double>{0, 0});
        row[j] = {1, 0};
        row[r + j] = {lambda, 0};
        span.push_back(std::move(row));
    }
    auto scaled = apply_matrix(s, Mat2<double>{lambda, 0, 0, lambda});
    return make_product_model<double>({s, scaled}, std::move(span));
}

// outer product of two models on disjoint component sets
template <class R>
ProductModel<R> product_of(const ProductModel<R>& a, const ProductModel<R>& b) {
    ProductModel<R> out;
    out.components = a.components;
    for (const auto& c : b.components) out.components.push_back(c);
    const int na = a.total_rank(), nb = b.total_rank();
    for (const auto& row : a.span) {
        CVec<R> full = row;
        full.resize(na + nb, Vec2<R>{R(0), R(0)});
        out.span.push_back(std::move(full));
    }
    for (const auto& row : b.span) {
        CVec<R> full(na, Vec2<R>{R(0), R(0)});
        for (const auto& z : row) full.push_back(z);
        out.span.push_back(std::move(full));
    }
    out.tol = std::min(a.tol, b.tol);
    return out;
}

// transport T by a GL+(2,R) matrix acting on one component
inline ProductModel<double> transport_component(const ProductModel<double>& m, int comp,
                                                const Mat2<double>& g) {
    ProductModel<double> out = m;
    out.components[comp] = make_component(apply_matrix(m.components[comp].surface, g));
    auto off = m.offsets();
    for (auto& row : out.span)
        for (int j = off[comp]; j < off[comp + 1]; ++j) {
            Vec2<double> v = row[j]; // acts on (Re, Im) of the coordinate
            row[j] = g.apply(v);
        }
    return out;
}

} // namespace flatgeom
