// Relative homology H_1(X, Sigma; Z) of a glued polygon complex, presented
// by one generator per gluing pair and one relation per polygon. Sigma is
// the set of all vertex classes. The basis comes from a Smith normal form
// of the relation matrix, so it is deterministic and exact.
#pragma once

#include "flatgeom/intmat.hpp"
#include "flatgeom/surface.hpp"

namespace flatgeom {

// Relation matrix of the complex: one column per polygon, rows indexed by
// gluing pairs; entry = signed multiplicity in the ccw boundary word.
IntMat polygon_relations(const Combinatorics& comb);

class HomologyPresentation {
  public:
    // Chains are integer vectors indexed by gluing pairs; the canonical
    // direction of generator g is the direction of gluings[g][0].
    static HomologyPresentation build(const Combinatorics& comb);

    int num_generators() const { return E_; }
    int num_faces() const { return F_; }
    int num_vertex_classes() const { return V_; }
    int rank() const { return rank_; }
    int absolute_rank() const { return abs_basis_.cols(); }

    const IntMat& relations() const { return relations_; } // E x F
    const IntMat& boundary() const { return boundary_; }   // V x E

    // coordinates of a chain in the homology basis
    IntVec class_of_chain(const IntVec& chain) const;
    // a representative chain for basis coordinates
    IntVec chain_of_class(const IntVec& cls) const;
    // boundary of a class as a vertex-class vector
    IntVec boundary_of_class(const IntVec& cls) const;
    bool is_absolute(const IntVec& cls) const;

    // basis of the absolute cycle subspace, columns in basis coordinates
    const IntMat& absolute_cycle_basis() const { return abs_basis_; }

  private:
    int E_ = 0, F_ = 0, V_ = 0, rank_ = 0;
    IntMat relations_;
    IntMat boundary_;
    Smith snf_;       // of relations_
    IntMat abs_basis_;
};

// Public entry point per the module contract: requires a connected surface.
template <class R>
HomologyPresentation homology_basis(const SurfaceInfo<R>& info) {
    if (info.comb.num_components != 1)
        throw ValidationError("homology_basis: surface is disconnected; split components first");
    return HomologyPresentation::build(info.comb);
}

// Period of a chain of gluing-pair generators.
template <class R>
Vec2<R> period_of_chain(const PolygonSurface<R>& s, const IntVec& chain) {
    Vec2<R> acc{R(0), R(0)};
    for (size_t g = 0; g < s.gluings.size(); ++g) {
        if (chain[g] == 0) continue;
        const EdgeRef& e = s.gluings[g][0];
        Vec2<R> v = s.polygons[e.poly][e.edge];
        acc += v * ScalarTraits<R>::from_int(chain[g]);
    }
    return acc;
}

template <class R>
Vec2<R> period(const PolygonSurface<R>& s, const HomologyPresentation& h, const IntVec& cls) {
    return period_of_chain(s, h.chain_of_class(cls));
}

// Periods of all basis classes, the surface's point in period coordinates.
template <class R>
std::vector<Vec2<R>> period_coordinates(const PolygonSurface<R>& s,
                                        const HomologyPresentation& h) {
    std::vector<Vec2<R>> out;
    out.reserve(h.rank());
    for (int i = 0; i < h.rank(); ++i) {
        IntVec cls(h.rank());
        cls[i] = 1;
        out.push_back(period(s, h, cls));
    }
    return out;
}

} // namespace flatgeom
