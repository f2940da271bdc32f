#include "flatgeom/homology.hpp"

namespace flatgeom {

IntMat polygon_relations(const Combinatorics& comb) {
    IntMat rel(comb.num_pairs, comb.num_polys);
    for (int p = 0; p < comb.num_polys; ++p)
        for (size_t i = 0; i < comb.pair_of[p].size(); ++i) {
            int g = comb.pair_of[p][i];
            int sign = comb.end_of[p][i] == 0 ? 1 : -1;
            rel.at(g, p) += sign;
        }
    return rel;
}

HomologyPresentation HomologyPresentation::build(const Combinatorics& comb) {
    HomologyPresentation h;
    h.E_ = comb.num_pairs;
    h.F_ = comb.num_polys;
    h.V_ = int(comb.vclasses.size());
    h.relations_ = polygon_relations(comb);

    h.snf_ = smith_normal_form(h.relations_);
    for (const Int& d : h.snf_.divisors)
        if (d != 1)
            throw ValidationError("homology presentation has torsion; not an oriented complex");
    h.rank_ = h.E_ - h.snf_.rank;

    // boundary of generator g, directed as its slot-0 occurrence
    h.boundary_ = IntMat(h.V_, h.E_);
    for (int p = 0; p < comb.num_polys; ++p)
        for (size_t i = 0; i < comb.pair_of[p].size(); ++i) {
            if (comb.end_of[p][i] != 0) continue;
            int g = comb.pair_of[p][i];
            int n = int(comb.pair_of[p].size());
            int tail = comb.vclass_of[p][i];
            int head = comb.vclass_of[p][(i + 1) % n];
            h.boundary_.at(head, g) += 1;
            h.boundary_.at(tail, g) -= 1;
        }

    // absolute cycles: kernel of the boundary map expressed on the basis
    IntMat basis_chain_cols(h.E_, h.rank_);
    for (int i = 0; i < h.rank_; ++i)
        for (int e = 0; e < h.E_; ++e)
            basis_chain_cols.at(e, i) = h.snf_.Uinv.at(e, h.snf_.rank + i);
    h.abs_basis_ = int_kernel(h.boundary_.mul(basis_chain_cols));
    return h;
}

IntVec HomologyPresentation::class_of_chain(const IntVec& chain) const {
    IntVec u = snf_.U.apply(chain);
    return IntVec(u.begin() + snf_.rank, u.end());
}

IntVec HomologyPresentation::chain_of_class(const IntVec& cls) const {
    IntVec full(E_);
    for (int i = 0; i < rank_; ++i) full[snf_.rank + i] = cls[i];
    return snf_.Uinv.apply(full);
}

IntVec HomologyPresentation::boundary_of_class(const IntVec& cls) const {
    return boundary_.apply(chain_of_class(cls));
}

bool HomologyPresentation::is_absolute(const IntVec& cls) const {
    for (const Int& b : boundary_of_class(cls))
        if (b != 0) return false;
    return true;
}

} // namespace flatgeom
