#pragma once

#include "dglr/dgl.hpp"

namespace dglr {

struct NotEquivariant : std::runtime_error {
    explicit NotEquivariant(const std::string& w) : std::runtime_error(w) {}
};

// Self-map of L(G,k) induced by a digraph automorphism: w_i fixed,
// x_v -> x_{sigma v}, z_(v,u) -> z_(sigma v,sigma u), tower generators
// transported along their killed-cycle labels (a relabeling wherever the
// killed basis is permuted; the exact matrix action on the few stabilized
// blocks that admit no permutation basis).  Chain-map condition verified by
// full expansion on every generator at construction.
struct InducedSelfMap {
    VertexPermutation sigma;
    GenAction action;
    const DglPresentation* presentation = nullptr;
};

// level-1 presentations (no tower generators)
InducedSelfMap induce(const DglPresentation& L, const VertexPermutation& sigma);
// any tower level; the tower supplies the action on t-generators
InducedSelfMap induce(Tower& tower, int level, const VertexPermutation& sigma);

struct PhiImage {
    GroupTable group;                    // aut(G) as a table
    std::vector<VertexPermutation> aut;  // aligned with table elements
    std::vector<InducedSelfMap> images;
    size_t order() const { return images.size(); }
};

// The homomorphism direction: every alpha_sigma verified as a chain map,
// Phi(s1 s2) = Phi(s1) o Phi(s2) checked exactly on generator images, and
// injectivity checked (distinct sigma differ on some x_v).
PhiImage phi(const DglPresentation& L, const std::vector<VertexPermutation>& aut);
PhiImage phi(Tower& tower, int level, const std::vector<VertexPermutation>& aut);

// Applies sigma to a cycle basis: relabels expressions and labels, and
// certifies the result is the same basis up to the label permutation.
CycleBasis relabel_cycles(const CycleBasis& basis, const DglPresentation& L,
                          const VertexPermutation& sigma);

}  // namespace dglr
