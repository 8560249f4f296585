#pragma once

#include <functional>
#include <optional>

#include "dglr/digraph.hpp"
#include "dglr/frobenius.hpp"
#include "dglr/lie.hpp"

namespace dglr {

struct NotStronglyConnected : std::runtime_error {
    NotStronglyConnected() : std::runtime_error("digraph is not strongly connected") {}
};
struct TooFewVertices : std::runtime_error {
    TooFewVertices() : std::runtime_error("digraph needs more than one vertex") {}
};
struct HasLoops : std::runtime_error {
    HasLoops() : std::runtime_error("digraph has loop edges") {}
};
struct BadParameters : std::runtime_error {
    explicit BadParameters(const std::string& w) : std::runtime_error(w) {}
};
struct NotACycle : std::runtime_error {
    explicit NotACycle(const std::string& w) : std::runtime_error(w) {}
};
struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& w) : std::runtime_error(w) {}
    std::vector<std::pair<std::string, Int>> offenders;  // multidegree -> size
};
struct NonEquivariantCycleBasis : std::runtime_error {
    explicit NonEquivariantCycleBasis(const std::string& w) : std::runtime_error(w) {}
};

// Free dgl presentation: graded alphabet, differential (absent => zero),
// the prime p, and bookkeeping tying generators to the source digraph.
struct DglPresentation {
    Alphabet alphabet;
    std::map<GenId, LiePtr> differential;
    Int p = 0;
    int n = 0;  // odd paper parameter; 0 for synthetic degree profiles
    int level = 1;

    Digraph digraph;
    std::vector<GenId> w;                       // w1..w5
    std::vector<GenId> x_of_vertex;             // per vertex
    std::map<std::pair<int, int>, GenId> z_of_edge;

    LiePtr diff(GenId g) const {
        auto it = differential.find(g);
        return it == differential.end() ? nullptr : it->second;
    }
    // d applied by the graded Leibniz rule; differential images of core
    // (pre-tower) generators are expanded once and cached
    Tensor d_of(const Tensor& t) const;
    Tensor d_of_expr(const LiePtr& e) const { return d_of(expand(e, alphabet)); }
    const Tensor& image_of(GenId g) const;  // expansion of diff(g), zero tensor if none

    // degree homogeneity of every image, d(deg) = deg-1, and dd = 0
    void validate() const;

    size_t first_tower_gen = SIZE_MAX;  // ids >= this are tower t-generators

  private:
    mutable std::map<GenId, Tensor> image_cache_;
};

DglPresentation build_L1(const Digraph& g, int n, const Int& p);
// Small fixed degree profile with the same structural pattern
// (|w4| = 2|w2|+1, |w5| = 2|w3|+1, d(z) mirroring the paper shape), so the
// full tower is brute-force verifiable: degrees (1,1,1,3,3), |x|=2, |z|=7.
DglPresentation build_L1_synthetic(const Digraph& g, const Int& p);

bool is_cycle(const DglPresentation& L, const LiePtr& e);

struct NotAnAutomorphism : std::runtime_error {
    NotAnAutomorphism() : std::runtime_error("permutation does not preserve the edge set") {}
};

// alphabet relabeling induced by a digraph automorphism: w fixed,
// x_v -> x_{sigma v}, z_(v,u) -> z_(sigma v,sigma u); any tower generators
// are left fixed (tower actions are overlaid by Tower::genmap)
std::vector<GenId> digraph_genmap(const DglPresentation& L, const VertexPermutation& sigma);

struct BoundaryResult {
    bool yes = false;
    // witness preimage: sum of coeff * basis bracketing with d(preimage) = e
    std::vector<std::pair<Rat, LiePtr>> preimage;
    bool degree_infeasible = false;  // no multidegrees at degree+1 at all
};

struct BoundaryOptions {
    Locality locality = Locality::OverQ;
    // restrict the ambient algebra (e.g. the z-free subalgebra): generators
    // failing the predicate are excluded from preimage multidegrees
    std::function<bool(GenId)> subalgebra;
    long max_block_dim = 200000;
};

// Decides whether the homogeneous cycle e is a boundary, by assembling the
// multidegree-local spanning set one degree up and running span membership.
// "No" is exact.
BoundaryResult is_boundary(const DglPresentation& L, const LiePtr& e, const BoundaryOptions& opt = {});

// ------------------------------------------------------------ cycle bases

struct CycleLabel {
    // cls 0: pure-w (y1_k) / 1: one-x (y(v)_k) / 2: two-x (y(v,u)_k)
    // 3: anything else (yo_k) / 4,5: tower levels (y2_k, y3_k)
    int cls = 3;
    int v = -1, u = -1;
    int index = 0;
    std::string text;
};

struct CycleBasisElement {
    CycleLabel label;
    LiePtr expr;
};

struct CycleBasis {
    int degree = 0;
    std::vector<CycleBasisElement> elements;
    size_t size() const { return elements.size(); }
};

struct CycleOptions {
    std::function<bool(const MultiDegree&)> filter;  // restrict source multidegrees
    std::vector<VertexPermutation> aut;              // equivariance group (level-1 action)
    Int budget = 2000000;                            // total block-dimension budget
};

// Kernel of d on the degree component, computed blockwise per multidegree
// with coupled blocks eliminated together; basis chosen equivariantly under
// `aut` when given.  Labels follow the x-content partition.
CycleBasis cycle_space_basis(const DglPresentation& L, int degree, const CycleOptions& opt = {});

// Sparse row of an action matrix over basis indices.  A permutation action
// has single-entry rows with coefficient 1; stabilized blocks without a
// permutation basis (a representation-theoretic obstruction that arises at
// synthetic scale) carry general integral rows.
using ActionRow = std::vector<std::pair<size_t, Rat>>;

// cycle basis plus the group action on basis elements and cached expansions
struct CycleBasisWithAction {
    CycleBasis basis;
    std::vector<std::vector<ActionRow>> action;  // per aut element, per index
    std::vector<Tensor> expansions;
};
CycleBasisWithAction equivariant_cycle_space_basis(const DglPresentation& L, int degree,
                                                   const CycleOptions& opt);

// Action of one automorphism on a presentation's generators: a relabeling,
// except possibly on tower generators whose killed-cycle blocks only admit a
// matrix action.
struct GenAction {
    std::vector<GenId> relabel;
    std::map<GenId, ActionRow> mixed;  // rows over GenIds, overriding relabel

    bool pure(GenId g) const { return mixed.find(g) == mixed.end(); }
    LiePtr image_expr(GenId g) const;
    // algebra-map extension to tensor elements (images are linear in generators)
    Tensor apply(const Tensor& t) const;
};

// Adjoins one generator of degree (cycles.degree + 1) per basis cycle, with
// d(t) = y.  Level is previous.level + 1.
DglPresentation adjoin_cycle_killers(const DglPresentation& previous, const CycleBasis& cycles);

// ---------------------------------------------------------------- tower

enum class Scale { Paper, Synthetic };

// Builds L(G,1)..L(G,4), killing full cycle spaces at the three successive
// degrees above |z|.  Levels >= 2 use the lift construction (everything one
// degree up extends uniquely to a cycle once the previous cycle space is
// killed), so only the level-1 kernel needs linear algebra.
class Tower {
  public:
    Tower(const Digraph& g, Scale scale, int n, const Int& p,
          std::vector<VertexPermutation> aut = {}, Int budget = 2000000);

    const DglPresentation& level(int k);            // 1..4
    const CycleBasis& killed(int k);                // basis killed to build level k (2..4)
    // action of a digraph automorphism on the generators of level k
    GenAction action(int k, const VertexPermutation& sigma);

  private:
    void build(int k);
    CycleBasisWithAction lift_cycle_basis(int next, int degree);

    Scale scale_;
    int n_;
    Int p_;
    Int budget_;
    std::vector<VertexPermutation> aut_;
    std::vector<DglPresentation> levels_;
    std::vector<CycleBasis> killed_;
    // per level, per automorphism vertex-map: generator action
    std::vector<std::map<std::vector<int>, GenAction>> actions_;

    // lift machinery (levels >= 3): coordinates of cycles against the
    // previously killed basis
    struct LiftBlock {
        LieBlock std_block;
        std::vector<SparseVec> basis_coords;      // chosen basis over std_block coords
        Echelon coord_ech;                        // echelon of basis_coords, with combos
        std::vector<size_t> y_index;              // position -> killed-basis index
    };
    std::vector<Tensor> y1_expansions_;
    std::shared_ptr<WordIndex> y1_ix_;
    std::shared_ptr<Echelon> y1_ech_;
    std::map<MultiDegree, LiftBlock> y2_blocks_;
    std::vector<SparseVec> y2_tcorr_;             // per Y2 element, over t GenIds
};

// --------------------------------------------------------------- homology

struct HomologyReport {
    struct PerDegree {
        int degree;
        Int rank_W;        // generator module rank
        Int rank_d;        // rank of the linear part out of this degree
        Int rank_H;        // homology of (W, d) at this degree
    };
    std::vector<PerDegree> rows;
    bool linear_part_zero = true;
};

HomologyReport homology_report(const DglPresentation& L, const std::vector<int>& degrees);

}  // namespace dglr
