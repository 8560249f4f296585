#pragma once

#include <set>
#include <string>
#include <vector>

#include "dglr/rational.hpp"

namespace dglr {

struct SizeBound : std::runtime_error {
    SizeBound() : std::runtime_error("vertex count exceeds the exhaustive-search bound") {}
};
struct VertexSetMismatch : std::runtime_error {
    VertexSetMismatch() : std::runtime_error("permutations over different vertex sets") {}
};

struct Digraph {
    std::vector<std::string> vertices;
    std::set<std::pair<int, int>> edges;  // ordered pairs of vertex indices

    int n() const { return static_cast<int>(vertices.size()); }
    bool has_edge(int v, int u) const { return edges.count({v, u}) != 0; }
    bool has_loops() const {
        for (auto& [v, u] : edges)
            if (v == u) return true;
        return false;
    }
    void add_edge(int v, int u);
    static Digraph cycle(int k);           // directed k-cycle
    static Digraph complete(int k);        // all ordered pairs, no loops
    std::string hash() const;              // content hash for cache keys
};

bool is_strongly_connected(const Digraph& g);

// bijection on the vertex set
struct VertexPermutation {
    std::vector<int> map;
    int operator()(int v) const { return map[v]; }
    bool is_identity() const {
        for (size_t i = 0; i < map.size(); ++i)
            if (map[i] != static_cast<int>(i)) return false;
        return true;
    }
    bool operator==(const VertexPermutation& o) const { return map == o.map; }
    bool operator<(const VertexPermutation& o) const { return map < o.map; }
};

VertexPermutation compose(const VertexPermutation& a, const VertexPermutation& b);  // a after b
VertexPermutation invert(const VertexPermutation& a);
VertexPermutation identity_perm(int n);

// All edge-preserving vertex bijections, by pruned backtracking over
// iterated in/out-degree refinement classes.  Output sorted, closed under
// composition and inverse (verified).
std::vector<VertexPermutation> automorphism_group(const Digraph& g, int size_bound = 64);

// finite group as a validated multiplication table
struct GroupTable {
    std::vector<std::string> elements;
    std::vector<std::vector<int>> product;
    int identity = 0;

    int n() const { return static_cast<int>(elements.size()); }
    void validate() const;  // associativity, identity, inverses
    static GroupTable cyclic(int k);
};

// A loop-free strongly connected digraph whose automorphism group is
// isomorphic to G, verified a posteriori by the brute-force automorphism
// oracle.  Plain Cayley digraph when that already works (single-generator
// cyclic case), otherwise Cayley digraph with per-generator path gadgets.
Digraph realize_group(const GroupTable& g, const std::vector<int>& generators = {});

// order-preserving isomorphism search between small group tables
bool tables_isomorphic(const GroupTable& a, const GroupTable& b);

// the automorphism group of `g` as a GroupTable (for isomorphism checks)
GroupTable group_of_permutations(const std::vector<VertexPermutation>& perms);

}  // namespace dglr
