#include "doctest.h"
#include "dglr/digraph.hpp"
#include "dglr/json_io.hpp"

#include <functional>

using namespace dglr;

namespace {

// brute-force oracle: all n! permutations
std::vector<VertexPermutation> brute_autos(const Digraph& g) {
    std::vector<int> perm(g.n());
    for (int i = 0; i < g.n(); ++i) perm[i] = i;
    std::vector<VertexPermutation> out;
    do {
        bool ok = true;
        for (auto& [v, u] : g.edges)
            if (!g.has_edge(perm[v], perm[u])) {
                ok = false;
                break;
            }
        if (ok) out.push_back({perm});
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

}  // namespace

TEST_CASE("strong connectivity") {
    Digraph two = Digraph::cycle(2);
    CHECK(is_strongly_connected(two));

    Digraph one;
    one.vertices = {"a", "b"};
    one.add_edge(0, 1);
    CHECK(!is_strongly_connected(one));

    CHECK(is_strongly_connected(Digraph::cycle(3)));
}

TEST_CASE("automorphism groups match brute force") {
    CHECK(automorphism_group(Digraph::cycle(3)).size() == 3);
    CHECK(automorphism_group(Digraph::cycle(2)).size() == 2);
    CHECK(automorphism_group(Digraph::complete(3)).size() == 6);
    for (auto g : {Digraph::cycle(3), Digraph::cycle(4), Digraph::complete(3)}) {
        auto fast = automorphism_group(g);
        auto slow = brute_autos(g);
        std::sort(slow.begin(), slow.end());
        CHECK(fast.size() == slow.size());
        for (size_t i = 0; i < fast.size(); ++i) CHECK(fast[i].map == slow[i].map);
    }
}

TEST_CASE("permutation operations") {
    auto rot = VertexPermutation{{1, 2, 0}};
    CHECK(compose(rot, invert(rot)).is_identity());
    CHECK(compose(identity_perm(3), rot) == rot);
    auto rot2 = compose(rot, rot);
    CHECK(rot2.map == std::vector<int>{2, 0, 1});
    CHECK_THROWS_AS(compose(rot, identity_perm(4)), VertexSetMismatch);
}

TEST_CASE("group table validation") {
    auto z3 = GroupTable::cyclic(3);
    z3.validate();
    auto bad = z3;
    bad.product[1][1] = 1;  // breaks associativity/inverses
    CHECK_THROWS(bad.validate());
}

TEST_CASE("realize_group: cyclic groups and the trivial group") {
    for (int k : {1, 2, 3, 4}) {
        auto g = realize_group(GroupTable::cyclic(k), k > 1 ? std::vector<int>{1} : std::vector<int>{});
        CHECK(is_strongly_connected(g));
        CHECK(!g.has_loops());
        auto autos = automorphism_group(g, 512);
        CHECK(static_cast<int>(autos.size()) == k);
        if (k <= 8) CHECK(tables_isomorphic(group_of_permutations(autos), GroupTable::cyclic(k)));
    }
}

TEST_CASE("realize_group with all non-identity generators") {
    auto g = realize_group(GroupTable::cyclic(3));
    CHECK(is_strongly_connected(g));
    auto autos = automorphism_group(g, 512);
    CHECK(autos.size() == 3);
    CHECK(tables_isomorphic(group_of_permutations(autos), GroupTable::cyclic(3)));
}

TEST_CASE("klein four group realization") {
    // Z/2 x Z/2 as a table
    GroupTable v4;
    v4.elements = {"e", "a", "b", "c"};
    v4.identity = 0;
    v4.product = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    v4.validate();
    auto g = realize_group(v4);
    auto autos = automorphism_group(g, 512);
    CHECK(autos.size() == 4);
    CHECK(tables_isomorphic(group_of_permutations(autos), v4));
}

TEST_CASE("digraph json round trip") {
    Digraph g = Digraph::cycle(3);
    std::string j = digraph_to_json(g);
    Digraph h = digraph_from_json(j);
    CHECK(h.vertices == g.vertices);
    CHECK(h.edges == g.edges);

    Digraph e = digraph_from_edge_list("a b\nb c\nc a\n");
    CHECK(e.n() == 3);
    CHECK(e.edges.size() == 3);
    CHECK(is_strongly_connected(e));
}
