#include "doctest.h"
#include "dglr/dgl.hpp"
#include "dglr/json_io.hpp"

using namespace dglr;

namespace {
LiePtr leaf(GenId g) { return lie_leaf(g); }
}

TEST_CASE("paper L(G,1): degrees, dd=0, and the differential shape") {
    Digraph g = Digraph::cycle(2);
    DglPresentation L = build_L1(g, 7, 1117);  // validate() runs inside

    CHECK(L.alphabet.degree(L.w[0]) == 115);
    CHECK(L.alphabet.degree(L.w[1]) == 151);
    CHECK(L.alphabet.degree(L.w[2]) == 201);
    CHECK(L.alphabet.degree(L.w[3]) == 303);
    CHECK(L.alphabet.degree(L.w[4]) == 403);
    CHECK(L.alphabet.degree(L.x_of_vertex[0]) == 690);
    CHECK(L.alphabet.degree(L.z_of_edge.begin()->second) == 2337);
    CHECK(L.alphabet.size() == 9);  // 5 w + 2 x + 2 z

    // d(w4) expands to 2 w2^2
    Tensor d4 = expand(L.diff(L.w[3]), L.alphabet);
    CHECK(d4.coefficient(Word{L.w[1], L.w[1]}) == 2);
    CHECK(d4.size() == 1);

    // every term of expand(dz) has degree 325n+61 = 2336
    for (auto& [e, z] : L.z_of_edge) {
        Tensor dz = expand(L.diff(z), L.alphabet);
        CHECK(*dz.degree(L.alphabet) == 2336);
        CHECK(L.d_of(dz).is_zero());  // dd(z) = 0
    }
}

TEST_CASE("builder input validation") {
    CHECK_THROWS_AS(build_L1(Digraph::cycle(2), 6, 1117), BadParameters);  // even n
    CHECK_THROWS_AS(build_L1(Digraph::cycle(2), 7, 1116), BadParameters);  // composite p
    CHECK_THROWS_AS(build_L1(Digraph::cycle(2), 7, 1109), BadParameters);  // p too small
    Digraph loop;
    loop.vertices = {"a", "b"};
    loop.add_edge(0, 0);
    loop.add_edge(0, 1);
    loop.add_edge(1, 0);
    CHECK_THROWS_AS(build_L1(loop, 7, 1117), HasLoops);
    Digraph single;
    single.vertices = {"a"};
    CHECK_THROWS_AS(build_L1(single, 7, 1117), TooFewVertices);
    Digraph chain;
    chain.vertices = {"a", "b"};
    chain.add_edge(0, 1);
    CHECK_THROWS_AS(build_L1(chain, 7, 1117), NotStronglyConnected);
}

TEST_CASE("is_cycle on paper-scale elements") {
    DglPresentation L = build_L1(Digraph::cycle(2), 7, 1117);
    GenId w1 = L.w[0], w2 = L.w[1], w3 = L.w[2], w4 = L.w[3];
    GenId xv = L.x_of_vertex[0], xu = L.x_of_vertex[1];

    CHECK(is_cycle(L, lie_ad(leaf(w1), 19, leaf(w2))));
    // [[x_v,x_u],[[w2,w4],[w2,[w2,w3]]]] is a degree-2337 cycle
    LiePtr c = lie_bracket(lie_bracket(leaf(xv), leaf(xu)),
                           lie_bracket(lie_bracket(leaf(w2), leaf(w4)),
                                       lie_bracket(leaf(w2), lie_bracket(leaf(w2), leaf(w3)))));
    CHECK(lie_degree(c, L.alphabet) == 2337);
    CHECK(is_cycle(L, c));
    CHECK(!is_cycle(L, leaf(w4)));
}

TEST_CASE("is_boundary: trivial yes and exact no") {
    DglPresentation L = build_L1(Digraph::cycle(2), 7, 1117);
    GenId w1 = L.w[0], w2 = L.w[1], w4 = L.w[3];
    GenId xv = L.x_of_vertex[0];

    BoundaryOptions opt;
    opt.subalgebra = [&](GenId g) { return L.alphabet[g].kind != GenKind::Z; };

    // d(w4) = [w2,w2] is a boundary with preimage w4
    auto r = is_boundary(L, lie_bracket(leaf(w2), leaf(w2)), opt);
    REQUIRE(r.yes);
    REQUIRE(r.preimage.size() == 1);
    CHECK(r.preimage[0].first == 1);

    // (ad x_v)^3([w1,w2]) is not a boundary in the z-free subalgebra
    LiePtr c = lie_ad(leaf(xv), 3, lie_bracket(leaf(w1), leaf(w2)));
    CHECK(is_cycle(L, c));
    auto r2 = is_boundary(L, c, opt);
    CHECK(!r2.yes);
    BoundaryOptions optZp = opt;
    optZp.locality = Locality::OverZp;
    CHECK(!is_boundary(L, c, optZp).yes);
}

TEST_CASE("synthetic profile mirrors the structure") {
    DglPresentation L = build_L1_synthetic(Digraph::cycle(2), 101);
    CHECK(L.alphabet.degree(L.w[0]) == 1);
    CHECK(L.alphabet.degree(L.w[3]) == 2 * L.alphabet.degree(L.w[1]) + 1);
    CHECK(L.alphabet.degree(L.w[4]) == 2 * L.alphabet.degree(L.w[2]) + 1);
    CHECK(L.alphabet.degree(L.x_of_vertex[0]) == 2);
    CHECK(L.alphabet.degree(L.z_of_edge.begin()->second) == 7);
    for (auto& [e, z] : L.z_of_edge) {
        Tensor dz = expand(L.diff(z), L.alphabet);
        CHECK(*dz.degree(L.alphabet) == 6);
        CHECK(L.d_of(dz).is_zero());
    }
}

TEST_CASE("homology report: L(G,1) at n=7") {
    DglPresentation L = build_L1(Digraph::cycle(2), 7, 1117);
    auto rep = homology_report(L, {115, 151, 201, 303, 403, 690, 2337});
    CHECK(rep.linear_part_zero);
    CHECK(rep.rows[0].rank_W == 1);
    CHECK(rep.rows[1].rank_W == 1);
    CHECK(rep.rows[2].rank_W == 1);
    CHECK(rep.rows[3].rank_W == 1);
    CHECK(rep.rows[4].rank_W == 1);
    CHECK(rep.rows[5].rank_W == 2);  // |V|
    CHECK(rep.rows[6].rank_W == 2);  // |E|
    for (auto& row : rep.rows) {
        CHECK(row.rank_d == 0);
        CHECK(row.rank_H == row.rank_W);
    }
    CHECK(homology_report(L, {}).rows.empty());
}

TEST_CASE("presentation json round trip") {
    DglPresentation L = build_L1_synthetic(Digraph::cycle(2), 101);
    std::string j = presentation_to_json(L);
    DglPresentation M = presentation_from_json(j);
    CHECK(M.alphabet.size() == L.alphabet.size());
    CHECK(M.p == L.p);
    for (GenId g = 0; g < L.alphabet.size(); ++g) {
        CHECK(M.alphabet[g].name == L.alphabet[g].name);
        CHECK(M.alphabet.degree(g) == L.alphabet.degree(g));
        LiePtr a = L.diff(g), b = M.diff(g);
        REQUIRE((a == nullptr) == (b == nullptr));
        if (a) CHECK(expand(a, L.alphabet) == expand(b, M.alphabet));
    }
}

TEST_CASE("expression grammar round trip") {
    DglPresentation L = build_L1(Digraph::cycle(2), 7, 1117);
    for (auto& [g, e] : L.differential) {
        std::string s = expr_to_string(e, L.alphabet);
        LiePtr back = parse_expr(s, L.alphabet);
        CHECK(expand(back, L.alphabet) == expand(e, L.alphabet));
    }
    // explicit grammar forms
    LiePtr p1 = parse_expr("[w1,w2]", L.alphabet);
    CHECK(lie_degree(p1, L.alphabet) == 266);
    LiePtr p2 = parse_expr("3*[w2,[w1,w1]] + -1/2*[w1,[w1,w2]]", L.alphabet);
    CHECK(lie_degree(p2, L.alphabet) == 381);
    LiePtr p3 = parse_expr("ad(x_v0,3,[w1,w2])", L.alphabet);
    CHECK(lie_degree(p3, L.alphabet) == 2336);
}
