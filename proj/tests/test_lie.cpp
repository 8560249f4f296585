#include "doctest.h"
#include "dglr/lie.hpp"
#include "dglr/sparse.hpp"

#include <random>

using namespace dglr;

TEST_CASE("expand: leading coefficient of a right-normed even bracket") {
    // [x_s,[x_s',[x_s,A]]] with all-even degrees: coefficient of x_s x_s' x_s A is +1
    Alphabet A;
    GenId xs = A.add("x_s", 690);
    GenId xsp = A.add("x_s'", 690);
    GenId a = A.add("A", 266);  // even stand-in for [w1,w2]
    LiePtr e = lie_bracket(lie_leaf(xs), lie_bracket(lie_leaf(xsp), lie_bracket(lie_leaf(xs), lie_leaf(a))));
    Tensor t = expand(e, A);
    CHECK(t.coefficient(Word{xs, xsp, xs, a}) == 1);
}

TEST_CASE("ad power degree arithmetic") {
    Alphabet A;
    GenId w1 = A.add("w1", 115);
    GenId w2 = A.add("w2", 151);
    LiePtr e = lie_ad(lie_leaf(w1), 19, lie_leaf(w2));
    CHECK(lie_degree(e, A) == 19 * 115 + 151);
    CHECK(lie_degree(e, A) == 2336);
    Tensor t = expand(e, A);
    CHECK(*t.degree(A) == 2336);
    CHECK(t.size() == 20);  // binomial-collected interleavings
}

TEST_CASE("odd cube vanishes") {
    Alphabet A;
    GenId u = A.add("u", 3);
    LiePtr e = lie_bracket(lie_leaf(u), lie_bracket(lie_leaf(u), lie_leaf(u)));
    CHECK(expand(e, A).is_zero());
}

TEST_CASE("lie dimensions: spec examples") {
    Alphabet A;
    GenId a = A.add("a", 1);
    GenId b = A.add("b", 1);
    MultiDegree ab;
    ab.e = {{a, 1}, {b, 1}};
    CHECK(lie_dimension(A, ab) == 1);

    Alphabet E;
    GenId ea = E.add("a", 2);
    GenId eb = E.add("b", 2);
    MultiDegree aab;
    aab.e = {{ea, 2}, {eb, 1}};
    CHECK(lie_dimension(E, aab) == 1);

    // odd square u^2 -> 1; even -> 0
    MultiDegree uu;
    uu.e = {{a, 2}};
    CHECK(lie_dimension(A, uu) == 1);
    MultiDegree vv;
    vv.e = {{ea, 2}};
    CHECK(lie_dimension(E, vv) == 0);
}

TEST_CASE("basis expansions: independent, span brute force, match Witt") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        Alphabet A;
        int ngens = 2 + static_cast<int>(rng() % 3);
        std::vector<GenId> gens;
        for (int i = 0; i < ngens; ++i)
            gens.push_back(A.add("g" + std::to_string(i), 1 + static_cast<int>(rng() % 4)));
        // random multidegree of length <= 5
        std::map<GenId, int> exps;
        int len = 2 + static_cast<int>(rng() % 4);
        for (int i = 0; i < len; ++i) ++exps[gens[rng() % gens.size()]];
        MultiDegree md;
        md.e.assign(exps.begin(), exps.end());

        auto basis = lie_multidegree_basis(A, md);
        WordIndex ix;
        std::vector<SparseVec> rows;
        for (auto& b : basis) rows.push_back(to_sparse(expand(b.bracketing, A), ix));
        int basis_rank = rank(rows, RankMode::Exact);
        CHECK(basis_rank == static_cast<int>(basis.size()));  // independent
        CHECK(Int(basis_rank) == lie_dimension(A, md));       // Witt count

        auto brute = all_bracketings_expanded(A, md, 6);
        std::vector<SparseVec> all = rows;
        for (auto& t : brute)
            if (!t.is_zero()) all.push_back(to_sparse(t, ix));
        CHECK(rank(all, RankMode::Exact) == basis_rank);  // basis spans everything
    }
}

TEST_CASE("graded Jacobi on randomized homogeneous triples") {
    Alphabet A;
    GenId a = A.add("a", 1), b = A.add("b", 2), c = A.add("c", 3);
    std::mt19937 rng(5);
    std::vector<GenId> gens{a, b, c};
    for (int trial = 0; trial < 25; ++trial) {
        auto leaf = [&]() { return lie_leaf(gens[rng() % 3]); };
        LiePtr x = leaf(), y = leaf(), z = leaf();
        int px = lie_degree(x, A) & 1, py = lie_degree(y, A) & 1;
        // [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|}[y,[x,z]]
        Tensor lhs = expand(lie_bracket(x, lie_bracket(y, z)), A);
        Tensor rhs = expand(lie_bracket(lie_bracket(x, y), z), A);
        Rat sign = (px && py) ? Rat(-1) : Rat(1);
        rhs.axpy(sign, expand(lie_bracket(y, lie_bracket(x, z)), A));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("decomposable split") {
    Alphabet A;
    GenId w2 = A.add("w2", 151);
    Tensor t;
    t.add_term(Word(1, w2), Rat(1));
    t.add_term(Word{w2, w2}, Rat(2));
    auto [lin, dec] = decomposable_split(t);
    CHECK(lin.size() == 1);
    CHECK(lin.at(w2) == 1);
    CHECK(dec.size() == 1);
    CHECK(dec.coefficient(Word{w2, w2}) == 2);

    auto [lin0, dec0] = decomposable_split(Tensor::zero());
    CHECK(lin0.empty());
    CHECK(dec0.is_zero());
}

TEST_CASE("expand is linear over sums") {
    Alphabet A;
    GenId a = A.add("a", 1), b = A.add("b", 2);
    LiePtr br = lie_bracket(lie_leaf(a), lie_leaf(b));
    LiePtr s = lie_sum({{Rat(2), br}, {Rat(-3), br}});
    Tensor direct = expand(s, A);
    Tensor manual = expand(br, A);
    manual *= Rat(-1);
    CHECK(direct == manual);
}

TEST_CASE("leading-word property and coordinates") {
    Alphabet A;
    GenId a = A.add("a", 1), b = A.add("b", 1), c = A.add("c", 2);
    MultiDegree md;
    md.e = {{a, 2}, {b, 1}, {c, 1}};
    LieBlock blk = make_block(A, md);
    REQUIRE(!blk.basis.empty());
    for (size_t i = 0; i < blk.basis.size(); ++i) {
        REQUIRE(!blk.basis[i].is_square);
        const Word& lead = blk.expansions[i].terms.begin()->first;
        CHECK(lead == blk.basis[i].lyndon_word);
    }
    // coordinates round-trip on a random combination
    Tensor combo;
    combo.axpy(Rat(3), blk.expansions[0]);
    if (blk.expansions.size() > 1) combo.axpy(Rat(-5, 2), blk.expansions[1]);
    auto coords = lie_coordinates(combo, blk);
    CHECK(coords[0] == 3);
    if (coords.size() > 1) CHECK(coords[1] == Rat(-5, 2));
}

TEST_CASE("odd square basis elements") {
    Alphabet A;
    GenId u = A.add("u", 1);
    MultiDegree md;
    md.e = {{u, 2}};
    auto basis = lie_multidegree_basis(A, md);
    REQUIRE(basis.size() == 1);
    CHECK(basis[0].is_square);
    Tensor t = expand(basis[0].bracketing, A);
    CHECK(t.coefficient(Word{u, u}) == 2);
}
