#include "doctest.h"
#include "dglr/sparse.hpp"

using namespace dglr;

namespace {
SparseVec sv(std::initializer_list<std::pair<uint64_t, int>> entries) {
    SparseVec v;
    for (auto& [i, c] : entries) v.emplace_back(i, Rat(c));
    sv_normalize(v);
    return v;
}
}  // namespace

TEST_CASE("rank basics") {
    for (auto mode : {RankMode::Exact, RankMode::Modular, RankMode::ModularCertified}) {
        CHECK(rank({sv({{0, 1}}), sv({{1, 1}})}, mode) == 2);
        CHECK(rank({sv({{0, 1}, {1, 2}}), sv({{0, 2}, {1, 4}})}, mode) == 1);
        CHECK(rank({}, mode) == 0);
    }
}

TEST_CASE("modular rank is a lower bound and certified rank exact") {
    // 3x3 with rank 2 over Q
    std::vector<SparseVec> vs{sv({{0, 1}, {1, 1}}), sv({{1, 1}, {2, 1}}), sv({{0, 1}, {1, 2}, {2, 1}})};
    CHECK(rank(vs, RankMode::Exact) == 2);
    CHECK(rank(vs, RankMode::Modular) <= 2);
    CHECK(rank(vs, RankMode::ModularCertified) == 2);
}

TEST_CASE("in_span over Q with witness") {
    SpanQuery q;
    q.target = sv({{0, 2}});
    q.generators = {sv({{0, 1}})};
    auto r = in_span(q, Locality::OverQ, 1117);
    REQUIRE(r.yes);
    CHECK(r.coefficients[0] == 2);

    q.target = sv({{1, 1}});
    CHECK(!in_span(q, Locality::OverQ, 1117).yes);
}

TEST_CASE("in_span over Zp detects non-local solutions") {
    Int p = 1117;
    SpanQuery q;
    q.target = sv({{0, 1}});
    q.generators = {sv({{0, 1117}})};
    CHECK(in_span(q, Locality::OverQ, p).yes);       // 1/p works over Q
    CHECK(!in_span(q, Locality::OverZp, p).yes);     // but is not p-local

    // p-local solvable case with a redundant generator
    q.target = sv({{0, 2}, {1, 2}});
    q.generators = {sv({{0, 1}, {1, 1}}), sv({{0, 1117}, {1, 1117}})};
    auto r = in_span(q, Locality::OverZp, p);
    REQUIRE(r.yes);
    // witness must reproduce the target
    SparseVec acc;
    for (size_t i = 0; i < q.generators.size(); ++i)
        acc = sv_axpy(acc, r.coefficients[i], q.generators[i]);
    CHECK(acc == q.target);
    for (auto& c : r.coefficients)
        if (c != 0) CHECK(is_p_local(c, p));
}

TEST_CASE("witness coefficients reproduce the target") {
    SpanQuery q;
    q.target = sv({{0, 3}, {2, 5}, {7, -1}});
    q.generators = {sv({{0, 1}, {2, 1}}), sv({{2, 1}, {7, 1}}), sv({{0, 1}, {7, 2}})};
    auto r = in_span(q, Locality::OverQ, 13);
    REQUIRE(r.yes);
    SparseVec acc;
    for (size_t i = 0; i < q.generators.size(); ++i)
        acc = sv_axpy(acc, r.coefficients[i], q.generators[i]);
    CHECK(acc == q.target);
}

TEST_CASE("over-Zp yes implies over-Q yes") {
    Int p = 7;
    SpanQuery q;
    q.target = sv({{0, 1}, {1, 2}});
    q.generators = {sv({{0, 7}}), sv({{1, 1}})};
    auto zp = in_span(q, Locality::OverZp, p);
    auto qq = in_span(q, Locality::OverQ, p);
    CHECK(qq.yes);
    CHECK(!zp.yes);  // needs 1/7 on the first generator
}
