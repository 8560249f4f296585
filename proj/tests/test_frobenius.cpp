#include "doctest.h"
#include "dglr/frobenius.hpp"

#include <functional>

#include <random>

using namespace dglr;

TEST_CASE("the degree-690 equation has the unique solution a1=6") {
    auto sols = frobenius_solve({{115, 151, 201, 303, 403}, 690, {}});
    REQUIRE(sols.solutions.size() == 1);
    CHECK(sols.solutions[0] == std::vector<long>{6, 0, 0, 0, 0});
}

TEST_CASE("degree 2337 with at least three x generators is infeasible") {
    FrobeniusInstance inst{{115, 151, 201, 303, 403, 690, 2337}, 2337, {{5, FrobeniusConstraint::GE, 3}}};
    CHECK(frobenius_solve(inst).solutions.empty());
}

TEST_CASE("small cases") {
    CHECK(frobenius_solve({{2, 3}, 1, {}}).solutions.empty());
    auto s = frobenius_solve({{2, 3}, 12, {}});
    // 12 = 2a+3b: (0,4),(3,2),(6,0)
    CHECK(s.solutions.size() == 3);
    CHECK(s.solutions[0] == std::vector<long>{0, 4});
    CHECK(s.solutions[2] == std::vector<long>{6, 0});
}

TEST_CASE("degree 2340 has exactly the two solutions") {
    auto sols = frobenius_solve({{115, 151, 201, 303, 403, 690, 2337, 2338, 2339}, 2340, {}});
    REQUIRE(sols.solutions.size() == 2);
    CHECK(sols.solutions[0] == std::vector<long>{5, 1, 2, 4, 0, 0, 0, 0, 0});
    CHECK(sols.solutions[1] == std::vector<long>{5, 3, 0, 3, 1, 0, 0, 0, 0});
}

TEST_CASE("completeness against naive enumeration on random instances") {
    std::mt19937 rng(41);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 2 + static_cast<int>(rng() % 3);
        std::vector<long> den;
        for (int i = 0; i < n; ++i) den.push_back(1 + static_cast<long>(rng() % 9));
        long target = static_cast<long>(rng() % 30);
        auto fast = frobenius_solve({den, target, {}});
        // naive nested loops
        std::vector<std::vector<long>> naive;
        std::vector<long> a(n, 0);
        std::function<void(int, long)> go = [&](int i, long rem) {
            if (i == n) {
                if (rem == 0) naive.push_back(a);
                return;
            }
            for (long q = 0; q * den[i] <= rem; ++q) {
                a[i] = q;
                go(i + 1, rem - q * den[i]);
            }
            a[i] = 0;
        };
        go(0, target);
        std::sort(naive.begin(), naive.end());
        CHECK(fast.solutions == naive);
        // re-substitution
        for (auto& sol : fast.solutions) {
            long sum = 0;
            for (int i = 0; i < n; ++i) sum += sol[i] * den[i];
            CHECK(sum == target);
        }
    }
}

TEST_CASE("constraints never enlarge the solution set") {
    FrobeniusInstance base{{2, 3, 5}, 21, {}};
    auto s0 = frobenius_solve(base);
    FrobeniusInstance c = base;
    c.constraints.push_back({0, FrobeniusConstraint::GE, 2});
    auto s1 = frobenius_solve(c);
    CHECK(s1.solutions.size() <= s0.solutions.size());
    for (auto& sol : s1.solutions) CHECK(sol[0] >= 2);
}

TEST_CASE("degree_support expands generator multiplicities") {
    Alphabet A;
    GenId w1 = A.add("w1", 115);
    A.add("w2", 151);
    A.add("w3", 201);
    A.add("w4", 303);
    A.add("w5", 403);
    GenId xv = A.add("x_v", 690);
    GenId xu = A.add("x_u", 690);
    auto mds = degree_support(A, 690);
    // w1^6, x_v, x_u
    REQUIRE(mds.size() == 3);
    bool saw_w16 = false, saw_xv = false, saw_xu = false;
    for (auto& md : mds) {
        if (md.e == std::vector<std::pair<GenId, int>>{{w1, 6}}) saw_w16 = true;
        if (md.e == std::vector<std::pair<GenId, int>>{{xv, 1}}) saw_xv = true;
        if (md.e == std::vector<std::pair<GenId, int>>{{xu, 1}}) saw_xu = true;
    }
    CHECK(saw_w16);
    CHECK(saw_xv);
    CHECK(saw_xu);

    // degree 2338 with at least one x is NOT empty: the degree-level
    // solutions are w2 w3 w4^2 x^2 and w1^6 w2 w3 w4^2 x, which expand to
    // five generator-level multidegrees over two x generators
    auto some = degree_support(A, 2338, {{690, FrobeniusConstraint::GE, 1}});
    CHECK(some.size() == 5);

    // at degree 2339 the corresponding support is empty
    auto none = degree_support(A, 2339, {{690, FrobeniusConstraint::GE, 1}});
    CHECK(none.empty());

    auto zero = degree_support(A, 0);
    REQUIRE(zero.size() == 1);
    CHECK(zero[0].e.empty());
}
