#include "doctest.h"
#include "dglr/rational.hpp"

using namespace dglr;

TEST_CASE("reduce canonicalizes") {
    CHECK(reduce(2, 4) == Rat(1, 2));
    CHECK(reduce(6, -3) == Rat(-2));
    CHECK(reduce(0, 7) == 0);
    CHECK_THROWS_AS(reduce(1, 0), ZeroDenominator);
}

TEST_CASE("p-locality") {
    Int p = 1117;
    CHECK(is_p_local(reduce(2, 4), p));
    CHECK(!is_p_local(reduce(1, 1117), p));
    CHECK_THROWS_AS(reduce(1, 1117, {p, true}), NotPLocal);
    CHECK(reduce(1, 1117, {p, false}) == Rat(1, 1117));
    // reduction can rescue strict mode: 1117/1117 is 1
    CHECK(reduce(1117, 1117, {p, true}) == 1);
}

TEST_CASE("p-adic valuation") {
    Int p = 5;
    CHECK(vp(Rat(25), p) == 2);
    CHECK(vp(Rat(1, 5), p) == -1);
    CHECK(vp(Rat(7, 3), p) == 0);
}

TEST_CASE("inverse factorial p-locality") {
    CHECK(inverse_factorial(3, 7) == Rat(1, 6));
    CHECK_THROWS_AS(inverse_factorial(7, 7), NotPLocal);
    CHECK(inverse_factorial(6, 7) == Rat(1, 720));
}
