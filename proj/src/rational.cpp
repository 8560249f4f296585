#include "dglr/rational.hpp"

namespace dglr {

Rat reduce(const Int& num, const Int& den) {
    if (den == 0) throw ZeroDenominator();
    Rat r(num, den);
    r.canonicalize();
    return r;
}

Rat reduce(const Int& num, const Int& den, const PLocalContext& ctx) {
    Rat r = reduce(num, den);
    if (ctx.strict && !is_p_local(r, ctx.p))
        throw NotPLocal("denominator " + r.get_den().get_str() + " divisible by p = " + ctx.p.get_str());
    return r;
}

long vp(const Rat& r, const Int& p) {
    if (r == 0) throw std::invalid_argument("vp(0) undefined");
    long v = 0;
    Int n = r.get_num();
    Int d = r.get_den();
    while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
        mpz_divexact(n.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
        ++v;
    }
    while (mpz_divisible_p(d.get_mpz_t(), p.get_mpz_t())) {
        mpz_divexact(d.get_mpz_t(), d.get_mpz_t(), p.get_mpz_t());
        --v;
    }
    return v;
}

Rat inverse_factorial(unsigned n, const Int& p) {
    Int f = 1;
    for (unsigned k = 2; k <= n; ++k) f *= k;
    Rat r(1, f);
    r.canonicalize();
    if (!is_p_local(r, p))
        throw NotPLocal("1/" + std::to_string(n) + "! is not p-local for p = " + p.get_str());
    return r;
}

}  // namespace dglr
