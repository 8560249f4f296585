#pragma once

#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace dglr {

using Int = mpz_class;
using Rat = mpq_class;

struct ZeroDenominator : std::runtime_error {
    ZeroDenominator() : std::runtime_error("zero denominator") {}
};

struct NotPLocal : std::runtime_error {
    explicit NotPLocal(const std::string& what) : std::runtime_error(what) {}
};

// Coefficient ring context: Z_(p) = { a/b in Q : p does not divide b }.
// Z_(p) is enforced as a predicate on exact rationals, not as a separate
// representation.
struct PLocalContext {
    Int p;
    bool strict = false;  // strict mode: reject non-p-local values on reduce()
};

inline bool is_p_local(const Rat& r, const Int& p) {
    return !mpz_divisible_p(r.get_den().get_mpz_t(), p.get_mpz_t());
}

// Canonical a/b with gcd(a,b)=1, b >= 1.  Throws ZeroDenominator, and
// NotPLocal when the context is strict and p | b after reduction.
Rat reduce(const Int& num, const Int& den, const PLocalContext& ctx);
Rat reduce(const Int& num, const Int& den);

// p-adic valuation of a nonzero rational; 0 must not be passed.
long vp(const Rat& r, const Int& p);

// n! as an exact rational inverse; throws NotPLocal if p <= n makes 1/n!
// leave Z_(p).
Rat inverse_factorial(unsigned n, const Int& p);

inline bool is_prime(const Int& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

}  // namespace dglr
