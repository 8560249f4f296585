#pragma once

#include <cstdint>
#include <vector>

#include "dglr/alphabet.hpp"

namespace dglr {

// Nonnegative integer solutions of sum a_i * d_i = target, with optional
// per-coordinate bounds.  The artifact's replacement for FrobeniusSolve.
struct FrobeniusConstraint {
    size_t index;
    enum Kind { GE, LE, EQ } kind;
    long value;
};

struct FrobeniusInstance {
    std::vector<long> denominations;  // strictly positive
    long target = 0;
    std::vector<FrobeniusConstraint> constraints;
};

struct FrobeniusSolutionSet {
    std::vector<std::vector<long>> solutions;  // lexicographically sorted, complete
};

FrobeniusSolutionSet frobenius_solve(const FrobeniusInstance& inst);

// All multidegrees of the alphabet with the given total degree, optionally
// constrained per distinct generator degree (e.g. "at least one letter of
// degree 690").  Degree-level Frobenius solutions are expanded into
// generator-level exponent vectors.
struct DegreeConstraint {
    int degree;
    FrobeniusConstraint::Kind kind;
    long value;
};

std::vector<MultiDegree> degree_support(const Alphabet& A, int target_degree,
                                        const std::vector<DegreeConstraint>& constraints = {});

}  // namespace dglr
