#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dglr/rational.hpp"

namespace dglr {

// Sparse vector over Q: (index, coefficient) pairs sorted by index,
// no zero entries.
using SparseVec = std::vector<std::pair<uint64_t, Rat>>;

void sv_normalize(SparseVec& v);                       // sort, merge, drop zeros
SparseVec sv_axpy(const SparseVec& a, const Rat& c, const SparseVec& b);  // a + c*b
bool sv_is_zero(const SparseVec& v);

enum class RankMode {
    Exact,             // rational Gaussian elimination
    Modular,           // rank mod a random word prime: a certified lower bound
    ModularCertified,  // exact rank: modular first, exact elimination unless
                       // the modular pass already proves full rank
};

// Rank over Q of a list of sparse vectors.  Deterministic pivoting: the
// pivot is always the lowest unused column index.  `avoid` is a prime the
// random modular prime must differ from (the ambient p).
int rank(const std::vector<SparseVec>& vectors, RankMode mode, const Int& avoid = 0);

struct SpanQuery {
    SparseVec target;
    std::vector<SparseVec> generators;
};

enum class Locality { OverQ, OverZp };

struct SpanResult {
    bool yes = false;
    std::vector<Rat> coefficients;  // witness: target = sum coeff[i]*gen[i]
};

// Exact span membership.  OverQ: plain membership with witness.  OverZp:
// decides whether some Q-solution has all coefficients p-local, by
// valuation-pivoted elimination over the localization (Z_(p) is a DVR, so
// minimal-valuation pivots realize its Smith normal form).
SpanResult in_span(const SpanQuery& q, Locality loc, const Int& p);

// Echelon form holder for repeated reductions against a fixed generator set.
// Rows carry their expression in terms of the original generators.
class Echelon {
  public:
    // appends one vector; returns true if it enlarged the span
    bool add(const SparseVec& v);
    // reduce v against the echelon; returns the residual and, if `combo`,
    // the coefficients over previously added vectors that were used
    SparseVec reduce(const SparseVec& v, std::vector<Rat>* combo = nullptr) const;
    bool contains(const SparseVec& v) const;
    int rank() const { return static_cast<int>(rows_.size()); }
    size_t added() const { return n_added_; }

  private:
    struct Row {
        SparseVec vec;              // leading entry normalized to 1
        std::vector<Rat> combo;     // over original inputs (dense, length n_added_ at insert time)
    };
    std::vector<Row> rows_;  // sorted by leading index
    size_t n_added_ = 0;
};

}  // namespace dglr
