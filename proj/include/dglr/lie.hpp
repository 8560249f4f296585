#pragma once

#include <memory>
#include <variant>

#include "dglr/tensor.hpp"

namespace dglr {

// Bracket-expression tree over a graded alphabet.  AdPow(x,k,y) is the
// right-normed [x,[x,...,[x,y]...]] with x applied k times.
struct LieExpr;
using LiePtr = std::shared_ptr<const LieExpr>;

struct LieExpr {
    struct Leaf {
        GenId gen;
    };
    struct Bracket {
        LiePtr left, right;
    };
    struct AdPow {
        LiePtr base;
        unsigned k;
        LiePtr arg;
    };
    struct Sum {
        std::vector<std::pair<Rat, LiePtr>> terms;
    };
    std::variant<Leaf, Bracket, AdPow, Sum> node;
};

LiePtr lie_leaf(GenId g);
LiePtr lie_bracket(LiePtr a, LiePtr b);
LiePtr lie_ad(LiePtr base, unsigned k, LiePtr arg);
LiePtr lie_sum(std::vector<std::pair<Rat, LiePtr>> terms);
LiePtr lie_scale(const Rat& c, LiePtr e);
LiePtr lie_zero();  // empty sum

// degree of a homogeneous expression (throws InhomogeneousOperand)
int lie_degree(const LiePtr& e, const Alphabet& A);

// recursive application of [B,C] = BC - (-1)^{|B||C|}CB in the tensor algebra
Tensor expand(const LiePtr& e, const Alphabet& A);

// letters-used multiset of an expression (ignores cancellation)
MultiDegree lie_multidegree(const LiePtr& e, const Alphabet& A);

std::string lie_str(const LiePtr& e, const Alphabet& A);

// relabel generators through a map (used by induced self-maps)
LiePtr lie_relabel(const LiePtr& e, const std::vector<GenId>& genmap);

// ------------------------------------------------------------------ bases

struct LieBasisElement {
    LiePtr bracketing;
    Word lyndon_word;  // for squares: the word of the halved element
    bool is_square = false;
};

// All Lyndon words with exactly the given content, in lexicographic order.
std::vector<Word> lyndon_words(const MultiDegree& md);

// Standard (right) factorization bracketing of a Lyndon word.
LiePtr lyndon_bracketing(const Word& w);

// Basis of the multidegree component of the free graded Lie algebra:
// Lyndon bracketings, plus squares [b,b] of odd-degree basis elements of
// the halved multidegree (valid while 2 is invertible in the ring).
std::vector<LieBasisElement> lie_multidegree_basis(const Alphabet& A, const MultiDegree& md);

// Dimension by the Witt/Moebius count of Lyndon words plus the odd-square
// correction; must agree with the rank of the expanded basis.
Int lie_dimension(const Alphabet& A, const MultiDegree& md);

// linear part (length-1 words) and decomposable remainder of an expansion
std::pair<std::map<GenId, Rat>, Tensor> decomposable_split(const Tensor& t);

// Expansion cache for a multidegree block basis, triangular by leading
// (lexicographically least) words.
struct LieBlock {
    MultiDegree md;
    std::vector<LieBasisElement> basis;
    std::vector<Tensor> expansions;
    std::map<Word, size_t> by_leading;
};
LieBlock make_block(const Alphabet& A, const MultiDegree& md);

// Coordinates of a Lie element (given by its expansion) in the block basis,
// by triangular peeling against leading words.  The element must lie in the
// span; throws otherwise.
std::vector<Rat> lie_coordinates(Tensor t, const LieBlock& block);

// test-oracle: all bracketings (all binary trees over all arrangements) of
// the multidegree, expanded; for brute-force rank checks.  Guarded by a
// length cap.
std::vector<Tensor> all_bracketings_expanded(const Alphabet& A, const MultiDegree& md,
                                             int max_length = 6);

}  // namespace dglr
