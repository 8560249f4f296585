#include "dglr/lie.hpp"

#include <functional>
#include <algorithm>
#include <numeric>

namespace dglr {

LiePtr lie_leaf(GenId g) { return std::make_shared<LieExpr>(LieExpr{LieExpr::Leaf{g}}); }
LiePtr lie_bracket(LiePtr a, LiePtr b) {
    return std::make_shared<LieExpr>(LieExpr{LieExpr::Bracket{std::move(a), std::move(b)}});
}
LiePtr lie_ad(LiePtr base, unsigned k, LiePtr arg) {
    return std::make_shared<LieExpr>(LieExpr{LieExpr::AdPow{std::move(base), k, std::move(arg)}});
}
LiePtr lie_sum(std::vector<std::pair<Rat, LiePtr>> terms) {
    return std::make_shared<LieExpr>(LieExpr{LieExpr::Sum{std::move(terms)}});
}
LiePtr lie_scale(const Rat& c, LiePtr e) { return lie_sum({{c, std::move(e)}}); }
LiePtr lie_zero() { return lie_sum({}); }

int lie_degree(const LiePtr& e, const Alphabet& A) {
    if (auto* l = std::get_if<LieExpr::Leaf>(&e->node)) return A.degree(l->gen);
    if (auto* b = std::get_if<LieExpr::Bracket>(&e->node))
        return lie_degree(b->left, A) + lie_degree(b->right, A);
    if (auto* p = std::get_if<LieExpr::AdPow>(&e->node))
        return static_cast<int>(p->k) * lie_degree(p->base, A) + lie_degree(p->arg, A);
    auto& s = std::get<LieExpr::Sum>(e->node);
    if (s.terms.empty()) throw std::invalid_argument("degree of zero expression");
    int d = lie_degree(s.terms.front().second, A);
    for (auto& [c, t] : s.terms)
        if (lie_degree(t, A) != d) throw InhomogeneousOperand();
    return d;
}

Tensor expand(const LiePtr& e, const Alphabet& A) {
    if (auto* l = std::get_if<LieExpr::Leaf>(&e->node)) return Tensor::word(Word(1, l->gen));
    if (auto* b = std::get_if<LieExpr::Bracket>(&e->node))
        return graded_commutator(expand(b->left, A), expand(b->right, A), A);
    if (auto* p = std::get_if<LieExpr::AdPow>(&e->node)) {
        Tensor base = expand(p->base, A);
        Tensor acc = expand(p->arg, A);
        for (unsigned i = 0; i < p->k; ++i) acc = graded_commutator(base, acc, A);
        return acc;
    }
    auto& s = std::get<LieExpr::Sum>(e->node);
    Tensor out;
    for (auto& [c, t] : s.terms) out.axpy(c, expand(t, A));
    return out;
}

static void collect_letters(const LiePtr& e, std::map<GenId, int>& m, int mult) {
    if (auto* l = std::get_if<LieExpr::Leaf>(&e->node)) {
        m[l->gen] += mult;
    } else if (auto* b = std::get_if<LieExpr::Bracket>(&e->node)) {
        collect_letters(b->left, m, mult);
        collect_letters(b->right, m, mult);
    } else if (auto* p = std::get_if<LieExpr::AdPow>(&e->node)) {
        collect_letters(p->base, m, mult * static_cast<int>(p->k));
        collect_letters(p->arg, m, mult);
    } else {
        auto& s = std::get<LieExpr::Sum>(e->node);
        if (s.terms.size() > 1) throw std::invalid_argument("multidegree of a proper sum");
        for (auto& [c, t] : s.terms) collect_letters(t, m, mult);
    }
}

MultiDegree lie_multidegree(const LiePtr& e, const Alphabet& A) {
    (void)A;
    std::map<GenId, int> m;
    collect_letters(e, m, 1);
    MultiDegree md;
    md.e.assign(m.begin(), m.end());
    return md;
}

std::string lie_str(const LiePtr& e, const Alphabet& A) {
    if (auto* l = std::get_if<LieExpr::Leaf>(&e->node)) return A[l->gen].name;
    if (auto* b = std::get_if<LieExpr::Bracket>(&e->node))
        return "[" + lie_str(b->left, A) + "," + lie_str(b->right, A) + "]";
    if (auto* p = std::get_if<LieExpr::AdPow>(&e->node))
        return "ad(" + lie_str(p->base, A) + "," + std::to_string(p->k) + "," + lie_str(p->arg, A) + ")";
    auto& s = std::get<LieExpr::Sum>(e->node);
    if (s.terms.empty()) return "0";
    std::string out;
    for (auto& [c, t] : s.terms) {
        if (!out.empty()) out += " + ";
        if (c != 1) out += c.get_str() + "*";
        out += lie_str(t, A);
    }
    return out;
}

LiePtr lie_relabel(const LiePtr& e, const std::vector<GenId>& genmap) {
    if (auto* l = std::get_if<LieExpr::Leaf>(&e->node)) return lie_leaf(genmap.at(l->gen));
    if (auto* b = std::get_if<LieExpr::Bracket>(&e->node))
        return lie_bracket(lie_relabel(b->left, genmap), lie_relabel(b->right, genmap));
    if (auto* p = std::get_if<LieExpr::AdPow>(&e->node))
        return lie_ad(lie_relabel(p->base, genmap), p->k, lie_relabel(p->arg, genmap));
    auto& s = std::get<LieExpr::Sum>(e->node);
    std::vector<std::pair<Rat, LiePtr>> terms;
    terms.reserve(s.terms.size());
    for (auto& [c, t] : s.terms) terms.emplace_back(c, lie_relabel(t, genmap));
    return lie_sum(std::move(terms));
}

// ------------------------------------------------------------------ Lyndon

static bool is_lyndon(const Word& w) {
    // w strictly smaller than each proper suffix
    for (size_t i = 1; i < w.size(); ++i)
        if (w.compare(w.substr(i)) >= 0) return false;
    return true;
}

std::vector<Word> lyndon_words(const MultiDegree& md) {
    Word sorted;
    for (auto& [g, k] : md.e) sorted.append(static_cast<size_t>(k), g);
    std::vector<Word> out;
    if (sorted.empty()) return out;
    Word w = sorted;
    do {
        if (is_lyndon(w)) out.push_back(w);
    } while (std::next_permutation(w.begin(), w.end()));
    return out;
}

LiePtr lyndon_bracketing(const Word& w) {
    if (w.size() == 1) return lie_leaf(w[0]);
    // standard factorization: right factor = lexicographically least proper suffix
    size_t best = 1;
    for (size_t i = 2; i < w.size(); ++i)
        if (w.compare(i, Word::npos, w, best, Word::npos) < 0) best = i;
    return lie_bracket(lyndon_bracketing(w.substr(0, best)), lyndon_bracketing(w.substr(best)));
}

std::vector<LieBasisElement> lie_multidegree_basis(const Alphabet& A, const MultiDegree& md) {
    std::vector<LieBasisElement> out;
    for (const Word& w : lyndon_words(md))
        out.push_back({lyndon_bracketing(w), w, false});
    MultiDegree half;
    if (md.halved(half) && (half.total_degree(A) & 1)) {
        for (const Word& w : lyndon_words(half)) {
            LiePtr b = lyndon_bracketing(w);
            out.push_back({lie_bracket(b, b), w, true});
        }
    }
    return out;
}

Int lie_dimension(const Alphabet& A, const MultiDegree& md) {
    auto lyndon_count = [](const MultiDegree& m) -> Int {
        if (m.e.empty()) return 0;
        int len = m.length();
        int g = 0;
        for (auto& [gen, k] : m.e) g = std::gcd(g, k);
        // moebius over divisors of g
        Int total = 0;
        for (int d = 1; d <= g; ++d) {
            if (g % d) continue;
            int mu = 1, x = d;
            for (int f = 2; f * f <= x; ++f) {
                if (x % f == 0) {
                    x /= f;
                    if (x % f == 0) {
                        mu = 0;
                        break;
                    }
                    mu = -mu;
                }
            }
            if (x > 1 && mu != 0) mu = -mu;
            if (mu == 0) continue;
            Int multinom = 1;
            {
                Int fact = 1;
                for (int i = 2; i <= len / d; ++i) fact *= i;
                multinom = fact;
                for (auto& [gen, k] : m.e) {
                    Int kf = 1;
                    for (int i = 2; i <= k / d; ++i) kf *= i;
                    multinom /= kf;
                }
            }
            total += mu * multinom;
        }
        return total / len;
    };
    Int dim = lyndon_count(md);
    MultiDegree half;
    if (md.halved(half) && (half.total_degree(A) & 1)) dim += lyndon_count(half);
    return dim;
}

std::pair<std::map<GenId, Rat>, Tensor> decomposable_split(const Tensor& t) {
    std::map<GenId, Rat> linear;
    Tensor rest;
    for (auto& [w, c] : t.terms) {
        if (w.size() == 1)
            linear.emplace(w[0], c);
        else
            rest.terms.emplace(w, c);
    }
    return {std::move(linear), std::move(rest)};
}

LieBlock make_block(const Alphabet& A, const MultiDegree& md) {
    LieBlock blk;
    blk.md = md;
    blk.basis = lie_multidegree_basis(A, md);
    blk.expansions.reserve(blk.basis.size());
    for (size_t i = 0; i < blk.basis.size(); ++i) {
        blk.expansions.push_back(expand(blk.basis[i].bracketing, A));
        const Word lead = blk.basis[i].is_square ? blk.basis[i].lyndon_word + blk.basis[i].lyndon_word
                                                 : blk.basis[i].lyndon_word;
        blk.by_leading.emplace(lead, i);
    }
    return blk;
}

std::vector<Rat> lie_coordinates(Tensor t, const LieBlock& block) {
    std::vector<Rat> coords(block.basis.size(), Rat(0));
    while (!t.is_zero()) {
        const Word& lead = t.terms.begin()->first;
        auto it = block.by_leading.find(lead);
        if (it == block.by_leading.end())
            throw std::runtime_error("element not in the Lie span of the block");
        size_t i = it->second;
        Rat f = t.terms.begin()->second / block.expansions[i].coefficient(lead);
        coords[i] = f;
        t.axpy(-f, block.expansions[i]);
    }
    return coords;
}

// -------------------------------------------------------------- test oracle

namespace {

void enumerate_sub(const MultiDegree& md, size_t pos, MultiDegree& cur,
                   std::vector<MultiDegree>& out) {
    if (pos == md.e.size()) {
        out.push_back(cur);
        return;
    }
    for (int k = 0; k <= md.e[pos].second; ++k) {
        if (k > 0) cur.e.emplace_back(md.e[pos].first, k);
        enumerate_sub(md, pos + 1, cur, out);
        if (k > 0) cur.e.pop_back();
    }
}

MultiDegree md_minus(const MultiDegree& a, const MultiDegree& b) {
    MultiDegree out;
    size_t j = 0;
    for (auto& [g, k] : a.e) {
        int sub = 0;
        while (j < b.e.size() && b.e[j].first < g) ++j;
        if (j < b.e.size() && b.e[j].first == g) sub = b.e[j].second;
        if (k - sub > 0) out.e.emplace_back(g, k - sub);
    }
    return out;
}

}  // namespace

std::vector<Tensor> all_bracketings_expanded(const Alphabet& A, const MultiDegree& md,
                                             int max_length) {
    if (md.length() > max_length) throw std::length_error("brute-force bracketing cap exceeded");
    std::map<MultiDegree, std::vector<Tensor>> memo;
    std::function<const std::vector<Tensor>&(const MultiDegree&)> gen =
        [&](const MultiDegree& m) -> const std::vector<Tensor>& {
        auto found = memo.find(m);
        if (found != memo.end()) return found->second;
        std::vector<Tensor> res;
        if (m.length() == 1) {
            res.push_back(Tensor::word(Word(1, m.e.front().first)));
        } else {
            std::vector<MultiDegree> subs;
            MultiDegree cur;
            enumerate_sub(m, 0, cur, subs);
            for (const auto& m1 : subs) {
                if (m1.e.empty() || m1 == m) continue;
                MultiDegree m2 = md_minus(m, m1);
                if (m2 < m1) continue;  // unordered splits once
                const auto& left = gen(m1);
                // take a copy: gen(m2) may invalidate `left` by rehashing? map is stable
                const auto& right = gen(m2);
                for (const auto& x : left)
                    for (const auto& y : right) {
                        Tensor t = graded_commutator(x, y, A);
                        if (!t.is_zero()) res.push_back(std::move(t));
                    }
            }
        }
        return memo.emplace(m, std::move(res)).first->second;
    };
    return gen(md);
}

}  // namespace dglr
