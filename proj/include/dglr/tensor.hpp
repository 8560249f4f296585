#pragma once

#include <map>
#include <optional>

#include "dglr/alphabet.hpp"
#include "dglr/rational.hpp"
#include "dglr/sparse.hpp"

namespace dglr {

struct InhomogeneousOperand : std::runtime_error {
    InhomogeneousOperand() : std::runtime_error("operand is not homogeneous") {}
};
struct UnknownGenerator : std::runtime_error {
    explicit UnknownGenerator(const std::string& n) : std::runtime_error("derivation undefined on " + n) {}
};

// Element of the free associative algebra on a graded alphabet: a finite
// Q-linear combination of words.  Terms are kept sorted with no zeros.
class Tensor {
  public:
    std::map<Word, Rat> terms;

    Tensor() = default;
    static Tensor zero() { return {}; }
    static Tensor unit() {
        Tensor t;
        t.terms.emplace(Word(), Rat(1));
        return t;
    }
    static Tensor word(Word w, Rat c = Rat(1)) {
        Tensor t;
        if (c != 0) t.terms.emplace(std::move(w), std::move(c));
        return t;
    }

    bool is_zero() const { return terms.empty(); }
    size_t size() const { return terms.size(); }

    void add_term(const Word& w, const Rat& c) {
        if (c == 0) return;
        auto [it, fresh] = terms.emplace(w, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms.erase(it);
        }
    }
    Tensor& operator+=(const Tensor& o) {
        for (auto& [w, c] : o.terms) add_term(w, c);
        return *this;
    }
    Tensor& axpy(const Rat& f, const Tensor& o) {
        if (f == 0) return *this;
        for (auto& [w, c] : o.terms) add_term(w, f * c);
        return *this;
    }
    Tensor operator-() const {
        Tensor t;
        for (auto& [w, c] : terms) t.terms.emplace(w, -c);
        return t;
    }
    Tensor& operator*=(const Rat& f) {
        if (f == 0) {
            terms.clear();
            return *this;
        }
        for (auto& [w, c] : terms) c *= f;
        return *this;
    }
    bool operator==(const Tensor& o) const { return terms == o.terms; }

    // degree of a homogeneous element; nullopt for 0; throws otherwise
    std::optional<int> degree(const Alphabet& A) const;
    bool homogeneous(const Alphabet& A) const;

    Rat coefficient(const Word& w) const {
        auto it = terms.find(w);
        return it == terms.end() ? Rat(0) : it->second;
    }

    std::string str(const Alphabet& A) const;
};

Tensor operator+(Tensor a, const Tensor& b);
Tensor operator*(const Rat& f, Tensor t);

// bilinear word concatenation (the ring multiplication)
Tensor concat(const Tensor& a, const Tensor& b);

// [a,b] = ab - (-1)^{|a||b|} ba on homogeneous a, b
Tensor graded_commutator(const Tensor& a, const Tensor& b, const Alphabet& A);

// Derivation on the tensor algebra, extended from generator images by the
// graded Leibniz rule: D(g1...gk) = sum_i (-1)^{shift*(|g1|+...+|g_{i-1}|)}
// g1...D(g_i)...gk.
struct TensorDerivation {
    std::map<GenId, Tensor> images;
    int degree_shift = -1;
    bool missing_is_zero = false;

    const Tensor* image(GenId g) const {
        auto it = images.find(g);
        return it == images.end() ? nullptr : &it->second;
    }
};

Tensor apply_derivation(const TensorDerivation& D, const Tensor& a, const Alphabet& A);

// indexing words into a dense column universe for linear algebra
class WordIndex {
  public:
    uint64_t index(const Word& w) {
        auto [it, fresh] = idx_.emplace(w, idx_.size());
        if (fresh) words_.push_back(w);
        return it->second;
    }
    std::optional<uint64_t> find(const Word& w) const {
        auto it = idx_.find(w);
        if (it == idx_.end()) return std::nullopt;
        return it->second;
    }
    const Word& word(uint64_t i) const { return words_[i]; }
    size_t size() const { return idx_.size(); }

  private:
    std::map<Word, uint64_t> idx_;
    std::vector<Word> words_;
};

SparseVec to_sparse(const Tensor& t, WordIndex& ix);

// generator relabeling (used by induced self-maps and orbit transport)
Word word_relabel(const Word& w, const std::vector<GenId>& genmap);
Tensor tensor_relabel(const Tensor& t, const std::vector<GenId>& genmap);
MultiDegree md_relabel(const MultiDegree& md, const std::vector<GenId>& genmap);

}  // namespace dglr
