#include "dglr/tensor.hpp"

#include <algorithm>

namespace dglr {

std::optional<int> Tensor::degree(const Alphabet& A) const {
    if (terms.empty()) return std::nullopt;
    int d = A.word_degree(terms.begin()->first);
    for (auto& [w, c] : terms)
        if (A.word_degree(w) != d) throw InhomogeneousOperand();
    return d;
}

bool Tensor::homogeneous(const Alphabet& A) const {
    if (terms.empty()) return true;
    int d = A.word_degree(terms.begin()->first);
    for (auto& [w, c] : terms)
        if (A.word_degree(w) != d) return false;
    return true;
}

std::string Tensor::str(const Alphabet& A) const {
    if (terms.empty()) return "0";
    std::string s;
    for (auto& [w, c] : terms) {
        if (!s.empty()) s += " + ";
        if (c != 1) s += c.get_str() + "*";
        s += A.word_str(w);
    }
    return s;
}

Tensor operator+(Tensor a, const Tensor& b) {
    a += b;
    return a;
}

Tensor operator*(const Rat& f, Tensor t) {
    t *= f;
    return t;
}

Tensor concat(const Tensor& a, const Tensor& b) {
    Tensor out;
    for (auto& [wa, ca] : a.terms)
        for (auto& [wb, cb] : b.terms) out.add_term(wa + wb, ca * cb);
    return out;
}

Tensor graded_commutator(const Tensor& a, const Tensor& b, const Alphabet& A) {
    if (a.is_zero() || b.is_zero()) return {};
    if (!a.homogeneous(A) || !b.homogeneous(A)) throw InhomogeneousOperand();
    int pa = A.word_parity(a.terms.begin()->first);
    int pb = A.word_parity(b.terms.begin()->first);
    Tensor out = concat(a, b);
    Rat sign = (pa && pb) ? Rat(1) : Rat(-1);  // -(-1)^{|a||b|}
    out.axpy(sign, concat(b, a));
    return out;
}

Tensor apply_derivation(const TensorDerivation& D, const Tensor& a, const Alphabet& A) {
    const bool shift_odd = D.degree_shift & 1;
    Tensor out;
    for (auto& [w, c] : a.terms) {
        int prefix_parity = 0;
        for (size_t i = 0; i < w.size(); ++i) {
            GenId g = w[i];
            const Tensor* img = D.image(g);
            if (!img) {
                if (!D.missing_is_zero) throw UnknownGenerator(A[g].name);
            } else if (!img->is_zero()) {
                Rat f = c;
                if (shift_odd && prefix_parity) f = -f;
                Word prefix = w.substr(0, i);
                Word suffix = w.substr(i + 1);
                for (auto& [wi, ci] : img->terms) out.add_term(prefix + wi + suffix, f * ci);
            }
            prefix_parity ^= A.odd(g) ? 1 : 0;
        }
    }
    return out;
}

SparseVec to_sparse(const Tensor& t, WordIndex& ix) {
    SparseVec v;
    v.reserve(t.terms.size());
    for (auto& [w, c] : t.terms) v.emplace_back(ix.index(w), c);
    sv_normalize(v);
    return v;
}

Word word_relabel(const Word& w, const std::vector<GenId>& genmap) {
    Word out = w;
    for (auto& ch : out) ch = genmap[ch];
    return out;
}

Tensor tensor_relabel(const Tensor& t, const std::vector<GenId>& genmap) {
    Tensor out;
    for (auto& [w, c] : t.terms) out.add_term(word_relabel(w, genmap), c);
    return out;
}

MultiDegree md_relabel(const MultiDegree& md, const std::vector<GenId>& genmap) {
    MultiDegree out;
    out.e.reserve(md.e.size());
    for (auto& [g, k] : md.e) out.e.emplace_back(genmap[g], k);
    std::sort(out.e.begin(), out.e.end());
    return out;
}

}  // namespace dglr
