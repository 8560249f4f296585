#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace dglr {

// Letters are small integer ids into an Alphabet; a word is a sequence of
// letters.  Ids are assigned in insertion order, which is the canonical
// generator order (w1 < ... < w5 < x_v < z_(v,u) < tower generators), so
// lexicographic comparison of words is the canonical word order.
using GenId = char16_t;
using Word = std::u16string;

enum class GenKind : uint8_t { W, X, Z, T, Free };

struct GradedGenerator {
    std::string name;
    int degree = 0;
    GenKind kind = GenKind::Free;
    int a = -1, b = -1;  // W: index; X: vertex; Z: edge (a,b); T: (level, index)
    bool odd() const { return degree & 1; }
};

class Alphabet {
  public:
    GenId add(std::string name, int degree, GenKind kind = GenKind::Free, int a = -1, int b = -1) {
        if (degree < 1) throw std::invalid_argument("generator degree must be >= 1");
        if (by_name_.count(name)) throw std::invalid_argument("duplicate generator " + name);
        if (gens_.size() >= 65535) throw std::length_error("alphabet too large");
        GenId id = static_cast<GenId>(gens_.size());
        by_name_.emplace(name, id);
        gens_.push_back({std::move(name), degree, kind, a, b});
        return id;
    }
    const GradedGenerator& operator[](GenId id) const { return gens_.at(id); }
    size_t size() const { return gens_.size(); }
    GenId id_of(const std::string& name) const {
        auto it = by_name_.find(name);
        if (it == by_name_.end()) throw std::out_of_range("unknown generator " + name);
        return it->second;
    }
    bool has(const std::string& name) const { return by_name_.count(name) != 0; }

    int degree(GenId id) const { return gens_[id].degree; }
    bool odd(GenId id) const { return gens_[id].degree & 1; }

    int word_degree(const Word& w) const {
        int d = 0;
        for (GenId g : w) d += gens_[g].degree;
        return d;
    }
    int word_parity(const Word& w) const {
        int d = 0;
        for (GenId g : w) d ^= (gens_[g].degree & 1);
        return d;
    }
    std::string word_str(const Word& w) const {
        if (w.empty()) return "1";
        std::string s;
        for (GenId g : w) {
            if (!s.empty()) s += '.';
            s += gens_[g].name;
        }
        return s;
    }

  private:
    std::vector<GradedGenerator> gens_;
    std::unordered_map<std::string, GenId> by_name_;
};

// Exponent vector over the alphabet, finitely supported, sorted by id.
struct MultiDegree {
    std::vector<std::pair<GenId, int>> e;

    static MultiDegree of_word(const Word& w) {
        std::map<GenId, int> m;
        for (GenId g : w) ++m[g];
        MultiDegree md;
        md.e.assign(m.begin(), m.end());
        return md;
    }
    int total_degree(const Alphabet& A) const {
        int d = 0;
        for (auto& [g, k] : e) d += A.degree(g) * k;
        return d;
    }
    int length() const {
        int n = 0;
        for (auto& [g, k] : e) n += k;
        return n;
    }
    int exponent(GenId g) const {
        for (auto& [h, k] : e)
            if (h == g) return k;
        return 0;
    }
    bool halved(MultiDegree& out) const {  // md = 2*out ?
        out.e.clear();
        for (auto& [g, k] : e) {
            if (k & 1) return false;
            out.e.emplace_back(g, k / 2);
        }
        return true;
    }
    MultiDegree doubled() const {
        MultiDegree out;
        for (auto& [g, k] : e) out.e.emplace_back(g, 2 * k);
        return out;
    }
    bool operator==(const MultiDegree& o) const { return e == o.e; }
    bool operator<(const MultiDegree& o) const { return e < o.e; }
    std::string str(const Alphabet& A) const {
        std::string s;
        for (auto& [g, k] : e) {
            if (!s.empty()) s += ' ';
            s += A[g].name;
            if (k > 1) s += "^" + std::to_string(k);
        }
        return s.empty() ? "1" : s;
    }
};

}  // namespace dglr
