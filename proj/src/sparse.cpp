#include "dglr/sparse.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <random>

namespace dglr {

void sv_normalize(SparseVec& v) {
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    SparseVec out;
    out.reserve(v.size());
    for (auto& [i, c] : v) {
        if (!out.empty() && out.back().first == i)
            out.back().second += c;
        else
            out.emplace_back(i, c);
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const auto& e) { return e.second == 0; }),
              out.end());
    v = std::move(out);
}

SparseVec sv_axpy(const SparseVec& a, const Rat& c, const SparseVec& b) {
    SparseVec out;
    out.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            Rat val = c * b[j].second;
            if (val != 0) out.emplace_back(b[j].first, val);
            ++j;
        } else {
            Rat val = a[i].second + c * b[j].second;
            if (val != 0) out.emplace_back(a[i].first, val);
            ++i, ++j;
        }
    }
    return out;
}

bool sv_is_zero(const SparseVec& v) { return v.empty(); }

// ---------------------------------------------------------------- Echelon

bool Echelon::add(const SparseVec& v) {
    std::vector<Rat> combo(n_added_, Rat(0));
    SparseVec r = reduce(v, &combo);
    ++n_added_;
    if (r.empty()) return false;
    Rat lead = r.front().second;
    for (auto& [i, c] : r) c /= lead;
    for (auto& c : combo) c /= lead;
    combo.push_back(Rat(1) / lead);  // coefficient of v itself
    Row row{std::move(r), std::move(combo)};
    auto pos = std::lower_bound(rows_.begin(), rows_.end(), row.vec.front().first,
                                [](const Row& a, uint64_t idx) { return a.vec.front().first < idx; });
    rows_.insert(pos, std::move(row));
    return true;
}

SparseVec Echelon::reduce(const SparseVec& v, std::vector<Rat>* combo) const {
    SparseVec r = v;
    // rows_ sorted by leading index, so one left-to-right sweep suffices
    for (const Row& row : rows_) {
        uint64_t lead = row.vec.front().first;
        auto it = std::lower_bound(r.begin(), r.end(), lead,
                                   [](const auto& e, uint64_t idx) { return e.first < idx; });
        if (it == r.end()) break;
        if (it->first != lead) continue;
        Rat f = -it->second;
        r = sv_axpy(r, f, row.vec);
        if (combo) {
            for (size_t k = 0; k < row.combo.size(); ++k)
                if (row.combo[k] != 0) (*combo)[k] += f * row.combo[k];
        }
    }
    return r;
}

bool Echelon::contains(const SparseVec& v) const { return reduce(v).empty(); }

// ---------------------------------------------------------------- rank

namespace {

// Deterministically seeded stream of word-size primes; "random" in the
// sense of being unrelated to the data, reproducible across runs.
std::vector<uint64_t> modular_primes(size_t count, const Int& avoid) {
    std::mt19937_64 rng(0x5eed5eed1234ULL);
    std::vector<uint64_t> out;
    while (out.size() < count) {
        uint64_t start = (1ULL << 30) | (rng() & ((1ULL << 30) - 1));
        Int q;
        mpz_nextprime(q.get_mpz_t(), Int(start).get_mpz_t());
        if (avoid != 0 && q == avoid) continue;
        out.push_back(q.get_ui());
    }
    return out;
}

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t q) {
    return static_cast<uint64_t>((__uint128_t)a * b % q);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t q) {
    uint64_t r = 1;
    a %= q;
    while (e) {
        if (e & 1) r = mulmod(r, a, q);
        a = mulmod(a, a, q);
        e >>= 1;
    }
    return r;
}

// reduce a rational mod q; fails (returns false) when q divides the denominator
bool rat_mod(const Rat& r, uint64_t q, uint64_t& out) {
    uint64_t den = mpz_fdiv_ui(r.get_den().get_mpz_t(), q);
    if (den == 0) return false;
    uint64_t num = mpz_fdiv_ui(r.get_num().get_mpz_t(), q);
    out = mulmod(num, powmod(den, q - 2, q), q);
    return true;
}

using ModVec = std::vector<std::pair<uint64_t, uint64_t>>;

int rank_mod_q(const std::vector<SparseVec>& vectors, uint64_t q, bool& ok) {
    ok = true;
    std::vector<ModVec> rows;
    rows.reserve(vectors.size());
    for (const auto& v : vectors) {
        ModVec m;
        m.reserve(v.size());
        for (const auto& [i, c] : v) {
            uint64_t x;
            if (!rat_mod(c, q, x)) {
                ok = false;
                return 0;
            }
            if (x != 0) m.emplace_back(i, x);
        }
        rows.push_back(std::move(m));
    }
    // echelon mod q, lowest-index pivots
    std::map<uint64_t, ModVec> pivots;  // leading index -> normalized row
    int r = 0;
    for (auto& row : rows) {
        while (!row.empty()) {
            auto it = pivots.find(row.front().first);
            if (it == pivots.end()) break;
            // row -= row.front() * pivot
            uint64_t f = q - row.front().second;
            const ModVec& pv = it->second;
            ModVec nr;
            nr.reserve(row.size() + pv.size());
            size_t i = 0, j = 0;
            while (i < row.size() || j < pv.size()) {
                if (j == pv.size() || (i < row.size() && row[i].first < pv[j].first)) {
                    nr.push_back(row[i++]);
                } else if (i == row.size() || pv[j].first < row[i].first) {
                    uint64_t val = mulmod(f, pv[j].second, q);
                    if (val) nr.emplace_back(pv[j].first, val);
                    ++j;
                } else {
                    uint64_t val = (row[i].second + mulmod(f, pv[j].second, q)) % q;
                    if (val) nr.emplace_back(row[i].first, val);
                    ++i, ++j;
                }
            }
            row = std::move(nr);
        }
        if (row.empty()) continue;
        uint64_t inv = powmod(row.front().second, q - 2, q);
        for (auto& [i, c] : row) c = mulmod(c, inv, q);
        uint64_t lead = row.front().first;
        pivots.emplace(lead, std::move(row));
        ++r;
    }
    return r;
}

int rank_exact(const std::vector<SparseVec>& vectors) {
    Echelon e;
    for (const auto& v : vectors) e.add(v);
    return e.rank();
}

}  // namespace

int rank(const std::vector<SparseVec>& vectors, RankMode mode, const Int& avoid) {
    if (vectors.empty()) return 0;
    if (mode == RankMode::Exact) return rank_exact(vectors);
    auto primes = modular_primes(8, avoid);
    for (uint64_t q : primes) {
        bool ok;
        int r = rank_mod_q(vectors, q, ok);
        if (!ok) continue;  // q hit a denominator, try the next prime
        if (mode == RankMode::Modular) return r;
        // modular rank is a lower bound on the Q-rank; full rank mod q is
        // therefore already exact.  Anything less needs exact elimination.
        if (r == static_cast<int>(vectors.size())) return r;
        return rank_exact(vectors);
    }
    return rank_exact(vectors);
}

// ---------------------------------------------------------------- in_span

namespace {

// Dense elimination over the localization Z_(p): pivots chosen with minimal
// p-adic valuation, realizing the Smith normal form over the DVR.  Row and
// column operations stay invertible over Z_(p).
SpanResult span_over_zp(const SpanQuery& q, const Int& p) {
    // collect coordinate universe
    std::map<uint64_t, size_t> coord;
    auto touch = [&](const SparseVec& v) {
        for (auto& [i, c] : v)
            if (!coord.count(i)) {
                size_t k = coord.size();
                coord[i] = k;
            }
    };
    touch(q.target);
    for (auto& g : q.generators) touch(g);
    size_t nrows = coord.size();
    size_t ncols = q.generators.size();

    std::vector<std::vector<Rat>> A(nrows, std::vector<Rat>(ncols, Rat(0)));
    std::vector<Rat> t(nrows, Rat(0));
    for (size_t j = 0; j < ncols; ++j)
        for (auto& [i, c] : q.generators[j]) A[coord[i]][j] = c;
    for (auto& [i, c] : q.target) t[coord[i]] = c;

    // V tracks column operations: solution c = V * y
    std::vector<std::vector<Rat>> V(ncols, std::vector<Rat>(ncols, Rat(0)));
    for (size_t j = 0; j < ncols; ++j) V[j][j] = 1;

    size_t r = 0;
    std::vector<long> pivot_val;
    for (; r < std::min(nrows, ncols); ++r) {
        // minimal-valuation pivot among rows/cols >= r
        bool found = false;
        long best = 0;
        size_t bi = r, bj = r;
        for (size_t i = r; i < nrows; ++i)
            for (size_t j = r; j < ncols; ++j) {
                if (A[i][j] == 0) continue;
                long v = vp(A[i][j], p);
                if (!found || v < best) {
                    found = true;
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        if (!found) break;
        std::swap(A[r], A[bi]);
        std::swap(t[r], t[bi]);
        for (size_t i = 0; i < nrows; ++i) std::swap(A[i][r], A[i][bj]);
        for (size_t i = 0; i < ncols; ++i) std::swap(V[i][r], V[i][bj]);
        pivot_val.push_back(best);

        const Rat piv = A[r][r];
        for (size_t i = 0; i < nrows; ++i) {
            if (i == r || A[i][r] == 0) continue;
            Rat f = A[i][r] / piv;  // vp(f) >= 0 by pivot minimality
            for (size_t j = r; j < ncols; ++j) A[i][j] -= f * A[r][j];
            t[i] -= f * t[r];
        }
        for (size_t j = r + 1; j < ncols; ++j) {
            if (A[r][j] == 0) continue;
            Rat f = A[r][j] / piv;  // vp >= 0
            for (size_t i = 0; i < nrows; ++i) A[i][j] -= f * A[i][r];
            for (size_t k = 0; k < ncols; ++k) V[k][j] -= f * V[k][r];
        }
    }

    // solvability over Z_(p): residual target rows must vanish, and each
    // pivot row needs vp(t_r) >= vp(pivot)
    std::vector<Rat> y(ncols, Rat(0));
    for (size_t i = r; i < nrows; ++i)
        if (t[i] != 0) return {};
    for (size_t k = 0; k < r; ++k) {
        if (t[k] == 0) continue;
        if (vp(t[k], p) < pivot_val[k]) return {};  // Q-solvable but not p-locally
        y[k] = t[k] / A[k][k];
    }
    SpanResult res;
    res.yes = true;
    res.coefficients.assign(ncols, Rat(0));
    for (size_t i = 0; i < ncols; ++i)
        for (size_t k = 0; k < ncols; ++k)
            if (V[i][k] != 0 && y[k] != 0) res.coefficients[i] += V[i][k] * y[k];
    return res;
}

}  // namespace

SpanResult in_span(const SpanQuery& q, Locality loc, const Int& p) {
    if (loc == Locality::OverZp) return span_over_zp(q, p);
    Echelon e;
    for (const auto& g : q.generators) e.add(g);
    std::vector<Rat> combo(q.generators.size(), Rat(0));
    SparseVec r = e.reduce(q.target, &combo);
    if (!r.empty()) return {};
    SpanResult res;
    res.yes = true;
    res.coefficients.resize(q.generators.size());
    for (size_t i = 0; i < q.generators.size(); ++i) res.coefficients[i] = -combo[i];
    return res;
}

}  // namespace dglr
