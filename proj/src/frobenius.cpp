#include "dglr/frobenius.hpp"

#include <functional>
#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace dglr {

FrobeniusSolutionSet frobenius_solve(const FrobeniusInstance& inst) {
    const size_t n = inst.denominations.size();
    if (n == 0) throw std::invalid_argument("empty denomination list");
    for (long d : inst.denominations)
        if (d <= 0) throw std::invalid_argument("denominations must be positive");
    if (inst.target < 0) throw std::invalid_argument("negative target");

    std::vector<long> lo(n, 0), hi(n, inst.target);
    for (const auto& c : inst.constraints) {
        if (c.index >= n) throw std::invalid_argument("constraint index out of range");
        switch (c.kind) {
            case FrobeniusConstraint::GE: lo[c.index] = std::max(lo[c.index], c.value); break;
            case FrobeniusConstraint::LE: hi[c.index] = std::min(hi[c.index], c.value); break;
            case FrobeniusConstraint::EQ:
                lo[c.index] = std::max(lo[c.index], c.value);
                hi[c.index] = std::min(hi[c.index], c.value);
                break;
        }
    }

    // search coordinates in decreasing-denomination order
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return inst.denominations[a] > inst.denominations[b];
    });

    // per-suffix residual feasibility: gcd must divide, and forced minimum
    // contributions must fit
    std::vector<long> sufgcd(n + 1, 0), sufmin(n + 1, 0);
    for (size_t i = n; i-- > 0;) {
        size_t k = order[i];
        sufgcd[i] = std::gcd(sufgcd[i + 1], inst.denominations[k]);
        sufmin[i] = sufmin[i + 1] + lo[k] * inst.denominations[k];
    }

    std::vector<long> a(n, 0);
    FrobeniusSolutionSet out;
    std::function<void(size_t, long)> dfs = [&](size_t i, long residual) {
        if (i == n) {
            if (residual == 0) out.solutions.push_back(a);
            return;
        }
        if (residual < sufmin[i]) return;
        if (residual % sufgcd[i]) return;
        size_t k = order[i];
        long d = inst.denominations[k];
        long maxq = std::min<long>(hi[k], residual / d);
        for (long q = lo[k]; q <= maxq; ++q) {
            a[k] = q;
            dfs(i + 1, residual - q * d);
        }
        a[k] = 0;
    };
    dfs(0, inst.target);
    std::sort(out.solutions.begin(), out.solutions.end());
    return out;
}

std::vector<MultiDegree> degree_support(const Alphabet& A, int target_degree,
                                        const std::vector<DegreeConstraint>& constraints) {
    // distinct degrees, multiplicity-aware
    std::map<int, std::vector<GenId>> by_degree;
    for (GenId g = 0; g < A.size(); ++g) by_degree[A.degree(g)].push_back(g);

    std::vector<MultiDegree> result;
    if (target_degree == 0) {
        result.push_back({});
        return result;
    }
    if (target_degree < 0 || by_degree.empty()) return result;

    FrobeniusInstance inst;
    std::vector<int> degs;
    for (auto& [d, gens] : by_degree) {
        degs.push_back(d);
        inst.denominations.push_back(d);
    }
    inst.target = target_degree;
    for (const auto& c : constraints) {
        auto it = std::find(degs.begin(), degs.end(), c.degree);
        if (it == degs.end()) {
            // constraining an absent degree: GE >= 1 is unsatisfiable, LE/EQ 0 trivial
            if (c.kind == FrobeniusConstraint::GE && c.value > 0) return result;
            if (c.kind == FrobeniusConstraint::EQ && c.value > 0) return result;
            continue;
        }
        inst.constraints.push_back({static_cast<size_t>(it - degs.begin()), c.kind, c.value});
    }

    auto sols = frobenius_solve(inst);

    // expand each degree-level solution into generator-level exponent vectors
    for (const auto& sol : sols.solutions) {
        std::vector<MultiDegree> partial(1);
        for (size_t i = 0; i < degs.size(); ++i) {
            long total = sol[i];
            if (total == 0) continue;
            const auto& gens = by_degree[degs[i]];
            // compositions of `total` over gens (stars and bars)
            std::vector<std::vector<int>> comps;
            std::vector<int> cur(gens.size(), 0);
            std::function<void(size_t, long)> go = [&](size_t j, long rem) {
                if (j + 1 == gens.size()) {
                    cur[j] = static_cast<int>(rem);
                    comps.push_back(cur);
                    return;
                }
                for (long q = 0; q <= rem; ++q) {
                    cur[j] = static_cast<int>(q);
                    go(j + 1, rem - q);
                }
            };
            go(0, total);
            std::vector<MultiDegree> next;
            next.reserve(partial.size() * comps.size());
            for (const auto& base : partial)
                for (const auto& comp : comps) {
                    MultiDegree md = base;
                    for (size_t j = 0; j < gens.size(); ++j)
                        if (comp[j] > 0) md.e.emplace_back(gens[j], comp[j]);
                    next.push_back(std::move(md));
                }
            partial = std::move(next);
        }
        for (auto& md : partial) {
            std::sort(md.e.begin(), md.e.end());
            result.push_back(std::move(md));
        }
    }
    std::sort(result.begin(), result.end());
    return result;
}

}  // namespace dglr
