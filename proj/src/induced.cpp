#include "dglr/induced.hpp"

#include <algorithm>

namespace dglr {

namespace {

// Chain-map condition d(alpha(g)) = alpha(d(g)) for the induced self-map,
// by full expansion on every generator.  Generators on pure relabel orbits
// are walked so each differential is expanded exactly once; matrix-acted
// generators (and anything whose differential touches them) are checked
// directly.
void verify_chain_map(const DglPresentation& L, const GenAction& act) {
    std::vector<char> visited(L.alphabet.size(), 0);
    auto direct_check = [&](GenId g) {
        Tensor lhs;  // d(alpha(g)) where alpha(g) is linear in generators
        auto mit = act.mixed.find(g);
        if (mit == act.mixed.end()) {
            lhs = L.image_of(act.relabel[g]);
        } else {
            for (auto& [target, c] : mit->second)
                lhs.axpy(c, L.image_of(static_cast<GenId>(target)));
        }
        Tensor rhs;  // alpha(d(g))
        if (LiePtr dg = L.diff(g)) rhs = act.apply(expand(dg, L.alphabet));
        if (!(lhs == rhs))
            throw NonEquivariantCycleBasis("chain-map condition fails on " + L.alphabet[g].name);
    };

    if (!act.mixed.empty()) {
        // conservative: check every generator directly (the expansion cache
        // keeps repeated image expansions tolerable)
        for (GenId g = 0; g < L.alphabet.size(); ++g) direct_check(g);
        return;
    }
    const std::vector<GenId>& gm = act.relabel;
    for (GenId start = 0; start < L.alphabet.size(); ++start) {
        if (visited[start]) continue;
        Tensor first;
        if (LiePtr d = L.diff(start)) first = expand(d, L.alphabet);
        Tensor cur = first;
        GenId g = start;
        do {
            visited[g] = 1;
            GenId next = gm[g];
            Tensor expect = tensor_relabel(cur, gm);  // alpha(d g)
            Tensor actual;                            // d(alpha g)
            if (next == start) {
                actual = first;
            } else if (LiePtr d = L.diff(next)) {
                actual = expand(d, L.alphabet);
            }
            if (!(expect == actual))
                throw NonEquivariantCycleBasis("chain-map condition fails on " + L.alphabet[g].name);
            cur = std::move(actual);
            g = next;
        } while (g != start);
    }
}

GenAction compose_actions(const GenAction& a, const GenAction& b) {
    GenAction out;
    out.relabel.resize(b.relabel.size());
    for (GenId g = 0; g < b.relabel.size(); ++g) {
        auto bit = b.mixed.find(g);
        if (bit == b.mixed.end() && a.pure(b.relabel[g])) {
            out.relabel[g] = a.relabel[b.relabel[g]];
            continue;
        }
        // accumulate a-row of each b-target
        std::map<GenId, Rat> acc;
        auto add_target = [&](GenId target, const Rat& c) {
            auto ait = a.mixed.find(target);
            if (ait == a.mixed.end()) {
                acc[a.relabel[target]] += c;
            } else {
                for (auto& [t2, c2] : ait->second) acc[static_cast<GenId>(t2)] += c * c2;
            }
        };
        if (bit == b.mixed.end()) {
            add_target(b.relabel[g], Rat(1));
        } else {
            for (auto& [t, c] : bit->second) add_target(static_cast<GenId>(t), c);
        }
        ActionRow row;
        for (auto& [t, c] : acc)
            if (c != 0) row.emplace_back(t, c);
        if (row.size() == 1 && row[0].second == 1) {
            out.relabel[g] = static_cast<GenId>(row[0].first);
        } else {
            out.relabel[g] = g;
            out.mixed[g] = std::move(row);
        }
    }
    return out;
}

bool actions_equal(const GenAction& a, const GenAction& b) {
    if (a.relabel.size() != b.relabel.size()) return false;
    for (GenId g = 0; g < a.relabel.size(); ++g) {
        bool pa = a.pure(g), pb = b.pure(g);
        if (pa && pb) {
            if (a.relabel[g] != b.relabel[g]) return false;
        } else {
            ActionRow ra = pa ? ActionRow{{a.relabel[g], Rat(1)}} : a.mixed.at(g);
            ActionRow rb = pb ? ActionRow{{b.relabel[g], Rat(1)}} : b.mixed.at(g);
            if (ra != rb) return false;
        }
    }
    return true;
}

}  // namespace

InducedSelfMap induce(const DglPresentation& L, const VertexPermutation& sigma) {
    if (L.level != 1) throw std::invalid_argument("tower levels need the Tower overload");
    InducedSelfMap m;
    m.sigma = sigma;
    m.presentation = &L;
    m.action.relabel = digraph_genmap(L, sigma);  // throws NotAnAutomorphism
    verify_chain_map(L, m.action);
    return m;
}

InducedSelfMap induce(Tower& tower, int level, const VertexPermutation& sigma) {
    InducedSelfMap m;
    m.sigma = sigma;
    m.presentation = &tower.level(level);
    m.action = tower.action(level, sigma);
    verify_chain_map(*m.presentation, m.action);
    return m;
}

namespace {

PhiImage phi_impl(const DglPresentation& L, const std::vector<VertexPermutation>& aut,
                  const std::function<InducedSelfMap(const VertexPermutation&)>& make) {
    PhiImage out;
    out.aut = aut;
    out.group = group_of_permutations(aut);
    for (auto& s : aut) out.images.push_back(make(s));

    // identity law
    for (size_t i = 0; i < aut.size(); ++i)
        if (aut[i].is_identity()) {
            const GenAction& a = out.images[i].action;
            if (!a.mixed.empty()) throw NonEquivariantCycleBasis("Phi(identity) is not the identity");
            for (size_t g = 0; g < a.relabel.size(); ++g)
                if (a.relabel[g] != static_cast<GenId>(g))
                    throw NonEquivariantCycleBasis("Phi(identity) is not the identity map");
        }

    // homomorphism law: generator images composed symbolically
    for (size_t i = 0; i < aut.size(); ++i)
        for (size_t j = 0; j < aut.size(); ++j) {
            int k = out.group.product[i][j];
            GenAction composed = compose_actions(out.images[i].action, out.images[j].action);
            if (!actions_equal(composed, out.images[k].action))
                throw NonEquivariantCycleBasis("Phi is not a homomorphism");
        }

    // injectivity: distinct sigma move some vertex, hence some x generator
    for (size_t i = 0; i < aut.size(); ++i)
        for (size_t j = i + 1; j < aut.size(); ++j)
            if (actions_equal(out.images[i].action, out.images[j].action))
                throw NonEquivariantCycleBasis("Phi is not injective");
    return out;
}

}  // namespace

PhiImage phi(const DglPresentation& L, const std::vector<VertexPermutation>& aut) {
    return phi_impl(L, aut, [&](const VertexPermutation& s) { return induce(L, s); });
}

PhiImage phi(Tower& tower, int level, const std::vector<VertexPermutation>& aut) {
    const DglPresentation& L = tower.level(level);
    return phi_impl(L, aut, [&](const VertexPermutation& s) { return induce(tower, level, s); });
}

CycleBasis relabel_cycles(const CycleBasis& basis, const DglPresentation& L,
                          const VertexPermutation& sigma) {
    std::vector<GenId> gm = digraph_genmap(L, sigma);

    std::map<std::map<Word, Rat>, size_t> by_expansion;
    std::vector<Tensor> expansions;
    for (size_t i = 0; i < basis.elements.size(); ++i) {
        expansions.push_back(expand(basis.elements[i].expr, L.alphabet));
        by_expansion[expansions.back().terms] = i;
    }

    CycleBasis out;
    out.degree = basis.degree;
    for (size_t i = 0; i < basis.elements.size(); ++i) {
        Tensor img = tensor_relabel(expansions[i], gm);
        auto it = by_expansion.find(img.terms);
        if (it == by_expansion.end())
            throw NotEquivariant("sigma-image of " + basis.elements[i].label.text +
                                 " is not a basis element");
        CycleBasisElement el = basis.elements[it->second];  // target slot
        el.expr = lie_relabel(basis.elements[i].expr, gm);
        out.elements.push_back(std::move(el));
    }
    return out;
}

}  // namespace dglr
