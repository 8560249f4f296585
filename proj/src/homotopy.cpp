#include "dglr/homotopy.hpp"

namespace dglr {

CylinderPresentation cylinder(const DglPresentation& L) {
    CylinderPresentation C;
    C.n_base = L.alphabet.size();
    C.dgl.p = L.p;
    C.dgl.n = L.n;
    C.dgl.digraph = L.digraph;
    // base copy (same ids)
    for (GenId g = 0; g < L.alphabet.size(); ++g) {
        const auto& gen = L.alphabet[g];
        C.dgl.alphabet.add(gen.name, gen.degree, gen.kind, gen.a, gen.b);
    }
    C.s_of.resize(C.n_base);
    C.prime_of.resize(C.n_base);
    for (GenId g = 0; g < C.n_base; ++g)
        C.s_of[g] = C.dgl.alphabet.add("s." + L.alphabet[g].name, L.alphabet.degree(g) + 1);
    for (GenId g = 0; g < C.n_base; ++g)
        C.prime_of[g] = C.dgl.alphabet.add(L.alphabet[g].name + "'", L.alphabet.degree(g));

    for (GenId g = 0; g < C.n_base; ++g) {
        if (LiePtr dg = L.diff(g)) C.dgl.differential[g] = dg;  // D(w) = dw
        C.dgl.differential[C.s_of[g]] = lie_leaf(C.prime_of[g]);  // D(sw) = w'
        // D(w') = 0: absent
    }
    C.dgl.first_tower_gen = C.dgl.alphabet.size();
    C.dgl.validate();

    C.S.degree_shift = +1;
    C.S.missing_is_zero = true;
    for (GenId g = 0; g < C.n_base; ++g) C.S.images[g] = Tensor::word(Word(1, C.s_of[g]));
    return C;
}

Tensor e_theta(const CylinderPresentation& C, GenId g) {
    if (g >= C.n_base) throw std::invalid_argument("e_theta expects a base generator");
    Tensor acc = Tensor::word(Word(1, g));
    acc += Tensor::word(Word(1, C.prime_of[g]));
    Tensor cur = Tensor::word(Word(1, g));
    const int cap = C.dgl.alphabet.degree(g) + 3;
    for (int n = 1; n <= cap; ++n) {
        cur = apply_derivation(C.S, C.dgl.d_of(cur), C.dgl.alphabet);
        if (cur.is_zero()) return acc;
        Rat f;
        try {
            f = inverse_factorial(static_cast<unsigned>(n), C.dgl.p);
        } catch (const NotPLocal& e) {
            throw NotPLocalFactorial(e.what());
        }
        acc.axpy(f, cur);
    }
    throw std::logic_error("e_theta did not terminate");
}

Tensor DglMap::image_tensor(GenId g) const {
    auto it = images.find(g);
    if (it == images.end()) throw UnknownGenerator(source->alphabet[g].name);
    return expand(it->second, target->alphabet);
}

Tensor DglMap::apply(const Tensor& t) const {
    Tensor out;
    for (auto& [w, c] : t.terms) {
        Tensor prod = Tensor::word(Word());
        prod *= c;
        for (GenId g : w) {
            prod = concat(prod, image_tensor(g));
            if (prod.is_zero()) break;
        }
        out += prod;
    }
    return out;
}

bool is_chain_map(const DglMap& f, std::string* first_failure) {
    for (GenId g = 0; g < f.source->alphabet.size(); ++g) {
        Tensor lhs = f.target->d_of(f.image_tensor(g));
        Tensor dg;
        if (LiePtr e = f.source->diff(g)) dg = expand(e, f.source->alphabet);
        Tensor rhs = f.apply(dg);
        if (!(lhs == rhs)) {
            if (first_failure) *first_failure = f.source->alphabet[g].name;
            return false;
        }
    }
    return true;
}

HomotopyWitness build_lemma_homotopy(const DglMap& alpha, const DglMap& alpha_prime, int n,
                                     const LiePtr& y, const LiePtr& z) {
    const DglPresentation& L = *alpha.source;
    if (alpha.target != alpha_prime.target || alpha.source != alpha_prime.source)
        throw EndpointMismatch("maps must share source and target");
    for (GenId g = 0; g < L.alphabet.size(); ++g)
        if (L.alphabet.degree(g) > n) throw EndpointMismatch("source has generators above degree n");

    Tensor ty = expand(y, alpha.target->alphabet);
    Tensor tz = expand(z, alpha.target->alphabet);
    if (!(alpha.target->d_of(tz) == ty)) throw NotABoundaryWitness("y != d(z)");

    // each degree-n generator is corrected either by y or not at all (the
    // lemma is applied generator by generator in the tower arguments)
    std::vector<char> corrected(L.alphabet.size(), 0);
    for (GenId g = 0; g < L.alphabet.size(); ++g) {
        Tensor diff = alpha_prime.image_tensor(g);
        diff.axpy(Rat(-1), alpha.image_tensor(g));
        if (L.alphabet.degree(g) < n) {
            if (!diff.is_zero()) throw EndpointMismatch("maps differ below degree n");
        } else if (diff.is_zero()) {
            corrected[g] = 0;
        } else if (diff == ty) {
            corrected[g] = 1;
        } else {
            throw EndpointMismatch("alpha'(w) - alpha(w) != y on degree n");
        }
    }

    HomotopyWitness W;
    W.cyl = std::make_shared<CylinderPresentation>(cylinder(L));
    const CylinderPresentation& C = *W.cyl;
    W.F.source = &C.dgl;
    W.F.target = alpha.target;
    for (GenId g = 0; g < C.n_base; ++g) {
        bool top = corrected[g];
        W.F.images[g] = top ? alpha_prime.images.at(g) : alpha.images.at(g);
        W.F.images[C.prime_of[g]] = top ? lie_scale(Rat(-1), y) : lie_zero();
        W.F.images[C.s_of[g]] = top ? lie_scale(Rat(-1), z) : lie_zero();
    }
    std::string bad;
    if (!is_chain_map(W.F, &bad)) throw EndpointMismatch("F is not a chain map at " + bad);

    // endpoint identities, by expansion
    bool all_prime = true, all_plain = true;
    for (GenId g = 0; g < C.n_base; ++g) {
        Tensor Fg = W.F.image_tensor(g);
        Tensor Feg = W.F.apply(e_theta(C, g));
        Tensor a = alpha.image_tensor(g);
        Tensor ap = alpha_prime.image_tensor(g);
        if (!(Fg == ap && Feg == a)) all_prime = false;
        if (!(Fg == a && Feg == ap)) all_plain = false;
    }
    if (!all_prime && !all_plain)
        throw EndpointMismatch("endpoint identities failed under both orientations");
    W.endpoints_swapped = all_prime;
    return W;
}

HomotopyDecision homotopic_on_generators(const DglMap& alpha, const DglMap& alpha_prime,
                                         int budget) {
    const DglPresentation& L = *alpha.source;
    HomotopyDecision out;

    std::map<int, std::vector<GenId>> by_degree;
    for (GenId g = 0; g < L.alphabet.size(); ++g) by_degree[L.alphabet.degree(g)].push_back(g);

    DglMap cur = alpha;
    for (auto& [deg, gens] : by_degree) {
        std::vector<std::pair<GenId, Tensor>> diffs;
        for (GenId g : gens) {
            Tensor d = alpha_prime.image_tensor(g);
            d.axpy(Rat(-1), cur.image_tensor(g));
            if (!d.is_zero()) diffs.emplace_back(g, std::move(d));
        }
        if (diffs.empty()) continue;
        if (budget <= 0) return out;  // Unknown
        --budget;
        for (auto& [g, d] : diffs) {
            // the correction is a cycle since the maps agree below; it must
            // be a boundary for a Lemma-2.1 step to exist at this degree
            WordIndex ix;
            SpanQuery q;
            q.target = to_sparse(d, ix);
            for (auto& U : degree_support(alpha.target->alphabet, deg + 1))
                for (auto& b : lie_multidegree_basis(alpha.target->alphabet, U)) {
                    Tensor img = alpha.target->d_of_expr(b.bracketing);
                    if (!img.is_zero()) q.generators.push_back(to_sparse(img, ix));
                }
            if (!in_span(q, Locality::OverQ, alpha.target->p).yes) {
                out.answer = HomotopyAnswer::No;
                return out;
            }
            // correct up to homotopy and continue upward
            cur.images[g] = alpha_prime.images.at(g);
        }
    }
    out.answer = HomotopyAnswer::Yes;
    return out;
}

}  // namespace dglr
