#include "dglr/dgl.hpp"

#include <algorithm>

namespace dglr {

static const Tensor kZero{};

const Tensor& DglPresentation::image_of(GenId g) const {
    auto it = image_cache_.find(g);
    if (it != image_cache_.end()) return it->second;
    LiePtr e = diff(g);
    if (!e) return kZero;
    return image_cache_.emplace(g, expand(e, alphabet)).first->second;
}

Tensor DglPresentation::d_of(const Tensor& t) const {
    Tensor out;
    // graded Leibniz, degree shift -1 (odd), Koszul sign over the prefix.
    // Core generator images are cached; tower generators are too many to
    // keep expanded, so their images are expanded per use.
    for (auto& [w, c] : t.terms) {
        int prefix_parity = 0;
        for (size_t i = 0; i < w.size(); ++i) {
            GenId g = w[i];
            LiePtr dg = diff(g);
            if (dg) {
                Tensor local;
                const Tensor* img;
                if (g < first_tower_gen) {
                    img = &image_of(g);
                } else {
                    local = expand(dg, alphabet);
                    img = &local;
                }
                if (!img->is_zero()) {
                    Rat f = prefix_parity ? -c : c;
                    Word prefix = w.substr(0, i);
                    Word suffix = w.substr(i + 1);
                    for (auto& [wi, ci] : img->terms) out.add_term(prefix + wi + suffix, f * ci);
                }
            }
            prefix_parity ^= alphabet.odd(g) ? 1 : 0;
        }
    }
    return out;
}

void DglPresentation::validate() const {
    for (auto& [g, e] : differential) {
        Tensor img = expand(e, alphabet);
        if (img.is_zero()) continue;
        auto deg = img.degree(alphabet);
        if (*deg != alphabet.degree(g) - 1)
            throw BadParameters("d(" + alphabet[g].name + ") has degree " + std::to_string(*deg) +
                                ", expected " + std::to_string(alphabet.degree(g) - 1));
        if (!d_of(img).is_zero()) throw BadParameters("dd != 0 on " + alphabet[g].name);
    }
}

// --------------------------------------------------------------- builders

namespace {

void check_digraph(const Digraph& g) {
    if (g.n() < 2) throw TooFewVertices();
    if (g.has_loops()) throw HasLoops();
    if (!is_strongly_connected(g)) throw NotStronglyConnected();
}

struct CoreIds {
    GenId w1, w2, w3, w4, w5;
};

CoreIds add_core(DglPresentation& L, int d1, int d2, int d3, int d4, int d5) {
    CoreIds c;
    c.w1 = L.alphabet.add("w1", d1, GenKind::W, 1);
    c.w2 = L.alphabet.add("w2", d2, GenKind::W, 2);
    c.w3 = L.alphabet.add("w3", d3, GenKind::W, 3);
    c.w4 = L.alphabet.add("w4", d4, GenKind::W, 4);
    c.w5 = L.alphabet.add("w5", d5, GenKind::W, 5);
    L.w = {c.w1, c.w2, c.w3, c.w4, c.w5};
    return c;
}

void add_vertices_edges(DglPresentation& L, const Digraph& g, int xdeg, int zdeg) {
    for (int v = 0; v < g.n(); ++v)
        L.x_of_vertex.push_back(
            L.alphabet.add("x_" + g.vertices[v], xdeg, GenKind::X, v));
    for (auto& [v, u] : g.edges)
        L.z_of_edge[{v, u}] = L.alphabet.add(
            "z_(" + g.vertices[v] + "," + g.vertices[u] + ")", zdeg, GenKind::Z, v, u);
}

}  // namespace

DglPresentation build_L1(const Digraph& g, int n, const Int& p) {
    check_digraph(g);
    if (n < 7 || n % 2 == 0) throw BadParameters("n must be an odd integer >= 7");
    if (!is_prime(p)) throw BadParameters("p must be prime");
    if (2 * p <= 309 * n + 62)
        throw BadParameters("p must exceed (309n+62)/2 = " + std::to_string((309 * n + 62) / 2.0));

    DglPresentation L;
    L.p = p;
    L.n = n;
    L.digraph = g;
    auto c = add_core(L, 16 * n + 3, 21 * n + 4, 28 * n + 5, 42 * n + 9, 56 * n + 11);
    add_vertices_edges(L, g, 96 * n + 18, 325 * n + 62);
    L.first_tower_gen = L.alphabet.size();

    auto leaf = [](GenId g_) { return lie_leaf(g_); };
    L.differential[c.w4] = lie_bracket(leaf(c.w2), leaf(c.w2));
    L.differential[c.w5] = lie_bracket(leaf(c.w3), leaf(c.w3));

    for (auto& [edge, zid] : L.z_of_edge) {
        GenId xv = L.x_of_vertex[edge.first];
        GenId xu = L.x_of_vertex[edge.second];
        LiePtr Xv = lie_bracket(lie_bracket(leaf(c.w5), leaf(c.w3)),
                                lie_bracket(leaf(xv), lie_bracket(leaf(xv), lie_bracket(leaf(c.w2), leaf(c.w3)))));
        LiePtr Y = lie_ad(leaf(c.w1), 12,
                          lie_bracket(lie_bracket(leaf(c.w2), leaf(c.w3)),
                                      lie_bracket(leaf(c.w3), leaf(c.w5))));
        LiePtr Z = lie_bracket(lie_ad(leaf(c.w1), 5, leaf(c.w3)),
                               lie_bracket(lie_ad(leaf(c.w2), 3, leaf(c.w3)),
                                           lie_ad(leaf(c.w2), 2, lie_bracket(leaf(c.w3), leaf(c.w5)))));
        L.differential[zid] = lie_sum({
            {1, lie_ad(leaf(xv), 3, lie_bracket(leaf(c.w1), leaf(c.w2)))},
            {1, lie_ad(leaf(c.w1), 7, lie_bracket(leaf(c.w2), lie_bracket(leaf(xv), leaf(xu))))},
            {1, lie_ad(leaf(c.w1), 19, leaf(c.w2))},
            {1, Xv},
            {1, Y},
            {1, Z},
        });
    }
    L.validate();
    return L;
}

DglPresentation build_L1_synthetic(const Digraph& g, const Int& p) {
    check_digraph(g);
    if (!is_prime(p) || p < 5) throw BadParameters("p must be a prime >= 5");

    DglPresentation L;
    L.p = p;
    L.n = 0;
    L.digraph = g;
    auto c = add_core(L, 1, 1, 1, 3, 3);
    add_vertices_edges(L, g, 2, 7);
    L.first_tower_gen = L.alphabet.size();

    auto leaf = [](GenId g_) { return lie_leaf(g_); };
    L.differential[c.w4] = lie_bracket(leaf(c.w2), leaf(c.w2));
    L.differential[c.w5] = lie_bracket(leaf(c.w3), leaf(c.w3));

    for (auto& [edge, zid] : L.z_of_edge) {
        GenId xv = L.x_of_vertex[edge.first];
        GenId xu = L.x_of_vertex[edge.second];
        LiePtr Xv = lie_bracket(leaf(c.w3), lie_bracket(leaf(xv), lie_bracket(leaf(xv), leaf(c.w2))));
        LiePtr Y = lie_ad(leaf(c.w1), 2, lie_bracket(leaf(c.w3), leaf(c.w5)));
        LiePtr Z = lie_ad(leaf(c.w2), 2, lie_bracket(leaf(c.w3), leaf(c.w5)));
        L.differential[zid] = lie_sum({
            {1, lie_ad(leaf(xv), 2, lie_bracket(leaf(c.w1), leaf(c.w2)))},
            {1, lie_ad(leaf(c.w1), 1, lie_bracket(leaf(c.w2), lie_bracket(leaf(xv), leaf(xu))))},
            {1, lie_ad(leaf(c.w1), 5, leaf(c.w2))},
            {1, Xv},
            {1, Y},
            {1, Z},
        });
    }
    L.validate();
    return L;
}

bool is_cycle(const DglPresentation& L, const LiePtr& e) { return L.d_of_expr(e).is_zero(); }

LiePtr GenAction::image_expr(GenId g) const {
    auto it = mixed.find(g);
    if (it == mixed.end()) return lie_leaf(relabel[g]);
    std::vector<std::pair<Rat, LiePtr>> terms;
    for (auto& [target, c] : it->second) terms.emplace_back(c, lie_leaf(static_cast<GenId>(target)));
    return lie_sum(std::move(terms));
}

Tensor GenAction::apply(const Tensor& t) const {
    Tensor out;
    for (auto& [w, c] : t.terms) {
        // product over letters; images are linear in generators
        std::vector<std::pair<Word, Rat>> partial{{Word(), c}};
        for (GenId g : w) {
            auto it = mixed.find(g);
            if (it == mixed.end()) {
                for (auto& [pw, pc] : partial) pw.push_back(relabel[g]);
            } else {
                std::vector<std::pair<Word, Rat>> next;
                next.reserve(partial.size() * it->second.size());
                for (auto& [pw, pc] : partial)
                    for (auto& [target, tc] : it->second) {
                        Word nw = pw;
                        nw.push_back(static_cast<GenId>(target));
                        next.emplace_back(std::move(nw), pc * tc);
                    }
                partial = std::move(next);
            }
        }
        for (auto& [pw, pc] : partial) out.add_term(pw, pc);
    }
    return out;
}

std::vector<GenId> digraph_genmap(const DglPresentation& L, const VertexPermutation& sigma) {
    if (static_cast<int>(sigma.map.size()) != L.digraph.n()) throw VertexSetMismatch();
    std::vector<GenId> m(L.alphabet.size());
    for (size_t g = 0; g < L.alphabet.size(); ++g) m[g] = static_cast<GenId>(g);
    for (int v = 0; v < L.digraph.n(); ++v) m[L.x_of_vertex[v]] = L.x_of_vertex[sigma(v)];
    for (auto& [e, zid] : L.z_of_edge) {
        auto it = L.z_of_edge.find({sigma(e.first), sigma(e.second)});
        if (it == L.z_of_edge.end()) throw NotAnAutomorphism();
        m[zid] = it->second;
    }
    return m;
}

// -------------------------------------------------------------- boundary

namespace {

std::vector<MultiDegree> expansion_mds(const Tensor& t) {
    std::set<MultiDegree> mds;
    for (auto& [w, c] : t.terms) mds.insert(MultiDegree::of_word(w));
    return {mds.begin(), mds.end()};
}

MultiDegree md_shift(const MultiDegree& src, GenId g, const MultiDegree& img) {
    // src - g + img, merged
    std::map<GenId, int> m;
    for (auto& [h, k] : src.e) m[h] += k;
    if (--m[g] == 0) m.erase(g);
    for (auto& [h, k] : img.e) m[h] += k;
    MultiDegree out;
    for (auto& [h, k] : m)
        if (k > 0) out.e.emplace_back(h, k);
    return out;
}

}  // namespace

BoundaryResult is_boundary(const DglPresentation& L, const LiePtr& e, const BoundaryOptions& opt) {
    Tensor target = expand(e, L.alphabet);
    BoundaryResult res;
    if (target.is_zero()) {
        res.yes = true;
        return res;
    }
    if (!L.d_of(target).is_zero()) throw NotACycle("is_boundary called on a non-cycle");
    int k = *target.degree(L.alphabet);

    auto allowed = [&](GenId g) { return !opt.subalgebra || opt.subalgebra(g); };
    std::set<MultiDegree> target_mds;
    for (auto& md : expansion_mds(target)) target_mds.insert(md);

    // image multidegrees of each generator's differential
    std::map<GenId, std::vector<MultiDegree>> gen_img_mds;
    for (auto& [g, ex] : L.differential)
        if (allowed(g)) gen_img_mds[g] = expansion_mds(expand(ex, L.alphabet));

    std::vector<MultiDegree> sources = degree_support(L.alphabet, k + 1);
    std::vector<MultiDegree> relevant;
    for (auto& U : sources) {
        bool ok = true;
        for (auto& [g, cnt] : U.e)
            if (!allowed(g)) {
                ok = false;
                break;
            }
        if (!ok) continue;
        bool hits = false;
        for (auto& [g, cnt] : U.e) {
            auto it = gen_img_mds.find(g);
            if (it == gen_img_mds.end()) continue;
            for (auto& m : it->second)
                if (target_mds.count(md_shift(U, g, m))) {
                    hits = true;
                    break;
                }
            if (hits) break;
        }
        if (hits) relevant.push_back(U);
    }
    if (relevant.empty()) {
        res.degree_infeasible = sources.empty();
        return res;  // no source can reach the target multidegrees: not a boundary
    }

    WordIndex ix;
    SpanQuery q;
    q.target = to_sparse(target, ix);
    std::vector<LiePtr> gens_expr;
    Int total_dim = 0;
    for (auto& U : relevant) {
        Int dim = lie_dimension(L.alphabet, U);
        total_dim += dim;
        if (total_dim > opt.max_block_dim) {
            BudgetExceeded ex("is_boundary block budget exceeded");
            ex.offenders.emplace_back(U.str(L.alphabet), dim);
            throw ex;
        }
        auto basis = lie_multidegree_basis(L.alphabet, U);
        for (auto& b : basis) {
            Tensor img = L.d_of_expr(b.bracketing);
            if (img.is_zero()) continue;
            q.generators.push_back(to_sparse(img, ix));
            gens_expr.push_back(b.bracketing);
        }
    }
    SpanResult s = in_span(q, opt.locality, L.p);
    res.yes = s.yes;
    if (s.yes) {
        for (size_t i = 0; i < gens_expr.size(); ++i)
            if (s.coefficients[i] != 0) res.preimage.emplace_back(s.coefficients[i], gens_expr[i]);
    }
    return res;
}

// -------------------------------------------------------------- homology

HomologyReport homology_report(const DglPresentation& L, const std::vector<int>& degrees) {
    HomologyReport rep;
    // linear parts of all differentials
    std::map<GenId, std::map<GenId, Rat>> lin;  // g -> linear coords of d(g)
    for (auto& [g, e] : L.differential) {
        auto [linear, rest] = decomposable_split(expand(e, L.alphabet));
        if (!linear.empty()) rep.linear_part_zero = false;
        lin[g] = std::move(linear);
    }
    auto rank_out_of = [&](int deg) -> Int {
        std::vector<SparseVec> rows;
        for (GenId g = 0; g < L.alphabet.size(); ++g) {
            if (L.alphabet.degree(g) != deg) continue;
            auto it = lin.find(g);
            if (it == lin.end() || it->second.empty()) continue;
            SparseVec v;
            for (auto& [h, c] : it->second) v.emplace_back(h, c);
            sv_normalize(v);
            if (!v.empty()) rows.push_back(std::move(v));
        }
        return rank(rows, RankMode::Exact);
    };
    for (int d : degrees) {
        Int nw = 0;
        for (GenId g = 0; g < L.alphabet.size(); ++g)
            if (L.alphabet.degree(g) == d) ++nw;
        Int rd = rank_out_of(d);
        Int rd_above = rank_out_of(d + 1);
        rep.rows.push_back({d, nw, rd, nw - rd - rd_above});
    }
    return rep;
}

}  // namespace dglr
