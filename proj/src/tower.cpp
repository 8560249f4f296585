#include <algorithm>
#include <cassert>
#include <functional>

#include "dglr/dgl.hpp"

namespace dglr {

namespace {

// closed automorphism group with identity first and index lookups
struct AutGroup {
    std::vector<VertexPermutation> elems;
    std::map<std::vector<int>, size_t> idx;

    explicit AutGroup(std::vector<VertexPermutation> in, int nverts) {
        if (in.empty()) in.push_back(identity_perm(nverts));
        std::stable_sort(in.begin(), in.end(), [](const VertexPermutation& a, const VertexPermutation& b) {
            return a.is_identity() > b.is_identity();
        });
        elems = std::move(in);
        if (!elems[0].is_identity()) throw std::invalid_argument("automorphism list lacks identity");
        for (size_t i = 0; i < elems.size(); ++i) idx[elems[i].map] = i;
    }
    size_t size() const { return elems.size(); }
    size_t compose_idx(size_t a, size_t b) const {
        auto it = idx.find(compose(elems[a], elems[b]).map);
        if (it == idx.end()) throw std::invalid_argument("automorphism list not closed");
        return it->second;
    }
    size_t inverse_idx(size_t a) const {
        auto it = idx.find(invert(elems[a]).map);
        if (it == idx.end()) throw std::invalid_argument("automorphism list not closed");
        return it->second;
    }
};

using Coords = SparseVec;

// action of a group on a block over a chosen basis of coordinate vectors:
// rows[g][j] expresses the g-image of vectors[j]
struct BlockAction {
    std::vector<Coords> vectors;
    std::vector<std::vector<ActionRow>> rows;
};

// Basis of span(start) permuted by the action when one exists: greedy free
// orbits, then candidates mixing a leftover vector with a group average
// (pairing eigenvectors of nontrivial characters with a fixed direction),
// then fixed vectors.  Fixed directions accepted too early would starve the
// paired candidates.  Returns false when no permutation basis was found.
bool permutation_basis(const std::vector<Coords>& start, size_t n_group,
                       const std::function<Coords(size_t, const Coords&)>& apply,
                       BlockAction& out) {
    out.vectors.clear();
    out.rows.assign(n_group, {});
    Echelon chosen;
    size_t dim = 0;
    {
        Echelon full;
        for (auto& v : start)
            if (full.add(v)) ++dim;
    }
    std::vector<std::vector<size_t>> perms(n_group);

    auto try_candidate = [&](const Coords& cand, size_t min_orbit) -> bool {
        if (cand.empty() || chosen.contains(cand)) return false;
        std::vector<Coords> orbit{cand};
        for (size_t g = 1; g < n_group; ++g) {
            Coords img = apply(g, cand);
            if (std::find(orbit.begin(), orbit.end(), img) == orbit.end())
                orbit.push_back(std::move(img));
        }
        if (orbit.size() < min_orbit) return false;
        Echelon probe = chosen;
        for (auto& o : orbit)
            if (!probe.add(o)) return false;
        std::vector<std::vector<size_t>> perm(n_group, std::vector<size_t>(orbit.size()));
        for (size_t g = 0; g < n_group; ++g)
            for (size_t i = 0; i < orbit.size(); ++i) {
                Coords img = apply(g, orbit[i]);
                auto it = std::find(orbit.begin(), orbit.end(), img);
                if (it == orbit.end()) return false;  // not a signless permutation
                perm[g][i] = static_cast<size_t>(it - orbit.begin());
            }
        size_t base = out.vectors.size();
        for (auto& o : orbit) {
            chosen.add(o);
            out.vectors.push_back(o);
        }
        for (size_t g = 0; g < n_group; ++g) {
            perms[g].resize(out.vectors.size());
            for (size_t i = 0; i < orbit.size(); ++i) perms[g][base + i] = base + perm[g][i];
        }
        return true;
    };

    auto average = [&](const Coords& v) {
        Coords sum = v;
        for (size_t g = 1; g < n_group; ++g) sum = sv_axpy(sum, Rat(1), apply(g, v));
        return sum;
    };

    for (auto& v : start) {
        if (static_cast<size_t>(chosen.rank()) == dim) break;
        try_candidate(v, 2);
    }
    if (static_cast<size_t>(chosen.rank()) < dim)
        for (auto& v : start) {
            if (static_cast<size_t>(chosen.rank()) == dim) break;
            if (chosen.contains(v)) continue;
            for (auto& w : start) {
                if (try_candidate(sv_axpy(v, Rat(1), average(w)), 2)) break;
                if (try_candidate(sv_axpy(v, Rat(-1), average(w)), 2)) break;
            }
        }
    if (static_cast<size_t>(chosen.rank()) < dim)
        for (auto& v : start) {
            if (static_cast<size_t>(chosen.rank()) == dim) break;
            try_candidate(average(v), 1);
            try_candidate(v, 1);
        }
    if (static_cast<size_t>(chosen.rank()) < dim) return false;
    for (size_t g = 0; g < n_group; ++g) {
        out.rows[g].resize(out.vectors.size());
        for (size_t j = 0; j < out.vectors.size(); ++j) out.rows[g][j] = {{perms[g][j], Rat(1)}};
    }
    return true;
}

// General fallback: the plain basis with exact action matrices.  Some
// stabilized blocks provably admit no permutation basis (their character
// carries more nontrivial-irreducible multiplicity than trivial), so the
// group can only act there by integral matrices.
BlockAction matrix_action_basis(const std::vector<Coords>& start, size_t n_group,
                                const std::function<Coords(size_t, const Coords&)>& apply) {
    BlockAction out;
    Echelon span;
    for (auto& v : start)
        if (span.add(v)) out.vectors.push_back(v);
    Echelon coords;
    for (auto& v : out.vectors) coords.add(v);
    out.rows.assign(n_group, std::vector<ActionRow>(out.vectors.size()));
    for (size_t g = 0; g < n_group; ++g)
        for (size_t j = 0; j < out.vectors.size(); ++j) {
            Coords img = apply(g, out.vectors[j]);
            std::vector<Rat> combo(coords.added(), Rat(0));
            SparseVec red = coords.reduce(img, &combo);
            if (!red.empty()) throw std::logic_error("action does not stabilize the block span");
            ActionRow row;
            for (size_t k = 0; k < combo.size(); ++k)
                if (combo[k] != 0) row.emplace_back(k, -combo[k]);
            out.rows[g][j] = std::move(row);
        }
    return out;
}

BlockAction block_action(const std::vector<Coords>& start, size_t n_group,
                         const std::function<Coords(size_t, const Coords&)>& apply) {
    BlockAction out;
    if (permutation_basis(start, n_group, apply, out)) return out;
    return matrix_action_basis(start, n_group, apply);
}

std::string label_text(const CycleLabel& l, const Digraph& g) {
    switch (l.cls) {
        case 0: return "y1_" + std::to_string(l.index);
        case 1: return "y(" + g.vertices[l.v] + ")_" + std::to_string(l.index);
        case 2:
            return "y(" + g.vertices[l.v] + "," + g.vertices[l.u] + ")_" + std::to_string(l.index);
        case 4: return "y2_" + std::to_string(l.index);
        case 5: return "y3_" + std::to_string(l.index);
        default: return "yo_" + std::to_string(l.index);
    }
}

}  // namespace

// --------------------------------------------------- level-1 cycle bases

CycleBasisWithAction equivariant_cycle_space_basis(const DglPresentation& L, int degree,
                                                   const CycleOptions& opt) {
    CycleBasisWithAction out;
    out.basis.degree = degree;

    AutGroup G(opt.aut, L.digraph.n());
    std::vector<std::vector<GenId>> gms;
    for (auto& s : G.elems) gms.push_back(digraph_genmap(L, s));
    const size_t nG = G.size();

    std::vector<MultiDegree> sources = degree_support(L.alphabet, degree);
    if (opt.filter) {
        std::vector<MultiDegree> kept;
        for (auto& md : sources)
            if (opt.filter(md)) kept.push_back(md);
        sources = std::move(kept);
    }
    {
        Int total = 0;
        BudgetExceeded ex("cycle-space budget exceeded at degree " + std::to_string(degree));
        for (auto& md : sources) {
            Int d = lie_dimension(L.alphabet, md);
            total += d;
            if (total > opt.budget) ex.offenders.emplace_back(md.str(L.alphabet), d);
        }
        if (!ex.offenders.empty()) throw ex;
    }

    std::map<MultiDegree, size_t> md_index;
    for (size_t i = 0; i < sources.size(); ++i) md_index[sources[i]] = i;
    for (auto& gm : gms)
        for (auto& md : sources)
            if (!md_index.count(md_relabel(md, gm)))
                throw NonEquivariantCycleBasis("multidegree filter not stable under aut");

    std::vector<LieBlock> blocks(sources.size());
    std::vector<std::vector<Tensor>> images(sources.size());
    for (size_t i = 0; i < sources.size(); ++i) {
        blocks[i] = make_block(L.alphabet, sources[i]);
        images[i].reserve(blocks[i].expansions.size());
        for (auto& ex : blocks[i].expansions) images[i].push_back(L.d_of(ex));
    }

    // coupled components over shared image words
    std::vector<size_t> parent(sources.size());
    for (size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    std::function<size_t(size_t)> find = [&](size_t a) -> size_t {
        return parent[a] == a ? a : parent[a] = find(parent[a]);
    };
    {
        std::map<Word, size_t> owner;
        for (size_t i = 0; i < sources.size(); ++i)
            for (auto& img : images[i])
                for (auto& [w, c] : img.terms) {
                    auto [it, fresh] = owner.emplace(w, i);
                    if (!fresh) parent[find(i)] = find(it->second);
                }
    }
    std::map<size_t, std::vector<size_t>> comps;
    for (size_t i = 0; i < sources.size(); ++i) comps[find(i)].push_back(i);
    std::map<size_t, size_t> comp_of_md;
    for (auto& [root, members] : comps)
        for (size_t m : members) comp_of_md[m] = root;
    auto comp_img = [&](size_t root, size_t g) {
        return comp_of_md.at(md_index.at(md_relabel(sources[comps.at(root).front()], gms[g])));
    };

    struct CompSpace {
        std::vector<size_t> members;
        std::vector<size_t> offsets;
        size_t dim = 0;
    };
    std::map<size_t, CompSpace> spaces;
    for (auto& [root, members] : comps) {
        CompSpace s;
        s.members = members;
        for (size_t m : members) {
            s.offsets.push_back(s.dim);
            s.dim += blocks[m].basis.size();
        }
        spaces[root] = std::move(s);
    }

    auto comp_expansion = [&](size_t root, const Coords& v) {
        const CompSpace& S = spaces.at(root);
        Tensor t;
        for (auto& [i, c] : v) {
            size_t b = 0;
            while (b + 1 < S.offsets.size() && i >= S.offsets[b + 1]) ++b;
            t.axpy(c, blocks[S.members[b]].expansions[i - S.offsets[b]]);
        }
        return t;
    };
    auto comp_coordinatize = [&](size_t root, const Tensor& t) {
        const CompSpace& S = spaces.at(root);
        Coords v;
        std::map<MultiDegree, Tensor> parts;
        for (auto& [w, c] : t.terms) parts[MultiDegree::of_word(w)].add_term(w, c);
        for (auto& [md, part] : parts) {
            size_t mi = md_index.at(md);
            size_t b = std::find(S.members.begin(), S.members.end(), mi) - S.members.begin();
            if (b == S.members.size()) throw std::logic_error("coordinatize: wrong component");
            auto coords = lie_coordinates(part, blocks[mi]);
            for (size_t k = 0; k < coords.size(); ++k)
                if (coords[k] != 0) v.emplace_back(S.offsets[b] + k, coords[k]);
        }
        sv_normalize(v);
        return v;
    };
    auto transport = [&](size_t root, size_t g, const Coords& v) {
        if (g == 0) return v;
        return comp_coordinatize(comp_img(root, g), tensor_relabel(comp_expansion(root, v), gms[g]));
    };

    // kernel of one component: multidegree-pure vectors first, then completion
    auto component_kernel = [&](size_t root) {
        const CompSpace& S = spaces.at(root);
        WordIndex ix;
        std::vector<SparseVec> rows;
        rows.reserve(S.dim);
        for (size_t m : S.members)
            for (auto& img : images[m]) rows.push_back(to_sparse(img, ix));
        std::vector<Coords> pure;
        for (size_t b = 0; b < S.members.size(); ++b) {
            Echelon sub;
            size_t nb = blocks[S.members[b]].basis.size();
            for (size_t k = 0; k < nb; ++k) {
                std::vector<Rat> combo(sub.added(), Rat(0));
                SparseVec red = sub.reduce(rows[S.offsets[b] + k], &combo);
                if (red.empty()) {
                    Coords kv;
                    for (size_t t = 0; t < combo.size(); ++t)
                        if (combo[t] != 0) kv.emplace_back(S.offsets[b] + t, combo[t]);
                    kv.emplace_back(S.offsets[b] + k, Rat(1));
                    sv_normalize(kv);
                    pure.push_back(std::move(kv));
                }
                sub.add(rows[S.offsets[b] + k]);
            }
        }
        std::vector<Coords> full;
        {
            Echelon e2;
            for (size_t r = 0; r < rows.size(); ++r) {
                std::vector<Rat> combo(e2.added(), Rat(0));
                SparseVec red = e2.reduce(rows[r], &combo);
                if (red.empty()) {
                    Coords kv;
                    for (size_t t = 0; t < combo.size(); ++t)
                        if (combo[t] != 0) kv.emplace_back(t, combo[t]);
                    kv.emplace_back(r, Rat(1));
                    sv_normalize(kv);
                    full.push_back(std::move(kv));
                }
                e2.add(rows[r]);
            }
        }
        Echelon span;
        std::vector<Coords> basis;
        for (auto& v : pure)
            if (span.add(v)) basis.push_back(v);
        for (auto& v : full)
            if (span.add(v)) basis.push_back(v);
        return basis;
    };

    // labels
    int c_purew = 0, c_other = 0;
    std::map<int, int> c_onex;
    std::map<std::pair<int, int>, int> c_twox;
    auto md_xclass = [&](const MultiDegree& md) -> std::tuple<int, int, int> {
        int xcount = 0, v = -1, u = -1;
        for (auto& [g, k] : md.e) {
            const auto& gen = L.alphabet[g];
            if (gen.kind == GenKind::X) {
                for (int rep = 0; rep < k; ++rep) {
                    if (v < 0)
                        v = gen.a;
                    else if (u < 0)
                        u = gen.a;
                }
                xcount += k;
            } else if (gen.kind != GenKind::W) {
                return {3, -1, -1};
            }
        }
        if (xcount == 0) return {0, -1, -1};
        if (xcount == 1) return {1, v, -1};
        if (xcount == 2) return {2, std::min(v, u), std::max(v, u)};
        return {3, -1, -1};
    };
    auto classify = [&](size_t root, const Coords& vec) {
        const CompSpace& S = spaces.at(root);
        std::set<std::tuple<int, int, int>> classes;
        for (auto& [i, c] : vec) {
            size_t b = 0;
            while (b + 1 < S.offsets.size() && i >= S.offsets[b + 1]) ++b;
            classes.insert(md_xclass(sources[S.members[b]]));
        }
        CycleLabel l;
        if (classes.size() == 1 && std::get<0>(*classes.begin()) != 3) {
            auto [cls, v, u] = *classes.begin();
            l.cls = cls;
            l.v = v;
            l.u = u;
        }
        switch (l.cls) {
            case 0: l.index = c_purew++; break;
            case 1: l.index = c_onex[l.v]++; break;
            case 2: l.index = c_twox[{l.v, l.u}]++; break;
            default: l.index = c_other++; break;
        }
        l.text = label_text(l, L.digraph);
        return l;
    };

    // orbit processing with coset bookkeeping
    struct CompRecord {
        size_t root;
        size_t rep_root;
        size_t to_rep_g;
        std::vector<Coords> vectors;
        std::vector<CycleLabel> labels;
        std::map<size_t, std::vector<ActionRow>> stab_rows;  // rep only
    };
    std::map<size_t, size_t> record_of_root;
    std::vector<CompRecord> records;
    std::set<size_t> done;
    for (auto& [root, members] : comps) {
        if (done.count(root)) continue;
        std::vector<std::pair<size_t, size_t>> orbit{{root, 0}};
        std::vector<size_t> stab;
        for (size_t g = 0; g < nG; ++g) {
            size_t img = comp_img(root, g);
            if (img == root) {
                stab.push_back(g);
            } else {
                bool seen = false;
                for (auto& [c, gg] : orbit) seen |= (c == img);
                if (!seen) orbit.emplace_back(img, g);
            }
        }
        auto kernel = component_kernel(root);
        CompRecord rep;
        rep.root = root;
        rep.rep_root = root;
        rep.to_rep_g = 0;
        if (stab.size() > 1 && !kernel.empty()) {
            auto apply = [&](size_t si, const Coords& v) { return transport(root, stab[si], v); };
            BlockAction ba = block_action(kernel, stab.size(), apply);
            rep.vectors = ba.vectors;
            for (size_t si = 0; si < stab.size(); ++si) rep.stab_rows[stab[si]] = ba.rows[si];
        } else {
            rep.vectors = kernel;
        }
        for (auto& v : rep.vectors) rep.labels.push_back(classify(root, v));
        done.insert(root);
        record_of_root[root] = records.size();
        records.push_back(rep);  // keep `rep` itself for transports below

        for (size_t oi = 1; oi < orbit.size(); ++oi) {
            auto [croot, g] = orbit[oi];
            CompRecord mem;
            mem.root = croot;
            mem.rep_root = root;
            mem.to_rep_g = g;
            for (size_t vi = 0; vi < rep.vectors.size(); ++vi) {
                mem.vectors.push_back(transport(root, g, rep.vectors[vi]));
                CycleLabel l = rep.labels[vi];
                if (l.cls == 1) {
                    l.v = G.elems[g](l.v);
                    l.index = c_onex[l.v]++;
                } else if (l.cls == 2) {
                    int a = G.elems[g](l.v), b = G.elems[g](l.u);
                    l.v = std::min(a, b);
                    l.u = std::max(a, b);
                    l.index = c_twox[{l.v, l.u}]++;
                } else if (l.cls == 0) {
                    l.index = c_purew++;
                } else {
                    l.index = c_other++;
                }
                l.text = label_text(l, L.digraph);
                mem.labels.push_back(l);
            }
            done.insert(croot);
            record_of_root[croot] = records.size();
            records.push_back(std::move(mem));
        }
    }

    // materialize in record order
    std::map<std::pair<size_t, size_t>, size_t> global;
    for (auto& R : records) {
        const CompSpace& S = spaces.at(R.root);
        for (size_t vi = 0; vi < R.vectors.size(); ++vi) {
            std::vector<std::pair<Rat, LiePtr>> terms;
            for (auto& [i, c] : R.vectors[vi]) {
                size_t b = 0;
                while (b + 1 < S.offsets.size() && i >= S.offsets[b + 1]) ++b;
                terms.emplace_back(c, blocks[S.members[b]].basis[i - S.offsets[b]].bracketing);
            }
            global[{R.root, vi}] = out.basis.elements.size();
            out.basis.elements.push_back({R.labels[vi], lie_sum(std::move(terms))});
            out.expansions.push_back(comp_expansion(R.root, R.vectors[vi]));
        }
    }

    out.action.assign(nG, std::vector<ActionRow>(out.basis.elements.size()));
    for (size_t g = 0; g < nG; ++g)
        for (auto& R : records) {
            size_t target_root = comp_img(R.root, g);
            const CompRecord& T = records[record_of_root.at(target_root)];
            // h = inv(to_rep(T)) * g * to_rep(R) stabilizes the rep
            size_t h = G.compose_idx(G.inverse_idx(T.to_rep_g), G.compose_idx(g, R.to_rep_g));
            const CompRecord& rep = records[record_of_root.at(R.rep_root)];
            auto it = rep.stab_rows.find(h);
            for (size_t vi = 0; vi < R.vectors.size(); ++vi) {
                ActionRow row = (it == rep.stab_rows.end()) ? ActionRow{{vi, Rat(1)}}
                                                            : it->second[vi];
                ActionRow mapped;
                for (auto& [k, c] : row) mapped.emplace_back(global.at({target_root, k}), c);
                std::sort(mapped.begin(), mapped.end());
                out.action[g][global.at({R.root, vi})] = std::move(mapped);
            }
        }
    // certification: relabeling each element matches the recorded action
    for (size_t g = 1; g < nG; ++g)
        for (size_t i = 0; i < out.expansions.size(); ++i) {
            Tensor lhs = tensor_relabel(out.expansions[i], gms[g]);
            Tensor rhs;
            for (auto& [k, c] : out.action[g][i]) rhs.axpy(c, out.expansions[k]);
            if (!(lhs == rhs))
                throw NonEquivariantCycleBasis("cycle-basis action certification failed");
        }
    return out;
}

CycleBasis cycle_space_basis(const DglPresentation& L, int degree, const CycleOptions& opt) {
    return equivariant_cycle_space_basis(L, degree, opt).basis;
}

// ------------------------------------------------------------- adjoining

static DglPresentation adjoin_impl(const DglPresentation& previous, const CycleBasis& cycles,
                                   bool check) {
    DglPresentation L = previous;
    if (L.first_tower_gen == SIZE_MAX) L.first_tower_gen = L.alphabet.size();
    int tdeg = cycles.degree + 1;
    int idx = 0;
    for (auto& el : cycles.elements) {
        if (check) {
            Tensor ex = expand(el.expr, previous.alphabet);
            if (ex.is_zero()) throw NotACycle("zero element in cycle basis");
            if (*ex.degree(previous.alphabet) != cycles.degree)
                throw NotACycle("cycle " + el.label.text + " has the wrong degree");
            if (!previous.d_of(ex).is_zero()) throw NotACycle(el.label.text + " is not a cycle");
        }
        std::string tname = "t" + el.label.text.substr(1);
        GenId t = L.alphabet.add(tname, tdeg, GenKind::T, previous.level + 1, idx++);
        L.differential[t] = el.expr;
    }
    L.level = previous.level + 1;
    return L;
}

DglPresentation adjoin_cycle_killers(const DglPresentation& previous, const CycleBasis& cycles) {
    return adjoin_impl(previous, cycles, true);
}

// ----------------------------------------------------------------- Tower

Tower::Tower(const Digraph& g, Scale scale, int n, const Int& p,
             std::vector<VertexPermutation> aut, Int budget)
    : scale_(scale), n_(n), p_(p), budget_(budget), aut_(std::move(aut)) {
    levels_.reserve(4);
    killed_.resize(5);
    actions_.resize(5);
    levels_.push_back(scale == Scale::Paper ? build_L1(g, n, p) : build_L1_synthetic(g, p));
}

const DglPresentation& Tower::level(int k) {
    if (k < 1 || k > 4) throw std::out_of_range("tower level");
    build(k);
    return levels_[k - 1];
}

const CycleBasis& Tower::killed(int k) {
    if (k < 2 || k > 4) throw std::out_of_range("killed basis level");
    build(k);
    return killed_[k];
}

GenAction Tower::action(int k, const VertexPermutation& sigma) {
    build(k);
    if (k == 1) {
        GenAction a;
        a.relabel = digraph_genmap(levels_[0], sigma);
        return a;
    }
    auto it = actions_[k].find(sigma.map);
    if (it == actions_[k].end())
        throw std::invalid_argument("sigma was not in the tower's automorphism list");
    return it->second;
}

// Lift construction for levels 3 and 4: once the previous level kills the
// whole cycle space one degree down, every Lie basis element B of the next
// degree (over the pre-adjoin alphabet) extends uniquely to a cycle
// B - lift(dB), where lift writes the cycle dB in the killed basis and
// replaces killed cycles by their killers.
CycleBasisWithAction Tower::lift_cycle_basis(int next, int degree) {
    const DglPresentation& prev = levels_[next - 2];
    const size_t limit = levels_[next - 3].alphabet.size();
    const size_t t_base = limit;  // killers adjoined right after the old alphabet

    AutGroup G(aut_, prev.digraph.n());
    const size_t nG = G.size();
    std::vector<std::vector<GenId>> gms;
    std::vector<std::set<GenId>> mixed_letters(nG);
    for (size_t g = 0; g < nG; ++g) {
        if (G.elems[g].is_identity()) {
            std::vector<GenId> id(prev.alphabet.size());
            for (size_t i = 0; i < id.size(); ++i) id[i] = static_cast<GenId>(i);
            gms.push_back(std::move(id));
        } else {
            const GenAction& act = actions_[next - 1].at(G.elems[g].map);
            gms.push_back(act.relabel);
            for (auto& [gen, row] : act.mixed) mixed_letters[g].insert(gen);
        }
    }

    if (next == 3 && !y1_ech_) {
        y1_ix_ = std::make_shared<WordIndex>();
        y1_ech_ = std::make_shared<Echelon>();
        for (auto& ex : y1_expansions_) y1_ech_->add(to_sparse(ex, *y1_ix_));
    }

    std::vector<MultiDegree> sources;
    for (auto& md : degree_support(prev.alphabet, degree)) {
        bool ok = true;
        for (auto& [g, k] : md.e) ok &= (static_cast<size_t>(g) < limit);
        if (ok) sources.push_back(md);
    }
    {
        Int total = 0;
        BudgetExceeded ex("tower budget exceeded at degree " + std::to_string(degree));
        for (auto& md : sources) {
            Int d = lie_dimension(prev.alphabet, md);
            total += d;
            if (total > budget_) ex.offenders.emplace_back(md.str(prev.alphabet), d);
        }
        if (!ex.offenders.empty()) throw ex;
    }
    std::map<MultiDegree, size_t> md_index;
    for (size_t i = 0; i < sources.size(); ++i) md_index[sources[i]] = i;

    // a relabel-transported multidegree must not contain matrix-acted
    // letters; only tower generators can be matrix-acted, and at these
    // degrees they occur as single letters next to degree-1 core letters,
    // so detect and handle them via the sum-valued action below
    for (size_t g = 0; g < nG; ++g)
        for (auto& md : sources)
            for (auto& [gen, k] : md.e)
                if (mixed_letters[g].count(gen))
                    throw NonEquivariantCycleBasis(
                        "matrix-acted generator inside a lift multidegree");

    struct Block {
        LieBlock std_block;
        std::vector<Coords> basis;
        size_t rep;
        size_t to_rep_g;
        std::map<size_t, std::vector<ActionRow>> stab_rows;
        size_t y_base = 0;
    };
    std::vector<Block> B(sources.size());
    std::set<size_t> built;

    auto block_coordinatize = [&](size_t mi, const Tensor& t) {
        auto coords = lie_coordinates(t, B[mi].std_block);
        Coords v;
        for (size_t k = 0; k < coords.size(); ++k)
            if (coords[k] != 0) v.emplace_back(k, coords[k]);
        return v;
    };
    auto block_expansion = [&](size_t mi, const Coords& v) {
        Tensor t;
        for (auto& [k, c] : v) t.axpy(c, B[mi].std_block.expansions[k]);
        return t;
    };

    for (size_t i = 0; i < sources.size(); ++i) {
        if (built.count(i)) continue;
        B[i].std_block = make_block(prev.alphabet, sources[i]);
        std::vector<std::pair<size_t, size_t>> orbit{{i, 0}};
        std::vector<size_t> stab;
        for (size_t g = 0; g < nG; ++g) {
            size_t img = md_index.at(md_relabel(sources[i], gms[g]));
            if (img == i) {
                stab.push_back(g);
            } else {
                bool seen = false;
                for (auto& [c, gg] : orbit) seen |= (c == img);
                if (!seen) orbit.emplace_back(img, g);
            }
        }
        size_t dim = B[i].std_block.basis.size();
        std::vector<Coords> idcoords(dim);
        for (size_t k = 0; k < dim; ++k) idcoords[k] = {{k, Rat(1)}};
        if (stab.size() > 1 && dim > 0) {
            auto apply = [&](size_t si, const Coords& v) {
                return block_coordinatize(i, tensor_relabel(block_expansion(i, v), gms[stab[si]]));
            };
            BlockAction ba = block_action(idcoords, stab.size(), apply);
            B[i].basis = ba.vectors;
            for (size_t si = 0; si < stab.size(); ++si) B[i].stab_rows[stab[si]] = ba.rows[si];
        } else {
            B[i].basis = idcoords;
        }
        B[i].rep = i;
        B[i].to_rep_g = 0;
        built.insert(i);
        for (size_t oi = 1; oi < orbit.size(); ++oi) {
            auto [mi, g] = orbit[oi];
            B[mi].std_block = make_block(prev.alphabet, sources[mi]);
            B[mi].rep = i;
            B[mi].to_rep_g = g;
            for (auto& v : B[i].basis)
                B[mi].basis.push_back(
                    block_coordinatize(mi, tensor_relabel(block_expansion(i, v), gms[g])));
            built.insert(mi);
        }
    }

    CycleBasisWithAction out;
    out.basis.degree = degree;
    std::vector<SparseVec> tcorrs;
    std::map<MultiDegree, LiftBlock> new_lift_blocks;

    for (size_t mi = 0; mi < sources.size(); ++mi) {
        B[mi].y_base = out.basis.elements.size();
        LiftBlock lb;
        lb.std_block = B[mi].std_block;
        for (size_t j = 0; j < B[mi].basis.size(); ++j) {
            Tensor elt = block_expansion(mi, B[mi].basis[j]);
            Tensor P = prev.d_of(elt);
            SparseVec tcorr;  // over t GenIds
            if (next == 3) {
                std::vector<Rat> combo(y1_ech_->added(), Rat(0));
                SparseVec red = y1_ech_->reduce(to_sparse(P, *y1_ix_), &combo);
                if (!red.empty()) throw std::logic_error("lift: dB not in the killed span");
                for (size_t k = 0; k < combo.size(); ++k)
                    if (combo[k] != 0) tcorr.emplace_back(t_base + k, -combo[k]);
            } else {
                std::map<MultiDegree, Tensor> parts;
                for (auto& [w, c] : P.terms) parts[MultiDegree::of_word(w)].add_term(w, c);
                SparseVec t1check;
                for (auto& [md, part] : parts) {
                    auto bit = y2_blocks_.find(md);
                    if (bit == y2_blocks_.end())
                        throw std::logic_error("lift: unexpected multidegree");
                    LiftBlock& yb = bit->second;
                    auto s = lie_coordinates(part, yb.std_block);
                    SparseVec sv;
                    for (size_t k = 0; k < s.size(); ++k)
                        if (s[k] != 0) sv.emplace_back(k, s[k]);
                    std::vector<Rat> combo(yb.coord_ech.added(), Rat(0));
                    SparseVec red = yb.coord_ech.reduce(sv, &combo);
                    if (!red.empty()) throw std::logic_error("lift: dB not in the killed span");
                    for (size_t k = 0; k < combo.size(); ++k)
                        if (combo[k] != 0) {
                            Rat lambda = -combo[k];
                            tcorr.emplace_back(t_base + yb.y_index[k], -lambda);
                            t1check = sv_axpy(t1check, lambda, y2_tcorr_[yb.y_index[k]]);
                        }
                }
                // dB has no t-letter words, so the level-2 corrections cancel
                if (!t1check.empty()) throw std::logic_error("lift: t-part consistency failed");
            }
            sv_normalize(tcorr);

            std::vector<std::pair<Rat, LiePtr>> terms;
            for (auto& [k, c] : B[mi].basis[j])
                terms.emplace_back(c, B[mi].std_block.basis[k].bracketing);
            Tensor full = elt;
            for (auto& [t, c] : tcorr) {
                terms.emplace_back(c, lie_leaf(static_cast<GenId>(t)));
                full.add_term(Word(1, static_cast<GenId>(t)), c);
            }
            CycleLabel l;
            l.cls = (next == 3) ? 4 : 5;
            l.index = static_cast<int>(out.basis.elements.size());
            l.text = label_text(l, prev.digraph);
            out.basis.elements.push_back({l, lie_sum(std::move(terms))});
            out.expansions.push_back(std::move(full));
            tcorrs.push_back(std::move(tcorr));
            lb.y_index.push_back(out.basis.elements.size() - 1);
        }
        if (next == 3) {
            lb.basis_coords = B[mi].basis;
            for (auto& v : lb.basis_coords) lb.coord_ech.add(v);
            new_lift_blocks.emplace(sources[mi], std::move(lb));
        }
    }

    // group action on element indices (coset algebra through orbit reps)
    out.action.assign(nG, std::vector<ActionRow>(out.basis.elements.size()));
    for (size_t g = 0; g < nG; ++g)
        for (size_t mi = 0; mi < sources.size(); ++mi) {
            size_t ti = md_index.at(md_relabel(sources[mi], gms[g]));
            size_t h = G.compose_idx(G.inverse_idx(B[ti].to_rep_g), G.compose_idx(g, B[mi].to_rep_g));
            const auto& rep = B[B[mi].rep];
            auto it = rep.stab_rows.find(h);
            for (size_t j = 0; j < B[mi].basis.size(); ++j) {
                ActionRow row = (it == rep.stab_rows.end()) ? ActionRow{{j, Rat(1)}} : it->second[j];
                ActionRow mapped;
                for (auto& [k, c] : row) mapped.emplace_back(B[ti].y_base + k, c);
                std::sort(mapped.begin(), mapped.end());
                out.action[g][B[mi].y_base + j] = std::move(mapped);
            }
        }

    if (next == 3) {
        y2_blocks_ = std::move(new_lift_blocks);
        y2_tcorr_ = std::move(tcorrs);
    }
    return out;
}

void Tower::build(int k) {
    while (static_cast<int>(levels_.size()) < k) {
        int next = static_cast<int>(levels_.size()) + 1;
        const DglPresentation& prev = levels_.back();
        int zdeg = prev.alphabet.degree(prev.z_of_edge.begin()->second);
        int cycle_deg = zdeg + (next - 2);

        CycleBasisWithAction km;
        if (next == 2) {
            CycleOptions opt;
            opt.aut = aut_;
            opt.budget = budget_;
            km = equivariant_cycle_space_basis(prev, cycle_deg, opt);
            y1_expansions_ = km.expansions;
        } else {
            km = lift_cycle_basis(next, cycle_deg);
        }
        killed_[next] = km.basis;
        // level 2 revalidates every killed cycle; the lifted levels are
        // cycles by construction (their boundary coordinates were solved
        // exactly against the previous killed basis)
        DglPresentation L = adjoin_impl(prev, km.basis, next == 2);

        AutGroup G(aut_, prev.digraph.n());
        for (size_t g = 0; g < G.size(); ++g) {
            GenAction act;
            act.relabel = digraph_genmap(L, G.elems[g]);
            if (next > 2) {
                const GenAction& prev_act = actions_[next - 1].at(G.elems[g].map);
                for (size_t i = 0; i < prev.alphabet.size(); ++i) act.relabel[i] = prev_act.relabel[i];
                act.mixed = prev_act.mixed;
            }
            size_t base = prev.alphabet.size();
            if (!km.action.empty() && !km.action[g].empty())
                for (size_t i = 0; i < km.basis.elements.size(); ++i) {
                    const ActionRow& row = km.action[g][i];
                    if (row.size() == 1 && row[0].second == 1) {
                        act.relabel[base + i] = static_cast<GenId>(base + row[0].first);
                    } else {
                        ActionRow over_gens;
                        for (auto& [idx2, c] : row)
                            over_gens.emplace_back(base + idx2, c);
                        act.mixed[static_cast<GenId>(base + i)] = std::move(over_gens);
                        act.relabel[base + i] = static_cast<GenId>(base + i);
                    }
                }
            actions_[next][G.elems[g].map] = std::move(act);
        }
        levels_.push_back(std::move(L));
    }
}

}  // namespace dglr
