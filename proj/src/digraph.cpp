#include "dglr/digraph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace dglr {

void Digraph::add_edge(int v, int u) {
    if (v < 0 || v >= n() || u < 0 || u >= n()) throw std::out_of_range("edge endpoint");
    edges.emplace(v, u);
}

Digraph Digraph::cycle(int k) {
    Digraph g;
    for (int i = 0; i < k; ++i) g.vertices.push_back("v" + std::to_string(i));
    for (int i = 0; i < k; ++i) g.add_edge(i, (i + 1) % k);
    return g;
}

Digraph Digraph::complete(int k) {
    Digraph g;
    for (int i = 0; i < k; ++i) g.vertices.push_back("v" + std::to_string(i));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (i != j) g.add_edge(i, j);
    return g;
}

std::string Digraph::hash() const {
    // FNV over the canonical text form; good enough for cache keys
    std::ostringstream os;
    for (auto& v : vertices) os << v << ';';
    for (auto& [a, b] : edges) os << a << '>' << b << ';';
    uint64_t h = 1469598103934665603ULL;
    for (char c : os.str()) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    std::ostringstream hex;
    hex << std::hex << h;
    return hex.str();
}

bool is_strongly_connected(const Digraph& g) {
    if (g.n() == 0) return false;
    auto reaches_all = [&](const std::set<std::pair<int, int>>& edges) {
        std::vector<std::vector<int>> adj(g.n());
        for (auto& [v, u] : edges) adj[v].push_back(u);
        std::vector<char> seen(g.n(), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int count = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int u : adj[v])
                if (!seen[u]) {
                    seen[u] = 1;
                    ++count;
                    stack.push_back(u);
                }
        }
        return count == g.n();
    };
    if (!reaches_all(g.edges)) return false;
    std::set<std::pair<int, int>> rev;
    for (auto& [v, u] : g.edges) rev.emplace(u, v);
    return reaches_all(rev);
}

VertexPermutation compose(const VertexPermutation& a, const VertexPermutation& b) {
    if (a.map.size() != b.map.size()) throw VertexSetMismatch();
    VertexPermutation c;
    c.map.resize(a.map.size());
    for (size_t i = 0; i < a.map.size(); ++i) c.map[i] = a.map[b.map[i]];
    return c;
}

VertexPermutation invert(const VertexPermutation& a) {
    VertexPermutation c;
    c.map.resize(a.map.size());
    for (size_t i = 0; i < a.map.size(); ++i) c.map[a.map[i]] = static_cast<int>(i);
    return c;
}

VertexPermutation identity_perm(int n) {
    VertexPermutation p;
    p.map.resize(n);
    for (int i = 0; i < n; ++i) p.map[i] = i;
    return p;
}

std::vector<VertexPermutation> automorphism_group(const Digraph& g, int size_bound) {
    const int n = g.n();
    if (n > size_bound) throw SizeBound();

    // iterated refinement: color by (in-degree, out-degree), then by the
    // multiset of endpoint colors over in/out edges, until stable
    std::vector<int> color(n, 0);
    {
        std::map<std::pair<int, int>, int> classes;
        std::vector<std::pair<int, int>> deg(n, {0, 0});
        for (auto& [v, u] : g.edges) {
            ++deg[v].second;
            ++deg[u].first;
        }
        for (int v = 0; v < n; ++v) {
            auto [it, fresh] = classes.emplace(deg[v], static_cast<int>(classes.size()));
            color[v] = it->second;
        }
    }
    for (;;) {
        std::map<std::pair<int, std::vector<int>>, int> classes;
        std::vector<int> next(n);
        for (int v = 0; v < n; ++v) {
            std::vector<int> sig;
            for (auto& [a, b] : g.edges) {
                if (a == v) sig.push_back(2 * color[b]);
                if (b == v) sig.push_back(2 * color[a] + 1);
            }
            std::sort(sig.begin(), sig.end());
            auto [it, fresh] = classes.emplace(std::make_pair(color[v], std::move(sig)),
                                               static_cast<int>(classes.size()));
            next[v] = it->second;
        }
        if (next == color) break;
        color = next;
    }

    std::vector<std::vector<int>> out_adj(n), in_adj(n);
    for (auto& [v, u] : g.edges) {
        out_adj[v].push_back(u);
        in_adj[u].push_back(v);
    }

    std::vector<VertexPermutation> autos;
    std::vector<int> image(n, -1);
    std::vector<char> used(n, 0);
    std::function<void(int)> search = [&](int v) {
        if (v == n) {
            autos.push_back({image});
            return;
        }
        for (int w = 0; w < n; ++w) {
            if (used[w] || color[w] != color[v]) continue;
            bool ok = true;
            for (int u : out_adj[v]) {
                if (u > v || image[u] < 0) continue;
                if (!g.has_edge(w, image[u])) {
                    ok = false;
                    break;
                }
            }
            if (ok)
                for (int u : in_adj[v]) {
                    if (u > v || image[u] < 0) continue;
                    if (!g.has_edge(image[u], w)) {
                        ok = false;
                        break;
                    }
                }
            // edges among already-placed vertices incident to v
            if (ok && g.has_edge(v, v) != g.has_edge(w, w)) ok = false;
            if (!ok) continue;
            image[v] = w;
            used[w] = 1;
            search(v + 1);
            image[v] = -1;
            used[w] = 0;
        }
    };
    search(0);

    // self-check: closure under composition/inverse, edge preservation
    std::set<std::vector<int>> as_set;
    for (auto& p : autos) as_set.insert(p.map);
    for (auto& p : autos) {
        for (auto& [v, u] : g.edges)
            if (!g.has_edge(p(v), p(u))) throw std::logic_error("automorphism check failed");
        if (!as_set.count(invert(p).map)) throw std::logic_error("automorphism set not closed");
    }
    std::sort(autos.begin(), autos.end());
    return autos;
}

// ----------------------------------------------------------------- groups

void GroupTable::validate() const {
    const int m = n();
    if (m == 0) throw std::invalid_argument("empty group");
    if (identity < 0 || identity >= m) throw std::invalid_argument("bad identity index");
    if (static_cast<int>(product.size()) != m) throw std::invalid_argument("bad table shape");
    for (auto& row : product) {
        if (static_cast<int>(row.size()) != m) throw std::invalid_argument("bad table shape");
        for (int x : row)
            if (x < 0 || x >= m) throw std::invalid_argument("table entry out of range");
    }
    for (int a = 0; a < m; ++a)
        if (product[identity][a] != a || product[a][identity] != a)
            throw std::invalid_argument("identity fails");
    for (int a = 0; a < m; ++a) {
        bool inv = false;
        for (int b = 0; b < m; ++b)
            if (product[a][b] == identity && product[b][a] == identity) inv = true;
        if (!inv) throw std::invalid_argument("missing inverse");
    }
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c)
                if (product[product[a][b]][c] != product[a][product[b][c]])
                    throw std::invalid_argument("associativity fails");
}

GroupTable GroupTable::cyclic(int k) {
    GroupTable t;
    for (int i = 0; i < k; ++i) t.elements.push_back("g" + std::to_string(i));
    t.product.assign(k, std::vector<int>(k));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) t.product[i][j] = (i + j) % k;
    t.identity = 0;
    return t;
}

GroupTable group_of_permutations(const std::vector<VertexPermutation>& perms) {
    GroupTable t;
    std::map<std::vector<int>, int> index;
    for (size_t i = 0; i < perms.size(); ++i) {
        index[perms[i].map] = static_cast<int>(i);
        t.elements.push_back("s" + std::to_string(i));
    }
    int m = static_cast<int>(perms.size());
    t.product.assign(m, std::vector<int>(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            auto it = index.find(compose(perms[i], perms[j]).map);
            if (it == index.end()) throw std::logic_error("permutation set not closed");
            t.product[i][j] = it->second;
        }
    for (int i = 0; i < m; ++i)
        if (perms[i].is_identity()) t.identity = i;
    return t;
}

bool tables_isomorphic(const GroupTable& a, const GroupTable& b) {
    if (a.n() != b.n()) return false;
    const int m = a.n();
    // order profile must match
    auto order_of = [](const GroupTable& t, int g) {
        int x = g, ord = 1;
        while (x != t.identity) {
            x = t.product[x][g];
            ++ord;
        }
        return ord;
    };
    std::vector<int> orda(m), ordb(m);
    for (int i = 0; i < m; ++i) orda[i] = order_of(a, i), ordb[i] = order_of(b, i);
    {
        auto sa = orda, sb = ordb;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        if (sa != sb) return false;
    }
    std::vector<int> f(m, -1);
    std::vector<char> used(m, 0);
    f[a.identity] = b.identity;
    used[b.identity] = 1;
    std::function<bool(int)> go = [&](int g) -> bool {
        while (g < m && f[g] >= 0) ++g;
        if (g == m) return true;
        for (int h = 0; h < m; ++h) {
            if (used[h] || ordb[h] != orda[g]) continue;
            f[g] = h;
            used[h] = 1;
            bool ok = true;
            for (int x = 0; x < m && ok; ++x) {
                if (f[x] < 0) continue;
                int gx = a.product[g][x], xg = a.product[x][g];
                if (f[gx] >= 0 && f[gx] != b.product[h][f[x]]) ok = false;
                if (ok && f[xg] >= 0 && f[xg] != b.product[f[x]][h]) ok = false;
            }
            if (ok && go(g + 1)) return true;
            f[g] = -1;
            used[h] = 0;
        }
        return false;
    };
    return go(0);
}

// ------------------------------------------------------------ realization

namespace {

// rigid strongly connected digraph for the trivial group
Digraph rigid_digraph() {
    Digraph g;
    g.vertices = {"r0", "r1", "r2"};
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(2, 0);
    g.add_edge(0, 2);
    return g;
}

Digraph cayley_digraph(const GroupTable& G, const std::vector<int>& gens) {
    Digraph g;
    for (int i = 0; i < G.n(); ++i) g.vertices.push_back(G.elements[i]);
    for (int i = 0; i < G.n(); ++i)
        for (int s : gens) g.add_edge(i, G.product[i][s]);
    return g;
}

// Cayley digraph with each color-c arc (a,b) replaced by a directed path
// a -> P_1 -> ... -> P_{c+2} -> b whose first interior vertex carries a
// 3-cycle tag; path lengths distinguish generator colors, the tag pins the
// path direction and kills rotation symmetries.
Digraph gadget_digraph(const GroupTable& G, const std::vector<int>& gens) {
    Digraph g;
    for (int i = 0; i < G.n(); ++i) g.vertices.push_back(G.elements[i]);
    auto fresh = [&](const std::string& name) {
        g.vertices.push_back(name);
        return g.n() - 1;
    };
    for (int i = 0; i < G.n(); ++i) {
        for (size_t c = 0; c < gens.size(); ++c) {
            int target = G.product[i][gens[c]];
            std::string base = "e" + std::to_string(i) + "_" + std::to_string(c);
            int len = static_cast<int>(c) + 2;
            int prev = i;
            int first = -1;
            for (int k = 0; k < len; ++k) {
                int p = fresh(base + "p" + std::to_string(k));
                if (k == 0) first = p;
                g.add_edge(prev, p);
                prev = p;
            }
            g.add_edge(prev, target);
            int t1 = fresh(base + "t1");
            int t2 = fresh(base + "t2");
            g.add_edge(first, t1);
            g.add_edge(t1, t2);
            g.add_edge(t2, first);
        }
    }
    return g;
}

bool verified(const Digraph& g, const GroupTable& G) {
    if (!is_strongly_connected(g) || g.has_loops()) return false;
    std::vector<VertexPermutation> autos;
    try {
        autos = automorphism_group(g, 512);
    } catch (const SizeBound&) {
        return false;
    }
    if (static_cast<int>(autos.size()) != G.n()) return false;
    if (G.n() <= 8) return tables_isomorphic(group_of_permutations(autos), G);
    return true;  // order check only beyond the table-isomorphism bound
}

}  // namespace

Digraph realize_group(const GroupTable& G, const std::vector<int>& generators) {
    G.validate();
    if (G.n() == 1) {
        Digraph g = rigid_digraph();
        if (!verified(g, G)) throw std::logic_error("rigid digraph verification failed");
        return g;
    }
    std::vector<int> gens = generators;
    if (gens.empty())
        for (int i = 0; i < G.n(); ++i)
            if (i != G.identity) gens.push_back(i);
    for (int s : gens)
        if (s < 0 || s >= G.n() || s == G.identity)
            throw std::invalid_argument("bad generator index");
    // generators must generate (finite group: monoid closure suffices)
    {
        std::set<int> reach{G.identity};
        std::vector<int> stack{G.identity};
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (int s : gens) {
                int y = G.product[x][s];
                if (reach.insert(y).second) stack.push_back(y);
            }
        }
        if (static_cast<int>(reach.size()) != G.n())
            throw std::invalid_argument("generators do not generate the group");
    }

    Digraph plain = cayley_digraph(G, gens);
    if (!plain.has_loops() && verified(plain, G)) return plain;

    Digraph g = gadget_digraph(G, gens);
    if (!verified(g, G)) throw std::logic_error("gadget digraph verification failed");
    return g;
}

}  // namespace dglr
