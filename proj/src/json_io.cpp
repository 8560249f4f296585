#include "dglr/json_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace dglr {

using nlohmann::json;

std::string digraph_to_json(const Digraph& g) {
    json j;
    j["vertices"] = g.vertices;
    j["edges"] = json::array();
    for (auto& [v, u] : g.edges) j["edges"].push_back({g.vertices[v], g.vertices[u]});
    return j.dump(2);
}

Digraph digraph_from_json(const std::string& text) {
    json j = json::parse(text);
    Digraph g;
    std::map<std::string, int> index;
    for (auto& v : j.at("vertices")) {
        index[v.get<std::string>()] = g.n();
        g.vertices.push_back(v.get<std::string>());
    }
    for (auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2) throw std::invalid_argument("bad edge entry");
        auto endpoint = [&](const json& x) {
            if (x.is_string()) return index.at(x.get<std::string>());
            return x.get<int>();
        };
        g.add_edge(endpoint(e[0]), endpoint(e[1]));
    }
    return g;
}

Digraph digraph_from_edge_list(const std::string& text) {
    Digraph g;
    std::map<std::string, int> index;
    auto vid = [&](const std::string& name) {
        auto [it, fresh] = index.emplace(name, g.n());
        if (fresh) g.vertices.push_back(name);
        return it->second;
    };
    std::istringstream in(text);
    std::string line;
    std::vector<std::pair<int, int>> edges;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string a, b;
        if (!(ls >> a)) continue;
        if (a[0] == '#') continue;
        if (!(ls >> b)) throw std::invalid_argument("edge line needs two vertices: " + line);
        edges.emplace_back(vid(a), vid(b));
    }
    for (auto& [v, u] : edges) g.add_edge(v, u);
    return g;
}

Digraph load_digraph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    size_t i = text.find_first_not_of(" \t\r\n");
    if (i != std::string::npos && text[i] == '{') return digraph_from_json(text);
    return digraph_from_edge_list(text);
}

// ------------------------------------------------------------ expressions

std::string expr_to_string(const LiePtr& e, const Alphabet& A) { return lie_str(e, A); }

namespace {

struct Parser {
    const std::string& s;
    const Alphabet& A;
    size_t i = 0;

    void skip() {
        while (i < s.size() && isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eat(char c) {
        skip();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) throw std::invalid_argument("expected '" + std::string(1, c) + "' at " + std::to_string(i));
    }
    [[noreturn]] void fail(const std::string& what) {
        throw std::invalid_argument(what + " at position " + std::to_string(i));
    }

    LiePtr expr() {
        std::vector<std::pair<Rat, LiePtr>> terms;
        terms.push_back(term());
        while (true) {
            skip();
            if (eat('+')) {
                terms.push_back(term());
            } else if (i < s.size() && s[i] == '-') {
                auto [c, t] = term();  // term() consumes the sign
                terms.emplace_back(c, t);
            } else {
                break;
            }
        }
        if (terms.size() == 1 && terms[0].first == 1) return terms[0].second;
        return lie_sum(std::move(terms));
    }

    std::pair<Rat, LiePtr> term() {
        skip();
        Rat coeff(1);
        bool neg = false;
        while (eat('-')) neg = !neg;
        skip();
        if (i < s.size() && (isdigit(static_cast<unsigned char>(s[i])))) {
            size_t j = i;
            while (j < s.size() && (isdigit(static_cast<unsigned char>(s[j])) || s[j] == '/')) ++j;
            std::string num = s.substr(i, j - i);
            i = j;
            size_t slash = num.find('/');
            if (slash == std::string::npos)
                coeff = Rat(Int(num));
            else
                coeff = reduce(Int(num.substr(0, slash)), Int(num.substr(slash + 1)));
            expect('*');
        }
        if (neg) coeff = -coeff;
        return {coeff, atom()};
    }

    LiePtr atom() {
        skip();
        if (eat('[')) {
            LiePtr a = expr();
            expect(',');
            LiePtr b = expr();
            expect(']');
            return lie_bracket(a, b);
        }
        if (s.compare(i, 3, "ad(") == 0) {
            i += 3;
            LiePtr base = expr();
            expect(',');
            skip();
            size_t j = i;
            while (j < s.size() && isdigit(static_cast<unsigned char>(s[j]))) ++j;
            if (j == i) fail("expected ad power");
            unsigned k = std::stoul(s.substr(i, j - i));
            i = j;
            expect(',');
            LiePtr arg = expr();
            expect(')');
            return lie_ad(base, k, arg);
        }
        return leaf();
    }

    LiePtr leaf() {
        skip();
        size_t start = i;
        auto namechar = [](char c) {
            return isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '\'';
        };
        if (i >= s.size() || !isalpha(static_cast<unsigned char>(s[i]))) fail("expected generator");
        while (i < s.size()) {
            if (namechar(s[i])) {
                ++i;
            } else if (s[i] == '(' && i > start) {
                int depth = 1;
                ++i;
                while (i < s.size() && depth) {
                    if (s[i] == '(') ++depth;
                    if (s[i] == ')') --depth;
                    ++i;
                }
                if (depth) fail("unbalanced parentheses in name");
            } else {
                break;
            }
        }
        std::string name = s.substr(start, i - start);
        if (!A.has(name)) fail("unknown generator " + name);
        return lie_leaf(A.id_of(name));
    }
};

}  // namespace

LiePtr parse_expr(const std::string& text, const Alphabet& A) {
    Parser p{text, A};
    LiePtr e = p.expr();
    p.skip();
    if (p.i != text.size()) p.fail("trailing input");
    return e;
}

// ---------------------------------------------------------- presentations

std::string presentation_to_json(const DglPresentation& L) {
    json j;
    j["schema"] = 1;
    j["p"] = L.p.get_str();
    j["n"] = L.n;
    j["level"] = L.level;
    j["digraph"] = json::parse(digraph_to_json(L.digraph));
    j["generators"] = json::array();
    for (GenId g = 0; g < L.alphabet.size(); ++g) {
        const auto& gen = L.alphabet[g];
        json e{{"name", gen.name}, {"degree", gen.degree}};
        switch (gen.kind) {
            case GenKind::W: e["kind"] = "w"; e["i"] = gen.a; break;
            case GenKind::X: e["kind"] = "x"; e["vertex"] = gen.a; break;
            case GenKind::Z: e["kind"] = "z"; e["edge"] = {gen.a, gen.b}; break;
            case GenKind::T: e["kind"] = "t"; e["level"] = gen.a; e["index"] = gen.b; break;
            case GenKind::Free: e["kind"] = "free"; break;
        }
        j["generators"].push_back(std::move(e));
    }
    j["differential"] = json::array();
    for (auto& [g, ex] : L.differential)
        j["differential"].push_back(
            {{"generator", L.alphabet[g].name}, {"expression", expr_to_string(ex, L.alphabet)}});
    return j.dump(2);
}

DglPresentation presentation_from_json(const std::string& text) {
    json j = json::parse(text);
    if (j.value("schema", 0) != 1) throw std::invalid_argument("unsupported schema");
    DglPresentation L;
    L.p = Int(j.at("p").get<std::string>());
    L.n = j.value("n", 0);
    L.level = j.value("level", 1);
    if (j.count("digraph")) L.digraph = digraph_from_json(j["digraph"].dump());
    L.x_of_vertex.assign(L.digraph.n(), 0);
    for (auto& e : j.at("generators")) {
        std::string kind = e.value("kind", "free");
        GenId id;
        if (kind == "w") {
            id = L.alphabet.add(e.at("name"), e.at("degree"), GenKind::W, e.at("i"));
            L.w.push_back(id);
        } else if (kind == "x") {
            int v = e.at("vertex");
            id = L.alphabet.add(e.at("name"), e.at("degree"), GenKind::X, v);
            L.x_of_vertex[v] = id;
        } else if (kind == "z") {
            int a = e.at("edge")[0], b = e.at("edge")[1];
            id = L.alphabet.add(e.at("name"), e.at("degree"), GenKind::Z, a, b);
            L.z_of_edge[{a, b}] = id;
        } else if (kind == "t") {
            id = L.alphabet.add(e.at("name"), e.at("degree"), GenKind::T, e.at("level"), e.at("index"));
            if (L.first_tower_gen == SIZE_MAX) L.first_tower_gen = id;
        } else {
            id = L.alphabet.add(e.at("name"), e.at("degree"));
        }
    }
    if (L.first_tower_gen == SIZE_MAX) L.first_tower_gen = L.alphabet.size();
    for (auto& e : j.at("differential"))
        L.differential[L.alphabet.id_of(e.at("generator"))] =
            parse_expr(e.at("expression"), L.alphabet);
    L.validate();
    return L;
}

GroupTable group_table_from_json(const std::string& text) {
    json j = json::parse(text);
    GroupTable t;
    for (auto& e : j.at("elements")) t.elements.push_back(e.get<std::string>());
    for (auto& row : j.at("product")) t.product.push_back(row.get<std::vector<int>>());
    t.identity = j.value("identity", 0);
    t.validate();
    return t;
}

std::string group_table_to_json(const GroupTable& t) {
    json j;
    j["elements"] = t.elements;
    j["product"] = t.product;
    j["identity"] = t.identity;
    return j.dump(2);
}

}  // namespace dglr
