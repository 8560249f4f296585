#pragma once

#include <string>

#include "dglr/dgl.hpp"

namespace dglr {

// {"vertices": [names], "edges": [[v,u],...]}; also accepts plain edge-list
// text, one "v u" pair per line.
std::string digraph_to_json(const Digraph& g);
Digraph digraph_from_json(const std::string& text);
Digraph digraph_from_edge_list(const std::string& text);
Digraph load_digraph(const std::string& path);  // sniffs JSON vs edge list

// bracket expression grammar: [A,B] | ad(A,k,B) | c*E | E+E | generator
std::string expr_to_string(const LiePtr& e, const Alphabet& A);
LiePtr parse_expr(const std::string& text, const Alphabet& A);

// {"schema":1, "p": "...", "n":..., "generators":[...], "differential":[...]}
std::string presentation_to_json(const DglPresentation& L);
DglPresentation presentation_from_json(const std::string& text);

// {"elements": [names], "product": [[...]], "identity": i}
GroupTable group_table_from_json(const std::string& text);
std::string group_table_to_json(const GroupTable& t);

}  // namespace dglr
