#ifndef DIG_RESULT_IO_HPP
#define DIG_RESULT_IO_HPP

#include <string>

#include "dig/graph.hpp"

namespace dig {

/// JSON document with node_ids, depth, estimator, alpha, the four
/// matrices row-major, and the adjacency as a (from, to, weight) edge
/// list.  Deterministic: serialize/parse/serialize is byte-identical.
std::string result_to_json(const CausalGraphResult& result);

CausalGraphResult result_from_json(const std::string& text);

/// Graphviz digraph: one node statement per sensor and one edge statement
/// per adjacency entry labeled with the normalized gain to two decimals,
/// both in lexicographic order.
std::string export_dot(const CausalGraphResult& result);

}  // namespace dig

#endif  // DIG_RESULT_IO_HPP
