#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>

#include "lpopt/ast.hpp"

namespace lpopt {

/// Simple undirected graph over variable names, without self-loops.
class RuleGraph {
public:
	using Edge = std::pair<std::string, std::string>;

	void add_vertex(const std::string& v);
	void add_edge(const std::string& a, const std::string& b);
	void add_clique(const VariableSet& vs);

	const VariableSet& vertices() const { return vertices_; }
	const VariableSet& neighbors(const std::string& v) const;
	/// Edges with `first < second`, sorted.
	std::set<Edge> edges() const;
	bool has_edge(const std::string& a, const std::string& b) const;
	bool is_clique(const VariableSet& vs) const;
	bool is_complete() const { return is_clique(vertices_); }
	std::size_t size() const { return vertices_.size(); }

	bool operator==(const RuleGraph&) const = default;

private:
	VariableSet vertices_;
	std::map<std::string, VariableSet> adjacency_;
};

/// Variable graph of a rule: vertices are the variables occurring outside
/// aggregate elements; every literal, comparison, arithmetic element and
/// weak annotation spans a clique, each aggregate spans a clique over its
/// non-local variables, and with `include_head_clique` all head variables
/// form one clique.
RuleGraph build_rule_graph(const Rule& rule, bool include_head_clique = true);

}  // namespace lpopt
