#include "lpopt/rule_graph.hpp"

#include <algorithm>

namespace lpopt {

void RuleGraph::add_vertex(const std::string& v) {
	vertices_.insert(v);
	adjacency_[v];
}

void RuleGraph::add_edge(const std::string& a, const std::string& b) {
	add_vertex(a);
	add_vertex(b);
	if (a == b) return;
	adjacency_[a].insert(b);
	adjacency_[b].insert(a);
}

void RuleGraph::add_clique(const VariableSet& vs) {
	for (auto i = vs.begin(); i != vs.end(); ++i) {
		add_vertex(*i);
		for (auto j = std::next(i); j != vs.end(); ++j) add_edge(*i, *j);
	}
}

const VariableSet& RuleGraph::neighbors(const std::string& v) const {
	static const VariableSet none;
	auto it = adjacency_.find(v);
	return it == adjacency_.end() ? none : it->second;
}

std::set<RuleGraph::Edge> RuleGraph::edges() const {
	std::set<Edge> out;
	for (const auto& [v, ns] : adjacency_) {
		for (const auto& w : ns) {
			if (v < w) out.emplace(v, w);
		}
	}
	return out;
}

bool RuleGraph::has_edge(const std::string& a, const std::string& b) const {
	return neighbors(a).contains(b);
}

bool RuleGraph::is_clique(const VariableSet& vs) const {
	for (auto i = vs.begin(); i != vs.end(); ++i) {
		for (auto j = std::next(i); j != vs.end(); ++j) {
			if (!has_edge(*i, *j)) return false;
		}
	}
	return true;
}

RuleGraph build_rule_graph(const Rule& rule, bool include_head_clique) {
	RuleGraph g;
	const VariableSet global = global_vars_of(rule);
	for (const auto& v : global) g.add_vertex(v);

	if (include_head_clique) g.add_clique(head_vars_of(rule));
	for (const auto& element : rule.body) {
		if (element.is_aggregate()) {
			VariableSet touched;
			for (const auto& v : vars_of(element.aggregate())) {
				if (global.contains(v)) touched.insert(v);
			}
			g.add_clique(touched);
		} else {
			g.add_clique(vars_of(element));
		}
	}
	if (rule.weak) {
		VariableSet annotation;
		collect_vars(rule.weak->weight, annotation);
		collect_vars(rule.weak->level, annotation);
		for (const auto& t : rule.weak->terms) collect_vars(t, annotation);
		g.add_clique(annotation);
	}
	return g;
}

}  // namespace lpopt
