#include "lpopt/safety.hpp"

#include <algorithm>

namespace lpopt {

namespace {

bool subset(const VariableSet& a, const VariableSet& b) {
	return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

void check_aggregates(std::span<const BodyElement> body, const VariableSet& safe, VariableSet& unsafe) {
	for (const auto& element : body) {
		if (!element.is_aggregate()) continue;
		for (const auto& agg_element : element.aggregate().elements) {
			auto local_safe = safe_vars(agg_element.condition, safe);
			// locals of nested aggregates are checked one level down
			VariableSet own;
			for (const auto& t : agg_element.terms) collect_vars(t, own);
			for (const auto& c : agg_element.condition) {
				if (c.is_aggregate()) {
					collect_vars(c.aggregate().guard, own);
				} else {
					collect_vars(c, own);
				}
			}
			for (const auto& v : own) {
				if (!local_safe.contains(v)) unsafe.insert(v);
			}
			check_aggregates(agg_element.condition, local_safe, unsafe);
		}
	}
}

}  // namespace

VariableSet safe_vars(std::span<const BodyElement> body, const VariableSet& granted) {
	VariableSet safe = granted;
	for (const auto& element : body) {
		if (!element.is_positive()) continue;
		for (const auto& arg : element.literal().atom.args) {
			if (arg.is_variable()) safe.insert(arg.variable());
		}
	}
	for (bool changed = true; changed;) {
		changed = false;
		for (const auto& element : body) {
			if (!element.is_arithmetic()) continue;
			const auto& a = element.arithmetic();
			if (!a.target.is_variable() || safe.contains(a.target.variable())) continue;
			if (subset(vars_of(a.expr), safe)) {
				safe.insert(a.target.variable());
				changed = true;
			}
		}
	}
	return safe;
}

VariableSet check_safety(const Rule& rule) {
	auto safe = safe_vars(rule.body);
	VariableSet unsafe;
	for (const auto& v : global_vars_of(rule)) {
		if (!safe.contains(v)) unsafe.insert(v);
	}
	check_aggregates(rule.body, safe, unsafe);
	return unsafe;
}

}  // namespace lpopt
