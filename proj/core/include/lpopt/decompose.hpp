#pragma once

// Rule decomposition: every rule is split along a tree decomposition of its
// variable graph into one rule per bag, joined through fresh temp
// predicates; fresh dom predicates restore safety where splitting loses it.
// Weak constraints and aggregate bodies are pre-rewritten so that the same
// splitting applies to them.

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lpopt/ast.hpp"
#include "lpopt/safety.hpp"
#include "lpopt/tree_decomposition.hpp"

namespace lpopt {

/// Hands out predicate names that clash neither with the input schema nor
/// with each other. Names are `<prefix><tag>`; on a clash `_<counter>` is
/// appended.
class FreshNamer {
public:
	explicit FreshNamer(std::set<std::string> forbidden = {}, std::string temp_prefix = "temp_",
	                    std::string dom_prefix = "dom_");

	std::string temp(std::string_view tag);
	std::string dom(std::string_view tag);

private:
	std::string fresh(std::string base);

	std::string temp_prefix_;
	std::string dom_prefix_;
	std::size_t counter_ = 0;
	std::set<std::string> forbidden_;
};

struct DecomposeOptions {
	Heuristic heuristic = Heuristic::miw;
	std::uint64_t seed = 0;
	bool include_head_clique = true;
	/// When false the program is passed through; the report is still built.
	bool enabled = true;
};

/// Program-wide rewriting state: fresh names plus the domain rules emitted
/// so far, keyed by variable and body so identical ones are shared.
struct RewriteContext {
	FreshNamer namer;
	DecomposeOptions options;
	std::map<std::pair<std::string, std::vector<BodyElement>>, std::string> domain_predicates;

	explicit RewriteContext(FreshNamer n = FreshNamer(), DecomposeOptions o = {})
		: namer(std::move(n)), options(o) {}
};

/// Greedy choice of body elements that make `var` safe: positive literals
/// binding the current variable are preferred (first in body order);
/// otherwise the arithmetic element with the fewest variables defining it
/// is taken and its variables become pending. Throws DecompositionError if
/// `var` cannot be made safe.
std::vector<BodyElement> domain_body(const std::string& var, std::span<const BodyElement> body);

/// `dom(var) :- domain_body(var, rule.body)` under a fresh predicate for
/// `scope`.
Rule synthesize_domain_rule(const std::string& var, const Rule& rule, FreshNamer& namer, std::string_view scope);

/// Splits `rule` along `td`; returns new domain rules followed by one rule
/// per node, children before parents, the root rule keeping the original
/// head. A single-bag decomposition returns the rule unchanged. The rule may
/// contain aggregates but no weak annotation. Throws DecompositionError on
/// an invalid decomposition or when the head is not covered by the root
/// (unless head cliques are disabled in the context options).
std::vector<Rule> decompose_rule(const Rule& rule, const TreeDecomposition& td, RewriteContext& ctx,
                                 std::string_view scope);

struct WeakRewrite {
	Rule temp_rule;
	Rule weak_rule;
};

/// `:~ body. [w@l, t]` becomes `temp(w,l,t) :- body.` plus
/// `:~ temp(w,l,t). [w@l, t]`.
WeakRewrite rewrite_weak_constraint(const Rule& rule, FreshNamer& namer, std::string_view scope);

struct AggregateRewrite {
	Rule rule;
	std::vector<Rule> temp_rules;
	bool changed() const { return !temp_rules.empty(); }
};

/// Moves the part of each element's condition that shares no variable with
/// the rest of the rule into a temp rule, keeping only the variables the
/// remaining condition and the element terms need. Elements where that part
/// has at most one member are left alone. Throws DecompositionError for
/// nested aggregates.
AggregateRewrite rewrite_aggregate(const Rule& rule, std::size_t body_index, RewriteContext& ctx,
                                   std::string_view scope);

struct RuleReport {
	std::size_t rule_index = 0;
	int width = -1;
	std::size_t bag_count = 0;
	std::size_t rules_emitted = 0;
	std::size_t domain_rules_emitted = 0;
	/// Decompositions computed for this rule; helper rules introduced by
	/// weak constraint and aggregate rewriting come first.
	std::vector<TreeDecomposition> decompositions;
};

struct DecompositionReport {
	std::vector<RuleReport> rules;
	int max_width = -1;
};

struct DecompositionResult {
	Program program;
	DecompositionReport report;
};

DecompositionResult decompose_program(const Program& program, const DecomposeOptions& options = {});

/// Names of all predicates occurring in the program, regardless of arity.
std::set<std::string> predicate_names(const Program& program);

}  // namespace lpopt
