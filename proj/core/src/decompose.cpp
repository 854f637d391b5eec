#include "lpopt/decompose.hpp"

#include <algorithm>
#include <limits>

#include "lpopt/rule_graph.hpp"

namespace lpopt {

FreshNamer::FreshNamer(std::set<std::string> forbidden, std::string temp_prefix, std::string dom_prefix)
	: temp_prefix_(std::move(temp_prefix)), dom_prefix_(std::move(dom_prefix)), forbidden_(std::move(forbidden)) {}

std::string FreshNamer::temp(std::string_view tag) { return fresh(temp_prefix_ + std::string(tag)); }
std::string FreshNamer::dom(std::string_view tag) { return fresh(dom_prefix_ + std::string(tag)); }

std::string FreshNamer::fresh(std::string base) {
	std::string name = base;
	while (forbidden_.contains(name)) name = base + "_" + std::to_string(counter_++);
	forbidden_.insert(name);
	return name;
}

namespace {

bool subset(const VariableSet& small, const VariableSet& big) {
	return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

// Variables bound by direct arguments of a positive literal.
VariableSet bound_by(const BodyElement& element) {
	VariableSet out;
	if (element.is_positive()) {
		for (const auto& arg : element.literal().atom.args) {
			if (arg.is_variable()) out.insert(arg.variable());
		}
	} else if (element.is_arithmetic() && element.arithmetic().target.is_variable()) {
		out.insert(element.arithmetic().target.variable());
	}
	return out;
}

// Round in which the safety fixpoint reaches each variable.
std::map<std::string, std::size_t> safety_ranks(std::span<const BodyElement> body) {
	std::map<std::string, std::size_t> rank;
	for (const auto& element : body) {
		if (!element.is_positive()) continue;
		for (const auto& v : bound_by(element)) rank.emplace(v, 0);
	}
	for (std::size_t round = 1;; ++round) {
		std::vector<std::string> reached;
		for (const auto& element : body) {
			if (!element.is_arithmetic() || !element.arithmetic().target.is_variable()) continue;
			const auto& target = element.arithmetic().target.variable();
			if (rank.contains(target)) continue;
			const auto deps = vars_of(element.arithmetic().expr);
			if (std::all_of(deps.begin(), deps.end(), [&](const std::string& d) { return rank.contains(d); })) {
				reached.push_back(target);
			}
		}
		if (reached.empty()) break;
		for (const auto& v : reached) rank.emplace(v, round);
	}
	return rank;
}

// Variables in order of first occurrence: body first, then head.
std::vector<std::string> variable_order(const Rule& rule) {
	std::vector<std::string> order;
	VariableSet seen;
	auto add = [&](const VariableSet& vs) {
		for (const auto& v : vs) {
			if (seen.insert(v).second) order.push_back(v);
		}
	};
	// VariableSet is sorted, so walk terms to keep textual order.
	auto walk_term = [&](auto&& self, const Term& t) -> void {
		if (t.is_variable()) {
			add({t.variable()});
		} else if (t.is_arith()) {
			self(self, *t.arith().lhs);
			self(self, *t.arith().rhs);
		}
	};
	auto walk_element = [&](auto&& self, const BodyElement& e) -> void {
		switch (e.node.index()) {
			case 0:
				for (const auto& a : e.literal().atom.args) walk_term(walk_term, a);
				break;
			case 1:
				walk_term(walk_term, e.comparison().lhs);
				walk_term(walk_term, e.comparison().rhs);
				break;
			case 2:
				walk_term(walk_term, e.arithmetic().target);
				walk_term(walk_term, e.arithmetic().expr);
				break;
			case 3:
				walk_term(walk_term, e.aggregate().guard);
				for (const auto& el : e.aggregate().elements) {
					for (const auto& t : el.terms) walk_term(walk_term, t);
					for (const auto& c : el.condition) self(self, c);
				}
				break;
		}
	};
	for (const auto& e : rule.body) walk_element(walk_element, e);
	for (const auto& h : rule.head) {
		for (const auto& a : h.args) walk_term(walk_term, a);
	}
	if (rule.weak) {
		walk_term(walk_term, rule.weak->weight);
		walk_term(walk_term, rule.weak->level);
		for (const auto& t : rule.weak->terms) walk_term(walk_term, t);
	}
	return order;
}

std::vector<Term> as_terms(const std::vector<std::string>& order, const VariableSet& keep) {
	std::vector<Term> out;
	for (const auto& v : order) {
		if (keep.contains(v)) out.push_back(variable(v));
	}
	return out;
}

// Variables of an element that take part in the rule graph.
VariableSet graph_vars(const BodyElement& element, const VariableSet& global) {
	if (!element.is_aggregate()) return vars_of(element);
	VariableSet out;
	for (const auto& v : vars_of(element.aggregate())) {
		if (global.contains(v)) out.insert(v);
	}
	return out;
}

// Adds dom atoms for the unsafe variables of `rule`, synthesising domain
// rules from `source` when no identical one exists yet.
void restore_safety(Rule& rule, std::span<const BodyElement> source, const std::vector<std::string>& order,
                    RewriteContext& ctx, std::string_view scope, std::vector<Rule>& new_domain_rules) {
	const auto unsafe = check_safety(rule);
	for (const auto& v : order) {
		if (!unsafe.contains(v)) continue;
		auto body = domain_body(v, source);
		auto key = std::make_pair(v, body);
		auto it = ctx.domain_predicates.find(key);
		if (it == ctx.domain_predicates.end()) {
			std::string name = ctx.namer.dom(std::string(scope) + "_" + v);
			it = ctx.domain_predicates.emplace(std::move(key), name).first;
			new_domain_rules.push_back(Rule{{Atom{name, {variable(v)}}}, std::move(body), std::nullopt});
		}
		rule.body.push_back(positive(Atom{it->second, {variable(v)}}));
	}
}

}  // namespace

std::vector<BodyElement> domain_body(const std::string& var, std::span<const BodyElement> body) {
	const auto rank = safety_ranks(body);
	if (!rank.contains(var)) throw DecompositionError("variable " + var + " cannot be made safe");

	std::vector<BodyElement> chosen;
	std::vector<char> taken(body.size(), 0);
	VariableSet covered;
	std::vector<std::string> pending{var};
	for (std::size_t next = 0; next < pending.size(); ++next) {
		const std::string s = pending[next];
		if (covered.contains(s)) continue;
		std::size_t pick = body.size();
		for (std::size_t i = 0; i < body.size(); ++i) {
			if (body[i].is_positive() && bound_by(body[i]).contains(s)) {
				pick = i;
				break;
			}
		}
		if (pick == body.size()) {
			std::size_t fewest = std::numeric_limits<std::size_t>::max();
			for (std::size_t i = 0; i < body.size(); ++i) {
				if (!body[i].is_arithmetic()) continue;
				const auto& a = body[i].arithmetic();
				if (!a.target.is_variable() || a.target.variable() != s) continue;
				const auto deps = vars_of(a.expr);
				bool grounded = std::all_of(deps.begin(), deps.end(), [&](const std::string& d) {
					auto it = rank.find(d);
					return it != rank.end() && it->second < rank.at(s);
				});
				if (grounded && deps.size() < fewest) {
					fewest = deps.size();
					pick = i;
				}
			}
			if (pick == body.size()) throw DecompositionError("variable " + s + " cannot be made safe");
			for (const auto& d : vars_of(body[pick].arithmetic().expr)) pending.push_back(d);
		}
		if (!taken[pick]) {
			taken[pick] = 1;
			chosen.push_back(body[pick]);
		}
		covered.merge(bound_by(body[pick]));
	}
	return chosen;
}

Rule synthesize_domain_rule(const std::string& var, const Rule& rule, FreshNamer& namer, std::string_view scope) {
	auto body = domain_body(var, rule.body);
	return Rule{{Atom{namer.dom(std::string(scope) + "_" + var), {variable(var)}}}, std::move(body), std::nullopt};
}

std::vector<Rule> decompose_rule(const Rule& rule, const TreeDecomposition& td, RewriteContext& ctx,
                                 std::string_view scope) {
	if (rule.weak) throw DecompositionError("weak constraints must be rewritten before decomposition");
	const bool head_clique = ctx.options.include_head_clique;
	const RuleGraph graph = build_rule_graph(rule, head_clique);
	if (!validate(td, graph)) throw DecompositionError("invalid tree decomposition for rule");
	const VariableSet head_vars = head_vars_of(rule);
	if (head_clique && !subset(head_vars, td.nodes[td.root].bag)) {
		throw DecompositionError("root bag does not contain the head variables");
	}
	if (td.size() == 1) return {rule};

	const VariableSet global = global_vars_of(rule);
	const auto depth = td.depths();
	const std::size_t n = td.size();

	// Each body element goes to the deepest node covering it.
	std::vector<std::vector<std::size_t>> assigned(n);
	std::vector<VariableSet> element_vars;
	for (std::size_t i = 0; i < rule.body.size(); ++i) {
		element_vars.push_back(graph_vars(rule.body[i], global));
		std::size_t best = n;
		for (std::size_t node = 0; node < n; ++node) {
			if (!subset(element_vars[i], td.nodes[node].bag)) continue;
			if (best == n || depth[node] > depth[best]) best = node;
		}
		if (best == n) throw DecompositionError("body element not covered by any bag");
		assigned[best].push_back(i);
	}

	const auto order = variable_order(rule);
	const auto post = td.postorder();
	std::vector<VariableSet> subtree_vars(n);
	std::vector<Atom> node_head(n);
	std::vector<Rule> node_rules;
	std::vector<Rule> domain_rules;

	for (std::size_t node : post) {
		for (std::size_t i : assigned[node]) subtree_vars[node].insert(element_vars[i].begin(), element_vars[i].end());
		for (std::size_t c : td.nodes[node].children) subtree_vars[node].insert(subtree_vars[c].begin(), subtree_vars[c].end());

		Rule out;
		for (std::size_t i : assigned[node]) out.body.push_back(rule.body[i]);
		for (std::size_t c : td.nodes[node].children) out.body.push_back(positive(node_head[c]));

		if (node == td.root) {
			out.head = rule.head;
		} else {
			VariableSet interface;
			const auto& parent_bag = td.nodes[*td.nodes[node].parent].bag;
			for (const auto& v : subtree_vars[node]) {
				if (parent_bag.contains(v) || head_vars.contains(v)) interface.insert(v);
			}
			node_head[node] = Atom{ctx.namer.temp(std::string(scope) + "_" + std::to_string(node)), as_terms(order, interface)};
			out.head = {node_head[node]};
		}
		restore_safety(out, rule.body, order, ctx, scope, domain_rules);
		node_rules.push_back(std::move(out));
	}

	domain_rules.insert(domain_rules.end(), std::make_move_iterator(node_rules.begin()),
	                    std::make_move_iterator(node_rules.end()));
	return domain_rules;
}

WeakRewrite rewrite_weak_constraint(const Rule& rule, FreshNamer& namer, std::string_view scope) {
	if (!rule.weak) throw DecompositionError("not a weak constraint");
	Atom temp{namer.temp(std::string(scope) + "_w"), {rule.weak->weight, rule.weak->level}};
	temp.args.insert(temp.args.end(), rule.weak->terms.begin(), rule.weak->terms.end());
	WeakRewrite out;
	out.temp_rule = Rule{{temp}, rule.body, std::nullopt};
	out.weak_rule = Rule{{}, {positive(temp)}, rule.weak};
	return out;
}

AggregateRewrite rewrite_aggregate(const Rule& rule, std::size_t body_index, RewriteContext& ctx,
                                   std::string_view scope) {
	if (body_index >= rule.body.size() || !rule.body[body_index].is_aggregate()) {
		throw DecompositionError("body element is not an aggregate");
	}
	const VariableSet global = global_vars_of(rule);
	Aggregate agg = rule.body[body_index].aggregate();
	AggregateRewrite result;

	// Context for domain rules: the condition itself, then the outer body.
	std::vector<BodyElement> outer;
	for (std::size_t i = 0; i < rule.body.size(); ++i) {
		if (i != body_index && !rule.body[i].is_aggregate()) outer.push_back(rule.body[i]);
	}

	for (std::size_t k = 0; k < agg.elements.size(); ++k) {
		auto& element = agg.elements[k];
		for (const auto& c : element.condition) {
			if (c.is_aggregate()) throw DecompositionError("nested aggregates are not supported");
		}
		std::vector<BodyElement> kept;   // touches a variable used outside the aggregate
		std::vector<BodyElement> moved;  // local to the aggregate
		for (const auto& c : element.condition) {
			const auto vs = vars_of(c);
			bool outside = std::any_of(vs.begin(), vs.end(), [&](const std::string& v) { return global.contains(v); });
			(outside ? kept : moved).push_back(c);
		}
		if (moved.size() <= 1) continue;

		VariableSet moved_vars;
		for (const auto& c : moved) collect_vars(c, moved_vars);
		VariableSet needed;
		for (const auto& t : element.terms) collect_vars(t, needed);
		for (const auto& c : kept) collect_vars(c, needed);

		// Interface variables in order of appearance: terms, then kept part.
		std::vector<std::string> order;
		for (const auto& t : element.terms) {
			for (const auto& v : variable_order(Rule{{Atom{"", {t}}}, {}, std::nullopt})) order.push_back(v);
		}
		for (const auto& v : variable_order(Rule{{}, kept, std::nullopt})) order.push_back(v);
		for (const auto& v : variable_order(Rule{{}, moved, std::nullopt})) order.push_back(v);
		std::vector<std::string> unique;
		for (const auto& v : order) {
			if (std::find(unique.begin(), unique.end(), v) == unique.end()) unique.push_back(v);
		}
		VariableSet interface;
		for (const auto& v : moved_vars) {
			if (needed.contains(v)) interface.insert(v);
		}

		const std::string tag = std::string(scope) + "_a" + std::to_string(body_index) + "_" + std::to_string(k);
		Atom temp{ctx.namer.temp(tag), as_terms(unique, interface)};
		Rule temp_rule{{temp}, moved, std::nullopt};

		std::vector<BodyElement> source = element.condition;
		source.insert(source.end(), outer.begin(), outer.end());
		std::vector<Rule> domain_rules;
		restore_safety(temp_rule, source, unique, ctx, tag, domain_rules);
		for (auto& d : domain_rules) result.temp_rules.push_back(std::move(d));
		result.temp_rules.push_back(std::move(temp_rule));

		kept.push_back(positive(temp));
		element.condition = std::move(kept);
	}
	result.rule = rule;
	result.rule.body[body_index] = aggregate(std::move(agg));
	return result;
}

DecompositionResult decompose_program(const Program& program, const DecomposeOptions& options) {
	RewriteContext ctx(FreshNamer(predicate_names(program)), options);
	DecompositionResult result;
	std::set<std::string> domain_names;
	auto is_domain_rule = [&](const Rule& r) {
		return r.head.size() == 1 && domain_names.contains(r.head.front().predicate);
	};
	auto note_domain_names = [&] {
		for (const auto& [key, name] : ctx.domain_predicates) domain_names.insert(name);
	};

	for (std::size_t index = 0; index < program.rules.size(); ++index) {
		const Rule& rule = program.rules[index];
		const std::string scope = std::to_string(index);
		RuleReport report;
		report.rule_index = index;

		std::vector<Rule> emitted;
		std::vector<Rule> work;
		std::vector<Rule> trailing;

		Rule main = rule;
		if (rule.weak && !build_rule_graph(rule, options.include_head_clique).is_complete()) {
			auto weak = rewrite_weak_constraint(rule, ctx.namer, scope);
			main = std::move(weak.temp_rule);
			trailing.push_back(std::move(weak.weak_rule));
		}
		for (std::size_t i = 0; i < main.body.size(); ++i) {
			if (!main.body[i].is_aggregate()) continue;
			auto rewritten = rewrite_aggregate(main, i, ctx, scope);
			note_domain_names();
			for (auto& t : rewritten.temp_rules) {
				if (is_domain_rule(t)) {
					emitted.push_back(std::move(t));
				} else {
					work.push_back(std::move(t));
				}
			}
			main = std::move(rewritten.rule);
		}
		work.push_back(std::move(main));

		for (std::size_t sub = 0; sub < work.size(); ++sub) {
			Rule& item = work[sub];
			const bool is_main = sub + 1 == work.size();
			const std::string item_scope = is_main ? scope : scope + "_s" + std::to_string(sub);
			const std::uint64_t seed = mix_seed(mix_seed(options.seed, index), sub);
			const RuleGraph graph = build_rule_graph(item, options.include_head_clique);
			TreeDecomposition td = decompose_graph(graph, options.heuristic, seed);
			if (item.weak) {
				// only reached when the graph is complete: kept verbatim
				report.decompositions.push_back(std::move(td));
				emitted.push_back(std::move(item));
				continue;
			}
			if (options.include_head_clique) td = ensure_head_root(std::move(td), head_vars_of(item));
			auto rules = decompose_rule(item, td, ctx, item_scope);
			note_domain_names();
			report.decompositions.push_back(std::move(td));
			for (auto& r : rules) emitted.push_back(std::move(r));
		}
		for (auto& t : trailing) emitted.push_back(std::move(t));

		for (const auto& td : report.decompositions) {
			report.width = std::max(report.width, td.width());
			report.bag_count += td.size();
		}
		report.rules_emitted = emitted.size();
		report.domain_rules_emitted =
			static_cast<std::size_t>(std::count_if(emitted.begin(), emitted.end(), is_domain_rule));
		result.report.max_width = std::max(result.report.max_width, report.width);
		result.report.rules.push_back(std::move(report));
		for (auto& r : emitted) result.program.rules.push_back(std::move(r));
	}

	if (!options.enabled) result.program = program;
	return result;
}

std::set<std::string> predicate_names(const Program& program) {
	std::set<std::string> out;
	for (const auto& [name, arity] : schema_of(program)) out.insert(name);
	return out;
}

}  // namespace lpopt
