#include "lpopt/ast.hpp"

#include <tuple>

namespace lpopt {

std::strong_ordering ArithTerm::operator<=>(const ArithTerm& other) const {
	if (auto c = op <=> other.op; c != 0) return c;
	if (auto c = *lhs <=> *other.lhs; c != 0) return c;
	return *rhs <=> *other.rhs;
}

bool ArithTerm::operator==(const ArithTerm& other) const {
	return op == other.op && *lhs == *other.lhs && *rhs == *other.rhs;
}

std::strong_ordering Aggregate::operator<=>(const Aggregate& other) const {
	return std::tie(guard, rel, function, elements) <=>
	       std::tie(other.guard, other.rel, other.function, other.elements);
}

bool Aggregate::operator==(const Aggregate& other) const {
	return guard == other.guard && rel == other.rel && function == other.function &&
	       elements == other.elements;
}

Term integer(std::int64_t value) { return Term{Constant{value}}; }
Term symbol(std::string name) { return Term{Constant{std::move(name)}}; }
Term variable(std::string name) { return Term{Variable{std::move(name)}}; }

Term arith(ArithOp op, Term lhs, Term rhs) {
	return Term{ArithTerm{op, std::make_shared<const Term>(std::move(lhs)),
	                      std::make_shared<const Term>(std::move(rhs))}};
}

Relation flip(Relation rel) {
	switch (rel) {
		case Relation::lt: return Relation::gt;
		case Relation::le: return Relation::ge;
		case Relation::ge: return Relation::le;
		case Relation::gt: return Relation::lt;
		default: return rel;
	}
}

bool holds(Relation rel, std::strong_ordering cmp) {
	switch (rel) {
		case Relation::lt: return cmp < 0;
		case Relation::le: return cmp <= 0;
		case Relation::eq: return cmp == 0;
		case Relation::ne: return cmp != 0;
		case Relation::ge: return cmp >= 0;
		case Relation::gt: return cmp > 0;
	}
	return false;
}

BodyElement positive(Atom atom) { return BodyElement{Literal{std::move(atom), false}}; }
BodyElement negative(Atom atom) { return BodyElement{Literal{std::move(atom), true}}; }
BodyElement compare(Relation rel, Term lhs, Term rhs) {
	return BodyElement{Comparison{rel, std::move(lhs), std::move(rhs)}};
}
BodyElement assign(Term target, Term expr) {
	return BodyElement{Arithmetic{std::move(target), std::move(expr)}};
}
BodyElement aggregate(Aggregate agg) { return BodyElement{std::move(agg)}; }

void collect_vars(const Term& term, VariableSet& out) {
	if (term.is_variable()) {
		out.insert(term.variable());
	} else if (term.is_arith()) {
		collect_vars(*term.arith().lhs, out);
		collect_vars(*term.arith().rhs, out);
	}
}

void collect_vars(const Atom& atom, VariableSet& out) {
	for (const auto& t : atom.args) collect_vars(t, out);
}

namespace {

void collect_vars(const Aggregate& agg, VariableSet& out, bool with_elements) {
	collect_vars(agg.guard, out);
	if (!with_elements) return;
	for (const auto& e : agg.elements) {
		for (const auto& t : e.terms) collect_vars(t, out);
		for (const auto& b : e.condition) collect_vars(b, out);
	}
}

void collect_global(const BodyElement& element, VariableSet& out) {
	if (element.is_aggregate()) {
		collect_vars(element.aggregate(), out, false);
	} else {
		collect_vars(element, out);
	}
}

void collect_weak(const Rule& rule, VariableSet& out) {
	if (!rule.weak) return;
	collect_vars(rule.weak->weight, out);
	collect_vars(rule.weak->level, out);
	for (const auto& t : rule.weak->terms) collect_vars(t, out);
}

}  // namespace

void collect_vars(const BodyElement& element, VariableSet& out) {
	switch (element.node.index()) {
		case 0: collect_vars(element.literal().atom, out); break;
		case 1:
			collect_vars(element.comparison().lhs, out);
			collect_vars(element.comparison().rhs, out);
			break;
		case 2:
			collect_vars(element.arithmetic().target, out);
			collect_vars(element.arithmetic().expr, out);
			break;
		case 3: collect_vars(element.aggregate(), out, true); break;
	}
}

VariableSet vars_of(const Term& term) {
	VariableSet out;
	collect_vars(term, out);
	return out;
}

VariableSet vars_of(const Atom& atom) {
	VariableSet out;
	collect_vars(atom, out);
	return out;
}

VariableSet vars_of(const AggregateElement& element) {
	VariableSet out;
	for (const auto& t : element.terms) collect_vars(t, out);
	for (const auto& b : element.condition) collect_vars(b, out);
	return out;
}

VariableSet vars_of(const Aggregate& agg) {
	VariableSet out;
	collect_vars(agg, out, true);
	return out;
}

VariableSet vars_of(const BodyElement& element) {
	VariableSet out;
	collect_vars(element, out);
	return out;
}

VariableSet vars_of(const Rule& rule) {
	VariableSet out;
	for (const auto& h : rule.head) collect_vars(h, out);
	for (const auto& b : rule.body) collect_vars(b, out);
	collect_weak(rule, out);
	return out;
}

VariableSet global_vars_of(const Rule& rule) {
	VariableSet out;
	for (const auto& h : rule.head) collect_vars(h, out);
	for (const auto& b : rule.body) collect_global(b, out);
	collect_weak(rule, out);
	return out;
}

VariableSet head_vars_of(const Rule& rule) {
	VariableSet out;
	for (const auto& h : rule.head) collect_vars(h, out);
	return out;
}

bool is_ground(const Term& term) {
	if (term.is_variable()) return false;
	if (term.is_arith()) return is_ground(*term.arith().lhs) && is_ground(*term.arith().rhs);
	return true;
}

bool is_ground(const Atom& atom) {
	for (const auto& t : atom.args) {
		if (!is_ground(t)) return false;
	}
	return true;
}

bool is_ground(const Rule& rule) { return vars_of(rule).empty(); }

bool is_fact(const Rule& rule) {
	return rule.head.size() == 1 && rule.body.empty() && !rule.weak;
}

namespace {

void collect_constants(const Term& term, std::set<Constant>& out) {
	if (term.is_constant()) {
		out.insert(term.constant());
	} else if (term.is_arith()) {
		collect_constants(*term.arith().lhs, out);
		collect_constants(*term.arith().rhs, out);
	}
}

void collect_constants(const Atom& atom, std::set<Constant>& out) {
	for (const auto& t : atom.args) collect_constants(t, out);
}

void collect_constants(const BodyElement& element, std::set<Constant>& out) {
	switch (element.node.index()) {
		case 0: collect_constants(element.literal().atom, out); break;
		case 1:
			collect_constants(element.comparison().lhs, out);
			collect_constants(element.comparison().rhs, out);
			break;
		case 2:
			collect_constants(element.arithmetic().target, out);
			collect_constants(element.arithmetic().expr, out);
			break;
		case 3: {
			const auto& agg = element.aggregate();
			collect_constants(agg.guard, out);
			for (const auto& e : agg.elements) {
				for (const auto& t : e.terms) collect_constants(t, out);
				for (const auto& b : e.condition) collect_constants(b, out);
			}
			break;
		}
	}
}

void collect_schema(const BodyElement& element, std::set<Signature>& out) {
	if (element.is_literal()) {
		const auto& a = element.literal().atom;
		out.emplace(a.predicate, a.arity());
	} else if (element.is_aggregate()) {
		for (const auto& e : element.aggregate().elements) {
			for (const auto& b : e.condition) collect_schema(b, out);
		}
	}
}

}  // namespace

std::set<Constant> active_domain(const Program& program) {
	std::set<Constant> out;
	for (const auto& rule : program.rules) {
		for (const auto& h : rule.head) collect_constants(h, out);
		for (const auto& b : rule.body) collect_constants(b, out);
		if (rule.weak) {
			collect_constants(rule.weak->weight, out);
			collect_constants(rule.weak->level, out);
			for (const auto& t : rule.weak->terms) collect_constants(t, out);
		}
	}
	return out;
}

std::set<Signature> schema_of(const Rule& rule) {
	std::set<Signature> out;
	for (const auto& h : rule.head) out.emplace(h.predicate, h.arity());
	for (const auto& b : rule.body) collect_schema(b, out);
	return out;
}

std::set<Signature> schema_of(const Program& program) {
	std::set<Signature> out;
	for (const auto& rule : program.rules) out.merge(schema_of(rule));
	return out;
}

}  // namespace lpopt
