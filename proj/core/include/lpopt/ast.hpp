#pragma once

// Abstract syntax for the supported ASP-Core-2 subset. All values are plain
// immutable-after-construction data; arithmetic subterms are shared.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace lpopt {

/// An integer or symbolic constant. Integers order by value and precede
/// symbols, which order lexicographically.
struct Constant {
	std::variant<std::int64_t, std::string> value;

	Constant() = default;
	Constant(std::int64_t v) : value(v) {}
	Constant(std::string s) : value(std::move(s)) {}

	bool is_integer() const { return value.index() == 0; }
	std::int64_t integer() const { return std::get<0>(value); }
	const std::string& symbol() const { return std::get<1>(value); }

	auto operator<=>(const Constant&) const = default;
	bool operator==(const Constant&) const = default;
};

struct Term;

struct Variable {
	std::string name;

	auto operator<=>(const Variable&) const = default;
	bool operator==(const Variable&) const = default;
};

enum class ArithOp { add, sub, mul, div };

struct ArithTerm {
	ArithOp op = ArithOp::add;
	std::shared_ptr<const Term> lhs;
	std::shared_ptr<const Term> rhs;

	std::strong_ordering operator<=>(const ArithTerm& other) const;
	bool operator==(const ArithTerm& other) const;
};

struct Term {
	std::variant<Constant, Variable, ArithTerm> node;

	bool is_constant() const { return node.index() == 0; }
	bool is_variable() const { return node.index() == 1; }
	bool is_arith() const { return node.index() == 2; }
	const Constant& constant() const { return std::get<0>(node); }
	const std::string& variable() const { return std::get<1>(node).name; }
	const ArithTerm& arith() const { return std::get<2>(node); }

	auto operator<=>(const Term&) const = default;
	bool operator==(const Term&) const = default;
};

Term integer(std::int64_t value);
Term symbol(std::string name);
Term variable(std::string name);
Term arith(ArithOp op, Term lhs, Term rhs);

struct Atom {
	std::string predicate;
	std::vector<Term> args;

	std::size_t arity() const { return args.size(); }

	auto operator<=>(const Atom&) const = default;
	bool operator==(const Atom&) const = default;
};

enum class Relation { lt, le, eq, ne, ge, gt };

/// The relation R' with `a R' b` iff `b R a`.
Relation flip(Relation rel);
/// Applies the relation to an already computed three-way comparison result.
bool holds(Relation rel, std::strong_ordering cmp);

struct Literal {
	Atom atom;
	bool negated = false;

	auto operator<=>(const Literal&) const = default;
	bool operator==(const Literal&) const = default;
};

struct Comparison {
	Relation rel = Relation::eq;
	Term lhs;
	Term rhs;

	auto operator<=>(const Comparison&) const = default;
	bool operator==(const Comparison&) const = default;
};

/// `target = expr`, where target is a variable or constant and expr an
/// arithmetic term.
struct Arithmetic {
	Term target;
	Term expr;

	auto operator<=>(const Arithmetic&) const = default;
	bool operator==(const Arithmetic&) const = default;
};

enum class AggregateFunction { count, sum, max, min };

struct AggregateElement;

/// `guard rel #function{ elements }`, always with the guard on the left.
struct Aggregate {
	Term guard;
	Relation rel = Relation::le;
	AggregateFunction function = AggregateFunction::count;
	std::vector<AggregateElement> elements;

	std::strong_ordering operator<=>(const Aggregate& other) const;
	bool operator==(const Aggregate& other) const;
};

struct BodyElement {
	std::variant<Literal, Comparison, Arithmetic, Aggregate> node;

	bool is_literal() const { return node.index() == 0; }
	bool is_positive() const { return is_literal() && !literal().negated; }
	bool is_negative() const { return is_literal() && literal().negated; }
	bool is_comparison() const { return node.index() == 1; }
	bool is_arithmetic() const { return node.index() == 2; }
	bool is_aggregate() const { return node.index() == 3; }

	const Literal& literal() const { return std::get<0>(node); }
	const Comparison& comparison() const { return std::get<1>(node); }
	const Arithmetic& arithmetic() const { return std::get<2>(node); }
	const Aggregate& aggregate() const { return std::get<3>(node); }

	auto operator<=>(const BodyElement&) const = default;
	bool operator==(const BodyElement&) const = default;
};

struct AggregateElement {
	std::vector<Term> terms;
	std::vector<BodyElement> condition;

	auto operator<=>(const AggregateElement&) const = default;
	bool operator==(const AggregateElement&) const = default;
};

BodyElement positive(Atom atom);
BodyElement negative(Atom atom);
BodyElement compare(Relation rel, Term lhs, Term rhs);
BodyElement assign(Term target, Term expr);
BodyElement aggregate(Aggregate agg);

/// Weak-constraint annotation `[weight@level, terms]`.
struct WeakAnnotation {
	Term weight;
	Term level;
	std::vector<Term> terms;

	auto operator<=>(const WeakAnnotation&) const = default;
	bool operator==(const WeakAnnotation&) const = default;
};

/// A disjunctive rule. An empty head is a constraint; a weak annotation is
/// only allowed on constraints.
struct Rule {
	std::vector<Atom> head;
	std::vector<BodyElement> body;
	std::optional<WeakAnnotation> weak;

	bool is_constraint() const { return head.empty(); }
	bool is_weak() const { return weak.has_value(); }

	auto operator<=>(const Rule&) const = default;
	bool operator==(const Rule&) const = default;
};

struct Program {
	std::vector<Rule> rules;

	bool operator==(const Program&) const = default;
};

/// A set of ground atoms.
using Interpretation = std::set<Atom>;

using VariableSet = std::set<std::string>;
using Signature = std::pair<std::string, std::size_t>;

VariableSet vars_of(const Term& term);
VariableSet vars_of(const Atom& atom);
VariableSet vars_of(const AggregateElement& element);
VariableSet vars_of(const Aggregate& agg);
VariableSet vars_of(const BodyElement& element);
VariableSet vars_of(const Rule& rule);

void collect_vars(const Term& term, VariableSet& out);
void collect_vars(const Atom& atom, VariableSet& out);
void collect_vars(const BodyElement& element, VariableSet& out);

/// Variables occurring outside aggregate elements: head, literals, builtins,
/// aggregate guards and the weak annotation.
VariableSet global_vars_of(const Rule& rule);
VariableSet head_vars_of(const Rule& rule);

bool is_ground(const Term& term);
bool is_ground(const Atom& atom);
bool is_ground(const Rule& rule);
/// A single-atom head with empty body and no annotation.
bool is_fact(const Rule& rule);

std::set<Constant> active_domain(const Program& program);
std::set<Signature> schema_of(const Program& program);
std::set<Signature> schema_of(const Rule& rule);

}  // namespace lpopt
