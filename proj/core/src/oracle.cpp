#include "lpopt/oracle.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <tuple>

namespace lpopt::oracle {

namespace {

using Substitution = std::map<std::string, Constant>;

// Evaluates a term under `s`; every variable must be bound. Arithmetic on
// non-integers, overflow and division by zero yield nullopt.
std::optional<Constant> eval(const Term& term, const Substitution& s) {
	if (term.is_constant()) return term.constant();
	if (term.is_variable()) return s.at(term.variable());
	const auto& a = term.arith();
	auto lhs = eval(*a.lhs, s);
	auto rhs = eval(*a.rhs, s);
	if (!lhs || !rhs || !lhs->is_integer() || !rhs->is_integer()) return std::nullopt;
	const std::int64_t x = lhs->integer();
	const std::int64_t y = rhs->integer();
	std::int64_t r = 0;
	switch (a.op) {
		case ArithOp::add:
			if (__builtin_add_overflow(x, y, &r)) return std::nullopt;
			break;
		case ArithOp::sub:
			if (__builtin_sub_overflow(x, y, &r)) return std::nullopt;
			break;
		case ArithOp::mul:
			if (__builtin_mul_overflow(x, y, &r)) return std::nullopt;
			break;
		case ArithOp::div:
			if (y == 0 || (x == std::numeric_limits<std::int64_t>::min() && y == -1)) return std::nullopt;
			r = x / y;
			break;
	}
	return Constant(r);
}

bool bound(const VariableSet& vs, const Substitution& s) {
	return std::all_of(vs.begin(), vs.end(), [&](const std::string& v) { return s.contains(v); });
}

Term to_term(Constant c) { return Term{std::move(c)}; }

std::optional<Atom> eval_atom(const Atom& atom, const Substitution& s) {
	Atom out{atom.predicate, {}};
	out.args.reserve(atom.args.size());
	for (const auto& arg : atom.args) {
		auto c = eval(arg, s);
		if (!c) return std::nullopt;
		out.args.push_back(to_term(std::move(*c)));
	}
	return out;
}

// Result of a builtin check; `failed` means evaluation error.
enum class Check { yes, no, failed };

Check check_builtin(const BodyElement& e, const Substitution& s) {
	if (e.is_comparison()) {
		auto l = eval(e.comparison().lhs, s);
		auto r = eval(e.comparison().rhs, s);
		if (!l || !r) return Check::failed;
		return holds(e.comparison().rel, *l <=> *r) ? Check::yes : Check::no;
	}
	auto t = eval(e.arithmetic().target, s);
	auto x = eval(e.arithmetic().expr, s);
	if (!t || !x) return Check::failed;
	return *t == *x ? Check::yes : Check::no;
}

bool is_builtin(const BodyElement& e) { return e.is_comparison() || e.is_arithmetic(); }

VariableSet arith_arg_vars(const Atom& atom) {
	VariableSet out;
	for (const auto& a : atom.args) {
		if (!a.is_variable()) collect_vars(a, out);
	}
	return out;
}

class Grounder {
public:
	Grounder(const Program& program, const GroundOptions& options) : program_(program), options_(options) {
		for (const auto& rule : program.rules) {
			if (global_vars_of(rule).size() > options.max_vars) {
				throw OracleError("rule has more than " + std::to_string(options.max_vars) + " variables");
			}
			check_nesting(rule);
		}
		adom_ = active_domain(program);
		compute_possible();
	}

	GroundProgram run() {
		GroundProgram out;
		counting_ = true;
		dropped_ = 0;
		for (const auto& rule : program_.rules) {
			enumerate_rule(rule, options_.mode, [&](const Substitution& s) {
				if (auto g = instantiate(rule, s)) {
					out.rules.push_back(std::move(*g));
				} else {
					++dropped_;
				}
			});
		}
		out.dropped_instances = dropped_;
		return out;
	}

private:
	using Callback = std::function<void(const Substitution&)>;

	static void check_nesting(const Rule& rule) {
		for (const auto& e : rule.body) {
			if (!e.is_aggregate()) continue;
			for (const auto& el : e.aggregate().elements) {
				for (const auto& c : el.condition) {
					if (c.is_aggregate()) throw OracleError("nested aggregates are not supported");
				}
			}
		}
	}

	void compute_possible() {
		bool changed = true;
		while (changed) {
			changed = false;
			refresh_domain();
			for (const auto& rule : program_.rules) {
				if (rule.head.empty()) continue;
				std::vector<Atom> fresh;
				enumerate_rule(rule, GroundingMode::relevant, [&](const Substitution& s) {
					for (const auto& h : rule.head) {
						auto a = eval_atom(h, s);
						if (a && !possible_set_.contains(*a)) fresh.push_back(std::move(*a));
					}
				});
				for (auto& a : fresh) {
					if (possible_set_.insert(a).second) {
						possible_[{a.predicate, a.arity()}].push_back(a);
						changed = true;
					}
				}
				if (possible_set_.size() > options_.max_possible_atoms) {
					throw OracleError("possible-atom cap exceeded");
				}
			}
		}
		refresh_domain();
	}

	void refresh_domain() {
		std::set<Constant> d = adom_;
		for (const auto& a : possible_set_) {
			for (const auto& t : a.args) d.insert(t.constant());
		}
		domain_.assign(d.begin(), d.end());
	}

	void enumerate_rule(const Rule& rule, GroundingMode mode, const Callback& cb) {
		Substitution s;
		enumerate(rule.body, global_vars_of(rule), mode, s, cb);
	}

	// Extends `s` to bind all of `vars`, keeping substitutions under which
	// the builtins of `body` hold.
	void enumerate(std::span<const BodyElement> body, const VariableSet& vars, GroundingMode mode, Substitution& s,
	               const Callback& cb) {
		if (mode == GroundingMode::naive) {
			std::vector<std::string> free;
			for (const auto& v : vars) {
				if (!s.contains(v)) free.push_back(v);
			}
			naive(body, free, 0, s, cb);
		} else {
			std::vector<char> done(body.size(), 0);
			for (std::size_t i = 0; i < body.size(); ++i) {
				if (!body[i].is_positive() && !is_builtin(body[i])) done[i] = 1;
			}
			search(body, vars, done, s, cb);
		}
	}

	void naive(std::span<const BodyElement> body, const std::vector<std::string>& free, std::size_t k, Substitution& s,
	           const Callback& cb) {
		if (k == free.size()) {
			for (const auto& e : body) {
				if (!is_builtin(e)) continue;
				Check c = check_builtin(e, s);
				if (c == Check::failed && counting_) ++dropped_;
				if (c != Check::yes) return;
			}
			cb(s);
			return;
		}
		for (const auto& c : domain_) {
			s[free[k]] = c;
			naive(body, free, k + 1, s, cb);
		}
		s.erase(free[k]);
	}

	void search(std::span<const BodyElement> body, const VariableSet& vars, std::vector<char>& done, Substitution& s,
	            const Callback& cb) {
		// builtins whose variables are all bound act as filters
		for (std::size_t i = 0; i < body.size(); ++i) {
			if (done[i] || !is_builtin(body[i]) || !bound(vars_of(body[i]), s)) continue;
			Check c = check_builtin(body[i], s);
			if (c == Check::failed && counting_) ++dropped_;
			if (c != Check::yes) return;
			done[i] = 1;
			search(body, vars, done, s, cb);
			done[i] = 0;
			return;
		}
		// arithmetic assigning an unbound variable
		for (std::size_t i = 0; i < body.size(); ++i) {
			if (done[i] || !body[i].is_arithmetic()) continue;
			const auto& a = body[i].arithmetic();
			if (!a.target.is_variable() || s.contains(a.target.variable()) || !bound(vars_of(a.expr), s)) continue;
			auto value = eval(a.expr, s);
			if (!value) {
				if (counting_) ++dropped_;
				return;
			}
			const std::string target = a.target.variable();
			s[target] = *value;
			done[i] = 1;
			search(body, vars, done, s, cb);
			done[i] = 0;
			s.erase(target);
			return;
		}
		// positive literal matched against the possible atoms
		for (std::size_t i = 0; i < body.size(); ++i) {
			if (done[i] || !body[i].is_positive()) continue;
			const Atom& atom = body[i].literal().atom;
			if (!bound(arith_arg_vars(atom), s)) continue;
			auto it = possible_.find({atom.predicate, atom.arity()});
			if (it == possible_.end()) return;
			done[i] = 1;
			for (const auto& candidate : it->second) {
				std::vector<std::string> bound_here;
				bool ok = true;
				for (std::size_t k = 0; k < atom.args.size() && ok; ++k) {
					const Term& arg = atom.args[k];
					const Constant& value = candidate.args[k].constant();
					if (arg.is_variable() && !s.contains(arg.variable())) {
						s[arg.variable()] = value;
						bound_here.push_back(arg.variable());
					} else {
						auto c = eval(arg, s);
						ok = c && *c == value;
					}
				}
				if (ok) search(body, vars, done, s, cb);
				for (const auto& v : bound_here) s.erase(v);
			}
			done[i] = 0;
			return;
		}
		// anything still unbound ranges over the domain
		for (const auto& v : vars) {
			if (s.contains(v)) continue;
			for (const auto& c : domain_) {
				s[v] = c;
				search(body, vars, done, s, cb);
			}
			s.erase(v);
			return;
		}
		for (std::size_t i = 0; i < body.size(); ++i) {
			if (!done[i]) return;  // a builtin that never became ready
		}
		cb(s);
	}

	std::optional<Rule> instantiate(const Rule& rule, const Substitution& s) {
		Rule out;
		for (const auto& h : rule.head) {
			auto a = eval_atom(h, s);
			if (!a) return std::nullopt;
			out.head.push_back(std::move(*a));
		}
		for (const auto& e : rule.body) {
			if (is_builtin(e)) continue;
			if (e.is_literal()) {
				auto a = eval_atom(e.literal().atom, s);
				if (!a) return std::nullopt;
				out.body.push_back(e.literal().negated ? negative(std::move(*a)) : positive(std::move(*a)));
				continue;
			}
			auto agg = instantiate(e.aggregate(), s);
			if (!agg) return std::nullopt;
			out.body.push_back(aggregate(std::move(*agg)));
		}
		if (rule.weak) {
			WeakAnnotation w;
			auto weight = eval(rule.weak->weight, s);
			auto level = eval(rule.weak->level, s);
			if (!weight || !level) return std::nullopt;
			w.weight = to_term(*weight);
			w.level = to_term(*level);
			for (const auto& t : rule.weak->terms) {
				auto c = eval(t, s);
				if (!c) return std::nullopt;
				w.terms.push_back(to_term(*c));
			}
			out.weak = std::move(w);
		}
		return out;
	}

	std::optional<Aggregate> instantiate(const Aggregate& agg, const Substitution& outer) {
		Aggregate out;
		auto guard = eval(agg.guard, outer);
		if (!guard) return std::nullopt;
		out.guard = to_term(*guard);
		out.rel = agg.rel;
		out.function = agg.function;
		std::set<AggregateElement> elements;
		for (const auto& el : agg.elements) {
			Substitution s = outer;
			enumerate(el.condition, vars_of(el), options_.mode, s, [&](const Substitution& local) {
				AggregateElement g;
				for (const auto& t : el.terms) {
					auto c = eval(t, local);
					if (!c) {
						++dropped_;
						return;
					}
					g.terms.push_back(to_term(*c));
				}
				for (const auto& c : el.condition) {
					if (!c.is_literal()) continue;
					auto a = eval_atom(c.literal().atom, local);
					if (!a) {
						++dropped_;
						return;
					}
					g.condition.push_back(c.literal().negated ? negative(std::move(*a)) : positive(std::move(*a)));
				}
				elements.insert(std::move(g));
			});
		}
		out.elements.assign(elements.begin(), elements.end());
		return out;
	}

	const Program& program_;
	GroundOptions options_;
	std::set<Constant> adom_;
	std::vector<Constant> domain_;
	std::set<Atom> possible_set_;
	std::map<Signature, std::vector<Atom>> possible_;
	bool counting_ = false;
	std::size_t dropped_ = 0;
};

// ---------------------------------------------------------------------------
// stable models over an indexed copy of the ground program

struct CElement {
	std::vector<Constant> tuple;
	std::vector<int> pos;
	std::vector<int> neg;
};

struct CAggregate {
	Relation rel;
	Constant guard;
	AggregateFunction function;
	std::vector<CElement> elements;
};

struct CWeak {
	std::int64_t weight;
	std::int64_t level;
	std::vector<Constant> terms;
};

struct CRule {
	std::vector<int> head;
	std::vector<int> pos;
	std::vector<int> neg;
	std::vector<CAggregate> aggs;
	std::optional<CWeak> weak;
};

enum class Truth { no, yes, unknown };

class Solver {
public:
	Solver(const GroundProgram& program, const SolveOptions& options) : options_(options) {
		for (const auto& r : program.rules) rules_.push_back(compile(r));
		check_recursion();
	}

	std::vector<WeightedModel> solve() {
		simplify();
		std::vector<WeightedModel> out;
		bool disjunctive = std::any_of(rules_.begin(), rules_.end(), [](const CRule& r) { return r.head.size() > 1; });
		if (disjunctive) {
			solve_disjunctive(out);
		} else {
			solve_normal(out);
		}
		std::sort(out.begin(), out.end());
		return out;
	}

private:
	int id(const Atom& a) {
		auto [it, inserted] = ids_.try_emplace(a, static_cast<int>(atoms_.size()));
		if (inserted) atoms_.push_back(a);
		return it->second;
	}

	CRule compile(const Rule& r) {
		CRule c;
		for (const auto& h : r.head) c.head.push_back(id(h));
		for (const auto& e : r.body) {
			if (e.is_literal()) {
				(e.literal().negated ? c.neg : c.pos).push_back(id(e.literal().atom));
			} else if (e.is_aggregate()) {
				const auto& a = e.aggregate();
				CAggregate ca{a.rel, a.guard.constant(), a.function, {}};
				for (const auto& el : a.elements) {
					CElement ce;
					for (const auto& t : el.terms) ce.tuple.push_back(t.constant());
					for (const auto& l : el.condition) {
						if (l.is_aggregate()) throw OracleError("nested aggregates are not supported");
						(l.literal().negated ? ce.neg : ce.pos).push_back(id(l.literal().atom));
					}
					ca.elements.push_back(std::move(ce));
				}
				c.aggs.push_back(std::move(ca));
			} else {
				throw OracleError("program is not ground");
			}
		}
		if (r.weak) {
			const Constant& w = r.weak->weight.constant();
			const Constant& l = r.weak->level.constant();
			if (!w.is_integer() || !l.is_integer()) throw OracleError("weak constraint weight and level must be integers");
			CWeak cw{w.integer(), l.integer(), {}};
			for (const auto& t : r.weak->terms) cw.terms.push_back(t.constant());
			c.weak = std::move(cw);
		}
		return c;
	}

	// Refuses aggregates whose condition depends on the rule's own head.
	void check_recursion() {
		std::map<Signature, std::set<Signature>> depends;
		auto sig = [&](int a) { return Signature{atoms_[a].predicate, atoms_[a].arity()}; };
		for (const auto& r : rules_) {
			for (int h : r.head) {
				auto& d = depends[sig(h)];
				for (int b : r.pos) d.insert(sig(b));
				for (int b : r.neg) d.insert(sig(b));
				for (const auto& a : r.aggs) {
					for (const auto& el : a.elements) {
						for (int b : el.pos) d.insert(sig(b));
						for (int b : el.neg) d.insert(sig(b));
					}
				}
			}
		}
		auto reaches = [&](const Signature& from, const std::set<Signature>& targets) {
			std::set<Signature> seen{from};
			std::vector<Signature> stack{from};
			while (!stack.empty()) {
				Signature s = stack.back();
				stack.pop_back();
				if (targets.contains(s)) return true;
				auto it = depends.find(s);
				if (it == depends.end()) continue;
				for (const auto& n : it->second) {
					if (seen.insert(n).second) stack.push_back(n);
				}
			}
			return false;
		};
		for (const auto& r : rules_) {
			if (r.head.empty() || r.aggs.empty()) continue;
			std::set<Signature> heads;
			for (int h : r.head) heads.insert(sig(h));
			for (const auto& a : r.aggs) {
				for (const auto& el : a.elements) {
					for (int b : el.pos) {
						if (reaches(sig(b), heads)) throw OracleError("recursive aggregates are not supported");
					}
					for (int b : el.neg) {
						if (reaches(sig(b), heads)) throw OracleError("recursive aggregates are not supported");
					}
				}
			}
		}
	}

	static Truth conjunction(const std::vector<int>& pos, const std::vector<int>& neg,
	                         const std::function<Truth(int)>& value) {
		Truth t = Truth::yes;
		for (int a : pos) {
			Truth v = value(a);
			if (v == Truth::no) return Truth::no;
			if (v == Truth::unknown) t = Truth::unknown;
		}
		for (int a : neg) {
			Truth v = value(a);
			if (v == Truth::yes) return Truth::no;
			if (v == Truth::unknown) t = Truth::unknown;
		}
		return t;
	}

	static Truth evaluate(const CAggregate& agg, const std::function<Truth(int)>& value) {
		std::set<std::vector<Constant>> tuples;
		for (const auto& el : agg.elements) {
			Truth t = conjunction(el.pos, el.neg, value);
			if (t == Truth::unknown) return Truth::unknown;
			if (t == Truth::yes) tuples.insert(el.tuple);
		}
		std::optional<Constant> result;
		switch (agg.function) {
			case AggregateFunction::count:
				result = Constant(static_cast<std::int64_t>(tuples.size()));
				break;
			case AggregateFunction::sum: {
				std::int64_t sum = 0;
				for (const auto& t : tuples) {
					if (!t.empty() && t.front().is_integer()) sum += t.front().integer();
				}
				result = Constant(sum);
				break;
			}
			case AggregateFunction::max:
			case AggregateFunction::min:
				for (const auto& t : tuples) {
					if (t.empty()) continue;
					if (!result) {
						result = t.front();
					} else if (agg.function == AggregateFunction::max ? t.front() > *result : t.front() < *result) {
						result = t.front();
					}
				}
				break;
		}
		if (!result) return Truth::no;
		return holds(agg.rel, agg.guard <=> *result) ? Truth::yes : Truth::no;
	}

	static Truth body(const CRule& r, const std::function<Truth(int)>& value) {
		Truth t = conjunction(r.pos, r.neg, value);
		if (t == Truth::no) return t;
		for (const auto& a : r.aggs) {
			Truth v = evaluate(a, value);
			if (v == Truth::no) return v;
			if (v == Truth::unknown) t = Truth::unknown;
		}
		return t;
	}

	Truth known(int a) const {
		if (certain_[a]) return Truth::yes;
		if (!possible_[a]) return Truth::no;
		return Truth::unknown;
	}

	// Least fixpoint of the rules accepted by `usable`, all head atoms derived.
	std::vector<char> closure(const std::function<bool(const CRule&)>& usable, bool single_heads) const {
		std::vector<char> in(atoms_.size(), 0);
		bool changed = true;
		while (changed) {
			changed = false;
			for (const auto& r : rules_) {
				if (r.head.empty() || (single_heads && r.head.size() != 1)) continue;
				if (!std::all_of(r.pos.begin(), r.pos.end(), [&](int a) { return in[a]; })) continue;
				if (!usable(r)) continue;
				for (int h : r.head) {
					if (!in[h]) {
						in[h] = 1;
						changed = true;
					}
				}
			}
		}
		return in;
	}

	// Alternating fixpoint: `certain_` holds in every stable model and
	// nothing outside `possible_` holds in any.
	void simplify() {
		certain_.assign(atoms_.size(), 0);
		possible_.assign(atoms_.size(), 1);
		auto value = [this](int a) { return known(a); };
		for (;;) {
			auto next_possible = closure(
				[&](const CRule& r) {
					if (std::any_of(r.neg.begin(), r.neg.end(), [&](int a) { return certain_[a]; })) return false;
					return std::none_of(r.aggs.begin(), r.aggs.end(),
					                    [&](const CAggregate& g) { return evaluate(g, value) == Truth::no; });
				},
				false);
			possible_ = std::move(next_possible);
			auto next_certain = closure(
				[&](const CRule& r) {
					if (std::any_of(r.neg.begin(), r.neg.end(), [&](int a) { return possible_[a]; })) return false;
					return std::all_of(r.aggs.begin(), r.aggs.end(),
					                   [&](const CAggregate& g) { return evaluate(g, value) == Truth::yes; });
				},
				true);
			if (next_certain == certain_) break;
			certain_ = std::move(next_certain);
		}
	}

	WeightedModel model(const std::vector<char>& in) const {
		WeightedModel m;
		for (std::size_t a = 0; a < atoms_.size(); ++a) {
			if (in[a]) m.interpretation.insert(atoms_[a]);
		}
		auto value = [&](int a) { return in[a] ? Truth::yes : Truth::no; };
		std::set<std::tuple<std::int64_t, std::int64_t, std::vector<Constant>>> realized;
		for (const auto& r : rules_) {
			if (r.weak && body(r, value) == Truth::yes) realized.emplace(r.weak->weight, r.weak->level, r.weak->terms);
		}
		for (const auto& [w, l, t] : realized) m.weight_by_level[l] += w;
		return m;
	}

	void solve_normal(std::vector<WeightedModel>& out) {
		std::vector<char> open(atoms_.size(), 0);
		auto mark = [&](int a) {
			if (known(a) == Truth::unknown) open[a] = 1;
		};
		for (const auto& r : rules_) {
			for (int a : r.neg) mark(a);
			for (const auto& g : r.aggs) {
				for (const auto& el : g.elements) {
					for (int a : el.pos) mark(a);
					for (int a : el.neg) mark(a);
				}
			}
		}
		std::vector<int> guessed;
		for (std::size_t a = 0; a < atoms_.size(); ++a) {
			if (open[a]) guessed.push_back(static_cast<int>(a));
		}
		if (guessed.size() > options_.max_atoms) throw OracleError("atom cap exceeded");

		std::vector<char> guess(atoms_.size(), 0);
		for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << guessed.size()); ++mask) {
			for (std::size_t k = 0; k < guessed.size(); ++k) guess[guessed[k]] = (mask >> k) & 1;
			auto value = [&](int a) {
				if (open[a]) return guess[a] ? Truth::yes : Truth::no;
				return known(a) == Truth::yes ? Truth::yes : Truth::no;
			};
			// least model of the reduct under the guess
			auto least = closure(
				[&](const CRule& r) {
					if (std::any_of(r.neg.begin(), r.neg.end(), [&](int a) { return value(a) == Truth::yes; })) return false;
					return std::all_of(r.aggs.begin(), r.aggs.end(),
					                   [&](const CAggregate& g) { return evaluate(g, value) == Truth::yes; });
				},
				false);
			if (!std::all_of(guessed.begin(), guessed.end(), [&](int a) { return least[a] == guess[a]; })) continue;
			auto actual = [&](int a) { return least[a] ? Truth::yes : Truth::no; };
			bool violated = std::any_of(rules_.begin(), rules_.end(), [&](const CRule& r) {
				return r.head.empty() && !r.weak && body(r, actual) == Truth::yes;
			});
			if (!violated) out.push_back(model(least));
		}
	}

	void solve_disjunctive(std::vector<WeightedModel>& out) {
		std::vector<int> open;
		for (std::size_t a = 0; a < atoms_.size(); ++a) {
			if (known(static_cast<int>(a)) == Truth::unknown) open.push_back(static_cast<int>(a));
		}
		if (open.size() > options_.max_atoms) throw OracleError("atom cap exceeded");

		std::vector<char> in(atoms_.size(), 0);
		for (std::size_t a = 0; a < atoms_.size(); ++a) in[a] = certain_[a];
		auto satisfies = [&](const std::vector<char>& i, const std::vector<const CRule*>& rules, bool positive_only) {
			auto value = [&](int a) { return i[a] ? Truth::yes : Truth::no; };
			for (const CRule* r : rules) {
				if (r->weak) continue;
				bool body_true = positive_only ? std::all_of(r->pos.begin(), r->pos.end(), [&](int a) { return i[a]; })
				                               : body(*r, value) == Truth::yes;
				if (!body_true) continue;
				if (std::none_of(r->head.begin(), r->head.end(), [&](int h) { return i[h]; })) return false;
			}
			return true;
		};
		std::vector<const CRule*> all;
		for (const auto& r : rules_) all.push_back(&r);

		for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << open.size()); ++mask) {
			for (std::size_t k = 0; k < open.size(); ++k) in[open[k]] = (mask >> k) & 1;
			if (!satisfies(in, all, false)) continue;
			auto value = [&](int a) { return in[a] ? Truth::yes : Truth::no; };
			std::vector<const CRule*> reduct;
			for (const auto& r : rules_) {
				if (r.weak) continue;
				if (std::any_of(r.neg.begin(), r.neg.end(), [&](int a) { return in[a]; })) continue;
				if (!std::all_of(r.aggs.begin(), r.aggs.end(),
				                 [&](const CAggregate& g) { return evaluate(g, value) == Truth::yes; })) {
					continue;
				}
				reduct.push_back(&r);
			}
			// proper subsets J of I that still contain the certain atoms
			bool minimal = true;
			std::vector<char> smaller = in;
			for (std::uint64_t sub = (mask - 1) & mask; mask != 0 && minimal; sub = (sub - 1) & mask) {
				for (std::size_t k = 0; k < open.size(); ++k) smaller[open[k]] = (sub >> k) & 1;
				if (satisfies(smaller, reduct, true)) minimal = false;
				if (sub == 0) break;
			}
			if (minimal) out.push_back(model(in));
		}
	}

	SolveOptions options_;
	std::vector<CRule> rules_;
	std::vector<Atom> atoms_;
	std::map<Atom, int> ids_;
	std::vector<char> certain_;
	std::vector<char> possible_;
};

}  // namespace

GroundProgram ground(const Program& program, const GroundOptions& options) {
	Grounder g(program, options);
	return g.run();
}

std::vector<WeightedModel> stable_models(const GroundProgram& program, const SolveOptions& options) {
	Solver s(program, options);
	return s.solve();
}

Interpretation strip(const Interpretation& interpretation, const std::set<Signature>& schema) {
	Interpretation out;
	for (const auto& a : interpretation) {
		if (schema.contains({a.predicate, a.arity()})) out.insert(a);
	}
	return out;
}

EquivalenceReport compare(const Program& original, const Program& rewritten, const SolveOptions& options) {
	GroundOptions g;
	g.mode = GroundingMode::relevant;
	const auto left = stable_models(ground(original, g), options);
	const auto right = stable_models(ground(rewritten, g), options);
	EquivalenceReport report;
	report.original_models = left.size();
	report.rewritten_models = right.size();

	const auto schema = schema_of(original);
	std::map<Interpretation, std::map<std::int64_t, std::int64_t>> image;
	for (const auto& m : right) {
		auto s = strip(m.interpretation, schema);
		if (!image.emplace(std::move(s), m.weight_by_level).second) {
			report.reason = "two rewritten models collapse to the same original model";
			return report;
		}
	}
	if (image.size() != left.size()) {
		report.reason = "model counts differ";
		return report;
	}
	for (const auto& m : left) {
		auto it = image.find(m.interpretation);
		if (it == image.end()) {
			report.reason = "original model without counterpart";
			return report;
		}
		if (it->second != m.weight_by_level) {
			report.reason = "weights differ";
			return report;
		}
	}
	report.equivalent = true;
	return report;
}

bool equivalent(const Program& original, const Program& rewritten, const SolveOptions& options) {
	return compare(original, rewritten, options).equivalent;
}

GroundingSize grounding_size(const Program& program, const GroundOptions& options) {
	const auto g = ground(program, options);
	GroundingSize out;
	std::set<Atom> atoms;
	for (const auto& r : g.rules) {
		if (is_fact(r)) {
			++out.facts;
		} else {
			++out.rules;
		}
		for (const auto& h : r.head) atoms.insert(h);
		for (const auto& e : r.body) {
			if (e.is_literal()) {
				atoms.insert(e.literal().atom);
			} else if (e.is_aggregate()) {
				for (const auto& el : e.aggregate().elements) {
					for (const auto& c : el.condition) atoms.insert(c.literal().atom);
				}
			}
		}
	}
	out.atoms = atoms.size();
	return out;
}

}  // namespace lpopt::oracle
