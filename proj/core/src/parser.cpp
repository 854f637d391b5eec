#include "lpopt/parser.hpp"

#include <cctype>
#include <charconv>
#include <limits>
#include <sstream>
#include <vector>

#include "lpopt/safety.hpp"

namespace lpopt {

ParseError::ParseError(SourceLocation location, ParseErrorKind kind, const std::string& message)
	: std::runtime_error(std::to_string(location.line) + ":" + std::to_string(location.column) + ": " +
	                     message),
	  location_(location),
	  kind_(kind),
	  message_(message) {}

const char* to_string(ParseErrorKind kind) {
	switch (kind) {
		case ParseErrorKind::lexical: return "lexical";
		case ParseErrorKind::syntactic: return "syntactic";
		case ParseErrorKind::unsupported_construct: return "unsupported-construct";
	}
	return "?";
}

namespace {

enum class Tok {
	identifier,
	variable,
	anonymous,
	number,
	aggregate,  // #count, #sum, #max, #min
	directive,  // any other #keyword
	string,
	lparen, rparen, lbrace, rbrace, lbracket, rbracket,
	comma, semicolon, colon, dot, dotdot, at, bar,
	if_, weak_if,
	plus, minus, star, slash,
	lt, le, eq, ne, ge, gt,
	end,
};

struct Token {
	Tok kind;
	std::string text;
	SourceLocation loc;
};

class Lexer {
public:
	explicit Lexer(std::string_view text) : text_(text) {}

	std::vector<Token> run() {
		std::vector<Token> out;
		for (;;) {
			skip_space();
			SourceLocation loc{line_, col_};
			if (pos_ >= text_.size()) {
				out.push_back({Tok::end, "", loc});
				return out;
			}
			out.push_back(next(loc));
		}
	}

private:
	char peek(std::size_t ahead = 0) const {
		return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
	}

	void advance(std::size_t n = 1) {
		for (; n > 0 && pos_ < text_.size(); --n, ++pos_) {
			if (text_[pos_] == '\n') {
				++line_;
				col_ = 1;
			} else {
				++col_;
			}
		}
	}

	void skip_space() {
		for (;;) {
			char c = peek();
			if (c == '%') {
				while (pos_ < text_.size() && peek() != '\n') advance();
			} else if (std::isspace(static_cast<unsigned char>(c))) {
				advance();
			} else {
				return;
			}
		}
	}

	static bool ident_char(char c) {
		return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
	}

	Token word(Tok kind, SourceLocation loc) {
		std::size_t start = pos_;
		while (ident_char(peek())) advance();
		return {kind, std::string(text_.substr(start, pos_ - start)), loc};
	}

	Token punct(Tok kind, std::size_t len, SourceLocation loc) {
		std::string s(text_.substr(pos_, len));
		advance(len);
		return {kind, s, loc};
	}

	Token next(SourceLocation loc) {
		char c = peek();
		if (std::islower(static_cast<unsigned char>(c))) return word(Tok::identifier, loc);
		if (std::isupper(static_cast<unsigned char>(c))) return word(Tok::variable, loc);
		if (c == '_') {
			if (ident_char(peek(1))) {
				throw ParseError(loc, ParseErrorKind::lexical, "identifiers may not start with '_'");
			}
			return punct(Tok::anonymous, 1, loc);
		}
		if (std::isdigit(static_cast<unsigned char>(c))) {
			std::size_t start = pos_;
			while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
			if (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_') {
				throw ParseError(loc, ParseErrorKind::lexical, "malformed number");
			}
			return {Tok::number, std::string(text_.substr(start, pos_ - start)), loc};
		}
		if (c == '#') {
			advance();
			if (!std::isalpha(static_cast<unsigned char>(peek()))) {
				throw ParseError(loc, ParseErrorKind::lexical, "expected keyword after '#'");
			}
			Token t = word(Tok::directive, loc);
			t.text = "#" + t.text;
			if (t.text == "#count" || t.text == "#sum" || t.text == "#max" || t.text == "#min") {
				t.kind = Tok::aggregate;
			}
			return t;
		}
		if (c == '"') {
			std::size_t start = pos_;
			advance();
			while (pos_ < text_.size() && peek() != '"' && peek() != '\n') {
				if (peek() == '\\') advance();
				advance();
			}
			if (peek() != '"') throw ParseError(loc, ParseErrorKind::lexical, "unterminated string");
			advance();
			return {Tok::string, std::string(text_.substr(start, pos_ - start)), loc};
		}
		switch (c) {
			case '(': return punct(Tok::lparen, 1, loc);
			case ')': return punct(Tok::rparen, 1, loc);
			case '{': return punct(Tok::lbrace, 1, loc);
			case '}': return punct(Tok::rbrace, 1, loc);
			case '[': return punct(Tok::lbracket, 1, loc);
			case ']': return punct(Tok::rbracket, 1, loc);
			case ',': return punct(Tok::comma, 1, loc);
			case ';': return punct(Tok::semicolon, 1, loc);
			case '@': return punct(Tok::at, 1, loc);
			case '|': return punct(Tok::bar, 1, loc);
			case '+': return punct(Tok::plus, 1, loc);
			case '-': return punct(Tok::minus, 1, loc);
			case '*': return punct(Tok::star, 1, loc);
			case '/': return punct(Tok::slash, 1, loc);
			case '.': return peek(1) == '.' ? punct(Tok::dotdot, 2, loc) : punct(Tok::dot, 1, loc);
			case ':':
				if (peek(1) == '-') return punct(Tok::if_, 2, loc);
				if (peek(1) == '~') return punct(Tok::weak_if, 2, loc);
				return punct(Tok::colon, 1, loc);
			case '<':
				if (peek(1) == '=') return punct(Tok::le, 2, loc);
				if (peek(1) == '>') return punct(Tok::ne, 2, loc);
				return punct(Tok::lt, 1, loc);
			case '>': return peek(1) == '=' ? punct(Tok::ge, 2, loc) : punct(Tok::gt, 1, loc);
			case '=': return peek(1) == '=' ? punct(Tok::eq, 2, loc) : punct(Tok::eq, 1, loc);
			case '!':
				if (peek(1) == '=') return punct(Tok::ne, 2, loc);
				break;
			default: break;
		}
		throw ParseError(loc, ParseErrorKind::lexical, std::string("unexpected character '") + c + "'");
	}

	std::string_view text_;
	std::size_t pos_ = 0;
	std::size_t line_ = 1;
	std::size_t col_ = 1;
};

bool is_relation(Tok t) {
	return t == Tok::lt || t == Tok::le || t == Tok::eq || t == Tok::ne || t == Tok::ge || t == Tok::gt;
}

Relation to_relation(Tok t) {
	switch (t) {
		case Tok::lt: return Relation::lt;
		case Tok::le: return Relation::le;
		case Tok::ne: return Relation::ne;
		case Tok::ge: return Relation::ge;
		case Tok::gt: return Relation::gt;
		default: return Relation::eq;
	}
}

AggregateFunction to_function(const std::string& s) {
	if (s == "#sum") return AggregateFunction::sum;
	if (s == "#max") return AggregateFunction::max;
	if (s == "#min") return AggregateFunction::min;
	return AggregateFunction::count;
}

class Parser {
public:
	explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {
		for (const auto& t : toks_) {
			if (t.kind == Tok::variable) program_vars_.insert(t.text);
		}
	}

	Program run() {
		Program program;
		while (cur().kind != Tok::end) {
			SourceLocation start = cur().loc;
			Rule rule = statement();
			auto unsafe = check_safety(rule);
			if (!unsafe.empty()) {
				std::string names;
				for (const auto& v : unsafe) names += (names.empty() ? "" : ", ") + v;
				throw ParseError(start, ParseErrorKind::unsupported_construct, "unsafe variables: " + names);
			}
			program.rules.push_back(std::move(rule));
		}
		return program;
	}

private:
	const Token& cur() const { return toks_[pos_]; }
	const Token& ahead(std::size_t n) const { return toks_[std::min(pos_ + n, toks_.size() - 1)]; }
	bool at(Tok t) const { return cur().kind == t; }

	Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

	[[noreturn]] void fail(const std::string& what) const {
		throw ParseError(cur().loc, ParseErrorKind::syntactic, what + describe(cur()));
	}

	[[noreturn]] void unsupported(const std::string& what) const {
		throw ParseError(cur().loc, ParseErrorKind::unsupported_construct, what + " are not supported");
	}

	static std::string describe(const Token& t) {
		if (t.kind == Tok::end) return ", found end of input";
		return ", found '" + t.text + "'";
	}

	Token expect(Tok t, const char* what) {
		if (!at(t)) fail(std::string("expected ") + what);
		return take();
	}

	Rule statement() {
		anonymous_ = 0;
		Rule rule;
		if (at(Tok::if_)) {
			take();
			rule.body = body();
			expect(Tok::dot, "'.'");
		} else if (at(Tok::weak_if)) {
			take();
			rule.body = body();
			expect(Tok::dot, "'.'");
			rule.weak = weak_annotation();
		} else if (at(Tok::directive)) {
			unsupported("directives such as " + cur().text);
		} else if (at(Tok::lbrace)) {
			unsupported("choice rules");
		} else {
			rule.head = head();
			if (at(Tok::if_)) {
				take();
				rule.body = body();
			}
			expect(Tok::dot, "'.'");
		}
		return rule;
	}

	std::vector<Atom> head() {
		std::vector<Atom> atoms;
		for (;;) {
			if (at(Tok::minus)) unsupported("classical negations");
			if (at(Tok::identifier) && cur().text == "not") fail("negation in rule head");
			atoms.push_back(atom());
			if (at(Tok::colon)) unsupported("conditional literals");
			if (!at(Tok::bar) && !at(Tok::semicolon)) break;
			take();
		}
		return atoms;
	}

	std::vector<BodyElement> body() {
		std::vector<BodyElement> elements;
		if (at(Tok::dot)) return elements;
		for (;;) {
			std::size_t mark = pending_.size();
			elements.push_back(body_element());
			flush_pending(elements, mark);
			if (at(Tok::semicolon)) unsupported("disjunctions in rule bodies");
			if (at(Tok::colon)) unsupported("conditional literals");
			if (!at(Tok::comma)) break;
			take();
		}
		return elements;
	}

	WeakAnnotation weak_annotation() {
		expect(Tok::lbracket, "'[' after weak constraint");
		WeakAnnotation weak;
		weak.weight = term();
		weak.level = integer(0);
		if (at(Tok::at)) {
			take();
			weak.level = term();
		}
		while (at(Tok::comma)) {
			take();
			weak.terms.push_back(term());
		}
		expect(Tok::rbracket, "']'");
		return weak;
	}

	bool starts_atom() const {
		if (!at(Tok::identifier)) return false;
		Tok next = ahead(1).kind;
		if (next == Tok::lparen) return true;
		return !is_relation(next) && next != Tok::plus && next != Tok::minus && next != Tok::star &&
		       next != Tok::slash && next != Tok::dotdot;
	}

	BodyElement body_element() {
		if (at(Tok::identifier) && cur().text == "not") {
			take();
			if (at(Tok::identifier) && cur().text == "not") unsupported("double negations");
			if (at(Tok::minus)) unsupported("classical negations");
			if (!starts_atom()) unsupported("negated aggregates and builtins");
			return negative(atom());
		}
		if (at(Tok::minus) && ahead(1).kind == Tok::identifier) unsupported("classical negations");
		if (at(Tok::aggregate)) {
			Aggregate agg = aggregate_body();
			if (!is_relation(cur().kind)) fail("expected a guard after aggregate");
			Relation rel = to_relation(take().kind);
			agg.guard = term();
			agg.rel = flip(rel);
			if (is_relation(cur().kind)) unsupported("right-hand chained guards");
			return aggregate(std::move(agg));
		}
		if (starts_atom()) {
			Atom a = atom();
			if (is_relation(cur().kind)) unsupported("function terms");
			return positive(std::move(a));
		}
		Term lhs = term();
		if (!is_relation(cur().kind)) fail("expected a comparison operator");
		Relation rel = to_relation(take().kind);
		if (at(Tok::aggregate)) {
			Aggregate agg = aggregate_body();
			agg.guard = lhs;
			agg.rel = rel;
			if (is_relation(cur().kind)) {
				pending_.push_back(upper_guard(agg));
			}
			return aggregate(std::move(agg));
		}
		Term rhs = term();
		return builtin(rel, std::move(lhs), std::move(rhs));
	}

	// For `l R1 #agg{...} R2 u`, produces `u flip(R2) #agg{...}`.
	Aggregate upper_guard(const Aggregate& lower) {
		Relation rel = to_relation(take().kind);
		Aggregate upper = lower;
		upper.guard = term();
		upper.rel = flip(rel);
		if (is_relation(cur().kind)) fail("too many aggregate guards");
		return upper;
	}

	static BodyElement builtin(Relation rel, Term lhs, Term rhs) {
		if (rel == Relation::eq) {
			bool lhs_simple = !lhs.is_arith();
			bool rhs_simple = !rhs.is_arith();
			if (lhs.is_variable() && !rhs.is_variable()) return assign(std::move(lhs), std::move(rhs));
			if (rhs.is_variable() && !lhs.is_variable()) return assign(std::move(rhs), std::move(lhs));
			if (lhs_simple && rhs.is_arith()) return assign(std::move(lhs), std::move(rhs));
			if (rhs_simple && lhs.is_arith()) return assign(std::move(rhs), std::move(lhs));
		}
		return compare(rel, std::move(lhs), std::move(rhs));
	}

	Aggregate aggregate_body() {
		Aggregate agg;
		agg.function = to_function(take().text);
		expect(Tok::lbrace, "'{'");
		if (at(Tok::rbrace)) fail("expected an aggregate element");
		for (;;) {
			agg.elements.push_back(aggregate_element());
			if (!at(Tok::semicolon)) break;
			take();
		}
		expect(Tok::rbrace, "'}'");
		return agg;
	}

	AggregateElement aggregate_element() {
		AggregateElement element;
		if (!at(Tok::colon)) {
			for (;;) {
				element.terms.push_back(term());
				if (!at(Tok::comma)) break;
				take();
			}
		}
		if (at(Tok::colon)) {
			take();
			for (;;) {
				std::size_t mark = pending_.size();
				element.condition.push_back(body_element());
				flush_pending(element.condition, mark);
				if (!at(Tok::comma)) break;
				take();
			}
		}
		if (element.terms.empty() && element.condition.empty()) fail("expected an aggregate element");
		return element;
	}

	void flush_pending(std::vector<BodyElement>& into, std::size_t mark) {
		while (pending_.size() > mark) {
			into.push_back(aggregate(std::move(pending_[mark])));
			pending_.erase(pending_.begin() + static_cast<std::ptrdiff_t>(mark));
		}
	}

	Atom atom() {
		if (!at(Tok::identifier)) fail("expected an atom");
		Atom a;
		a.predicate = take().text;
		if (at(Tok::lparen)) {
			take();
			if (at(Tok::rparen)) fail("expected a term");
			for (;;) {
				a.args.push_back(term());
				if (at(Tok::semicolon)) unsupported("pools");
				if (!at(Tok::comma)) break;
				take();
			}
			expect(Tok::rparen, "')'");
		}
		return a;
	}

	Term term() {
		Term t = product();
		while (at(Tok::plus) || at(Tok::minus)) {
			ArithOp op = take().kind == Tok::plus ? ArithOp::add : ArithOp::sub;
			t = arith(op, std::move(t), product());
		}
		if (at(Tok::dotdot)) unsupported("intervals");
		return t;
	}

	Term product() {
		Term t = unary();
		while (at(Tok::star) || at(Tok::slash)) {
			ArithOp op = take().kind == Tok::star ? ArithOp::mul : ArithOp::div;
			t = arith(op, std::move(t), unary());
		}
		return t;
	}

	Term unary() {
		if (!at(Tok::minus)) return primary();
		take();
		if (at(Tok::number)) return number(true);
		Term inner = unary();
		if (inner.is_constant() && inner.constant().is_integer() &&
		    inner.constant().integer() != std::numeric_limits<std::int64_t>::min()) {
			return integer(-inner.constant().integer());
		}
		return arith(ArithOp::sub, integer(0), std::move(inner));
	}

	Term number(bool negate) {
		const Token& tok = cur();
		std::uint64_t magnitude = 0;
		auto [p, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), magnitude);
		const std::uint64_t limit = static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()) + (negate ? 1 : 0);
		if (ec != std::errc() || magnitude > limit) {
			throw ParseError(tok.loc, ParseErrorKind::lexical, "integer out of range: " + tok.text);
		}
		take();
		if (!negate) return integer(static_cast<std::int64_t>(magnitude));
		if (magnitude == limit) return integer(std::numeric_limits<std::int64_t>::min());
		return integer(-static_cast<std::int64_t>(magnitude));
	}

	Term primary() {
		switch (cur().kind) {
			case Tok::number: return number(false);
			case Tok::variable: return variable(take().text);
			case Tok::anonymous: take(); return variable(fresh_anonymous());
			case Tok::identifier: {
				if (ahead(1).kind == Tok::lparen) unsupported("function terms");
				return symbol(take().text);
			}
			case Tok::string: unsupported("string constants");
			case Tok::bar: unsupported("absolute values");
			case Tok::lparen: {
				take();
				Term t = term();
				if (at(Tok::comma)) unsupported("tuple terms");
				expect(Tok::rparen, "')'");
				return t;
			}
			default: fail("expected a term");
		}
	}

	std::string fresh_anonymous() {
		for (;;) {
			std::string name = "Anon" + std::to_string(anonymous_++);
			if (!program_vars_.contains(name)) return name;
		}
	}

	std::vector<Token> toks_;
	std::size_t pos_ = 0;
	std::size_t anonymous_ = 0;
	VariableSet program_vars_;
	std::vector<Aggregate> pending_;
};

}  // namespace

Program parse(std::string_view text) {
	return Parser(Lexer(text).run()).run();
}

const char* to_string(Relation rel) {
	switch (rel) {
		case Relation::lt: return "<";
		case Relation::le: return "<=";
		case Relation::eq: return "=";
		case Relation::ne: return "!=";
		case Relation::ge: return ">=";
		case Relation::gt: return ">";
	}
	return "?";
}

const char* to_string(AggregateFunction function) {
	switch (function) {
		case AggregateFunction::count: return "#count";
		case AggregateFunction::sum: return "#sum";
		case AggregateFunction::max: return "#max";
		case AggregateFunction::min: return "#min";
	}
	return "?";
}

namespace {

const char* op_string(ArithOp op) {
	switch (op) {
		case ArithOp::add: return "+";
		case ArithOp::sub: return "-";
		case ArithOp::mul: return "*";
		case ArithOp::div: return "/";
	}
	return "?";
}

void render_to(std::ostream& os, const Term& term);

void render_operand(std::ostream& os, const Term& term) {
	if (term.is_arith()) {
		os << '(';
		render_to(os, term);
		os << ')';
	} else {
		render_to(os, term);
	}
}

void render_to(std::ostream& os, const Term& term) {
	switch (term.node.index()) {
		case 0: {
			const auto& c = term.constant();
			if (c.is_integer()) {
				os << c.integer();
			} else {
				os << c.symbol();
			}
			break;
		}
		case 1: os << term.variable(); break;
		case 2:
			render_operand(os, *term.arith().lhs);
			os << op_string(term.arith().op);
			render_operand(os, *term.arith().rhs);
			break;
	}
}

template <class Range, class Fn>
void join(std::ostream& os, const Range& items, const char* sep, Fn&& fn) {
	bool first = true;
	for (const auto& item : items) {
		if (!first) os << sep;
		first = false;
		fn(item);
	}
}

void render_to(std::ostream& os, const Atom& atom) {
	os << atom.predicate;
	if (atom.args.empty()) return;
	os << '(';
	join(os, atom.args, ",", [&](const Term& t) { render_to(os, t); });
	os << ')';
}

void render_to(std::ostream& os, const BodyElement& element) {
	switch (element.node.index()) {
		case 0:
			if (element.literal().negated) os << "not ";
			render_to(os, element.literal().atom);
			break;
		case 1: {
			const auto& c = element.comparison();
			render_to(os, c.lhs);
			os << ' ' << to_string(c.rel) << ' ';
			render_to(os, c.rhs);
			break;
		}
		case 2:
			render_to(os, element.arithmetic().target);
			os << " = ";
			render_to(os, element.arithmetic().expr);
			break;
		case 3: {
			const auto& agg = element.aggregate();
			render_to(os, agg.guard);
			os << ' ' << to_string(agg.rel) << ' ' << to_string(agg.function) << '{';
			join(os, agg.elements, "; ", [&](const AggregateElement& e) {
				join(os, e.terms, ",", [&](const Term& t) { render_to(os, t); });
				if (!e.condition.empty()) {
					os << (e.terms.empty() ? ": " : " : ");
					join(os, e.condition, ", ", [&](const BodyElement& b) { render_to(os, b); });
				}
			});
			os << '}';
			break;
		}
	}
}

void render_to(std::ostream& os, const Rule& rule) {
	if (rule.weak) {
		os << ":~ ";
		join(os, rule.body, ", ", [&](const BodyElement& b) { render_to(os, b); });
		os << ". [";
		render_to(os, rule.weak->weight);
		os << '@';
		render_to(os, rule.weak->level);
		for (const auto& t : rule.weak->terms) {
			os << ',';
			render_to(os, t);
		}
		os << ']';
		return;
	}
	join(os, rule.head, " | ", [&](const Atom& a) { render_to(os, a); });
	if (!rule.body.empty() || rule.head.empty()) {
		os << (rule.head.empty() ? ":- " : " :- ");
		join(os, rule.body, ", ", [&](const BodyElement& b) { render_to(os, b); });
	}
	os << '.';
}

template <class T>
std::string render_string(const T& value) {
	std::ostringstream os;
	render_to(os, value);
	return os.str();
}

}  // namespace

std::string render(const Term& term) { return render_string(term); }
std::string render(const Atom& atom) { return render_string(atom); }
std::string render(const BodyElement& element) { return render_string(element); }
std::string render(const Rule& rule) { return render_string(rule); }

std::string render(const Program& program) {
	std::ostringstream os;
	for (const auto& rule : program.rules) {
		render_to(os, rule);
		os << '\n';
	}
	return os.str();
}

}  // namespace lpopt
