#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "lpopt/parser.hpp"
#include "lpopt/rule_graph.hpp"

using namespace lpopt;

namespace {

Rule rule_of(const char* text) { return parse(text).rules.at(0); }

std::set<RuleGraph::Edge> edges(std::initializer_list<std::pair<const char*, const char*>> list) {
	std::set<RuleGraph::Edge> out;
	for (auto [a, b] : list) out.emplace(std::min<std::string>(a, b), std::max<std::string>(a, b));
	return out;
}

}  // namespace

TEST_CASE("four-cycle rule", "[rule_graph]") {
	auto g = build_rule_graph(rule_of("h(X,W) :- e(X,Y), e(Y,Z), not e(Z,W), e(W,X)."));
	CHECK(g.vertices() == VariableSet{"W", "X", "Y", "Z"});
	CHECK(g.edges() == edges({{"X", "Y"}, {"Y", "Z"}, {"Z", "W"}, {"W", "X"}}));
	CHECK_FALSE(g.is_complete());
}

TEST_CASE("aggregate locals are not vertices", "[rule_graph]") {
	auto g = build_rule_graph(rule_of("good(X) :- vertex(X), 2 <= #count{Y : edge(X,Y), edge(Y,Z), red(Z)}."));
	CHECK(g.vertices() == VariableSet{"X"});
	CHECK(g.edges().empty());

	auto h = build_rule_graph(rule_of("p(X) :- q(X), r(Y), S = #sum{Z : s(X,Z)}, t(S)."));
	CHECK(h.vertices() == VariableSet{"S", "X", "Y"});
	CHECK(h.has_edge("S", "X"));
	CHECK_FALSE(h.has_edge("X", "Y"));
}

TEST_CASE("ground rules have empty graphs", "[rule_graph]") {
	auto g = build_rule_graph(rule_of("p(a,b)."));
	CHECK(g.size() == 0);
	CHECK(g.edges().empty());
	CHECK(g.is_complete());
}

TEST_CASE("arithmetic and comparisons span cliques", "[rule_graph]") {
	auto g = build_rule_graph(rule_of("p(X) :- a(X), b(Y), c(Z), X = Y+Z, Y != Z."));
	CHECK(g.is_clique({"X", "Y", "Z"}));
}

TEST_CASE("head clique is optional", "[rule_graph]") {
	auto r = rule_of("h(X,Z) :- e(X,Y), e(Y,Z).");
	CHECK(build_rule_graph(r, true).has_edge("X", "Z"));
	CHECK_FALSE(build_rule_graph(r, false).has_edge("X", "Z"));
	auto d = rule_of("a(X) | b(Z) :- e(X,Y), e(Y,Z).");
	CHECK(build_rule_graph(d, true).has_edge("X", "Z"));
}

TEST_CASE("weak annotation variables form a clique", "[rule_graph]") {
	auto g = build_rule_graph(rule_of(":~ p(X), q(Y). [X@1, Y]"));
	CHECK(g.has_edge("X", "Y"));
}

TEST_CASE("every body atom spans a clique and order does not matter", "[rule_graph]") {
	const char* text = "h(A,E) :- p(A,B,C), q(C,D), not r(D,E,A), s(E), B < D.";
	auto r = rule_of(text);
	auto g = build_rule_graph(r);
	for (const auto& e : r.body) {
		if (e.is_literal()) CHECK(g.is_clique(vars_of(e)));
	}
	std::mt19937_64 rng(5);
	for (int i = 0; i < 10; ++i) {
		Rule shuffled = r;
		std::shuffle(shuffled.body.begin(), shuffled.body.end(), rng);
		CHECK(build_rule_graph(shuffled) == g);
	}
}

TEST_CASE("graph primitives", "[rule_graph]") {
	RuleGraph g;
	g.add_edge("A", "A");
	CHECK(g.size() == 1);
	CHECK(g.edges().empty());
	g.add_edge("B", "A");
	CHECK(g.has_edge("A", "B"));
	CHECK(g.neighbors("A") == VariableSet{"B"});
	CHECK(g.neighbors("missing").empty());
}
