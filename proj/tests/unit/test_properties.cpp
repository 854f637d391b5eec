#include <catch_amalgamated.hpp>

#include <random>

#include "generators.hpp"
#include "lpopt/decompose.hpp"
#include "lpopt/oracle.hpp"
#include "lpopt/parser.hpp"

using namespace lpopt;

TEST_CASE("random programs keep their stable models", "[properties]") {
	std::mt19937_64 rng(2024);
	for (int i = 0; i < 40; ++i) {
		testing::ProgramShape shape;
		shape.with_aggregate = i % 4 == 1;
		shape.with_weak = i % 4 == 2;
		const std::string text = testing::random_program(rng, shape);
		const Program p = parse(text);
		DecomposeOptions o;
		o.heuristic = static_cast<Heuristic>(i % 3);
		o.seed = static_cast<std::uint64_t>(i);
		o.include_head_clique = i % 5 != 0;
		const Program q = decompose_program(p, o).program;
		INFO(text << "---\n" << render(q));
		auto report = oracle::compare(p, q);
		INFO(report.reason);
		CHECK(report.equivalent);
	}
}

TEST_CASE("chain grounding grows linearly after decomposition", "[properties]") {
	for (int n = 3; n <= 7; ++n) {
		const Program p = parse(testing::chain_program(n, 3));
		auto before = oracle::grounding_size(p).rules;
		auto after = oracle::grounding_size(decompose_program(p).program).rules;
		std::size_t expected = 1;
		for (int k = 0; k < n; ++k) expected *= 3;
		CHECK(before == expected);
		CHECK(after <= static_cast<std::size_t>(9 * (n - 1)));
	}
}

TEST_CASE("grounding does not grow for split join rules", "[properties]") {
	// positive joins without builtins, domain at least as large as the
	// variable count; filters like V2 = V0*2 can make a split rule larger
	std::mt19937_64 rng(77);
	int split = 0;
	for (int i = 0; i < 60; ++i) {
		const int k = std::uniform_int_distribution<int>(3, 6)(rng);
		const RuleGraph g = testing::random_graph(rng, k, 0.45);
		std::string text;
		for (int a = 1; a <= 6; ++a) text += "v(" + std::to_string(a) + "). e(" + std::to_string(a) + "," +
		                                     std::to_string(a % 6 + 1) + ").\n";
		std::string body;
		std::set<std::string> covered;
		for (const auto& u : g.vertices()) {
			for (const auto& w : g.vertices()) {
				if (u < w && g.has_edge(u, w)) {
					body += (body.empty() ? "" : ", ") + std::string("e(") + u + "," + w + ")";
					covered.insert(u);
					covered.insert(w);
				}
			}
		}
		for (const auto& u : g.vertices()) {
			if (!covered.contains(u)) body += (body.empty() ? "" : ", ") + std::string("v(") + u + ")";
		}
		text += "h(" + *g.vertices().begin() + ") :- " + body + ".\n";
		const Program p = parse(text);
		auto result = decompose_program(p);
		auto before = oracle::grounding_size(p).rules;
		auto after = oracle::grounding_size(result.program).rules;
		INFO(text);
		if (result.program.rules.size() != p.rules.size()) {
			++split;
			CHECK(after <= before);
		} else {
			CHECK(before == after);
		}
	}
	CHECK(split > 0);
}

TEST_CASE("seeds only change tie-breaking", "[properties]") {
	std::mt19937_64 rng(31);
	for (int i = 0; i < 30; ++i) {
		const Program p = parse(testing::random_program(rng, {}));
		int lo = std::numeric_limits<int>::max(), hi = -1;
		for (std::uint64_t seed = 0; seed < 8; ++seed) {
			DecomposeOptions o;
			o.seed = seed;
			int w = decompose_program(p, o).report.max_width;
			lo = std::min(lo, w);
			hi = std::max(hi, w);
		}
		CHECK(hi - lo <= 1);
	}
}
