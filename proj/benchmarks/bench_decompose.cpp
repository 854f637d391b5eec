#include <benchmark/benchmark.h>

#include <string>

#include "lpopt/decompose.hpp"
#include "lpopt/parser.hpp"
#include "lpopt/tree_decomposition.hpp"

namespace {

std::string chain_rule(int n) {
	std::string s = "h(X1) :- ";
	for (int i = 1; i < n; ++i) {
		if (i > 1) s += ", ";
		s += "e(X" + std::to_string(i) + ",X" + std::to_string(i + 1) + ")";
	}
	return s + ".\n";
}

std::string cycle_program(int rules) {
	std::string s;
	for (int r = 0; r < rules; ++r) {
		const std::string p = "p" + std::to_string(r % 7);
		s += "h" + std::to_string(r) + "(X,W) :- " + p + "(X,Y), e(Y,Z), not " + p + "(Z,W), e(W,X), Z != " +
		     std::to_string(r % 5) + ".\n";
	}
	return s;
}

void BM_ChainRule(benchmark::State& state) {
	const auto program = lpopt::parse(chain_rule(static_cast<int>(state.range(0))));
	for (auto _ : state) {
		auto result = lpopt::decompose_program(program);
		benchmark::DoNotOptimize(result);
	}
}
BENCHMARK(BM_ChainRule)->DenseRange(4, 16, 4);

void BM_Program(benchmark::State& state) {
	const auto program = lpopt::parse(cycle_program(static_cast<int>(state.range(0))));
	for (auto _ : state) {
		auto result = lpopt::decompose_program(program);
		benchmark::DoNotOptimize(result);
	}
	state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Program)->Arg(100)->Arg(1000);

void BM_Heuristic(benchmark::State& state) {
	const auto heuristic = static_cast<lpopt::Heuristic>(state.range(0));
	const auto program = lpopt::parse(chain_rule(12) + "q(A,F) :- r(A,B), r(B,C), r(C,D), r(D,E), r(E,F), r(F,A), "
	                                                   "r(A,D), r(B,E).\n");
	for (auto _ : state) {
		for (const auto& rule : program.rules) {
			auto td = lpopt::decompose_graph(lpopt::build_rule_graph(rule), heuristic, 7);
			benchmark::DoNotOptimize(td);
		}
	}
	state.SetLabel(lpopt::to_string(heuristic));
}
BENCHMARK(BM_Heuristic)->DenseRange(0, 2);

}  // namespace
BENCHMARK_MAIN();
