#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lpopt/ast.hpp"
#include "lpopt/rule_graph.hpp"

namespace lpopt {

class DecompositionError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

/// Elimination-ordering heuristics: maximum cardinality search, minimum
/// fill-in and minimum induced width (minimum degree).
enum class Heuristic { mcs, mf, miw };

std::optional<Heuristic> parse_heuristic(std::string_view name);
const char* to_string(Heuristic heuristic);

/// 64-bit linear congruential generator used for tie-breaking.
///
///   state' = state * 6364136223846793005 + 1442695040888963407  (mod 2^64)
///   next() = state' >> 32
///   pick(n) = (next() * n) >> 32
///
/// Spelled out so that orders can be reproduced bit-for-bit elsewhere.
class Lcg {
public:
	explicit Lcg(std::uint64_t seed) : state_(seed) {}

	std::uint32_t next();
	/// Uniform index in [0, n); n must be positive.
	std::size_t pick(std::size_t n);

private:
	std::uint64_t state_;
};

/// Derives a per-rule seed (splitmix64 finalizer over seed and index), so
/// that each rule's result is independent of processing order.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

struct TreeNode {
	std::size_t id = 0;
	VariableSet bag;
	std::vector<std::size_t> children;
	std::optional<std::size_t> parent;
};

/// Rooted tree of bags. `nodes[i].id == i`.
struct TreeDecomposition {
	std::vector<TreeNode> nodes;
	std::size_t root = 0;

	/// Largest bag size minus one; -1 when every bag is empty.
	int width() const;
	std::size_t size() const { return nodes.size(); }
	/// Node ids with every child before its parent.
	std::vector<std::size_t> postorder() const;
	/// Distance from the root for every node.
	std::vector<std::size_t> depths() const;
};

/// Permutation of the graph's vertices. Ties between equally scored
/// vertices are broken with Lcg(seed), candidates taken in vertex order.
std::vector<std::string> elimination_order(const RuleGraph& graph, Heuristic heuristic, std::uint64_t seed);

/// Largest number of later neighbours any vertex has when eliminated along
/// `order`.
int induced_width(const RuleGraph& graph, std::span<const std::string> order);

/// Builds the decomposition induced by an elimination order: the bag of v
/// is v plus its later neighbours in the fill-in graph, and its parent is
/// the bag of the earliest such neighbour. Edges between nested bags are
/// then contracted, and multiple component roots are joined under an empty
/// root bag. Throws DecompositionError when `order` is not a permutation.
TreeDecomposition decomposition_from_order(const RuleGraph& graph, std::span<const std::string> order);

TreeDecomposition decompose_graph(const RuleGraph& graph, Heuristic heuristic, std::uint64_t seed);

/// Checks the tree shape plus vertex cover, edge cover and connectedness.
bool validate(const TreeDecomposition& td, const RuleGraph& graph);

/// Re-roots `td` at a node whose bag contains all of `head_vars`. Keeps the
/// current root when it already qualifies. Throws DecompositionError when
/// no bag does.
TreeDecomposition ensure_head_root(TreeDecomposition td, const VariableSet& head_vars);

}  // namespace lpopt
