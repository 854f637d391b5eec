#include "lpopt/tree_decomposition.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>

namespace lpopt {

std::optional<Heuristic> parse_heuristic(std::string_view name) {
	if (name == "mcs") return Heuristic::mcs;
	if (name == "mf") return Heuristic::mf;
	if (name == "miw") return Heuristic::miw;
	return std::nullopt;
}

const char* to_string(Heuristic heuristic) {
	switch (heuristic) {
		case Heuristic::mcs: return "mcs";
		case Heuristic::mf: return "mf";
		case Heuristic::miw: return "miw";
	}
	return "?";
}

std::uint32_t Lcg::next() {
	state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
	return static_cast<std::uint32_t>(state_ >> 32);
}

std::size_t Lcg::pick(std::size_t n) {
	return static_cast<std::size_t>((static_cast<std::uint64_t>(next()) * n) >> 32);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
	std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
	z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
	z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
	return z ^ (z >> 31);
}

int TreeDecomposition::width() const {
	std::size_t largest = 0;
	for (const auto& n : nodes) largest = std::max(largest, n.bag.size());
	return static_cast<int>(largest) - 1;
}

std::vector<std::size_t> TreeDecomposition::postorder() const {
	std::vector<std::size_t> out;
	if (nodes.empty()) return out;
	// iterative: emit reversed preorder with children pushed in order
	std::vector<std::size_t> stack{root};
	while (!stack.empty()) {
		std::size_t n = stack.back();
		stack.pop_back();
		out.push_back(n);
		for (std::size_t c : nodes[n].children) stack.push_back(c);
	}
	std::reverse(out.begin(), out.end());
	return out;
}

std::vector<std::size_t> TreeDecomposition::depths() const {
	std::vector<std::size_t> depth(nodes.size(), 0);
	if (nodes.empty()) return depth;
	std::deque<std::size_t> queue{root};
	while (!queue.empty()) {
		std::size_t n = queue.front();
		queue.pop_front();
		for (std::size_t c : nodes[n].children) {
			depth[c] = depth[n] + 1;
			queue.push_back(c);
		}
	}
	return depth;
}

namespace {

// Index-based copy of a RuleGraph; vertex i is the i-th name in sorted order.
struct IndexedGraph {
	std::vector<std::string> names;
	std::map<std::string, std::size_t> index;
	std::vector<std::vector<char>> adj;

	explicit IndexedGraph(const RuleGraph& g) : names(g.vertices().begin(), g.vertices().end()) {
		for (std::size_t i = 0; i < names.size(); ++i) index[names[i]] = i;
		adj.assign(names.size(), std::vector<char>(names.size(), 0));
		for (const auto& [a, b] : g.edges()) {
			adj[index[a]][index[b]] = adj[index[b]][index[a]] = 1;
		}
	}

	std::size_t size() const { return names.size(); }
};

std::size_t choose(const std::vector<std::size_t>& candidates, Lcg& rng) {
	return candidates.size() == 1 ? candidates.front() : candidates[rng.pick(candidates.size())];
}

std::vector<std::size_t> greedy_elimination(IndexedGraph g, Heuristic heuristic, Lcg& rng) {
	const std::size_t n = g.size();
	std::vector<char> alive(n, 1);
	std::vector<std::size_t> order;
	order.reserve(n);
	for (std::size_t step = 0; step < n; ++step) {
		std::vector<std::size_t> best;
		std::size_t best_score = std::numeric_limits<std::size_t>::max();
		for (std::size_t v = 0; v < n; ++v) {
			if (!alive[v]) continue;
			std::vector<std::size_t> nbrs;
			for (std::size_t w = 0; w < n; ++w) {
				if (alive[w] && g.adj[v][w]) nbrs.push_back(w);
			}
			std::size_t score = nbrs.size();
			if (heuristic == Heuristic::mf) {
				score = 0;
				for (std::size_t i = 0; i < nbrs.size(); ++i) {
					for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
						if (!g.adj[nbrs[i]][nbrs[j]]) ++score;
					}
				}
			}
			if (score < best_score) {
				best_score = score;
				best.clear();
			}
			if (score == best_score) best.push_back(v);
		}
		std::size_t v = choose(best, rng);
		for (std::size_t a = 0; a < n; ++a) {
			if (!alive[a] || !g.adj[v][a]) continue;
			for (std::size_t b = 0; b < n; ++b) {
				if (a != b && alive[b] && g.adj[v][b]) g.adj[a][b] = 1;
			}
		}
		alive[v] = 0;
		order.push_back(v);
	}
	return order;
}

std::vector<std::size_t> max_cardinality_search(const IndexedGraph& g, Lcg& rng) {
	const std::size_t n = g.size();
	std::vector<char> numbered(n, 0);
	std::vector<std::size_t> weight(n, 0);
	std::vector<std::size_t> visit;
	visit.reserve(n);
	for (std::size_t step = 0; step < n; ++step) {
		std::vector<std::size_t> best;
		std::size_t best_weight = 0;
		for (std::size_t v = 0; v < n; ++v) {
			if (numbered[v]) continue;
			if (best.empty() || weight[v] > best_weight) {
				best_weight = weight[v];
				best.clear();
			}
			if (weight[v] == best_weight) best.push_back(v);
		}
		std::size_t v = choose(best, rng);
		numbered[v] = 1;
		visit.push_back(v);
		for (std::size_t w = 0; w < n; ++w) {
			if (!numbered[w] && g.adj[v][w]) ++weight[w];
		}
	}
	std::reverse(visit.begin(), visit.end());
	return visit;
}

std::vector<std::size_t> to_indices(const IndexedGraph& g, std::span<const std::string> order) {
	if (order.size() != g.size()) throw DecompositionError("elimination order is not a permutation of the vertices");
	std::vector<std::size_t> out;
	std::vector<char> seen(g.size(), 0);
	for (const auto& name : order) {
		auto it = g.index.find(name);
		if (it == g.index.end() || seen[it->second]) {
			throw DecompositionError("elimination order is not a permutation of the vertices");
		}
		seen[it->second] = 1;
		out.push_back(it->second);
	}
	return out;
}

// Eliminates along `order`, returning for each position the later
// neighbours of that vertex in the fill-in graph.
std::vector<std::vector<std::size_t>> later_neighbours(IndexedGraph g, const std::vector<std::size_t>& order) {
	const std::size_t n = g.size();
	std::vector<std::size_t> pos(n);
	for (std::size_t i = 0; i < n; ++i) pos[order[i]] = i;
	std::vector<std::vector<std::size_t>> out(n);
	for (std::size_t i = 0; i < n; ++i) {
		std::size_t v = order[i];
		for (std::size_t w = 0; w < n; ++w) {
			if (g.adj[v][w] && pos[w] > i) out[i].push_back(w);
		}
		for (std::size_t a : out[i]) {
			for (std::size_t b : out[i]) {
				if (a != b) g.adj[a][b] = 1;
			}
		}
	}
	return out;
}

}  // namespace

std::vector<std::string> elimination_order(const RuleGraph& graph, Heuristic heuristic, std::uint64_t seed) {
	IndexedGraph g(graph);
	Lcg rng(seed);
	auto order = heuristic == Heuristic::mcs ? max_cardinality_search(g, rng) : greedy_elimination(g, heuristic, rng);
	std::vector<std::string> out;
	out.reserve(order.size());
	for (std::size_t v : order) out.push_back(g.names[v]);
	return out;
}

int induced_width(const RuleGraph& graph, std::span<const std::string> order) {
	IndexedGraph g(graph);
	auto later = later_neighbours(g, to_indices(g, order));
	int width = -1;
	for (const auto& l : later) width = std::max(width, static_cast<int>(l.size()));
	return width;
}

TreeDecomposition decomposition_from_order(const RuleGraph& graph, std::span<const std::string> order) {
	IndexedGraph g(graph);
	const auto idx = to_indices(g, order);
	const std::size_t n = g.size();
	const auto later = later_neighbours(g, idx);

	std::vector<std::size_t> pos(n);
	for (std::size_t i = 0; i < n; ++i) pos[idx[i]] = i;

	// Working forest indexed by elimination position.
	std::vector<VariableSet> bag(n);
	std::vector<std::optional<std::size_t>> parent(n);
	std::vector<char> alive(n, 1);
	for (std::size_t i = 0; i < n; ++i) {
		bag[i].insert(g.names[idx[i]]);
		std::size_t first = n;
		for (std::size_t w : later[i]) {
			bag[i].insert(g.names[w]);
			first = std::min(first, pos[w]);
		}
		if (first < n) parent[i] = first;
	}

	auto includes = [](const VariableSet& big, const VariableSet& small) {
		return std::includes(big.begin(), big.end(), small.begin(), small.end());
	};
	for (bool changed = true; changed;) {
		changed = false;
		for (std::size_t i = 0; i < n; ++i) {
			if (!alive[i] || !parent[i]) continue;
			std::size_t p = *parent[i];
			if (!includes(bag[p], bag[i]) && !includes(bag[i], bag[p])) continue;
			if (bag[i].size() > bag[p].size()) bag[p] = bag[i];
			alive[i] = 0;
			for (std::size_t j = 0; j < n; ++j) {
				if (alive[j] && parent[j] == i) parent[j] = p;
			}
			changed = true;
		}
	}

	std::vector<std::size_t> roots;
	std::vector<std::vector<std::size_t>> kids(n);
	for (std::size_t i = 0; i < n; ++i) {
		if (!alive[i]) continue;
		if (parent[i]) {
			kids[*parent[i]].push_back(i);
		} else {
			roots.push_back(i);
		}
	}

	TreeDecomposition td;
	auto add_node = [&](VariableSet b, std::optional<std::size_t> par) {
		std::size_t id = td.nodes.size();
		td.nodes.push_back(TreeNode{id, std::move(b), {}, par});
		if (par) td.nodes[*par].children.push_back(id);
		return id;
	};

	// Breadth-first numbering from the root, children in elimination order.
	std::deque<std::pair<std::size_t, std::size_t>> queue;
	if (roots.size() == 1) {
		std::size_t r = add_node(bag[roots.front()], std::nullopt);
		queue.emplace_back(roots.front(), r);
	} else {
		std::size_t r = add_node({}, std::nullopt);
		for (std::size_t root : roots) queue.emplace_back(root, add_node(bag[root], r));
	}
	while (!queue.empty()) {
		auto [i, id] = queue.front();
		queue.pop_front();
		for (std::size_t k : kids[i]) queue.emplace_back(k, add_node(bag[k], id));
	}
	td.root = 0;
	return td;
}

TreeDecomposition decompose_graph(const RuleGraph& graph, Heuristic heuristic, std::uint64_t seed) {
	auto order = elimination_order(graph, heuristic, seed);
	return decomposition_from_order(graph, order);
}

bool validate(const TreeDecomposition& td, const RuleGraph& graph) {
	const std::size_t n = td.nodes.size();
	if (n == 0 || td.root >= n || td.nodes[td.root].parent) return false;
	for (std::size_t i = 0; i < n; ++i) {
		if (td.nodes[i].id != i) return false;
		for (std::size_t c : td.nodes[i].children) {
			if (c >= n || td.nodes[c].parent != i) return false;
		}
		if (i != td.root) {
			auto p = td.nodes[i].parent;
			if (!p || *p >= n) return false;
			const auto& siblings = td.nodes[*p].children;
			if (std::find(siblings.begin(), siblings.end(), i) == siblings.end()) return false;
		}
	}
	std::vector<char> seen(n, 0);
	std::vector<std::size_t> stack{td.root};
	std::size_t reached = 0;
	while (!stack.empty()) {
		std::size_t v = stack.back();
		stack.pop_back();
		if (seen[v]) return false;
		seen[v] = 1;
		++reached;
		for (std::size_t c : td.nodes[v].children) stack.push_back(c);
	}
	if (reached != n) return false;

	for (const auto& node : td.nodes) {
		for (const auto& v : node.bag) {
			if (!graph.vertices().contains(v)) return false;
		}
	}
	for (const auto& v : graph.vertices()) {
		std::size_t holders = 0;
		std::size_t links = 0;
		for (const auto& node : td.nodes) {
			if (!node.bag.contains(v)) continue;
			++holders;
			if (node.parent && td.nodes[*node.parent].bag.contains(v)) ++links;
		}
		if (holders == 0 || links + 1 != holders) return false;
	}
	for (const auto& [a, b] : graph.edges()) {
		bool covered = std::any_of(td.nodes.begin(), td.nodes.end(),
		                           [&](const TreeNode& node) { return node.bag.contains(a) && node.bag.contains(b); });
		if (!covered) return false;
	}
	return true;
}

TreeDecomposition ensure_head_root(TreeDecomposition td, const VariableSet& head_vars) {
	auto holds_head = [&](const TreeNode& node) {
		return std::includes(node.bag.begin(), node.bag.end(), head_vars.begin(), head_vars.end());
	};
	if (td.nodes.empty() || holds_head(td.nodes[td.root])) return td;
	auto it = std::find_if(td.nodes.begin(), td.nodes.end(), holds_head);
	if (it == td.nodes.end()) throw DecompositionError("no bag contains all head variables");

	// Reverse the parent links on the path from the new root to the old one.
	std::size_t current = it->id;
	std::optional<std::size_t> previous;
	while (true) {
		auto up = td.nodes[current].parent;
		td.nodes[current].parent = previous;
		if (previous) td.nodes[*previous].children.push_back(current);
		if (up) {
			auto& siblings = td.nodes[*up].children;
			siblings.erase(std::find(siblings.begin(), siblings.end(), current));
		}
		if (!up) break;
		previous = current;
		current = *up;
	}
	td.root = it->id;
	return td;
}

}  // namespace lpopt
