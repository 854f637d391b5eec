#pragma once

// Reference semantics for small programs: a naive grounder, an exhaustive
// stable-model enumerator with aggregates and weak-constraint weights, and
// the equivalence check used to validate rewritten programs.

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpopt/ast.hpp"

namespace lpopt::oracle {

/// Cap exceeded, nested or recursive aggregate, or a non-integer weight.
class OracleError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

enum class GroundingMode {
	/// Every substitution over the domain, filtered by builtins.
	naive,
	/// Only substitutions whose positive body atoms are possibly derivable.
	relevant,
};

struct GroundOptions {
	std::size_t max_vars = 10;
	GroundingMode mode = GroundingMode::naive;
	/// Bound on the over-approximated set of derivable atoms.
	std::size_t max_possible_atoms = 100000;
};

/// Ground rules: no variables, arithmetic evaluated, builtins removed.
/// Aggregates keep their (ground) elements; element conditions are literals.
struct GroundProgram {
	std::vector<Rule> rules;
	/// Instances dropped because arithmetic failed to evaluate (division by
	/// zero, overflow, non-integer operands).
	std::size_t dropped_instances = 0;
};

/// Grounds over the active domain extended by every constant of a possibly
/// derivable atom, so values computed by arithmetic are in range for all
/// rules.
GroundProgram ground(const Program& program, const GroundOptions& options = {});

struct WeightedModel {
	Interpretation interpretation;
	std::map<std::int64_t, std::int64_t> weight_by_level;

	auto operator<=>(const WeightedModel&) const = default;
	bool operator==(const WeightedModel&) const = default;
};

struct SolveOptions {
	/// Maximum number of atoms whose truth value has to be guessed.
	std::size_t max_atoms = 22;
};

/// All stable models, sorted by interpretation.
std::vector<WeightedModel> stable_models(const GroundProgram& program, const SolveOptions& options = {});

Interpretation strip(const Interpretation& interpretation, const std::set<Signature>& schema);

struct EquivalenceReport {
	bool equivalent = false;
	std::size_t original_models = 0;
	std::size_t rewritten_models = 0;
	std::string reason;
};

/// Stable models of `rewritten`, restricted to the schema of `original`,
/// must correspond one to one to those of `original`, with equal weights.
EquivalenceReport compare(const Program& original, const Program& rewritten, const SolveOptions& options = {});
bool equivalent(const Program& original, const Program& rewritten, const SolveOptions& options = {});

struct GroundingSize {
	/// Ground instances that are not facts.
	std::size_t rules = 0;
	std::size_t facts = 0;
	std::size_t atoms = 0;
};

GroundingSize grounding_size(const Program& program, const GroundOptions& options = {});

}  // namespace lpopt::oracle
