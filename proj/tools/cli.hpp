#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include "lpopt/tree_decomposition.hpp"

namespace lpopt::cli {

struct Options {
	bool dumb = false;
	bool benchmark = false;
	bool td_only = false;
	bool ignore_head = false;
	Heuristic heuristic = Heuristic::miw;
	std::uint64_t seed = 0;
	std::optional<std::string> input_path;
	std::optional<std::string> info_path;
};

inline constexpr int exit_ok = 0;
inline constexpr int exit_error = 1;
inline constexpr int exit_usage = 2;

/// Runs the tool; `args` excludes the program name.
int run(std::span<const std::string> args, std::istream& in, std::ostream& out, std::ostream& err);

const char* usage();

}  // namespace lpopt::cli
