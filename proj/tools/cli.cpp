#include "cli.hpp"

#include <getopt.h>

#include <charconv>
#include <chrono>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <vector>

#include "lpopt/decompose.hpp"
#include "lpopt/parser.hpp"

namespace lpopt::cli {

namespace {

struct UsageError {
	std::string message;
};

std::optional<std::uint64_t> parse_seed(const std::string& text) {
	std::int64_t signed_value = 0;
	const char* end = text.data() + text.size();
	auto [ptr, ec] = std::from_chars(text.data(), end, signed_value);
	if (ec == std::errc() && ptr == end) return static_cast<std::uint64_t>(signed_value);
	std::uint64_t value = 0;
	auto [ptr2, ec2] = std::from_chars(text.data(), end, value);
	if (ec2 == std::errc() && ptr2 == end) return value;
	return std::nullopt;
}

Options parse_options(std::span<const std::string> args) {
	std::vector<std::string> storage{"lpopt"};
	storage.insert(storage.end(), args.begin(), args.end());
	std::vector<char*> argv;
	for (auto& s : storage) argv.push_back(s.data());
	argv.push_back(nullptr);

	Options opts;
	optind = 0;  // full reset, so run() can be called repeatedly
	opterr = 0;
	int c = 0;
	while ((c = getopt(static_cast<int>(storage.size()), argv.data(), "+dbtih:s:f:l:")) != -1) {
		switch (c) {
			case 'd': opts.dumb = true; break;
			case 'b': opts.benchmark = true; break;
			case 't': opts.td_only = true; break;
			case 'i': opts.ignore_head = true; break;
			case 'h': {
				auto h = parse_heuristic(optarg);
				if (!h) throw UsageError{"unknown decomposition algorithm '" + std::string(optarg) + "'"};
				opts.heuristic = *h;
				break;
			}
			case 's': {
				auto s = parse_seed(optarg);
				if (!s) throw UsageError{"invalid seed '" + std::string(optarg) + "'"};
				opts.seed = *s;
				break;
			}
			case 'f': opts.input_path = optarg; break;
			case 'l': opts.info_path = optarg; break;
			case ':':
				throw UsageError{std::string("option -") + static_cast<char>(optopt) + " requires an argument"};
			default:
				if (optopt == 'h' || optopt == 's' || optopt == 'f' || optopt == 'l') {
					throw UsageError{std::string("option -") + static_cast<char>(optopt) + " requires an argument"};
				}
				throw UsageError{std::string("unknown option -") + static_cast<char>(optopt)};
		}
	}
	if (optind < static_cast<int>(storage.size())) {
		throw UsageError{"unexpected argument '" + storage[optind] + "'"};
	}
	return opts;
}

std::string bag_text(const VariableSet& bag) {
	std::string s = "{";
	bool first = true;
	for (const auto& v : bag) {
		if (!first) s += ",";
		s += v;
		first = false;
	}
	return s + "}";
}

void write_tree_listing(const DecompositionReport& report, std::ostream& out) {
	for (const auto& r : report.rules) {
		out << "rule " << r.rule_index << ": width " << r.width << "; bags:";
		for (const auto& td : r.decompositions) {
			for (const auto& node : td.nodes) out << ' ' << bag_text(node.bag);
		}
		out << '\n';
	}
}

void write_benchmark(const DecompositionReport& report, double millis, std::ostream& err) {
	err << "rule\twidth\tbags\trules\tdomain_rules\n";
	std::size_t bags = 0, rules = 0, domain = 0;
	for (const auto& r : report.rules) {
		err << r.rule_index << '\t' << r.width << '\t' << r.bag_count << '\t' << r.rules_emitted << '\t'
		    << r.domain_rules_emitted << '\n';
		bags += r.bag_count;
		rules += r.rules_emitted;
		domain += r.domain_rules_emitted;
	}
	err << "total\t" << report.max_width << '\t' << bags << '\t' << rules << '\t' << domain << '\t' << millis
	    << "ms\n";
}

}  // namespace

const char* usage() {
	return "Usage: lpopt [-idbt] [-s seed] [-f file] [-h alg] [-l file]\n"
	       "  -d       dumb: do not perform optimization\n"
	       "  -b       print benchmark information to standard error\n"
	       "  -t       print tree decompositions only\n"
	       "  -i       ignore head variables when decomposing\n"
	       "  -h alg   decomposition algorithm, one of {mcs, mf, miw (def)}\n"
	       "  -s seed  seed for tie-breaking (default 0)\n"
	       "  -f file  read input from file instead of standard input\n"
	       "  -l file  write the maximal treewidth to file and exit\n";
}

int run(std::span<const std::string> args, std::istream& in, std::ostream& out, std::ostream& err) {
	Options opts;
	try {
		opts = parse_options(args);
	} catch (const UsageError& e) {
		err << "lpopt: " << e.message << '\n' << usage();
		return exit_usage;
	}

	std::string text;
	std::string source = "<stdin>";
	if (opts.input_path) {
		source = *opts.input_path;
		std::ifstream file(*opts.input_path, std::ios::binary);
		if (!file) {
			err << "lpopt: cannot read " << *opts.input_path << '\n';
			return exit_error;
		}
		text.assign(std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>());
	} else {
		text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
	}

	const auto start = std::chrono::steady_clock::now();
	DecompositionResult result;
	try {
		const Program program = parse(text);
		DecomposeOptions dopts;
		dopts.heuristic = opts.heuristic;
		dopts.seed = opts.seed;
		dopts.include_head_clique = !opts.ignore_head;
		dopts.enabled = !opts.dumb;
		result = decompose_program(program, dopts);
	} catch (const ParseError& e) {
		err << "lpopt: " << source << ':' << e.what() << " (" << to_string(e.kind()) << ")\n";
		return exit_error;
	} catch (const DecompositionError& e) {
		err << "lpopt: " << source << ": decomposition failed: " << e.what() << '\n';
		return exit_error;
	}
	const double millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

	if (opts.benchmark) write_benchmark(result.report, millis, err);

	if (opts.info_path) {
		std::ofstream info(*opts.info_path);
		if (!(info << result.report.max_width << '\n')) {
			err << "lpopt: cannot write " << *opts.info_path << '\n';
			return exit_error;
		}
		return exit_ok;
	}
	if (opts.td_only) {
		write_tree_listing(result.report, out);
	} else {
		out << render(result.program);
	}
	out.flush();
	return exit_ok;
}

}  // namespace lpopt::cli
