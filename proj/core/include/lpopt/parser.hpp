#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "lpopt/ast.hpp"

namespace lpopt {

struct SourceLocation {
	std::size_t line = 1;
	std::size_t column = 1;
};

enum class ParseErrorKind { lexical, syntactic, unsupported_construct };

class ParseError : public std::runtime_error {
public:
	ParseError(SourceLocation location, ParseErrorKind kind, const std::string& message);

	SourceLocation location() const { return location_; }
	ParseErrorKind kind() const { return kind_; }
	/// The message without the location prefix.
	const std::string& message() const { return message_; }

private:
	SourceLocation location_;
	ParseErrorKind kind_;
	std::string message_;
};

const char* to_string(ParseErrorKind kind);

/// Parses a program in the supported ASP-Core-2 subset. Anonymous variables
/// are renamed apart, two-sided aggregate guards are split into two
/// aggregates, and every rule is checked for safety. Throws ParseError on
/// the first problem found.
Program parse(std::string_view text);

std::string render(const Term& term);
std::string render(const Atom& atom);
std::string render(const BodyElement& element);
std::string render(const Rule& rule);
/// One rule per line, each terminated by a newline.
std::string render(const Program& program);

const char* to_string(Relation rel);
const char* to_string(AggregateFunction function);

}  // namespace lpopt
