#pragma once

#include <span>

#include "lpopt/ast.hpp"

namespace lpopt {

/// Least fixpoint of the variables made safe by `body` when `granted` are
/// already safe: a variable is safe if it is a direct argument of a positive
/// literal, or the target of an arithmetic element whose expression only
/// uses safe variables. Variables nested inside arithmetic arguments of an
/// atom are not bound by it.
VariableSet safe_vars(std::span<const BodyElement> body, const VariableSet& granted = {});

/// Variables of `rule` that are not safe. Global variables (head, literals,
/// builtins, aggregate guards, weak annotation) must be bound by the body;
/// aggregate-local variables must be bound by their element's condition
/// with the safe global variables granted.
VariableSet check_safety(const Rule& rule);

}  // namespace lpopt
