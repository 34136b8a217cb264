#pragma once

#include "confcoord/tensorcalc/metric.hpp"

#include <string>

namespace confcoord::tensorcalc {

/// Compiles an arithmetic expression in x1..x4 into a jet-evaluable scalar.
///
/// Grammar: numbers, the constants pi and e, variables x1..x4 (x1 is the
/// first coordinate), + - * / ^, parentheses and the functions exp, log,
/// sin, cos, sqrt. Throws ConfigError on malformed input.
ScalarFn parse_scalar_expression(const std::string& text, int dim);

} // namespace confcoord::tensorcalc
