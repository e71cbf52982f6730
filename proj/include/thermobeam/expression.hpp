#pragma once

#include "thermobeam/model.hpp"

#include <string_view>

namespace thermobeam {

/// Compiles an arithmetic expression in x into a callable. Supports + - * / ^,
/// parentheses, unary minus, decimal/scientific literals, the constant pi and
/// sin cos tan exp log sqrt abs. Throws ParseError on malformed input.
ScalarFunction compile_expression(std::string_view source);

} // namespace thermobeam
