#pragma once

#include <string_view>

namespace cqfi {

/// Evaluates a small arithmetic expression such as "pi/8", "3pi/8", "2*(pi-1)/3".
/// Grammar: numbers, pi (or the Greek letter), + - * / and the multiplication and
/// division signs, parentheses, unary minus, and implicit multiplication of a
/// number by pi or a parenthesized group. Throws std::invalid_argument.
double parse_real_expression(std::string_view text);

}  // namespace cqfi
