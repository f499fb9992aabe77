#pragma once

#include <string_view>

#include "fbounds/boolfn.hpp"

namespace fbounds {

/// Parses a constraint-function spec. Three forms are accepted:
///
///   family:p1[,p2]    builtin family, e.g. "ksat:3", "tribes:2,4"
///   table:k:HEX       raw table; HEX read as a number whose bit i is f(u(i))
///   expression        over x1..xk with and(...), or(...), xor(...), not(e), maj(...)
///
/// In the expression form k is the largest variable index and every index in
/// 1..k must occur. maj takes an odd number of arguments, not exactly one.
/// Errors are ParseError (with position/expected token), ArgumentError for
/// bad values and CapacityError when the arity cap is hit.
BooleanFunction parse_function(std::string_view spec, int arity_cap = kDefaultArityCap);

}  // namespace fbounds
