#pragma once

#include <functional>
#include <memory>
#include <string>

#include "confgeo/types.hpp"

namespace confgeo {

// Compiles a scalar expression of the coordinates into a callable.
// Variables: x0..x9 (x, y, z alias the first three), r2 = |x|^2, r = |x|.
// Operators: + - * / ^ and parentheses; functions: exp, log, sqrt, sin, cos,
// tan, tanh, abs.  Example: "2/(1+r2)".
std::function<double(const Vec&)> compile_expression(const std::string& src);

}  // namespace confgeo
