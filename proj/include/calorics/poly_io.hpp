#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "calorics/polynomial.hpp"

namespace calorics {

/// Parses an expression in x1..xn (x, y, z when n <= 3) and t.
///
/// Accepts integer and a/b literals, + - * / ^ and parentheses; juxtaposition
/// ("150t(3x+y)") multiplies. Division is only allowed by nonzero constants and
/// exponents must be non-negative integer literals.
Polynomial parse_poly(std::string_view text, int spatial_dim);

/// Canonical human-readable form, e.g. "t^2 + t*x^2 + 1/12*x^4".
std::string to_string(const Polynomial& p);

/// Display name of spatial axis i for a space of dimension n.
std::string axis_name(int axis, int spatial_dim);

/// {"n": int, "terms": [{"k": int, "alpha": [int], "num": str, "den": str}]}
nlohmann::json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const nlohmann::json& j);

}  // namespace calorics
