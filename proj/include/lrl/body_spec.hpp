#pragma once

#include <string>
#include <string_view>

#include "lrl/geometry.hpp"

namespace lrl {

/// Parses the body text format:
///   ball                      unit ball in R^k
///   ellipsoid:a1,a2[,a3]      axis lengths; the count must equal k
///   pball:p                   {sum |y_i|^p <= 1}, p even
///   poly:h:c0,c1,...,ch       {sum_i c_i x^(h-i) y^i <= 1}, k = 2 only
/// Throws ParseError (with character offset) on malformed text and
/// BodyInvalid when the text is well-formed but the body is not.
StarBody parse_body_spec(std::string_view text, int k);

/// Canonical text for a body; parse_body_spec(format_body_spec(b), k)
/// reproduces b exactly.
std::string format_body_spec(const StarBody& body);

/// Shortest decimal text that round-trips the double.
std::string format_double(double v);

}  // namespace lrl
