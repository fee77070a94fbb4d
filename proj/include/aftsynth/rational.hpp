#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace aftsynth {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses `11.5`, `-3`, `3/2` or `1.25e0`-free decimal forms into a canonical rational.
/// Returns nullopt when the text is not a rational literal.
std::optional<Rational> parse_rational(std::string_view text);

/// Canonical exact form: `23/2`, `-4`, `0`.
std::string to_string(const Rational& value);
std::string to_string(const Integer& value);

/// Finite decimal form when the denominator is of the form 2^a*5^b, else `n/d`.
std::string to_decimal_string(const Rational& value);

Integer lcm(const Integer& a, const Integer& b);

}  // namespace aftsynth
