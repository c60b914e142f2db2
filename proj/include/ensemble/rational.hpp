#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace ensemble {

/// Exact rational number, always kept in canonical (reduced) form.
using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses "p/q", "p" or a plain decimal such as "0.25" into a canonical
/// rational. Throws Error(ParseError) on malformed input or a zero
/// denominator.
Rational parse_rational(std::string_view text);

/// Reduced "p/q" (or "p" when q == 1).
std::string to_string(const Rational& value);

/// Decimal rendering with `digits` significant digits, for human output.
std::string to_decimal(const Rational& value, int digits = 12);

double to_double(const Rational& value);

/// 2^-k for k >= 0.
Rational pow2_neg(unsigned k);

/// Returns k when value == 2^-k for some k >= 0.
std::optional<unsigned> dyadic_exponent(const Rational& value);

Rational pow(const Rational& base, unsigned exponent);

}  // namespace ensemble
