#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace fairassign {

// Exact probabilities. mpq_class keeps values canonical (lowest terms,
// positive denominator) after every arithmetic operation.
using Rational = mpq_class;

// Row-major n x m matrix of exact probabilities.
using Matrix = std::vector<std::vector<Rational>>;

/// Parses "num/den" or a bare integer "num". Throws InputError on malformed
/// text or a zero denominator.
Rational parse_rational(std::string_view text);

/// Formats as "num/den", always including the denominator ("0/1", "1/1").
std::string format_rational(const Rational& value);

Rational sum(const std::vector<Rational>& values);

}  // namespace fairassign
