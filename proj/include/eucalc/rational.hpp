#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace eucalc {

using BigInt = mpz_class;
using BigRational = mpq_class;

/// Parses "n" or "n/d" (d > 0). Throws std::invalid_argument on anything else.
BigRational parse_rational(std::string_view text);

std::string to_string(const BigInt& value);
std::string to_string(const BigRational& value);

inline bool is_integer(const BigRational& q) { return q.get_den() == 1; }

}  // namespace eucalc
