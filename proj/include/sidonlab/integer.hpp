#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace sidonlab {

/// Exact integer type for group payloads and signed sums. Every arithmetic
/// step goes through the checked helpers below; wraparound is never silent.
using Int = __int128;

Int checked_add(Int a, Int b);
Int checked_sub(Int a, Int b);
Int checked_mul(Int a, Int b);
Int checked_neg(Int a);
Int abs_value(Int a);

std::string to_string(Int value);
/// Parses an optionally signed decimal integer; throws DomainError.
Int parse_int(std::string_view text);
double to_double(Int value);
bool fits_int64(Int value);

}  // namespace sidonlab
