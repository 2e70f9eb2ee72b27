#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace cantrans {

// Arbitrary-size integers and rationals come straight from GMP. Natural is
// used wherever a value is required to be nonnegative; the check happens at
// API boundaries via require_natural().
using Natural = mpz_class;
using Rational = mpq_class;

void require_natural(const Natural& n, std::string_view what);

Natural parse_natural(std::string_view text);
Rational parse_rational(std::string_view text);  // "p/q", "p" or a finite decimal "1.25"

std::string to_decimal(const Natural& n);
std::string to_string(const Rational& q);  // canonical "p/q" or "p"

bool fits_u64(const Natural& n);
std::uint64_t to_u64(const Natural& n);
Natural from_u64(std::uint64_t v);

std::uint64_t mod_u64(const Natural& n, std::uint64_t m);

// floor(log2(n)) + 1, 0 for n == 0
std::size_t bit_length(const Natural& n);

}  // namespace cantrans
