#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "cantrans/natural.hpp"

// Base-b digit arithmetic: digit sums, b-adic valuations, unit parts and the
// last nonzero digit, for arbitrary-size n and word-size bases.
namespace cantrans::digits {

Natural digit_sum(const Natural& n, std::uint64_t b);
std::uint64_t digit_sum(std::uint64_t n, std::uint64_t b);

// Largest e with b^e | n. n must be positive.
Natural valuation(const Natural& n, std::uint64_t b);

// n / b^valuation(n, b).
Natural unit_part(const Natural& n, std::uint64_t b);

// The residue of unit_part(n, b) in [1, b-1].
std::uint64_t lnzd(const Natural& n, std::uint64_t b);

// v_p(n!) computed both as sum floor(n/p^i) and as (n - s_p(n))/(p - 1);
// the two are compared before returning.
Natural legendre_valuation_factorial(const Natural& n, std::uint64_t p);

}  // namespace cantrans::digits
