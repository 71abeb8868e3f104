#pragma once

#include <cstdint>
#include <vector>

#include "berk/rational.hpp"

namespace berk {

/// Primes up to `limit` inclusive (simple sieve).
std::vector<uint64_t> sieve_primes(uint64_t limit);

bool is_prime(const Int& n);

/// Complete factorization, primes ascending. Requires n >= 1.
std::vector<std::pair<Int, unsigned>> factorize(Int n);

/// p-adic valuation of a nonzero rational.
Int padic_val(const Rat& x, const Int& p);

}  // namespace berk
