#pragma once

// Exact integer and rational arithmetic used throughout circlab.

#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace circlab {

using BigInt = mpz_class;
using Rational = mpq_class;

// Canonical (lowest terms, positive denominator) rational num/den.
Rational make_rational(const BigInt& num, const BigInt& den);

// floor(q) for any rational q.
BigInt floor_of(const Rational& q);

// q - floor(q), in [0, 1).
Rational frac_of(const Rational& q);

std::string to_string(const BigInt& v);
std::string to_string(const Rational& q);

// Throws PreconditionError when v does not fit.
std::uint64_t to_u64(const BigInt& v);
bool fits_u64(const BigInt& v);

BigInt from_u64(std::uint64_t v);

// Approximate decimal rendering for display only.
double approx(const Rational& q);

}  // namespace circlab
