#include "circlab/numeric.hpp"

#include <limits>

#include "circlab/error.hpp"

namespace circlab {

Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw PreconditionError("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

BigInt floor_of(const Rational& q) {
  BigInt out;
  mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

Rational frac_of(const Rational& q) {
  Rational out = q - Rational(floor_of(q));
  out.canonicalize();
  return out;
}

std::string to_string(const BigInt& v) { return v.get_str(); }

std::string to_string(const Rational& q) { return q.get_str(); }

bool fits_u64(const BigInt& v) {
  if (v < 0) return false;
  return mpz_sizeinbase(v.get_mpz_t(), 2) <= 64;
}

std::uint64_t to_u64(const BigInt& v) {
  if (!fits_u64(v)) throw PreconditionError("integer " + v.get_str() + " does not fit in 64 bits");
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, v.get_mpz_t());
  return out;
}

BigInt from_u64(std::uint64_t v) {
  BigInt out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return out;
}

double approx(const Rational& q) { return q.get_d(); }

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::parse:
      return 2;
    case ErrorKind::precondition:
      return 3;
    case ErrorKind::horizon:
      return 4;
    case ErrorKind::certification:
      return 5;
  }
  return 1;
}

}  // namespace circlab
