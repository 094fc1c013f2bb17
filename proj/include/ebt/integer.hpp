#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ebt {

using Integer = mpz_class;
using Rational = mpq_class;
using IntVector = std::vector<Integer>;

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Arithmetic shims so the matrix kernels can be instantiated on both GMP
// integers and machine integers.

inline bool is_zero(const Integer& x) { return sgn(x) == 0; }
inline bool is_zero(std::int64_t x) { return x == 0; }
inline bool is_zero(const Rational& x) { return sgn(x) == 0; }

inline Integer abs_value(const Integer& x) { return abs(x); }
inline std::int64_t abs_value(std::int64_t x) { return x < 0 ? -x : x; }

inline int sign(const Integer& x) { return sgn(x); }
inline int sign(std::int64_t x) { return (x > 0) - (x < 0); }

// Quotient rounded toward negative infinity.
inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline bool divides(const Integer& d, const Integer& x) {
  return mpz_divisible_p(x.get_mpz_t(), d.get_mpz_t()) != 0;
}
inline bool divides(std::int64_t d, std::int64_t x) {
  return d == 0 ? x == 0 : x % d == 0;
}

}  // namespace detail

/// Least nonnegative residue of `x` modulo `m` (m > 0).
inline Integer mod_floor(const Integer& x, const Integer& m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline std::int64_t mod_floor(std::int64_t x, std::int64_t m) {
  std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Integer lcm(const Integer& a, const Integer& b) {
  Integer l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

/// Inverse of `a` modulo `m`; throws when gcd(a, m) != 1.
inline Integer mod_inverse(const Integer& a, const Integer& m) {
  Integer inv;
  if (m == 1) return 0;
  if (mpz_invert(inv.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) {
    throw Error("no inverse of " + a.get_str() + " modulo " + m.get_str());
  }
  return inv;
}

inline std::int64_t to_int64(const Integer& x) {
  if (!x.fits_slong_p()) throw Error("integer out of machine range: " + x.get_str());
  return x.get_si();
}

inline std::string to_string(const Integer& x) { return x.get_str(); }

inline bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

}  // namespace ebt
