#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "conezeta/errors.hpp"

namespace conezeta {

// Exact arithmetic types used everywhere. No floating point anywhere in the
// engine; every measure, coefficient and count is an mpq/mpz.
using Int = mpz_class;
using Rat = mpq_class;

// Integer coordinate vectors (group elements in Mal'cev coordinates).
using Coords = std::vector<Int>;
// Rational coordinate vectors (intermediate results of coordinate functions).
using QCoords = std::vector<Rat>;

inline Int numerator(const Rat& q) { return Int(q.get_num()); }
inline Int denominator(const Rat& q) { return Int(q.get_den()); }

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

// Exact conversion; throws if q is not an integer.
Int to_integer(const Rat& q);

// p-adic valuation of a nonzero integer. Throws on n == 0 (valuation is
// infinite) and on p < 2.
long valuation(const Int& n, const Int& p);

// p-adic valuation of a nonzero rational: v_p(num) - v_p(den).
long valuation(const Rat& q, const Int& p);

// n mod m in [0, m), for m > 0.
Int mod_floor(const Int& n, const Int& m);

// Exact power p^e for e >= 0.
Int int_pow(const Int& p, unsigned long e);

// Binomial coefficient C(n, k) for k >= 0 with polynomial-friendly semantics
// (n may be any integer).
Int binomial(const Int& n, unsigned long k);

// The primes dividing n (n != 0), ascending.
std::vector<Int> prime_factors(Int n);

// Primality test (exact for the word-sized primes this engine meets).
bool is_prime(const Int& n);

// First `count` primes, ascending.
std::vector<Int> first_primes(int count);

// Canonical text form: "3", "-3", "1/2", "-7/3".
std::string rat_to_string(const Rat& q);

// Parse the canonical form; throws UsageError on malformed input.
Rat rat_from_string(const std::string& s);

}  // namespace conezeta
