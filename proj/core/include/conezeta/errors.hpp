#pragma once

#include <stdexcept>
#include <string>

namespace conezeta {

// Error taxonomy. Each class maps to a distinct failure mode so callers (and
// the CLI's exit-code contract) can tell them apart:
//   UsageError        bad parameters / malformed input files      (exit 1)
//   BudgetError       a configured resource budget was exceeded   (exit 3)
//   StabilityError    oracle counts did not stabilize             (exit 4)
//   (mismatch is a reported verdict, not an exception             (exit 2))
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Wrong arity, mismatched variable sets, malformed presentations.
struct StructuralError : Error {
  using Error::Error;
};

// An operation that must produce integers produced a non-integer.
struct IntegralityError : Error {
  using Error::Error;
};

// A derived quantity violated a hard consistency requirement (negative or
// non-integral subgroup count, count_0 != 1, ...). Indicates a broken
// condition system, never recoverable by the caller.
struct ConsistencyError : Error {
  using Error::Error;
};

// Internal invariant violated (e.g. a certificate denominator failed to be a
// monomial in the diagonal variables). A bug, not a user error.
struct InternalError : Error {
  using Error::Error;
};

struct UsageError : Error {
  using Error::Error;
};

struct BudgetError : Error {
  using Error::Error;
};

// Oracle counts failed to stabilize across quotient levels; the comparison is
// inconclusive rather than a mismatch.
struct StabilityError : Error {
  using Error::Error;
};

// Global assembly was asked for a coefficient whose prime support was not
// computed; message lists the missing (p, k).
struct GapError : Error {
  using Error::Error;
};

}  // namespace conezeta
