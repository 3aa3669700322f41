#pragma once

#include <random>
#include <string>
#include <vector>

#include "conezeta/polynomial.hpp"

namespace conezeta {

// Which lattice of subgroups is being counted.
enum class Variant { Subgroup, Normal };

std::string variant_name(Variant v);          // "sub" / "normal"
Variant parse_variant(const std::string& s);  // accepts the two names above

// Outcome of one verified law; reports are shared by presentation and
// extension checking.
struct CheckResult {
  std::string law;
  bool pass = false;
  std::string detail;  // witness on failure, empty on success
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
  std::string summary() const;  // one line per law
};

// A torsion-free finitely generated nilpotent group of Hirsch length h,
// presented by the polynomial tuples governing coordinate arithmetic:
//   x^a * x^b = x^{mul(a,b)}      mul: h polys in (X1..Xh, Y1..Yh)
//   (x^a)^w   = x^{pow(a,w)}      pow: h polys in (X1..Xh, W)
//   [x^a,x^b] = x^{comm(a,b)}     comm: h polys in (X1..Xh, Y1..Yh)
struct MalcevPresentation {
  int h = 0;
  int nil_class = 1;
  std::vector<Polynomial> mul;
  std::vector<Polynomial> pow;
  std::vector<Polynomial> comm;
  VarSetPtr xy_vars;  // X1..Xh, Y1..Yh
  VarSetPtr xw_vars;  // X1..Xh, W
  std::string label;
  std::vector<Int> declared_bad_primes;

  // Primes dividing any coefficient denominator of mul/pow/comm. These do
  // not invalidate the presentation; they raise congruence depths in the
  // evaluator and are surfaced to the oracle's well-definedness checks.
  std::vector<Int> denominator_primes() const;
  // denominator_primes united with declared_bad_primes.
  std::vector<Int> bad_primes() const;
};

// Variable-set builders shared across modules.
VarSetPtr make_xy_vars(int h);
VarSetPtr make_xw_vars(int h);

// --- group arithmetic (exact; rational overloads are used by the oracle's
// --- p-adic solver, integer overloads enforce integrality of the result) ---

QCoords mal_multiply(const MalcevPresentation& N, const QCoords& a,
                     const QCoords& b);
Coords mal_multiply(const MalcevPresentation& N, const Coords& a,
                    const Coords& b);

QCoords mal_power(const MalcevPresentation& N, const QCoords& a, const Rat& w);
Coords mal_power(const MalcevPresentation& N, const Coords& a, const Int& w);

QCoords mal_inverse(const MalcevPresentation& N, const QCoords& a);
Coords mal_inverse(const MalcevPresentation& N, const Coords& a);

QCoords mal_commutator(const MalcevPresentation& N, const QCoords& a,
                       const QCoords& b);
Coords mal_commutator(const MalcevPresentation& N, const Coords& a,
                      const Coords& b);

Coords mal_identity(const MalcevPresentation& N);
bool is_identity(const Coords& a);

// Checks the group laws on random integer coordinates in [-bound, bound]^h
// plus the structural polynomial identities (mul_1 = X1 + Y1; commutator
// coordinates c_k(a^i, b^j) vanish for k <= max(i,j); pow_i on suffix
// vectors is a_i * w). Failures are report entries, never exceptions.
VerificationReport verify_presentation(const MalcevPresentation& N, long bound,
                                       int samples, unsigned long seed = 12345);

// --- constructions ---

MalcevPresentation make_abelian(int h);
MalcevPresentation make_heisenberg();
MalcevPresentation make_direct_product(const MalcevPresentation& a,
                                       const MalcevPresentation& b);

// Presentation of the finite-index subgroup spanned by the rows of `basis`
// (upper triangular, nonzero diagonal) on its own coordinates. Supported for
// class-1 presentations with componentwise-sum multiplication, where the
// coordinate change is linear and the pulled-back presentation coincides
// with the ambient one.
MalcevPresentation sublattice_presentation(const MalcevPresentation& N,
                                           const std::vector<Coords>& basis);

// The suffix group on basis elements j..h (1-based), presented on its own
// h-j+1 coordinates. Asserts that the defining tuples restrict cleanly
// (leading coordinates of suffix-supported inputs vanish identically).
MalcevPresentation suffix_presentation(const MalcevPresentation& N, int j);

// Catalog lookup: "abelian:h", "heisenberg", "a1xheis", "abelian2sub2".
// Returns false if the name is not a tau-group catalog entry.
bool is_malcev_catalog_name(const std::string& name);
MalcevPresentation make_catalog_group(const std::string& name);
std::vector<std::pair<std::string, std::string>> malcev_catalog();

}  // namespace conezeta
