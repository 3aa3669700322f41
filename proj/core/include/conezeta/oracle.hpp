#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "conezeta/conegen.hpp"
#include "conezeta/extension.hpp"
#include "conezeta/malcev.hpp"

namespace conezeta {

// ---------------------------------------------------------------------------
// The finite quotient N(Z/p^e): coordinate tuples mod p^e with the induced
// operations. Well-definedness requires the multiplication and inversion
// tuples to have p-integral coefficients; the constructor verifies this and
// throws StructuralError naming (p, e) otherwise.
class FiniteQuotient {
 public:
  FiniteQuotient(const MalcevPresentation& N, Int p, int e);

  int h() const { return N_->h; }
  const Int& p() const { return p_; }
  int e() const { return e_; }
  const Int& modulus() const { return q_; }
  const MalcevPresentation& presentation() const { return *N_; }

  Coords reduce(Coords a) const;
  Coords identity() const;
  Coords mul(const Coords& a, const Coords& b) const;
  Coords inv(const Coords& a) const;
  // Square-and-multiply; w may be negative. Never evaluates the power
  // polynomials, so no integrality of pow is assumed.
  Coords pow(const Coords& a, Int w) const;
  // x_1^{a_1} ... x_h^{a_h} on the standard generators.
  Coords word(const Coords& exps) const;
  bool is_id(const Coords& a) const;

 private:
  const MalcevPresentation* N_;
  std::vector<Polynomial> inv_polys_;
  Int p_;
  int e_ = 1;
  Int q_;
};

// A subgroup of a finite quotient kept in triangular (sifted) form: slot i,
// when occupied, holds a generator with leading coordinate i of value
// exactly p^{mu_i}; an empty slot stands for mu_i = e. Every mutation
// re-closes the slots (power overflows and slot conjugates must sift to the
// identity), after which the ordered products of the slots are exactly the
// subgroup and sift-to-identity decides membership.
class SiftedSubgroup {
 public:
  explicit SiftedSubgroup(const FiniteQuotient& Q);

  const FiniteQuotient& quotient() const { return *Q_; }

  // Reduces g through the slots; identity iff g is a member.
  Coords sift(Coords g) const;
  bool contains(const Coords& g) const;
  // Inserts g and re-closes. Returns true if the subgroup grew. `work`
  // accumulates elementary operations against the caller's budget and the
  // call throws BudgetError once it exceeds it.
  bool insert(Coords g, long& work, long budget);

  static SiftedSubgroup full(const FiniteQuotient& Q, long& work, long budget);

  Int index() const;  // p^{sum mu_i}
  Int size() const;
  int mu(int i) const { return mu_[static_cast<std::size_t>(i)]; }
  std::vector<Coords> generators() const;  // occupied slots, ascending
  // Canonical triangular form: occupied rows with the trailing coordinates
  // reduced mod p^{mu_j}; equal subgroups yield equal strings.
  std::string fingerprint() const;

 private:
  bool add_element(Coords g, long& work, long budget);
  void close(long& work, long budget);
  Coords normalize_leading(const Coords& g, int lead, int val) const;
  void charge(long& work, long budget, long amount) const;

  const FiniteQuotient* Q_;
  std::vector<std::optional<Coords>> slots_;
  std::vector<int> mu_;
};

// All maximal subgroups of B (index p below B), complete and duplicate-free.
std::vector<SiftedSubgroup> maximal_subgroups(const SiftedSubgroup& B,
                                              long& work, long budget);

// ---------------------------------------------------------------------------
// Brute-force counting.

struct OracleOptions {
  int e = 0;                 // coordinate precision; 0 -> kmax + nil_class + 1
  long budget = 50000000;    // elementary-operation budget before BudgetError
  bool check_stability = true;  // recount at e+1 and compare
};

struct OracleReport {
  std::vector<Int> counts;  // counts[k] = number of subgroups of index p^k
  bool stable = true;       // counts agreed at e and e+1
  int e_used = 0;
  std::string label;
};

// counts[k] = number of subgroups (Variant::Subgroup) or normal subgroups
// (Variant::Normal) of index p^k in the tau-group N, found by descending
// through maximal subgroups of the finite quotient N(Z/p^e).
OracleReport oracle_counts(const MalcevPresentation& N, const Int& p, int kmax,
                           Variant variant, const OracleOptions& opt = {});

// counts[k] = number of subgroups H of the extension G with image exactly K
// in F and H meeting N in a subgroup of index p^k (Variant::Normal: H
// additionally normal in G). Throws UsageError for Variant::Normal with a
// non-normal K.
OracleReport oracle_counts(const VirtuallyTauGroup& V, const FiniteSubgroup& K,
                           const Int& p, int kmax, Variant variant,
                           const OracleOptions& opt = {});

// Number of subgroups of Z^h of index exactly n, by the Hermite-form
// divisor formula sum over d_1 ... d_h = n of prod_j d_j^{j-1}.
Int hnf_subgroup_count(int h, const Int& n);

// ---------------------------------------------------------------------------
// p-adic membership decided independently of any condition system: the
// greedy triangular solve. x^z lies in the p-local span of the rows iff
// every exponent w_i = r_i / t_ii along the elimination is a p-adic
// integer. Rows must be triangular with nonzero diagonal (StructuralError).
bool membership_oracle(const MalcevPresentation& N,
                       const std::vector<Coords>& rows, const Coords& z,
                       const Int& p);

// Engine-side counterpart: evaluates the membership conditions at
// T := rows, Z := z and tests the valuation inequalities directly.
bool membership_via_conditions(const MembershipData& M,
                               const std::vector<Coords>& rows,
                               const Coords& z, const Int& p);

// Good-basis test by direct membership: rows triangular with nonzero
// diagonal and [t_i, t_j] in the span of the deeper rows for i < j; the
// normal variant additionally requires [x_i, t_j] in the full span.
bool is_good_basis_oracle(const MalcevPresentation& N,
                          const std::vector<Coords>& rows, Variant variant,
                          const Int& p);

// Rejection sampler for a random good basis whose diagonal p-valuations are
// m; throws InternalError when max_tries rejections pass without a hit.
std::vector<Coords> random_good_basis(const MalcevPresentation& N,
                                      Variant variant, const Int& p,
                                      const std::vector<int>& m,
                                      std::mt19937_64& rng,
                                      int max_tries = 20000);

}  // namespace conezeta
