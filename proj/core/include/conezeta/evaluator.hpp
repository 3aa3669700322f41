#pragma once

#include <string>
#include <vector>

#include "conezeta/conegen.hpp"

namespace conezeta {

// One congruence Pint(x) = 0 mod p^depth with integer coefficients.
struct Congruence {
  Polynomial poly;
  long depth = 0;
};

// Exact residue counting over (Z/p^M)^n. Variables at a diag_index[i] slot
// carry a forced valuation: digits below diag_val[i] are zero and the digit
// at diag_val[i] is nonzero. All congruences must hold (each depth must be
// in 1..M). count_residues walks digits level by level, pruning violated
// congruences, retiring decided ones, and closing free blocks in one step.
struct CongruenceProblem {
  VarSetPtr vars;
  Int p;
  int M = 1;
  std::vector<Congruence> congruences;
  std::vector<int> diag_index;
  std::vector<int> diag_val;
};

Int count_residues(const CongruenceProblem& P);

// Congruence depth of a condition on the slice v(t_ii) = m_i: with
// den = prod T_ii^gamma_i and d the coefficient-denominator lcm of num,
// the condition there reads  d*num(x) = 0 mod p^depth  with
// depth = sum gamma_i m_i + v_p(d). Nonpositive depth means the condition
// holds on the whole slice.
long condition_depth(const ConeCondition& c, const std::vector<int>& diag_index,
                     const std::vector<int>& m, const Int& p);

// Haar measure of {x : v(x_{diag,i}) = m_i, all conditions hold} in Z_p^dim.
// `extra_levels` raises the working precision M; the result must not depend
// on it (used by the depth-sufficiency self-check).
Rat slice_measure(const ConeIntegralData& D, const Int& p,
                  const std::vector<int>& m, int extra_levels = 0);

// Series coefficients a_{p,k} of the cone integral for k = 0..kmax,
// summing p^{-sum (h-i) m_i} * slice_measure over the compositions |m| = k
// in lexicographic order (workers > 1 splits slices across threads; the
// final sum is always taken in slice order, so results are deterministic).
std::vector<Rat> cone_coeffs(const ConeIntegralData& D, const Int& p, int kmax,
                             int workers = 1);

struct LocalSeries {
  Int p;
  int kmax = 0;
  std::vector<Int> counts;  // counts[k], k = 0..kmax
  std::vector<Rat> coeffs;  // raw a_{p,k}
  std::string label;
};

// Local counts count_k = (1 - 1/p)^{-h} * a_{p,k} * p^{k*shift}. Hard
// checks (ConsistencyError): every count a nonnegative integer and
// count_0 == 1; one slice per run is re-measured at raised precision.
LocalSeries local_counts(const ConeConditionSystem& S, const Int& p, int kmax,
                         int workers = 1);

// CONEZETA_WORKERS if set (positive integer), else hardware concurrency.
int default_workers();

}  // namespace conezeta
