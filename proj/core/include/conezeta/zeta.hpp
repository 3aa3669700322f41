#pragma once

#include <map>
#include <string>
#include <vector>

#include "conezeta/conegen.hpp"
#include "conezeta/evaluator.hpp"
#include "conezeta/extension.hpp"
#include "conezeta/oracle.hpp"

namespace conezeta {

// Coefficients of a subgroup-counting Dirichlet series: a[n] = number of
// objects of index n, for n = 1..nmax (a[0] is unused and zero).
struct DirichletSeries {
  int nmax = 0;
  std::vector<Int> a;
  std::string label;
};

// Local counts of one relative system tabulated by prime; by_prime[p][k]
// is the count at index p^k.
struct LocalTable {
  std::map<Int, std::vector<Int>> by_prime;
};

// Coefficients c_m, m <= nmax, of the Euler product whose factor at p is
// sum_k by_prime[p][k] p^{-ks}; multiplicative with c_{p^k} = by_prime[p][k].
// Throws GapError naming every (p, k) the range requires but the table
// lacks — a truncated table never fabricates coefficients.
std::vector<Int> euler_coefficients(const LocalTable& T, int nmax);

// a_n = sum over the K in the top-quotient family (all subgroups of F for
// Variant::Subgroup, normal subgroups for Variant::Normal) with [F:K]
// dividing n of the Euler coefficient at n/[F:K] of the relative system
// at K. Local counts are computed on demand through the cone pipeline.
DirichletSeries assemble_global(const VirtuallyTauGroup& V, Variant variant,
                                int nmax, int workers = 1);

// The same assembly from precomputed tables; indices[i] = [F : K_i].
DirichletSeries assemble_global_from_tables(
    const std::vector<int>& indices, const std::vector<LocalTable>& tables,
    int nmax, const std::string& label);

// One (k, engine, oracle) comparison row.
struct CountRow {
  int k = 0;
  Int engine;
  Int oracle;
  bool match = false;
};

// Verdicts of an engine-versus-oracle run at one prime.
struct CountReport {
  std::string label;
  Int p;
  bool oracle_stable = true;
  bool all_match = true;
  std::vector<CountRow> rows;
};

// Aligns the two count vectors (they must cover the same k range) and
// fills the verdicts.
CountReport compare_counts(const LocalSeries& engine,
                           const OracleReport& oracle);

}  // namespace conezeta
