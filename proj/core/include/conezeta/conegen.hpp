#pragma once

#include <string>
#include <utility>
#include <vector>

#include "conezeta/extension.hpp"

namespace conezeta {

// One divisibility condition on integral points x:
//     v_p(num(x)) >= v_p(den(x))   for the working prime p,
// with den a monic monomial in the diagonal T variables and num carrying
// all numeric content (its coefficients may be non-integral rationals;
// clearing them shifts the congruence depth in the evaluator).
struct ConeCondition {
  Polynomial num;
  Polynomial den;
};

bool same_condition(const ConeCondition& a, const ConeCondition& b);

// True when the condition holds for every point and every prime: the
// numerator vanishes, or num = den * q with q an integer-coefficient
// polynomial.
bool condition_trivially_true(const ConeCondition& c);

// Variable layout: T entries are stored row-major over the upper triangle,
// T11, T12, ..., T1h, T22, ..., Thh.
std::string tvar_name(int i, int j);
int tvar_offset(int h, int i, int j);  // 1-based, requires i <= j
VarSetPtr make_t_vars(int h);

// Data for deciding x^z in B_t (the group spanned by the rows of the upper
// triangular matrix t): variables are the T entries followed by Z1..Zh, and
// x^z lies in B_t for p-integral points iff every condition holds at (t, z).
struct MembershipData {
  VarSetPtr vars;
  int h = 0;
  std::vector<ConeCondition> conds;  // one per coordinate, in order
};

// Runs the triangular elimination producing the membership fractions
// v_i = p_i / q_i; throws StructuralError if the presentation violates the
// triangular vanishing the elimination relies on, InternalError if a
// certificate denominator leaves the diagonal monomials.
MembershipData membership_conditions(const MalcevPresentation& N);

// Instantiates the membership conditions at Z := z over `target`, mapping
// the T entry with row-major offset o to target variable t_map[o]. The
// resulting denominators stay monic monomials because t_map sends
// variables to variables.
std::vector<ConeCondition> instantiate_membership(
    const MembershipData& M, const VarSetPtr& target,
    const std::vector<int>& t_map, const std::vector<Polynomial>& z);

// A full condition system over the T variables (and, for relative systems,
// the coset coordinates V<f>_<i> for f in K \ {1}).
struct ConeConditionSystem {
  VarSetPtr vars;
  int h = 0;
  int k_size = 1;             // |K|
  std::vector<int> k_elems;   // elements of K as F indices ({0} for tau case)
  std::vector<int> diag_index;  // vars index of T_ii, i = 1..h
  std::vector<ConeCondition> conditions;
  std::string label;
  Variant variant = Variant::Subgroup;

  // The integrand weight on a slice is prod |t_ii|^(s + weight_const[i]).
  int shift() const { return h + k_size - 1; }
  int normalization() const { return h; }
  std::vector<int> weight_const() const;
};

// Conditions for the rows of t to form a good basis of an open subgroup
// (Variant::Subgroup) or open normal subgroup (Variant::Normal) of the
// pro-p completion, for all primes at once.
ConeConditionSystem good_basis_conditions(const MalcevPresentation& N,
                                          Variant variant);

// Conditions on (t, (v_f)) for the lattice part B_t plus coset
// representatives g_f x^{v_f}, f in K \ {1}, to span a subgroup (or normal
// subgroup) A of the completed extension with A meeting the top group in
// exactly K. Variant::Normal requires K normal in F.
ConeConditionSystem relative_conditions(const VirtuallyTauGroup& V,
                                        const FiniteSubgroup& K,
                                        Variant variant);

// The cone-integral shape of a condition system: the measure of the set
//   { x : v_p(f_j(x)) <= v_p(g_j(x)) for all j }
// against the weight |f0|^s |g0| recovers the local counting series after
// the substitution s -> s - shift and normalization by (1 - 1/p)^h.
struct ConeIntegralData {
  VarSetPtr vars;
  Polynomial f0, g0;
  std::vector<std::pair<Polynomial, Polynomial>> pairs;  // (f_j, g_j)
  int shift = 0;
  int normalization_h = 0;
  std::vector<int> diag_index;
  std::vector<int> diag_weight;  // exponent of T_ii in g0, = h - i
};

ConeIntegralData emit_cone_data(const ConeConditionSystem& S);

}  // namespace conezeta
