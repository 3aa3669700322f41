#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "conezeta/rational.hpp"

namespace conezeta {

// An ordered list of variable names shared by all polynomials of one ring.
// Polynomials over different VarSet instances never mix (checked).
class VarSet {
 public:
  explicit VarSet(std::vector<std::string> names);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }

  // Index of `name`; throws StructuralError if absent.
  int index(const std::string& name) const;
  bool contains(const std::string& name) const;

 private:
  std::vector<std::string> names_;
  std::map<std::string, int> index_;
};

using VarSetPtr = std::shared_ptr<const VarSet>;

VarSetPtr make_vars(std::vector<std::string> names);

// Exponent vector, one entry per variable, all >= 0.
using Exps = std::vector<std::int32_t>;

// Sparse multivariate polynomial with exact rational coefficients.
// Terms are kept in a map keyed by exponent vector (lexicographic order), so
// iteration order -- and hence printing and serialization -- is deterministic.
class Polynomial {
 public:
  Polynomial() = default;  // zero polynomial over the empty ring
  explicit Polynomial(VarSetPtr vars);

  static Polynomial zero(VarSetPtr vars);
  static Polynomial constant(VarSetPtr vars, const Rat& c);
  static Polynomial variable(VarSetPtr vars, int i);
  static Polynomial monomial(VarSetPtr vars, const Exps& e, const Rat& c);

  const VarSetPtr& vars() const { return vars_; }
  int nvars() const { return vars_ ? vars_->size() : 0; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  // The constant coefficient (0 if absent).
  Rat constant_value() const;
  // True if the polynomial is a single term c * prod x_i^{e_i}.
  bool is_term() const { return terms_.size() == 1; }

  long total_degree() const;  // -1 for the zero polynomial
  long degree_in(int var) const;

  const std::map<Exps, Rat>& terms() const { return terms_; }

  Polynomial operator-() const;
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(const Rat& c) const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);

  bool operator==(const Polynomial& o) const;
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  Polynomial pow(unsigned long e) const;

  // Exact evaluation at rational points (size must equal nvars()).
  Rat eval(const QCoords& point) const;
  Rat eval(const Coords& point) const;

  // Substitute args[i] for variable i. All args must share one VarSet; the
  // result lives over that ring. Powers of each argument are cached, so the
  // cost is linear in the largest exponent per variable.
  Polynomial compose(const std::vector<Polynomial>& args) const;

  // Rename into a (possibly larger) ring: variable i becomes target
  // variable map[i].
  Polynomial rename(VarSetPtr new_vars, const std::vector<int>& map) const;

  // Least common multiple of the coefficient denominators (>= 1).
  Int denominator_lcm() const;

  // (d * this, d) with d = denominator_lcm(); the first component has
  // integer coefficients.
  std::pair<Polynomial, Int> clear_denominators() const;

  // Largest monomial dividing every term (zero polynomial -> all-zero
  // exponents).
  Exps monomial_content() const;

  // Divide by the monomial x^e; throws InternalError if any term is not
  // divisible.
  Polynomial divide_by_monomial(const Exps& e) const;

  // Deterministic human-readable form, e.g. "T11*T22 - 1/2*Z1^2".
  std::string to_string() const;

 private:
  void normalize();  // drop zero coefficients
  static void check_same_ring(const Polynomial& a, const Polynomial& b);

  VarSetPtr vars_;
  std::map<Exps, Rat> terms_;
};

Polynomial operator*(const Rat& c, const Polynomial& p);

// Polynomial binomial coefficient C(P, k) = P(P-1)...(P-k+1)/k!.
Polynomial poly_binomial(const Polynomial& p, unsigned long k);

// Concatenation of two argument tuples (for composing two-block maps).
std::vector<Polynomial> concat_polys(const std::vector<Polynomial>& a,
                                     const std::vector<Polynomial>& b);

}  // namespace conezeta
