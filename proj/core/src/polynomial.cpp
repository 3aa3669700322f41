#include "conezeta/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace conezeta {

// ---------------------------------------------------------------- rational

Int to_integer(const Rat& q) {
  if (!is_integer(q)) {
    throw IntegralityError("expected an integer, got " + rat_to_string(q));
  }
  return numerator(q);
}

long valuation(const Int& n, const Int& p) {
  if (p < 2) throw StructuralError("valuation: p must be >= 2");
  if (n == 0) throw StructuralError("valuation: v_p(0) is infinite");
  Int m = abs(n);
  long v = 0;
  while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
    m /= p;
    ++v;
  }
  return v;
}

long valuation(const Rat& q, const Int& p) {
  if (q == 0) throw StructuralError("valuation: v_p(0) is infinite");
  long v = 0;
  if (numerator(q) != 0) v += valuation(numerator(q), p);
  v -= valuation(denominator(q), p);
  return v;
}

Int mod_floor(const Int& n, const Int& m) {
  if (m <= 0) throw StructuralError("mod_floor: modulus must be positive");
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), n.get_mpz_t(), m.get_mpz_t());
  return r;
}

Int int_pow(const Int& p, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), p.get_mpz_t(), e);
  return r;
}

Int binomial(const Int& n, unsigned long k) {
  Int num = 1;
  for (unsigned long i = 0; i < k; ++i) num *= n - static_cast<long>(i);
  Int den;
  mpz_fac_ui(den.get_mpz_t(), k);
  Int q;
  mpz_divexact(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return q;
}

std::vector<Int> prime_factors(Int n) {
  if (n == 0) throw StructuralError("prime_factors: n must be nonzero");
  n = abs(n);
  std::vector<Int> out;
  for (Int p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

bool is_prime(const Int& n) {
  return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

std::vector<Int> first_primes(int count) {
  std::vector<Int> out;
  Int p = 2;
  while (static_cast<int>(out.size()) < count) {
    out.push_back(p);
    mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
  }
  return out;
}

std::string rat_to_string(const Rat& q) {
  std::string s = numerator(q).get_str();
  if (denominator(q) != 1) s += "/" + denominator(q).get_str();
  return s;
}

Rat rat_from_string(const std::string& s) {
  auto bad = [&]() -> Rat {
    throw UsageError("malformed rational literal: '" + s + "'");
  };
  if (s.empty()) return bad();
  auto slash = s.find('/');
  auto check_int = [&](const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    }
    return true;
  };
  if (slash == std::string::npos) {
    if (!check_int(s)) return bad();
    Rat q{Int(s)};
    q.canonicalize();
    return q;
  }
  std::string num = s.substr(0, slash), den = s.substr(slash + 1);
  if (!check_int(num) || !check_int(den)) return bad();
  Int d(den);
  if (d == 0) return bad();
  Rat q(Int(num), d);
  q.canonicalize();
  return q;
}

// ------------------------------------------------------------------ VarSet

VarSet::VarSet(std::vector<std::string> names) : names_(std::move(names)) {
  for (int i = 0; i < static_cast<int>(names_.size()); ++i) {
    auto [it, fresh] = index_.emplace(names_[i], i);
    if (!fresh) {
      throw StructuralError("duplicate variable name '" + names_[i] + "'");
    }
  }
}

int VarSet::index(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) {
    throw StructuralError("unknown variable '" + name + "'");
  }
  return it->second;
}

bool VarSet::contains(const std::string& name) const {
  return index_.count(name) != 0;
}

VarSetPtr make_vars(std::vector<std::string> names) {
  return std::make_shared<const VarSet>(std::move(names));
}

// -------------------------------------------------------------- Polynomial

Polynomial::Polynomial(VarSetPtr vars) : vars_(std::move(vars)) {
  if (!vars_) throw StructuralError("Polynomial: null variable set");
}

Polynomial Polynomial::zero(VarSetPtr vars) { return Polynomial(std::move(vars)); }

Polynomial Polynomial::constant(VarSetPtr vars, const Rat& c) {
  Polynomial p(std::move(vars));
  if (c != 0) p.terms_.emplace(Exps(p.nvars(), 0), c);
  return p;
}

Polynomial Polynomial::variable(VarSetPtr vars, int i) {
  Polynomial p(std::move(vars));
  if (i < 0 || i >= p.nvars()) {
    throw StructuralError("Polynomial::variable: index out of range");
  }
  Exps e(p.nvars(), 0);
  e[i] = 1;
  p.terms_.emplace(std::move(e), Rat(1));
  return p;
}

Polynomial Polynomial::monomial(VarSetPtr vars, const Exps& e, const Rat& c) {
  Polynomial p(std::move(vars));
  if (static_cast<int>(e.size()) != p.nvars()) {
    throw StructuralError("Polynomial::monomial: exponent arity mismatch");
  }
  for (auto x : e) {
    if (x < 0) throw StructuralError("Polynomial::monomial: negative exponent");
  }
  if (c != 0) p.terms_.emplace(e, c);
  return p;
}

bool Polynomial::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  const Exps& e = terms_.begin()->first;
  return std::all_of(e.begin(), e.end(), [](auto x) { return x == 0; });
}

Rat Polynomial::constant_value() const {
  Exps zero(nvars(), 0);
  auto it = terms_.find(zero);
  return it == terms_.end() ? Rat(0) : it->second;
}

long Polynomial::total_degree() const {
  long best = -1;
  for (const auto& [e, c] : terms_) {
    long d = 0;
    for (auto x : e) d += x;
    best = std::max(best, d);
  }
  return best;
}

long Polynomial::degree_in(int var) const {
  long best = terms_.empty() ? -1 : 0;
  for (const auto& [e, c] : terms_) best = std::max(best, long(e.at(var)));
  return best;
}

void Polynomial::normalize() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second == 0) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
}

void Polynomial::check_same_ring(const Polynomial& a, const Polynomial& b) {
  if (a.vars_ == b.vars_) return;
  // Accept distinct VarSet objects with identical names (e.g. after
  // deserialization), but nothing looser.
  if (a.vars_ && b.vars_ && a.vars_->names() == b.vars_->names()) return;
  throw StructuralError("polynomial arithmetic across different rings");
}

Polynomial Polynomial::operator-() const {
  Polynomial r(*this);
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  check_same_ring(*this, o);
  for (const auto& [e, c] : o.terms_) {
    auto [it, fresh] = terms_.emplace(e, c);
    if (!fresh) it->second += c;
  }
  normalize();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  check_same_ring(*this, o);
  for (const auto& [e, c] : o.terms_) {
    auto [it, fresh] = terms_.emplace(e, -c);
    if (!fresh) it->second -= c;
  }
  normalize();
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) {
  *this = *this * o;
  return *this;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r(*this);
  r += o;
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  Polynomial r(*this);
  r -= o;
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  check_same_ring(*this, o);
  Polynomial r(vars_);
  const int n = nvars();
  Exps e(n, 0);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      for (int i = 0; i < n; ++i) e[i] = ea[i] + eb[i];
      Rat prod = ca * cb;
      auto [it, fresh] = r.terms_.emplace(e, prod);
      if (!fresh) it->second += prod;
    }
  }
  r.normalize();
  return r;
}

Polynomial Polynomial::operator*(const Rat& c) const {
  Polynomial r(*this);
  if (c == 0) {
    r.terms_.clear();
    return r;
  }
  for (auto& [e, coef] : r.terms_) coef *= c;
  return r;
}

Polynomial operator*(const Rat& c, const Polynomial& p) { return p * c; }

bool Polynomial::operator==(const Polynomial& o) const {
  if (vars_ != o.vars_) {
    if (!vars_ || !o.vars_ || vars_->names() != o.vars_->names()) return false;
  }
  return terms_ == o.terms_;
}

Polynomial Polynomial::pow(unsigned long e) const {
  Polynomial r = Polynomial::constant(vars_, Rat(1));
  Polynomial base(*this);
  while (e > 0) {
    if (e & 1) r *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  return r;
}

Rat Polynomial::eval(const QCoords& point) const {
  if (static_cast<int>(point.size()) != nvars()) {
    throw StructuralError("Polynomial::eval: arity mismatch");
  }
  Rat total(0);
  for (const auto& [e, c] : terms_) {
    Rat term = c;
    for (int i = 0; i < nvars(); ++i) {
      for (std::int32_t k = 0; k < e[i]; ++k) term *= point[i];
    }
    total += term;
  }
  return total;
}

Rat Polynomial::eval(const Coords& point) const {
  QCoords q(point.begin(), point.end());
  return eval(q);
}

Polynomial Polynomial::compose(const std::vector<Polynomial>& args) const {
  if (static_cast<int>(args.size()) != nvars()) {
    throw StructuralError("Polynomial::compose: arity mismatch");
  }
  if (terms_.empty()) {
    if (args.empty()) throw StructuralError("compose: empty target ring");
    return Polynomial::zero(args.front().vars());
  }
  VarSetPtr target = args.front().vars();
  for (const auto& a : args) check_same_ring(args.front(), a);

  // Cache args[i]^k for k = 0..max exponent of variable i.
  std::vector<std::vector<Polynomial>> powers(args.size());
  for (std::size_t i = 0; i < args.size(); ++i) {
    powers[i].push_back(Polynomial::constant(target, Rat(1)));
  }
  auto power_of = [&](std::size_t i, std::int32_t k) -> const Polynomial& {
    while (static_cast<std::int32_t>(powers[i].size()) <= k) {
      powers[i].push_back(powers[i].back() * args[i]);
    }
    return powers[i][k];
  };

  Polynomial r = Polynomial::zero(target);
  for (const auto& [e, c] : terms_) {
    Polynomial term = Polynomial::constant(target, c);
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (e[i] > 0) term *= power_of(i, e[i]);
    }
    r += term;
  }
  return r;
}

Polynomial Polynomial::rename(VarSetPtr new_vars,
                              const std::vector<int>& map) const {
  if (static_cast<int>(map.size()) != nvars()) {
    throw StructuralError("Polynomial::rename: map arity mismatch");
  }
  Polynomial r(new_vars);
  const int m = new_vars->size();
  for (int t : map) {
    if (t < 0 || t >= m) throw StructuralError("Polynomial::rename: bad target");
  }
  for (const auto& [e, c] : terms_) {
    Exps ne(m, 0);
    for (int i = 0; i < nvars(); ++i) ne[map[i]] += e[i];
    auto [it, fresh] = r.terms_.emplace(std::move(ne), c);
    if (!fresh) it->second += c;
  }
  r.normalize();
  return r;
}

Int Polynomial::denominator_lcm() const {
  Int d = 1;
  for (const auto& [e, c] : terms_) {
    Int den = denominator(c);
    mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), den.get_mpz_t());
  }
  return d;
}

std::pair<Polynomial, Int> Polynomial::clear_denominators() const {
  Int d = denominator_lcm();
  return {*this * Rat(d), d};
}

Exps Polynomial::monomial_content() const {
  Exps content(nvars(), 0);
  bool started = false;
  for (const auto& [e, c] : terms_) {
    if (!started) {
      content = e;
      started = true;
    } else {
      for (int i = 0; i < nvars(); ++i) content[i] = std::min(content[i], e[i]);
    }
  }
  return content;
}

Polynomial Polynomial::divide_by_monomial(const Exps& e) const {
  if (static_cast<int>(e.size()) != nvars()) {
    throw StructuralError("divide_by_monomial: arity mismatch");
  }
  Polynomial r(vars_);
  for (const auto& [te, c] : terms_) {
    Exps ne(nvars());
    for (int i = 0; i < nvars(); ++i) {
      ne[i] = te[i] - e[i];
      if (ne[i] < 0) {
        throw InternalError("divide_by_monomial: term not divisible");
      }
    }
    r.terms_.emplace(std::move(ne), c);
  }
  return r;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  // Print in reverse lexicographic key order so leading terms come first.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Rat a = c;
    if (first) {
      if (a < 0) {
        out << "-";
        a = -a;
      }
    } else {
      out << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    first = false;

    std::vector<std::string> factors;
    for (int i = 0; i < nvars(); ++i) {
      if (e[i] == 0) continue;
      std::string f = vars_->name(i);
      if (e[i] > 1) f += "^" + std::to_string(e[i]);
      factors.push_back(std::move(f));
    }
    if (factors.empty()) {
      out << rat_to_string(a);
    } else {
      if (a != 1) out << rat_to_string(a) << "*";
      for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i) out << "*";
        out << factors[i];
      }
    }
  }
  return out.str();
}

Polynomial poly_binomial(const Polynomial& p, unsigned long k) {
  Polynomial num = Polynomial::constant(p.vars(), Rat(1));
  for (unsigned long i = 0; i < k; ++i) {
    num *= p - Polynomial::constant(p.vars(), Rat(static_cast<long>(i)));
  }
  Int fact;
  mpz_fac_ui(fact.get_mpz_t(), k);
  return num * Rat(Int(1), fact);
}

std::vector<Polynomial> concat_polys(const std::vector<Polynomial>& a,
                                     const std::vector<Polynomial>& b) {
  std::vector<Polynomial> r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

}  // namespace conezeta
