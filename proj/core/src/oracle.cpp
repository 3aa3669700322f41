#include "conezeta/oracle.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "conezeta/errors.hpp"

namespace conezeta {

namespace {

void spend(long& work, long budget, long amount) {
  work += amount;
  if (work > budget) throw BudgetError("oracle work budget exhausted");
}

// Reduce a p-integral rational mod q = p^e. The denominator must be coprime
// to q; the quotient construction guarantees this for all values it meets.
Int rat_mod(const Rat& v, const Int& q) {
  Int num = numerator(v);
  Int den = denominator(v);
  if (den == 1) return mod_floor(num, q);
  Int dinv;
  if (mpz_invert(dinv.get_mpz_t(), den.get_mpz_t(), q.get_mpz_t()) == 0)
    throw InternalError("finite quotient met a non-invertible denominator");
  return mod_floor(num * dinv, q);
}

QCoords to_q(const Coords& a) {
  QCoords r;
  r.reserve(a.size());
  for (const Int& x : a) r.emplace_back(x);
  return r;
}

Coords unit_vector(int h, int i) {
  Coords u(static_cast<std::size_t>(h), Int(0));
  u[static_cast<std::size_t>(i)] = 1;
  return u;
}

void validate_rows(const MalcevPresentation& N, const std::vector<Coords>& rows) {
  if (static_cast<int>(rows.size()) != N.h)
    throw StructuralError("basis must have h rows");
  for (int i = 0; i < N.h; ++i) {
    const Coords& r = rows[static_cast<std::size_t>(i)];
    if (static_cast<int>(r.size()) != N.h)
      throw StructuralError("basis row has wrong length");
    for (int j = 0; j < i; ++j) {
      if (r[static_cast<std::size_t>(j)] != 0)
        throw StructuralError("basis rows must be triangular");
    }
    if (r[static_cast<std::size_t>(i)] == 0)
      throw StructuralError("basis diagonal entries must be nonzero");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// FiniteQuotient

FiniteQuotient::FiniteQuotient(const MalcevPresentation& N, Int p, int e)
    : N_(&N), p_(std::move(p)), e_(e) {
  if (e_ < 1) throw UsageError("finite quotient needs e >= 1");
  if (p_ < 2) throw UsageError("finite quotient needs p >= 2");
  q_ = int_pow(p_, static_cast<unsigned long>(e_));

  auto check_tuple = [&](const std::vector<Polynomial>& polys,
                         const char* what) {
    for (const Polynomial& f : polys) {
      Int d = f.denominator_lcm();
      if (d % p_ == 0) {
        throw StructuralError(
            std::string("quotient mod p^e undefined: ") + what +
            " has a coefficient denominator divisible by p (p=" +
            p_.get_str() + ", e=" + std::to_string(e_) + ") [" + N.label + "]");
      }
    }
  };
  check_tuple(N.mul, "multiplication");

  // Inverse tuple: pow at W = -1.
  std::vector<Polynomial> subs;
  VarSetPtr xring = N.xy_vars;  // X1..Xh, Y1..Yh; evaluate inverses on X part
  for (int i = 0; i < N.h; ++i)
    subs.push_back(Polynomial::variable(xring, i));
  subs.push_back(Polynomial::constant(xring, Rat(-1)));
  for (const Polynomial& f : N.pow)
    inv_polys_.push_back(f.compose(subs));
  check_tuple(inv_polys_, "inversion");
}

Coords FiniteQuotient::reduce(Coords a) const {
  for (Int& x : a) x = mod_floor(x, q_);
  return a;
}

Coords FiniteQuotient::identity() const {
  return Coords(static_cast<std::size_t>(h()), Int(0));
}

Coords FiniteQuotient::mul(const Coords& a, const Coords& b) const {
  Coords xy;
  xy.reserve(a.size() + b.size());
  xy.insert(xy.end(), a.begin(), a.end());
  xy.insert(xy.end(), b.begin(), b.end());
  Coords out;
  out.reserve(a.size());
  for (const Polynomial& f : N_->mul) out.push_back(rat_mod(f.eval(xy), q_));
  return out;
}

Coords FiniteQuotient::inv(const Coords& a) const {
  Coords xy;
  xy.reserve(2 * a.size());
  xy.insert(xy.end(), a.begin(), a.end());
  for (std::size_t i = 0; i < a.size(); ++i) xy.emplace_back(0);
  Coords out;
  out.reserve(a.size());
  for (const Polynomial& f : inv_polys_) out.push_back(rat_mod(f.eval(xy), q_));
  return out;
}

Coords FiniteQuotient::pow(const Coords& a, Int w) const {
  Coords base = reduce(a);
  if (w < 0) {
    base = inv(base);
    w = -w;
  }
  Coords acc = identity();
  while (w > 0) {
    if (mpz_odd_p(w.get_mpz_t())) acc = mul(acc, base);
    w >>= 1;
    if (w > 0) base = mul(base, base);
  }
  return acc;
}

Coords FiniteQuotient::word(const Coords& exps) const {
  if (static_cast<int>(exps.size()) != h())
    throw InternalError("word: wrong exponent arity");
  Coords acc = identity();
  for (int i = 0; i < h(); ++i) {
    if (exps[static_cast<std::size_t>(i)] == 0) continue;
    acc = mul(acc, pow(unit_vector(h(), i), exps[static_cast<std::size_t>(i)]));
  }
  return acc;
}

bool FiniteQuotient::is_id(const Coords& a) const {
  for (const Int& x : a)
    if (x != 0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// SiftedSubgroup

SiftedSubgroup::SiftedSubgroup(const FiniteQuotient& Q)
    : Q_(&Q),
      slots_(static_cast<std::size_t>(Q.h())),
      mu_(static_cast<std::size_t>(Q.h()), Q.e()) {}

void SiftedSubgroup::charge(long& work, long budget, long amount) const {
  spend(work, budget, amount);
}

Coords SiftedSubgroup::sift(Coords g) const {
  g = Q_->reduce(std::move(g));
  for (int i = 0; i < Q_->h(); ++i) {
    std::size_t si = static_cast<std::size_t>(i);
    if (g[si] == 0) continue;
    if (!slots_[si]) return g;
    long val = valuation(g[si], Q_->p());
    if (val < mu_[si]) return g;
    Int c = g[si] / int_pow(Q_->p(), static_cast<unsigned long>(mu_[si]));
    g = Q_->mul(Q_->pow(*slots_[si], -c), g);
    if (g[si] != 0)
      throw InternalError("sift failed to clear a leading coordinate");
  }
  return g;
}

bool SiftedSubgroup::contains(const Coords& g) const {
  return Q_->is_id(sift(g));
}

Coords SiftedSubgroup::normalize_leading(const Coords& g, int lead,
                                         int val) const {
  std::size_t sl = static_cast<std::size_t>(lead);
  Int pv = int_pow(Q_->p(), static_cast<unsigned long>(val));
  Int cof = int_pow(Q_->p(), static_cast<unsigned long>(Q_->e() - val));
  Int u = g[sl] / pv;
  Int c;
  if (mpz_invert(c.get_mpz_t(), u.get_mpz_t(), cof.get_mpz_t()) == 0)
    throw InternalError("leading unit is not invertible");
  Coords r = Q_->pow(g, c);
  if (r[sl] != pv)
    throw InternalError("leading normalization missed its target value");
  return r;
}

bool SiftedSubgroup::add_element(Coords g, long& work, long budget) {
  bool grew = false;
  std::vector<Coords> pending;
  pending.push_back(std::move(g));
  while (!pending.empty()) {
    Coords w = std::move(pending.back());
    pending.pop_back();
    charge(work, budget, Q_->h());
    w = sift(std::move(w));
    if (Q_->is_id(w)) continue;
    int lead = 0;
    while (w[static_cast<std::size_t>(lead)] == 0) ++lead;
    std::size_t sl = static_cast<std::size_t>(lead);
    int val = static_cast<int>(valuation(w[sl], Q_->p()));
    if (slots_[sl] && val >= mu_[sl])
      throw InternalError("sifted element still reducible");
    Coords norm = normalize_leading(w, lead, val);
    if (slots_[sl]) pending.push_back(*slots_[sl]);
    slots_[sl] = std::move(norm);
    mu_[sl] = val;
    grew = true;
  }
  return grew;
}

void SiftedSubgroup::close(long& work, long budget) {
  for (;;) {
    bool changed = false;
    for (int i = 0; i < Q_->h() && !changed; ++i) {
      std::size_t si = static_cast<std::size_t>(i);
      if (!slots_[si]) continue;
      Coords a = *slots_[si];
      charge(work, budget, Q_->h());
      Int over = int_pow(Q_->p(), static_cast<unsigned long>(Q_->e() - mu_[si]));
      if (add_element(Q_->pow(a, over), work, budget)) {
        changed = true;
        break;
      }
      Coords ainv = Q_->inv(a);
      for (int j = i + 1; j < Q_->h(); ++j) {
        std::size_t sj = static_cast<std::size_t>(j);
        if (!slots_[sj]) continue;
        charge(work, budget, Q_->h());
        Coords conj = Q_->mul(Q_->mul(ainv, *slots_[sj]), a);
        if (add_element(std::move(conj), work, budget)) {
          changed = true;
          break;
        }
      }
    }
    if (!changed) return;
  }
}

bool SiftedSubgroup::insert(Coords g, long& work, long budget) {
  bool grew = add_element(std::move(g), work, budget);
  if (grew) close(work, budget);
  return grew;
}

SiftedSubgroup SiftedSubgroup::full(const FiniteQuotient& Q, long& work,
                                    long budget) {
  SiftedSubgroup S(Q);
  for (int i = 0; i < Q.h(); ++i)
    S.insert(unit_vector(Q.h(), i), work, budget);
  return S;
}

Int SiftedSubgroup::index() const {
  unsigned long total = 0;
  for (int m : mu_) total += static_cast<unsigned long>(m);
  return int_pow(Q_->p(), total);
}

Int SiftedSubgroup::size() const {
  unsigned long total = 0;
  for (int m : mu_)
    total += static_cast<unsigned long>(Q_->e() - m);
  return int_pow(Q_->p(), total);
}

std::vector<Coords> SiftedSubgroup::generators() const {
  std::vector<Coords> out;
  for (const auto& s : slots_)
    if (s) out.push_back(*s);
  return out;
}

std::string SiftedSubgroup::fingerprint() const {
  std::ostringstream os;
  os << "mu";
  for (int m : mu_) os << ":" << m;
  for (int i = 0; i < Q_->h(); ++i) {
    std::size_t si = static_cast<std::size_t>(i);
    if (!slots_[si]) continue;
    Coords r = *slots_[si];
    for (int j = i + 1; j < Q_->h(); ++j) {
      std::size_t sj = static_cast<std::size_t>(j);
      if (!slots_[sj]) continue;  // mu_j = e: already reduced mod p^e
      Int pj = int_pow(Q_->p(), static_cast<unsigned long>(mu_[sj]));
      Int q = r[sj] / pj;
      if (q != 0) r = Q_->mul(r, Q_->pow(*slots_[sj], -q));
      if (r[sj] < 0 || r[sj] >= pj)
        throw InternalError("canonical row reduction out of range");
    }
    os << "|" << i;
    for (const Int& x : r) os << "," << x.get_str();
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Maximal subgroups and level enumeration

std::vector<SiftedSubgroup> maximal_subgroups(const SiftedSubgroup& B,
                                              long& work, long budget) {
  const FiniteQuotient& Q = B.quotient();
  if (!Q.p().fits_slong_p())
    throw BudgetError("maximal-subgroup enumeration needs a machine-word p");
  long p = Q.p().get_si();

  std::vector<int> occ;
  for (int i = 0; i < Q.h(); ++i)
    if (B.mu(i) < Q.e()) occ.push_back(i);
  std::vector<Coords> gens = B.generators();  // aligned with occ
  int r = static_cast<int>(occ.size());

  std::vector<SiftedSubgroup> out;
  std::set<std::string> seen;
  Int target = B.index() * Q.p();

  for (int pivot = 0; pivot < r; ++pivot) {
    // Functionals with first nonzero entry 1 at `pivot`; entries after the
    // pivot range over [0, p).
    std::vector<long> tail(static_cast<std::size_t>(r - pivot - 1), 0);
    for (;;) {
      spend(work, budget, r + 1);
      SiftedSubgroup M(Q);
      const Coords& s0 = gens[static_cast<std::size_t>(pivot)];
      for (int idx = 0; idx < r; ++idx) {
        if (idx == pivot) continue;
        const Coords& s = gens[static_cast<std::size_t>(idx)];
        long c = idx < pivot ? 0 : tail[static_cast<std::size_t>(idx - pivot - 1)];
        if (c == 0) {
          M.insert(s, work, budget);
        } else {
          M.insert(Q.mul(s, Q.pow(s0, Int(-c))), work, budget);
        }
      }
      M.insert(Q.pow(s0, Int(p)), work, budget);

      // Normal closure inside B.
      for (;;) {
        bool changed = false;
        std::vector<Coords> mg = M.generators();
        for (const Coords& b : B.generators()) {
          Coords binv = Q.inv(b);
          for (const Coords& m : mg) {
            spend(work, budget, Q.h());
            if (M.insert(Q.mul(Q.mul(binv, m), b), work, budget))
              changed = true;
          }
          if (changed) break;
        }
        if (!changed) break;
      }

      Int idxM = M.index();
      if (idxM == target) {
        std::string fp = M.fingerprint();
        if (seen.insert(fp).second) out.push_back(std::move(M));
      } else if (idxM != B.index()) {
        throw InternalError("maximal candidate has index ratio other than 1 or p");
      }

      // Odometer over the tail digits.
      std::size_t d = 0;
      for (; d < tail.size(); ++d) {
        if (++tail[d] < p) break;
        tail[d] = 0;
      }
      if (d == tail.size()) break;
    }
  }
  return out;
}

namespace {

bool normal_in_ambient(const SiftedSubgroup& M, long& work, long budget) {
  const FiniteQuotient& Q = M.quotient();
  for (int i = 0; i < Q.h(); ++i) {
    Coords x = unit_vector(Q.h(), i);
    Coords xinv = Q.inv(x);
    for (const Coords& m : M.generators()) {
      spend(work, budget, Q.h());
      if (!M.contains(Q.mul(Q.mul(xinv, m), x))) return false;
    }
  }
  return true;
}

std::vector<std::vector<SiftedSubgroup>> subgroup_levels(
    const FiniteQuotient& Q, int kmax, Variant variant, long& work,
    long budget) {
  std::vector<std::vector<SiftedSubgroup>> levels;
  levels.emplace_back();
  levels[0].push_back(SiftedSubgroup::full(Q, work, budget));
  for (int k = 0; k < kmax; ++k) {
    std::vector<SiftedSubgroup> next;
    std::set<std::string> seen;
    for (const SiftedSubgroup& B : levels[static_cast<std::size_t>(k)]) {
      for (SiftedSubgroup& M : maximal_subgroups(B, work, budget)) {
        if (variant == Variant::Normal && !normal_in_ambient(M, work, budget))
          continue;
        std::string fp = M.fingerprint();
        if (seen.insert(fp).second) next.push_back(std::move(M));
      }
    }
    levels.push_back(std::move(next));
  }
  return levels;
}

}  // namespace

// ---------------------------------------------------------------------------
// Tau-group counting

OracleReport oracle_counts(const MalcevPresentation& N, const Int& p, int kmax,
                           Variant variant, const OracleOptions& opt) {
  if (kmax < 0) throw UsageError("kmax must be nonnegative");
  if (!is_prime(p)) throw UsageError("the oracle needs a prime p");
  int e0 = opt.e > 0 ? opt.e : kmax + N.nil_class + 1;

  long work = 0;
  auto run = [&](int e) {
    FiniteQuotient Q(N, p, e);
    auto levels = subgroup_levels(Q, kmax, variant, work, opt.budget);
    std::vector<Int> counts;
    for (int k = 0; k <= kmax; ++k)
      counts.emplace_back(levels[static_cast<std::size_t>(k)].size());
    return counts;
  };

  OracleReport rep;
  rep.e_used = e0;
  rep.label = N.label + ":" + variant_name(variant) + ":oracle";
  rep.counts = run(e0);
  if (opt.check_stability) {
    rep.stable = (rep.counts == run(e0 + 1));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Extension counting

namespace {

struct EEl {
  Coords n;
  int f = 0;
};

struct ExtQuotient {
  const FiniteQuotient& Q;
  const VirtuallyTauGroup& V;

  ExtQuotient(const FiniteQuotient& q, const VirtuallyTauGroup& v) : Q(q), V(v) {
    for (int f = 0; f < V.F.order; ++f) {
      for (const Polynomial& s : V.sigma[static_cast<std::size_t>(f)]) {
        Int d = s.denominator_lcm();
        if (d % Q.p() == 0) {
          throw StructuralError(
              "quotient mod p^e undefined: a twisting map has a coefficient "
              "denominator divisible by p (p=" + Q.p().get_str() + ", e=" +
              std::to_string(Q.e()) + ") [" + V.label + "]");
        }
      }
    }
  }

  Coords sigma(int f, const Coords& a) const {
    Coords out;
    out.reserve(a.size());
    for (const Polynomial& s : V.sigma[static_cast<std::size_t>(f)])
      out.push_back(rat_mod(s.eval(a), Q.modulus()));
    return out;
  }

  Coords psi(int f, int g) const {
    return Q.reduce(V.psi[static_cast<std::size_t>(f)][static_cast<std::size_t>(g)]);
  }

  EEl identity() const { return {Q.identity(), 0}; }

  EEl mul(const EEl& a, const EEl& b) const {
    return {Q.mul(Q.mul(a.n, sigma(a.f, b.n)), psi(a.f, b.f)),
            V.F.mul(a.f, b.f)};
  }

  EEl inv(const EEl& a) const {
    int fi = V.F.inv(a.f);
    Coords core = Q.mul(Q.inv(a.n), Q.inv(psi(a.f, fi)));
    Coords b = Q.mul(Q.mul(Q.inv(psi(fi, a.f)), sigma(fi, core)), psi(fi, a.f));
    EEl out{std::move(b), fi};
    EEl check = mul(a, out);
    if (check.f != 0 || !Q.is_id(check.n))
      throw InternalError("extension quotient inverse failed its check");
    return out;
  }

  bool is_id(const EEl& a) const { return a.f == 0 && Q.is_id(a.n); }
};

}  // namespace

OracleReport oracle_counts(const VirtuallyTauGroup& V, const FiniteSubgroup& K,
                           const Int& p, int kmax, Variant variant,
                           const OracleOptions& opt) {
  if (kmax < 0) throw UsageError("kmax must be nonnegative");
  if (!is_prime(p)) throw UsageError("the oracle needs a prime p");
  if (K.elems.empty() || K.elems[0] != 0)
    throw UsageError("K must contain the identity");
  for (int a : K.elems) {
    for (int b : K.elems) {
      if (!K.contains(V.F.mul(a, b)))
        throw UsageError("K is not closed under the group operation");
    }
  }
  if (variant == Variant::Normal) {
    for (int f = 0; f < V.F.order; ++f) {
      for (int a : K.elems) {
        if (!K.contains(V.F.mul(V.F.mul(f, a), V.F.inv(f))))
          throw UsageError("normal counting needs a normal K");
      }
    }
  }

  int e0 = opt.e > 0 ? opt.e : kmax + V.N.nil_class + 1;
  std::vector<int> Kns;
  for (int f : K.elems)
    if (f != 0) Kns.push_back(f);

  long work = 0;
  auto run = [&](int e) {
    FiniteQuotient Q(V.N, p, e);
    ExtQuotient E(Q, V);
    auto levels =
        subgroup_levels(Q, kmax, Variant::Subgroup, work, opt.budget);

    std::vector<Int> counts;
    for (int k = 0; k <= kmax; ++k) {
      Int total = 0;
      for (const SiftedSubgroup& B : levels[static_cast<std::size_t>(k)]) {
        // Transversal representatives x^a, a_i in [0, p^{mu_i}).
        Int nreps_z = B.index();
        if (!nreps_z.fits_slong_p())
          throw BudgetError("transversal too large for the oracle");
        long nreps = nreps_z.get_si();
        std::vector<Coords> reps;
        reps.reserve(static_cast<std::size_t>(nreps));
        {
          std::vector<Int> radix(static_cast<std::size_t>(Q.h()));
          for (int i = 0; i < Q.h(); ++i)
            radix[static_cast<std::size_t>(i)] =
                int_pow(p, static_cast<unsigned long>(B.mu(i)));
          Coords a(static_cast<std::size_t>(Q.h()), Int(0));
          for (;;) {
            spend(work, opt.budget, Q.h());
            reps.push_back(Q.word(a));
            int d = 0;
            for (; d < Q.h(); ++d) {
              std::size_t sd = static_cast<std::size_t>(d);
              if (++a[sd] < radix[sd]) break;
              a[sd] = 0;
            }
            if (d == Q.h()) break;
          }
          if (static_cast<long>(reps.size()) != nreps)
            throw InternalError("transversal enumeration miscounted");
        }

        Int tuples = int_pow(Int(nreps), static_cast<unsigned long>(Kns.size()));
        if (!tuples.fits_slong_p() || tuples.get_si() > opt.budget)
          throw BudgetError("coset-tuple space exceeds the oracle budget");

        std::vector<Coords> bgens = B.generators();
        std::vector<long> sel(Kns.size(), 0);
        for (;;) {
          spend(work, opt.budget,
                static_cast<long>(Kns.size() * Kns.size() + 1));
          std::vector<EEl> gam(static_cast<std::size_t>(V.F.order),
                               E.identity());
          for (std::size_t t = 0; t < Kns.size(); ++t)
            gam[static_cast<std::size_t>(Kns[t])] =
                EEl{reps[static_cast<std::size_t>(sel[t])], Kns[t]};

          bool ok = true;
          // Conjugation stability of B under every gamma_f.
          for (std::size_t t = 0; t < Kns.size() && ok; ++t) {
            const EEl& gf = gam[static_cast<std::size_t>(Kns[t])];
            EEl gfi = E.inv(gf);
            for (const Coords& b : bgens) {
              EEl w = E.mul(E.mul(gf, EEl{b, 0}), gfi);
              if (w.f != 0)
                throw InternalError("conjugate left the kernel fiber");
              if (!B.contains(w.n)) {
                ok = false;
                break;
              }
            }
          }
          // Coset compatibility gamma_f gamma_f' in gamma_{ff'} B.
          for (std::size_t t = 0; t < Kns.size() && ok; ++t) {
            for (std::size_t u = 0; u < Kns.size() && ok; ++u) {
              const EEl& gf = gam[static_cast<std::size_t>(Kns[t])];
              const EEl& gg = gam[static_cast<std::size_t>(Kns[u])];
              int prod_f = V.F.mul(gf.f, gg.f);
              EEl d = E.mul(E.inv(gam[static_cast<std::size_t>(prod_f)]),
                            E.mul(gf, gg));
              if (d.f != 0)
                throw InternalError("coset check left the kernel fiber");
              if (!B.contains(d.n)) ok = false;
            }
          }
          // Normality in the whole extension.
          if (ok && variant == Variant::Normal) {
            std::vector<EEl> hgens;
            for (const Coords& b : bgens) hgens.push_back(EEl{b, 0});
            for (int f : Kns) hgens.push_back(gam[static_cast<std::size_t>(f)]);
            std::vector<EEl> conjugators;
            for (int i = 0; i < Q.h(); ++i)
              conjugators.push_back(EEl{unit_vector(Q.h(), i), 0});
            for (int f = 1; f < V.F.order; ++f)
              conjugators.push_back(EEl{Q.identity(), f});
            for (const EEl& c : conjugators) {
              EEl ci = E.inv(c);
              for (const EEl& g : hgens) {
                spend(work, opt.budget, Q.h());
                EEl w = E.mul(E.mul(c, g), ci);
                if (!K.contains(w.f)) {
                  ok = false;
                  break;
                }
                EEl d = E.mul(E.inv(gam[static_cast<std::size_t>(w.f)]), w);
                if (d.f != 0)
                  throw InternalError("normality check left the kernel fiber");
                if (!B.contains(d.n)) {
                  ok = false;
                  break;
                }
              }
              if (!ok) break;
            }
          }
          if (ok) total += 1;

          std::size_t d = 0;
          for (; d < sel.size(); ++d) {
            if (++sel[d] < nreps) break;
            sel[d] = 0;
          }
          if (d == sel.size()) break;
        }
      }
      counts.push_back(total);
    }
    return counts;
  };

  OracleReport rep;
  rep.e_used = e0;
  rep.label = V.label + ":K=" + K.describe() + ":" + variant_name(variant) +
              ":oracle";
  rep.counts = run(e0);
  if (opt.check_stability) {
    rep.stable = (rep.counts == run(e0 + 1));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Hermite-form counts for Z^h

Int hnf_subgroup_count(int h, const Int& n) {
  if (h < 1) throw UsageError("hnf_subgroup_count needs h >= 1");
  if (n < 1) throw UsageError("hnf_subgroup_count needs n >= 1");
  if (h == 1) return 1;
  std::vector<Int> divisors;
  for (Int d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      divisors.push_back(d);
      if (d * d != n) divisors.push_back(n / d);
    }
  }
  Int total = 0;
  for (const Int& d : divisors) {
    total += int_pow(d, static_cast<unsigned long>(h - 1)) *
             hnf_subgroup_count(h - 1, n / d);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Membership

bool membership_oracle(const MalcevPresentation& N,
                       const std::vector<Coords>& rows, const Coords& z,
                       const Int& p) {
  validate_rows(N, rows);
  if (static_cast<int>(z.size()) != N.h)
    throw StructuralError("membership target has wrong arity");
  if (!is_prime(p)) throw UsageError("membership oracle needs a prime p");

  QCoords r = to_q(z);
  for (int i = 0; i < N.h; ++i) {
    std::size_t si = static_cast<std::size_t>(i);
    Rat w = r[si] / Rat(rows[si][si]);
    if (w != 0) {
      if (valuation(w, p) < 0) return false;
      r = mal_multiply(N, mal_power(N, to_q(rows[si]), -w), r);
      if (r[si] != 0)
        throw InternalError("membership elimination left a residue");
      for (const Rat& x : r) {
        if (mpz_sizeinbase(denominator(x).get_mpz_t(), 2) > 100000)
          throw BudgetError("membership oracle denominators exploded");
      }
    }
  }
  for (const Rat& x : r) {
    if (x != 0)
      throw InternalError("membership elimination terminated off identity");
  }
  return true;
}

bool membership_via_conditions(const MembershipData& M,
                               const std::vector<Coords>& rows,
                               const Coords& z, const Int& p) {
  const int h = M.h;
  if (static_cast<int>(rows.size()) != h || static_cast<int>(z.size()) != h)
    throw StructuralError("membership instance has wrong arity");
  Coords vals(static_cast<std::size_t>(M.vars->size()), Int(0));
  for (int i = 1; i <= h; ++i) {
    for (int j = i; j <= h; ++j) {
      vals[static_cast<std::size_t>(tvar_offset(h, i, j))] =
          rows[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
    }
  }
  std::size_t base = static_cast<std::size_t>(h * (h + 1) / 2);
  for (int i = 0; i < h; ++i)
    vals[base + static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i)];

  for (const ConeCondition& c : M.conds) {
    Rat dv = c.den.eval(vals);
    if (dv == 0)
      throw StructuralError("membership conditions met a vanishing denominator");
    Rat nv = c.num.eval(vals);
    if (nv == 0) continue;
    if (valuation(nv, p) < valuation(dv, p)) return false;
  }
  return true;
}

bool is_good_basis_oracle(const MalcevPresentation& N,
                          const std::vector<Coords>& rows, Variant variant,
                          const Int& p) {
  validate_rows(N, rows);
  for (int i = 0; i < N.h; ++i) {
    for (int j = i + 1; j < N.h; ++j) {
      Coords c = mal_commutator(N, rows[static_cast<std::size_t>(i)],
                                rows[static_cast<std::size_t>(j)]);
      if (!membership_oracle(N, rows, c, p)) return false;
    }
  }
  if (variant == Variant::Normal) {
    for (int i = 0; i < N.h; ++i) {
      Coords e = unit_vector(N.h, i);
      for (int j = 0; j < N.h; ++j) {
        Coords c = mal_commutator(N, e, rows[static_cast<std::size_t>(j)]);
        if (!membership_oracle(N, rows, c, p)) return false;
      }
    }
  }
  return true;
}

std::vector<Coords> random_good_basis(const MalcevPresentation& N,
                                      Variant variant, const Int& p,
                                      const std::vector<int>& m,
                                      std::mt19937_64& rng, int max_tries) {
  if (static_cast<int>(m.size()) != N.h)
    throw UsageError("random_good_basis: m must have h entries");
  if (!p.fits_slong_p())
    throw BudgetError("random_good_basis needs a machine-word p");
  long pl = p.get_si();

  for (int attempt = 0; attempt < max_tries; ++attempt) {
    std::vector<Coords> rows(static_cast<std::size_t>(N.h),
                             Coords(static_cast<std::size_t>(N.h), Int(0)));
    for (int i = 0; i < N.h; ++i) {
      std::size_t si = static_cast<std::size_t>(i);
      Int diag = int_pow(p, static_cast<unsigned long>(m[si]));
      if (pl > 2) {
        long u = 1 + static_cast<long>(rng() % static_cast<unsigned long>(pl - 1));
        diag *= u;
      }
      if (rng() & 1) diag = -diag;
      rows[si][si] = diag;
      for (int j = i + 1; j < N.h; ++j) {
        std::size_t sj = static_cast<std::size_t>(j);
        Int bound = int_pow(p, static_cast<unsigned long>(m[sj]) + 1);
        long bl = bound.get_si();
        long v = static_cast<long>(rng() % static_cast<unsigned long>(2 * bl + 1)) - bl;
        rows[si][sj] = v;
      }
    }
    if (is_good_basis_oracle(N, rows, variant, p)) return rows;
  }
  throw InternalError("random_good_basis: rejection sampling exhausted");
}

}  // namespace conezeta
