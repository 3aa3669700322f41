#include "conezeta/conegen.hpp"

#include <algorithm>
#include <sstream>

#include "conezeta/errors.hpp"

namespace conezeta {

namespace {

std::vector<Polynomial> compose_tuple(const std::vector<Polynomial>& tup,
                                      const std::vector<Polynomial>& args) {
  std::vector<Polynomial> out;
  out.reserve(tup.size());
  for (const Polynomial& p : tup) out.push_back(p.compose(args));
  return out;
}

std::vector<Polynomial> constant_tuple(const VarSetPtr& ring, const Coords& c) {
  std::vector<Polynomial> out;
  out.reserve(c.size());
  for (const Int& x : c) out.push_back(Polynomial::constant(ring, Rat(x)));
  return out;
}

// Row i of the generic triangular matrix as a coordinate tuple over `ring`,
// where the T entry with offset o sits at ring index t_map[o].
std::vector<Polynomial> row_tuple(const VarSetPtr& ring, int h, int i,
                                  const std::vector<int>& t_map) {
  std::vector<Polynomial> out;
  for (int j = 1; j <= h; ++j) {
    out.push_back(j < i ? Polynomial::zero(ring)
                        : Polynomial::variable(
                              ring, t_map[static_cast<std::size_t>(
                                        tvar_offset(h, i, j))]));
  }
  return out;
}

std::vector<int> identity_map(int n) {
  std::vector<int> m(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i)] = i;
  return m;
}

// A fraction num / x^den whose denominator is a monic monomial.
struct MonomialFrac {
  Polynomial num;
  Exps den;
};

void cancel_frac(MonomialFrac& fr) {
  if (fr.num.is_zero()) return;
  Exps content = fr.num.monomial_content();
  Exps common(fr.den.size(), 0);
  bool any = false;
  for (std::size_t i = 0; i < fr.den.size(); ++i) {
    common[i] = std::min(content[i], fr.den[i]);
    if (common[i] > 0) any = true;
  }
  if (!any) return;
  fr.num = fr.num.divide_by_monomial(common);
  for (std::size_t i = 0; i < fr.den.size(); ++i) fr.den[i] -= common[i];
}

// Substitute fracs[j] for the variable at index woff + j throughout P. The
// result is the fraction over the common denominator prod den_j^{deg_j}.
MonomialFrac substitute_fracs(const Polynomial& P,
                              const std::vector<MonomialFrac>& fracs,
                              int woff) {
  const VarSetPtr ring = P.vars();
  const int nw = static_cast<int>(fracs.size());
  std::vector<long> degs(static_cast<std::size_t>(nw), 0);
  for (int j = 0; j < nw; ++j) degs[static_cast<std::size_t>(j)] =
      std::max<long>(P.degree_in(woff + j), 0);

  Exps D(static_cast<std::size_t>(ring->size()), 0);
  for (int j = 0; j < nw; ++j) {
    for (std::size_t i = 0; i < D.size(); ++i)
      D[i] += static_cast<std::int32_t>(degs[static_cast<std::size_t>(j)]) *
              fracs[static_cast<std::size_t>(j)].den[i];
  }

  // Cache powers of each numerator.
  std::vector<std::vector<Polynomial>> numpow(static_cast<std::size_t>(nw));
  for (int j = 0; j < nw; ++j) {
    numpow[static_cast<std::size_t>(j)].push_back(
        Polynomial::constant(ring, Rat(1)));
    for (long e = 1; e <= degs[static_cast<std::size_t>(j)]; ++e)
      numpow[static_cast<std::size_t>(j)].push_back(
          numpow[static_cast<std::size_t>(j)].back() *
          fracs[static_cast<std::size_t>(j)].num);
  }

  Polynomial num = Polynomial::zero(ring);
  for (const auto& [e, c] : P.terms()) {
    Exps base = e;
    Exps fill(static_cast<std::size_t>(ring->size()), 0);
    for (int j = 0; j < nw; ++j) {
      std::int32_t ej = base[static_cast<std::size_t>(woff + j)];
      base[static_cast<std::size_t>(woff + j)] = 0;
      for (std::size_t i = 0; i < fill.size(); ++i)
        fill[i] += static_cast<std::int32_t>(
                       degs[static_cast<std::size_t>(j)] - ej) *
                   fracs[static_cast<std::size_t>(j)].den[i];
    }
    Polynomial t = Polynomial::monomial(ring, base, c);
    for (int j = 0; j < nw; ++j) {
      std::int32_t ej = e[static_cast<std::size_t>(woff + j)];
      t *= numpow[static_cast<std::size_t>(j)][static_cast<std::size_t>(ej)];
    }
    t *= Polynomial::monomial(ring, fill, Rat(1));
    num += t;
  }
  return {num, D};
}

// Canonical form: cancel monomial content shared with the denominator
// (sound away from the measure-zero locus where a diagonal entry vanishes)
// and normalize the sign so the lexicographically first term is positive
// (multiplying by -1 never changes a valuation).
void canonicalize_condition(ConeCondition& c) {
  if (c.num.is_zero()) return;
  const Exps de = c.den.terms().begin()->first;
  Exps content = c.num.monomial_content();
  Exps common(de.size(), 0);
  bool any = false;
  for (std::size_t i = 0; i < de.size(); ++i) {
    common[i] = std::min(content[i], de[i]);
    if (common[i] > 0) any = true;
  }
  if (any) {
    c.num = c.num.divide_by_monomial(common);
    Exps nde = de;
    for (std::size_t i = 0; i < de.size(); ++i) nde[i] -= common[i];
    c.den = Polynomial::monomial(c.den.vars(), nde, Rat(1));
  }
  if (c.num.terms().begin()->second < 0) c.num = -c.num;
}

void prune_and_dedup(std::vector<ConeCondition>& conds) {
  std::vector<ConeCondition> out;
  for (const ConeCondition& c : conds) {
    if (condition_trivially_true(c)) continue;
    bool seen = false;
    for (const ConeCondition& o : out) {
      if (same_condition(c, o)) {
        seen = true;
        break;
      }
    }
    if (!seen) out.push_back(c);
  }
  conds = std::move(out);
}

void check_den_monomial(const Polynomial& den,
                        const std::vector<int>& diag_index) {
  if (!den.is_term())
    throw InternalError("condition denominator is not a monomial: " +
                        den.to_string());
  const auto& [e, c] = *den.terms().begin();
  if (c != 1)
    throw InternalError("condition denominator is not monic: " +
                        den.to_string());
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (std::find(diag_index.begin(), diag_index.end(), static_cast<int>(i)) ==
        diag_index.end()) {
      throw InternalError(
          "condition denominator involves a non-diagonal variable: " +
          den.to_string());
    }
  }
}

}  // namespace

bool same_condition(const ConeCondition& a, const ConeCondition& b) {
  return a.num == b.num && a.den == b.den;
}

bool condition_trivially_true(const ConeCondition& c) {
  if (c.num.is_zero()) return true;
  const Exps den_e = c.den.terms().begin()->first;
  Exps content = c.num.monomial_content();
  for (std::size_t i = 0; i < den_e.size(); ++i) {
    if (content[i] < den_e[i]) return false;
  }
  Polynomial q = c.num.divide_by_monomial(den_e);
  return q.denominator_lcm() == 1;
}

std::string tvar_name(int i, int j) {
  return "T" + std::to_string(i) + std::to_string(j);
}

int tvar_offset(int h, int i, int j) {
  if (i < 1 || j < i || j > h) throw InternalError("tvar_offset out of range");
  // Row i starts after the h + (h-1) + ... + (h-i+2) entries of earlier rows.
  int before = (i - 1) * h - ((i - 1) * (i - 2)) / 2;
  return before + (j - i);
}

VarSetPtr make_t_vars(int h) {
  std::vector<std::string> names;
  for (int i = 1; i <= h; ++i)
    for (int j = i; j <= h; ++j) names.push_back(tvar_name(i, j));
  return make_vars(names);
}

MembershipData membership_conditions(const MalcevPresentation& N) {
  const int h = N.h;
  const int tcount = h * (h + 1) / 2;
  const int zoff = tcount;
  const int woff = tcount + h;

  std::vector<std::string> names;
  for (int i = 1; i <= h; ++i)
    for (int j = i; j <= h; ++j) names.push_back(tvar_name(i, j));
  for (int i = 1; i <= h; ++i) names.push_back("Z" + std::to_string(i));
  for (int i = 1; i < h; ++i) names.push_back("W" + std::to_string(i));
  VarSetPtr amb = make_vars(names);
  std::vector<int> tmap = identity_map(tcount);

  // k[i]: coordinates of the residual word after eliminating the first
  // i-1 digits; entries below i vanish identically.
  std::vector<std::vector<Polynomial>> k(static_cast<std::size_t>(h) + 1);
  for (int i = 1; i <= h; ++i)
    k[1].push_back(Polynomial::variable(amb, zoff + i - 1));

  for (int i = 2; i <= h; ++i) {
    std::vector<Polynomial> args = row_tuple(amb, h, i - 1, tmap);
    args.push_back(Polynomial::variable(amb, woff + i - 2));
    std::vector<Polynomial> gi = compose_tuple(N.pow, args);
    for (int j = 1; j < i - 1; ++j) {
      if (!gi[static_cast<std::size_t>(j - 1)].is_zero())
        throw StructuralError(
            "power word of row " + std::to_string(i - 1) +
            " has a nonvanishing early coordinate; presentation '" + N.label +
            "' is not triangular");
    }
    Polynomial expect =
        Polynomial::variable(amb,
                             tvar_offset(h, i - 1, i - 1)) *
        Polynomial::variable(amb, woff + i - 2);
    if (gi[static_cast<std::size_t>(i - 2)] != expect)
      throw StructuralError("leading power coordinate of row " +
                            std::to_string(i - 1) + " is not T*W in '" +
                            N.label + "'");

    std::vector<Polynomial> gs = gi;
    for (int j = 1; j < i; ++j)
      gs[static_cast<std::size_t>(j - 1)] = Polynomial::zero(amb);
    std::vector<Polynomial> inv_args = gs;
    inv_args.push_back(Polynomial::constant(amb, Rat(-1)));
    std::vector<Polynomial> ginv = compose_tuple(N.pow, inv_args);

    std::vector<Polynomial> ks = k[static_cast<std::size_t>(i - 1)];
    for (int j = 1; j < i - 1; ++j) {
      if (!ks[static_cast<std::size_t>(j - 1)].is_zero())
        throw InternalError("residual word gained an early coordinate");
    }
    ks[static_cast<std::size_t>(i - 2)] = Polynomial::zero(amb);

    k[static_cast<std::size_t>(i)] =
        compose_tuple(N.mul, concat_polys(ginv, ks));
    for (int j = 1; j < i; ++j) {
      if (!k[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)]
               .is_zero())
        throw StructuralError(
            "elimination left a nonvanishing coordinate below " +
            std::to_string(i) + " in '" + N.label + "'");
    }
  }

  // Fractions v_i = k_i,i (with earlier W substituted) / T_ii.
  std::vector<MonomialFrac> v;
  for (int i = 1; i <= h; ++i) {
    const Polynomial& kii =
        k[static_cast<std::size_t>(i)][static_cast<std::size_t>(i - 1)];
    MonomialFrac vi = substitute_fracs(kii, v, woff);
    vi.den[static_cast<std::size_t>(tvar_offset(h, i, i))] += 1;
    cancel_frac(vi);
    v.push_back(std::move(vi));
  }

  // Re-home onto the (T, Z) ring.
  MembershipData M;
  M.h = h;
  std::vector<std::string> tz(names.begin(), names.begin() + tcount + h);
  M.vars = make_vars(tz);
  // Full-arity map; the W slots never carry exponents (asserted below).
  std::vector<int> prefix = identity_map(tcount + h);
  prefix.resize(static_cast<std::size_t>(amb->size()), 0);
  for (int i = 0; i < h; ++i) {
    const MonomialFrac& fr = v[static_cast<std::size_t>(i)];
    for (int wv = woff; wv < amb->size(); ++wv) {
      if (fr.num.degree_in(wv) > 0)
        throw InternalError("membership numerator kept an eliminated W variable");
      if (fr.den[static_cast<std::size_t>(wv)] != 0)
        throw InternalError("membership denominator kept an eliminated W variable");
    }
    ConeCondition c;
    c.num = fr.num.rename(M.vars, prefix);
    Exps de(static_cast<std::size_t>(tcount + h), 0);
    for (int o = 0; o < tcount; ++o)
      de[static_cast<std::size_t>(o)] = fr.den[static_cast<std::size_t>(o)];
    for (int o = tcount; o < tcount + h; ++o) {
      if (fr.den[static_cast<std::size_t>(o)] != 0)
        throw InternalError("membership denominator involves a Z variable");
    }
    c.den = Polynomial::monomial(M.vars, de, Rat(1));
    canonicalize_condition(c);
    M.conds.push_back(std::move(c));
  }
  return M;
}

std::vector<ConeCondition> instantiate_membership(
    const MembershipData& M, const VarSetPtr& target,
    const std::vector<int>& t_map, const std::vector<Polynomial>& z) {
  const int h = M.h;
  const int tcount = h * (h + 1) / 2;
  if (static_cast<int>(z.size()) != h)
    throw InternalError("membership instance needs h word coordinates");

  std::vector<Polynomial> args;
  args.reserve(static_cast<std::size_t>(tcount + h));
  for (int o = 0; o < tcount; ++o)
    args.push_back(
        Polynomial::variable(target, t_map[static_cast<std::size_t>(o)]));
  for (int i = 0; i < h; ++i) args.push_back(z[static_cast<std::size_t>(i)]);

  std::vector<ConeCondition> out;
  for (const ConeCondition& c : M.conds) {
    ConeCondition inst;
    inst.num = c.num.compose(args);
    const Exps& de = c.den.terms().begin()->first;
    Exps te(static_cast<std::size_t>(target->size()), 0);
    for (int o = 0; o < tcount; ++o)
      te[static_cast<std::size_t>(t_map[static_cast<std::size_t>(o)])] +=
          de[static_cast<std::size_t>(o)];
    inst.den = Polynomial::monomial(target, te, Rat(1));
    canonicalize_condition(inst);
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<int> ConeConditionSystem::weight_const() const {
  std::vector<int> w;
  for (int i = 1; i <= h; ++i) w.push_back(-(i + k_size - 1));
  return w;
}

namespace {

// The subgroup-goodness conditions over `tvars`: recursion on the suffix
// group plus the commutator memberships x^{c(t_1, t_j)} in the span of rows
// j+1..h.
std::vector<ConeCondition> subgroup_core(const MalcevPresentation& N,
                                         const VarSetPtr& tvars) {
  const int h = N.h;
  std::vector<ConeCondition> out;
  if (h == 1) return out;

  // Inner recursion on the suffix presentation, re-embedded as rows 2..h.
  {
    MalcevPresentation N2 = suffix_presentation(N, 2);
    VarSetPtr inner_vars = make_t_vars(h - 1);
    std::vector<ConeCondition> inner = subgroup_core(N2, inner_vars);
    std::vector<int> emb(static_cast<std::size_t>((h - 1) * h / 2));
    for (int a = 1; a <= h - 1; ++a)
      for (int b = a; b <= h - 1; ++b)
        emb[static_cast<std::size_t>(tvar_offset(h - 1, a, b))] =
            tvar_offset(h, a + 1, b + 1);
    for (const ConeCondition& c : inner) {
      ConeCondition e;
      e.num = c.num.rename(tvars, emb);
      const Exps& de = c.den.terms().begin()->first;
      Exps te(static_cast<std::size_t>(tvars->size()), 0);
      for (std::size_t o = 0; o < de.size(); ++o)
        te[static_cast<std::size_t>(emb[o])] += de[o];
      e.den = Polynomial::monomial(tvars, te, Rat(1));
      out.push_back(std::move(e));
    }
  }

  std::vector<int> tmap = identity_map(h * (h + 1) / 2);
  std::vector<Polynomial> row1 = row_tuple(tvars, h, 1, tmap);
  for (int j = 2; j <= h; ++j) {
    std::vector<Polynomial> rowj = row_tuple(tvars, h, j, tmap);
    std::vector<Polynomial> zfull =
        compose_tuple(N.comm, concat_polys(row1, rowj));
    for (int kcoord = 1; kcoord <= j; ++kcoord) {
      if (!zfull[static_cast<std::size_t>(kcoord - 1)].is_zero())
        throw StructuralError(
            "commutator of rows 1 and " + std::to_string(j) +
            " has a nonvanishing early coordinate in '" + N.label + "'");
    }
    if (j == h) {
      for (int kcoord = 1; kcoord <= h; ++kcoord) {
        if (!zfull[static_cast<std::size_t>(kcoord - 1)].is_zero())
          throw StructuralError("commutator with the last row does not vanish");
      }
      continue;
    }
    MalcevPresentation Nj = suffix_presentation(N, j + 1);
    MembershipData Mj = membership_conditions(Nj);
    const int hj = h - j;
    std::vector<int> t_map(static_cast<std::size_t>(hj * (hj + 1) / 2));
    for (int a = 1; a <= hj; ++a)
      for (int b = a; b <= hj; ++b)
        t_map[static_cast<std::size_t>(tvar_offset(hj, a, b))] =
            tvar_offset(h, a + j, b + j);
    std::vector<Polynomial> z(zfull.begin() + j, zfull.end());
    std::vector<ConeCondition> conds =
        instantiate_membership(Mj, tvars, t_map, z);
    out.insert(out.end(), conds.begin(), conds.end());
  }
  return out;
}

// The extra memberships making B_t normal: x^{c(e_i, t_j)} in B_t for all
// i, j.
std::vector<ConeCondition> normal_extras(const MalcevPresentation& N,
                                         const VarSetPtr& tvars,
                                         const std::vector<int>& t_map) {
  const int h = N.h;
  MembershipData M = membership_conditions(N);
  std::vector<ConeCondition> out;
  for (int i = 1; i <= h; ++i) {
    Coords ei(static_cast<std::size_t>(h), Int(0));
    ei[static_cast<std::size_t>(i - 1)] = 1;
    std::vector<Polynomial> eit = constant_tuple(tvars, ei);
    for (int j = 1; j <= h; ++j) {
      std::vector<Polynomial> rowj = row_tuple(tvars, h, j, t_map);
      std::vector<Polynomial> z =
          compose_tuple(N.comm, concat_polys(eit, rowj));
      std::vector<ConeCondition> conds =
          instantiate_membership(M, tvars, t_map, z);
      out.insert(out.end(), conds.begin(), conds.end());
    }
  }
  return out;
}

}  // namespace

ConeConditionSystem good_basis_conditions(const MalcevPresentation& N,
                                          Variant variant) {
  const int h = N.h;
  ConeConditionSystem S;
  S.vars = make_t_vars(h);
  S.h = h;
  S.k_size = 1;
  S.k_elems = {0};
  for (int i = 1; i <= h; ++i)
    S.diag_index.push_back(tvar_offset(h, i, i));
  S.variant = variant;
  S.label = N.label + ":" + variant_name(variant);

  std::vector<ConeCondition> conds = subgroup_core(N, S.vars);
  if (variant == Variant::Normal) {
    std::vector<ConeCondition> extra =
        normal_extras(N, S.vars, identity_map(h * (h + 1) / 2));
    conds.insert(conds.end(), extra.begin(), extra.end());
  }
  prune_and_dedup(conds);
  for (const ConeCondition& c : conds) check_den_monomial(c.den, S.diag_index);
  S.conditions = std::move(conds);
  return S;
}

ConeConditionSystem relative_conditions(const VirtuallyTauGroup& V,
                                        const FiniteSubgroup& K,
                                        Variant variant) {
  const MalcevPresentation& N = V.N;
  const int h = N.h;
  const int tcount = h * (h + 1) / 2;
  if (variant == Variant::Normal && !K.normal)
    throw UsageError("normal counting requires K normal in F");

  StructureWords sw = structure_words(V);

  // Ring: T entries, then V<f>_<i> for f in K \ {1}.
  std::vector<std::string> names;
  for (int i = 1; i <= h; ++i)
    for (int j = i; j <= h; ++j) names.push_back(tvar_name(i, j));
  std::vector<int> kelems = K.elems;
  std::vector<int> voffset(static_cast<std::size_t>(V.F.order), -1);
  for (int f : kelems) {
    if (f == 0) continue;
    voffset[static_cast<std::size_t>(f)] = static_cast<int>(names.size());
    for (int i = 1; i <= h; ++i)
      names.push_back("V" + std::to_string(f) + "_" + std::to_string(i));
  }
  VarSetPtr ring = make_vars(names);

  ConeConditionSystem S;
  S.vars = ring;
  S.h = h;
  S.k_size = static_cast<int>(kelems.size());
  S.k_elems = kelems;
  for (int i = 1; i <= h; ++i)
    S.diag_index.push_back(tvar_offset(h, i, i));
  S.variant = variant;
  S.label = V.label + ":K=" + K.describe() + ":" + variant_name(variant);

  std::vector<int> t_map = identity_map(tcount);
  MembershipData M = membership_conditions(N);

  auto v_tuple = [&](int f) -> std::vector<Polynomial> {
    if (f == 0) {
      return std::vector<Polynomial>(static_cast<std::size_t>(h),
                                     Polynomial::zero(ring));
    }
    int off = voffset[static_cast<std::size_t>(f)];
    if (off < 0) throw InternalError("coset word for an element outside K");
    std::vector<Polynomial> out;
    for (int i = 0; i < h; ++i)
      out.push_back(Polynomial::variable(ring, off + i));
    return out;
  };
  auto mulw = [&](const std::vector<Polynomial>& a,
                  const std::vector<Polynomial>& b) {
    return compose_tuple(N.mul, concat_polys(a, b));
  };
  auto invw = [&](const std::vector<Polynomial>& a) {
    std::vector<Polynomial> args = a;
    args.push_back(Polynomial::constant(ring, Rat(-1)));
    return compose_tuple(N.pow, args);
  };
  auto p_word = [&](int f, const std::vector<Polynomial>& a) {
    return compose_tuple(sw.p[static_cast<std::size_t>(f)], a);
  };
  auto n_const = [&](int f, int f2) {
    return constant_tuple(ring, sw.n[static_cast<std::size_t>(f)]
                                    [static_cast<std::size_t>(f2)]);
  };
  auto add_membership = [&](const std::vector<Polynomial>& z,
                            std::vector<ConeCondition>& acc) {
    std::vector<ConeCondition> conds =
        instantiate_membership(M, ring, t_map, z);
    acc.insert(acc.end(), conds.begin(), conds.end());
  };

  std::vector<ConeCondition> conds;

  // Goodness of the lattice part. Subgroup-goodness suffices for both
  // variants; the normal variant regains normality of B_t through the
  // commutator memberships added below.
  {
    ConeConditionSystem good = good_basis_conditions(
        N, variant == Variant::Normal ? Variant::Normal : Variant::Subgroup);
    std::vector<int> emb = identity_map(tcount);
    for (const ConeCondition& c : good.conditions) {
      ConeCondition e;
      e.num = c.num.rename(ring, emb);
      const Exps& de = c.den.terms().begin()->first;
      Exps te(static_cast<std::size_t>(ring->size()), 0);
      for (std::size_t o = 0; o < de.size(); ++o)
        te[o] += de[o];
      e.den = Polynomial::monomial(ring, te, Rat(1));
      conds.push_back(std::move(e));
    }
  }

  // (1) Rows are normalized by the coset representatives:
  // v_f^-1 p_f(t_i) v_f in B_t.
  for (int f : kelems) {
    if (f == 0) continue;
    std::vector<Polynomial> vf = v_tuple(f);
    for (int i = 1; i <= h; ++i) {
      std::vector<Polynomial> z =
          mulw(mulw(invw(vf), p_word(f, row_tuple(ring, h, i, t_map))), vf);
      add_membership(z, conds);
    }
  }

  // (2) Representatives multiply into the right coset:
  // v_{ff'}^-1 n_{ff'} p_{f'}(v_f) v_{f'} in B_t, for all pairs in K \ {1}.
  for (int f : kelems) {
    if (f == 0) continue;
    for (int f2 : kelems) {
      if (f2 == 0) continue;
      int w = V.F.mul(f, f2);
      std::vector<Polynomial> z = mulw(
          mulw(mulw(invw(v_tuple(w)), n_const(f, f2)),
               p_word(f2, v_tuple(f))),
          v_tuple(f2));
      add_membership(z, conds);
    }
  }

  if (variant == Variant::Normal) {
    // (5) B_t is stable under conjugation by every transversal element:
    // p_f(t_i) in B_t for all f in F \ {1}.
    for (int f = 1; f < V.F.order; ++f) {
      for (int i = 1; i <= h; ++i) {
        add_membership(p_word(f, row_tuple(ring, h, i, t_map)), conds);
      }
    }

    // (6) Cosets are stable under conjugation by the lattice generators:
    // v_f^-1 l_{if} v_f x_i^-1 in B_t.
    for (int f : kelems) {
      if (f == 0) continue;
      std::vector<Polynomial> vf = v_tuple(f);
      for (int i = 1; i <= h; ++i) {
        Coords ei(static_cast<std::size_t>(h), Int(0));
        ei[static_cast<std::size_t>(i - 1)] = 1;
        std::vector<Polynomial> z = mulw(
            mulw(mulw(invw(vf),
                      constant_tuple(ring, sw.l[static_cast<std::size_t>(f)]
                                               [static_cast<std::size_t>(i - 1)])),
                 vf),
            invw(constant_tuple(ring, ei)));
        add_membership(z, conds);
      }
    }

    // (7) Cosets are stable under conjugation by the transversal: for
    // f in F \ {1} and f' in K \ {1}, with w = f f' f^-1,
    // v_w^-1 n_{f, f'f^-1} n_{f', f^-1} p_{f^-1}(v_{f'}) n_{f,f^-1}^-1 in B_t.
    for (int f = 1; f < V.F.order; ++f) {
      int fi = V.F.inv(f);
      for (int f2 : kelems) {
        if (f2 == 0) continue;
        int w = V.F.mul(V.F.mul(f, f2), fi);
        std::vector<Polynomial> z = mulw(
            mulw(mulw(mulw(invw(v_tuple(w)), n_const(f, V.F.mul(f2, fi))),
                      n_const(f2, fi)),
                 p_word(fi, v_tuple(f2))),
            invw(n_const(f, fi)));
        add_membership(z, conds);
      }
    }
  }

  prune_and_dedup(conds);
  for (const ConeCondition& c : conds) check_den_monomial(c.den, S.diag_index);
  S.conditions = std::move(conds);
  return S;
}

ConeIntegralData emit_cone_data(const ConeConditionSystem& S) {
  ConeIntegralData D;
  D.vars = S.vars;
  D.shift = S.shift();
  D.normalization_h = S.normalization();
  D.diag_index = S.diag_index;

  Exps f0e(static_cast<std::size_t>(S.vars->size()), 0);
  Exps g0e(static_cast<std::size_t>(S.vars->size()), 0);
  for (int i = 1; i <= S.h; ++i) {
    f0e[static_cast<std::size_t>(
        S.diag_index[static_cast<std::size_t>(i - 1)])] = 1;
    g0e[static_cast<std::size_t>(
        S.diag_index[static_cast<std::size_t>(i - 1)])] =
        static_cast<std::int32_t>(S.h - i);
    D.diag_weight.push_back(S.h - i);
  }
  D.f0 = Polynomial::monomial(S.vars, f0e, Rat(1));
  D.g0 = Polynomial::monomial(S.vars, g0e, Rat(1));

  for (const ConeCondition& c : S.conditions) {
    D.pairs.emplace_back(c.den, c.num);
  }

  // Exponent bookkeeping: the weight of |t_ii| after shifting s by
  // `shift` and multiplying by |g0| must match the declared constants.
  std::vector<int> wc = S.weight_const();
  for (int i = 1; i <= S.h; ++i) {
    int got = -D.shift + (S.h - i);
    if (got != wc[static_cast<std::size_t>(i - 1)])
      throw InternalError("cone data weight bookkeeping failed");
  }
  return D;
}

}  // namespace conezeta
