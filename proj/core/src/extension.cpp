#include "conezeta/extension.hpp"

#include <algorithm>
#include <random>
#include <set>
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

std::vector<Polynomial> variable_tuple(const VarSetPtr& ring, int from,
                                       int count) {
  std::vector<Polynomial> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    out.push_back(Polynomial::variable(ring, from + i));
  return out;
}

void check_extension_shape(const VirtuallyTauGroup& V) {
  const int h = V.N.h;
  const int m = V.F.order;
  if (static_cast<int>(V.sigma.size()) != m)
    throw StructuralError("extension '" + V.label +
                          "': sigma must have one tuple per F element");
  for (const auto& tup : V.sigma) {
    if (static_cast<int>(tup.size()) != h)
      throw StructuralError("extension '" + V.label +
                            "': sigma tuples must have h coordinates");
  }
  if (static_cast<int>(V.psi.size()) != m)
    throw StructuralError("extension '" + V.label +
                          "': psi must be an order x order array");
  for (const auto& row : V.psi) {
    if (static_cast<int>(row.size()) != m)
      throw StructuralError("extension '" + V.label +
                            "': psi must be an order x order array");
    for (const Coords& c : row) {
      if (static_cast<int>(c.size()) != h)
        throw StructuralError("extension '" + V.label +
                              "': psi values must have h coordinates");
    }
  }
}

}  // namespace

// ------------------------------------------------------------- FiniteGroup

FiniteGroup FiniteGroup::trivial() {
  FiniteGroup F;
  F.order = 1;
  F.table = {{0}};
  F.inverse = {0};
  F.label = "C1";
  return F;
}

FiniteGroup FiniteGroup::cyclic(int n) {
  if (n < 1 || n > 512) throw UsageError("cyclic order must be in 1..512");
  std::vector<std::vector<int>> t(static_cast<std::size_t>(n),
                                  std::vector<int>(static_cast<std::size_t>(n)));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  return from_table(std::move(t), "C" + std::to_string(n));
}

FiniteGroup FiniteGroup::symmetric3() {
  // Permutations of {0,1,2} in a fixed listing; entry i*3+j of each row is
  // the image of j.
  const int perms[6][3] = {{0, 1, 2}, {1, 0, 2}, {2, 1, 0},
                           {0, 2, 1}, {1, 2, 0}, {2, 0, 1}};
  auto find = [&perms](const int p[3]) {
    for (int k = 0; k < 6; ++k) {
      if (perms[k][0] == p[0] && perms[k][1] == p[1] && perms[k][2] == p[2])
        return k;
    }
    throw InternalError("symmetric3: composition left the listing");
  };
  std::vector<std::vector<int>> t(6, std::vector<int>(6));
  for (int a = 0; a < 6; ++a) {
    for (int b = 0; b < 6; ++b) {
      int c[3];
      for (int j = 0; j < 3; ++j) c[j] = perms[a][perms[b][j]];
      t[a][b] = find(c);
    }
  }
  return from_table(std::move(t), "S3");
}

FiniteGroup FiniteGroup::from_table(std::vector<std::vector<int>> table,
                                    std::string label) {
  FiniteGroup F;
  F.order = static_cast<int>(table.size());
  if (F.order < 1 || F.order > 512)
    throw StructuralError("finite group order must be in 1..512");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != F.order)
      throw StructuralError("finite group table must be square");
  }
  F.table = std::move(table);
  F.label = std::move(label);

  const int m = F.order;
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      int v = F.table[a][b];
      if (v < 0 || v >= m)
        throw StructuralError("finite group table entry out of range");
    }
  }
  for (int b = 0; b < m; ++b) {
    if (F.table[0][b] != b || F.table[b][0] != b)
      throw StructuralError("finite group: element 0 must be the identity");
  }
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      for (int c = 0; c < m; ++c) {
        if (F.table[F.table[a][b]][c] != F.table[a][F.table[b][c]])
          throw StructuralError("finite group table is not associative");
      }
    }
  }
  F.inverse.assign(static_cast<std::size_t>(m), -1);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      if (F.table[a][b] == 0) {
        if (F.table[b][a] != 0)
          throw StructuralError("finite group: one-sided inverse");
        F.inverse[static_cast<std::size_t>(a)] = b;
      }
    }
    if (F.inverse[static_cast<std::size_t>(a)] < 0)
      throw StructuralError("finite group: missing inverse");
  }
  return F;
}

bool FiniteSubgroup::contains(int g) const {
  return std::binary_search(elems.begin(), elems.end(), g);
}

std::string FiniteSubgroup::describe() const {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (i) os << ",";
    os << elems[i];
  }
  os << "}";
  return os.str();
}

std::vector<FiniteSubgroup> fin_subgroups(const FiniteGroup& F,
                                          Variant variant) {
  const int m = F.order;
  auto closure = [&F](std::vector<int> gens) {
    std::set<int> H(gens.begin(), gens.end());
    H.insert(0);
    bool grew = true;
    while (grew) {
      grew = false;
      std::vector<int> cur(H.begin(), H.end());
      for (int a : cur) {
        for (int b : cur) {
          if (H.insert(F.mul(a, b)).second) grew = true;
        }
      }
    }
    return std::vector<int>(H.begin(), H.end());
  };

  std::set<std::vector<int>> found;
  std::vector<std::vector<int>> queue;
  std::vector<int> trivial_sub = {0};
  found.insert(trivial_sub);
  queue.push_back(trivial_sub);
  while (!queue.empty()) {
    std::vector<int> H = queue.back();
    queue.pop_back();
    for (int g = 1; g < m; ++g) {
      if (std::binary_search(H.begin(), H.end(), g)) continue;
      std::vector<int> gens = H;
      gens.push_back(g);
      std::vector<int> H2 = closure(gens);
      if (found.insert(H2).second) queue.push_back(H2);
    }
  }

  std::vector<FiniteSubgroup> out;
  for (const auto& elems : found) {
    FiniteSubgroup S;
    S.elems = elems;
    S.index = m / static_cast<int>(elems.size());
    S.normal = true;
    for (int g = 0; g < m && S.normal; ++g) {
      for (int x : elems) {
        if (!std::binary_search(elems.begin(), elems.end(),
                                F.mul(F.mul(g, x), F.inv(g)))) {
          S.normal = false;
          break;
        }
      }
    }
    if (variant == Variant::Normal && !S.normal) continue;
    out.push_back(std::move(S));
  }
  std::sort(out.begin(), out.end(),
            [](const FiniteSubgroup& a, const FiniteSubgroup& b) {
              if (a.elems.size() != b.elems.size())
                return a.elems.size() < b.elems.size();
              return a.elems < b.elems;
            });
  return out;
}

// --------------------------------------------------------------- extension

bool ext_equal(const ExtElement& a, const ExtElement& b) {
  return a.f == b.f && a.n == b.n;
}

ExtElement ext_identity(const VirtuallyTauGroup& V) {
  return {mal_identity(V.N), 0};
}

Coords sigma_apply(const VirtuallyTauGroup& V, int f, const Coords& a) {
  QCoords q;
  q.reserve(a.size());
  for (const Int& x : a) q.emplace_back(x);
  QCoords img;
  img.reserve(V.sigma[static_cast<std::size_t>(f)].size());
  for (const Polynomial& p : V.sigma[static_cast<std::size_t>(f)])
    img.push_back(p.eval(q));
  Coords out;
  out.reserve(img.size());
  for (const Rat& x : img) {
    if (!is_integer(x))
      throw IntegralityError("sigma produced a non-integer coordinate in '" +
                             V.label + "'");
    out.push_back(numerator(x));
  }
  return out;
}

ExtElement ext_multiply(const VirtuallyTauGroup& V, const ExtElement& a,
                        const ExtElement& b) {
  Coords n = mal_multiply(V.N, a.n, sigma_apply(V, a.f, b.n));
  n = mal_multiply(V.N, n,
                   V.psi[static_cast<std::size_t>(a.f)]
                        [static_cast<std::size_t>(b.f)]);
  return {std::move(n), V.F.mul(a.f, b.f)};
}

ExtElement ext_inverse(const VirtuallyTauGroup& V, const ExtElement& a) {
  const int fi = V.F.inv(a.f);
  const Coords& psi_fi_f =
      V.psi[static_cast<std::size_t>(fi)][static_cast<std::size_t>(a.f)];
  const Coords& psi_f_fi =
      V.psi[static_cast<std::size_t>(a.f)][static_cast<std::size_t>(fi)];
  Coords u = mal_multiply(V.N, mal_inverse(V.N, a.n),
                          mal_inverse(V.N, psi_f_fi));
  Coords b = mal_multiply(V.N, mal_inverse(V.N, psi_fi_f),
                          sigma_apply(V, fi, u));
  b = mal_multiply(V.N, b, psi_fi_f);
  ExtElement inv{std::move(b), fi};
  ExtElement id = ext_identity(V);
  if (!ext_equal(ext_multiply(V, a, inv), id) ||
      !ext_equal(ext_multiply(V, inv, a), id)) {
    throw InternalError("ext_inverse failed its defining equations in '" +
                        V.label + "'");
  }
  return inv;
}

VerificationReport verify_cocycle(const VirtuallyTauGroup& V, long bound,
                                  int samples, unsigned long seed) {
  VerificationReport rep;
  auto add = [&rep](const std::string& law, bool pass,
                    const std::string& detail = "") {
    rep.checks.push_back({law, pass, detail});
  };

  try {
    check_extension_shape(V);
    add("shape", true);
  } catch (const Error& e) {
    add("shape", false, e.what());
    return rep;
  }

  const int h = V.N.h;
  const int m = V.F.order;
  const VarSetPtr ring = V.x_vars;
  std::vector<Polynomial> xa = variable_tuple(ring, 0, h);

  // sigma_1 is the identity tuple.
  {
    bool ok = true;
    for (int i = 0; i < h; ++i)
      if (V.sigma[0][static_cast<std::size_t>(i)] != xa[static_cast<std::size_t>(i)]) ok = false;
    add("sigma-identity", ok);
  }

  // Normalization psi(1, f) = psi(f, 1) = 0.
  {
    bool ok = true;
    Coords zero = mal_identity(V.N);
    for (int f = 0; f < m; ++f) {
      if (V.psi[0][static_cast<std::size_t>(f)] != zero ||
          V.psi[static_cast<std::size_t>(f)][0] != zero)
        ok = false;
    }
    add("psi-normalized", ok);
  }

  // Each sigma_f respects multiplication: sigma_f(mul(X, Y)) ==
  // mul(sigma_f(X), sigma_f(Y)) as polynomials over (X, Y).
  {
    bool ok = true;
    std::string detail;
    std::vector<Polynomial> X = variable_tuple(V.N.xy_vars, 0, h);
    std::vector<Polynomial> Y = variable_tuple(V.N.xy_vars, h, h);
    for (int f = 0; f < m && ok; ++f) {
      // Rewrite sigma_f over the (X, Y) ring twice: applied to X and to Y.
      std::vector<int> to_x(static_cast<std::size_t>(h)),
          to_y(static_cast<std::size_t>(h));
      for (int i = 0; i < h; ++i) {
        to_x[static_cast<std::size_t>(i)] = i;
        to_y[static_cast<std::size_t>(i)] = h + i;
      }
      std::vector<Polynomial> sx, sy;
      for (const Polynomial& p : V.sigma[static_cast<std::size_t>(f)]) {
        sx.push_back(p.rename(V.N.xy_vars, to_x));
        sy.push_back(p.rename(V.N.xy_vars, to_y));
      }
      // sigma_f(mul(X,Y)): substitute the mul tuple into sigma_f, whose
      // h arguments are the mul coordinates.
      std::vector<Polynomial> sf_of_mul;
      for (const Polynomial& p : V.sigma[static_cast<std::size_t>(f)])
        sf_of_mul.push_back(p.compose(V.N.mul));
      std::vector<Polynomial> mul_of_sf =
          compose_tuple(V.N.mul, concat_polys(sx, sy));
      for (int i = 0; i < h; ++i) {
        if (sf_of_mul[static_cast<std::size_t>(i)] !=
            mul_of_sf[static_cast<std::size_t>(i)]) {
          ok = false;
          detail = "sigma_" + std::to_string(f) + " coordinate " +
                   std::to_string(i + 1);
          break;
        }
      }
    }
    add("sigma-homomorphism", ok, detail);
  }

  // Twisted-action law: sigma_f(sigma_f'(X)) ==
  // psi(f,f') * sigma_{ff'}(X) * psi(f,f')^{-1} as polynomials.
  {
    bool ok = true;
    std::string detail;
    for (int f = 0; f < m && ok; ++f) {
      for (int f2 = 0; f2 < m && ok; ++f2) {
        std::vector<Polynomial> lhs =
            compose_tuple(V.sigma[static_cast<std::size_t>(f)],
                          V.sigma[static_cast<std::size_t>(f2)]);
        const Coords& psi =
            V.psi[static_cast<std::size_t>(f)][static_cast<std::size_t>(f2)];
        Coords psi_inv = mal_inverse(V.N, psi);
        int ff2 = V.F.mul(f, f2);
        std::vector<Polynomial> rhs = compose_tuple(
            V.N.mul,
            concat_polys(constant_tuple(ring, psi),
                         V.sigma[static_cast<std::size_t>(ff2)]));
        rhs = compose_tuple(
            V.N.mul, concat_polys(rhs, constant_tuple(ring, psi_inv)));
        for (int i = 0; i < h; ++i) {
          if (lhs[static_cast<std::size_t>(i)] !=
              rhs[static_cast<std::size_t>(i)]) {
            ok = false;
            detail = "pair (" + std::to_string(f) + "," + std::to_string(f2) +
                     ") coordinate " + std::to_string(i + 1);
            break;
          }
        }
      }
    }
    add("twisted-action", ok, detail);
  }

  // Cocycle identity, exhaustive over F^3:
  // sigma_f(psi(f',f'')) * psi(f, f'f'') == psi(f,f') * psi(ff', f'').
  {
    bool ok = true;
    std::string detail;
    for (int f = 0; f < m && ok; ++f) {
      for (int f2 = 0; f2 < m && ok; ++f2) {
        for (int f3 = 0; f3 < m && ok; ++f3) {
          Coords lhs = mal_multiply(
              V.N,
              sigma_apply(V, f,
                          V.psi[static_cast<std::size_t>(f2)]
                               [static_cast<std::size_t>(f3)]),
              V.psi[static_cast<std::size_t>(f)]
                   [static_cast<std::size_t>(V.F.mul(f2, f3))]);
          Coords rhs = mal_multiply(
              V.N,
              V.psi[static_cast<std::size_t>(f)][static_cast<std::size_t>(f2)],
              V.psi[static_cast<std::size_t>(V.F.mul(f, f2))]
                   [static_cast<std::size_t>(f3)]);
          if (lhs != rhs) {
            ok = false;
            detail = "triple (" + std::to_string(f) + "," +
                     std::to_string(f2) + "," + std::to_string(f3) + ")";
          }
        }
      }
    }
    add("cocycle-identity", ok, detail);
  }

  // Sampled laws on random elements: associativity and inverses, plus
  // integrality of sigma on integer points (exercised implicitly by the
  // arithmetic above).
  {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> dist(-bound, bound);
    std::uniform_int_distribution<int> fdist(0, m - 1);
    auto sample = [&]() {
      ExtElement e;
      for (int i = 0; i < h; ++i) e.n.emplace_back(dist(rng));
      e.f = fdist(rng);
      return e;
    };
    bool ok_assoc = true, ok_inv = true;
    std::string da, di;
    for (int s = 0; s < samples && (ok_assoc || ok_inv); ++s) {
      try {
        ExtElement a = sample(), b = sample(), c = sample();
        if (ok_assoc) {
          ExtElement lhs = ext_multiply(V, ext_multiply(V, a, b), c);
          ExtElement rhs = ext_multiply(V, a, ext_multiply(V, b, c));
          if (!ext_equal(lhs, rhs)) {
            ok_assoc = false;
            da = "sample " + std::to_string(s);
          }
        }
        if (ok_inv) ext_inverse(V, a);
      } catch (const Error& e) {
        if (ok_inv) {
          ok_inv = false;
          di = e.what();
        } else {
          ok_assoc = false;
          da = e.what();
        }
      }
    }
    add("ext-associativity", ok_assoc, da);
    add("ext-inverse", ok_inv, di);
  }

  return rep;
}

StructureWords structure_words(const VirtuallyTauGroup& V, unsigned long seed) {
  check_extension_shape(V);
  const int h = V.N.h;
  const int m = V.F.order;

  StructureWords W;
  std::vector<std::string> names;
  for (int i = 1; i <= h; ++i) names.push_back("U" + std::to_string(i));
  W.u_vars = make_vars(names);

  auto transversal = [&V](int f) {
    return ExtElement{mal_identity(V.N), f};
  };

  W.l.resize(static_cast<std::size_t>(m));
  W.n.resize(static_cast<std::size_t>(m));
  W.p.resize(static_cast<std::size_t>(m));

  for (int f = 0; f < m; ++f) {
    ExtElement gf = transversal(f);
    ExtElement gf_inv = ext_inverse(V, gf);

    // l[f][i]: conjugate the i-th basis element.
    for (int i = 0; i < h; ++i) {
      Coords ei = mal_identity(V.N);
      ei[static_cast<std::size_t>(i)] = 1;
      ExtElement conj =
          ext_multiply(V, ext_multiply(V, gf_inv, ExtElement{ei, 0}), gf);
      if (conj.f != 0)
        throw InternalError("conjugation left the fiber over the identity");
      W.l[static_cast<std::size_t>(f)].push_back(conj.n);
    }

    // n[f][f'].
    for (int f2 = 0; f2 < m; ++f2) {
      ExtElement prod = ext_multiply(V, gf, transversal(f2));
      ExtElement rest =
          ext_multiply(V, ext_inverse(V, transversal(V.F.mul(f, f2))), prod);
      if (rest.f != 0)
        throw InternalError("transversal defect left the fiber over the identity");
      W.n[static_cast<std::size_t>(f)].push_back(rest.n);
    }

    // p[f] = fold of x^{l[f][1]}^{U_1} ... x^{l[f][h]}^{U_h}.
    std::vector<Polynomial> acc;
    for (int i = 0; i < h; ++i) {
      std::vector<Polynomial> args =
          constant_tuple(W.u_vars, W.l[static_cast<std::size_t>(f)]
                                       [static_cast<std::size_t>(i)]);
      args.push_back(Polynomial::variable(W.u_vars, i));
      std::vector<Polynomial> term = compose_tuple(V.N.pow, args);
      acc = (i == 0) ? term
                     : compose_tuple(V.N.mul, concat_polys(acc, term));
    }
    W.p[static_cast<std::size_t>(f)] = acc;
  }

  // Cross-check p[f] against direct conjugation on sampled integer points.
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> dist(-3, 3);
  for (int f = 0; f < m; ++f) {
    ExtElement gf = transversal(f);
    ExtElement gf_inv = ext_inverse(V, gf);
    for (int s = 0; s < 8; ++s) {
      Coords u;
      QCoords uq;
      for (int i = 0; i < h; ++i) {
        u.emplace_back(dist(rng));
        uq.emplace_back(u.back());
      }
      ExtElement conj =
          ext_multiply(V, ext_multiply(V, gf_inv, ExtElement{u, 0}), gf);
      Coords via_word;
      for (const Polynomial& p : W.p[static_cast<std::size_t>(f)]) {
        Rat val = p.eval(uq);
        if (!is_integer(val))
          throw InternalError("structure word evaluated to a non-integer");
        via_word.push_back(numerator(val));
      }
      if (via_word != conj.n)
        throw InternalError("structure word disagrees with direct conjugation in '" +
                            V.label + "'");
    }
  }

  return W;
}

// ----------------------------------------------------------------- catalog

VirtuallyTauGroup make_trivial_extension(const MalcevPresentation& N) {
  VirtuallyTauGroup V;
  V.N = N;
  V.F = FiniteGroup::trivial();
  std::vector<std::string> names;
  for (int i = 1; i <= N.h; ++i) names.push_back("X" + std::to_string(i));
  V.x_vars = make_vars(names);
  V.sigma.push_back(variable_tuple(V.x_vars, 0, N.h));
  V.psi = {{mal_identity(N)}};
  V.label = N.label;
  return V;
}

namespace {

VirtuallyTauGroup make_c2_extension(MalcevPresentation N,
                                    std::vector<Polynomial> sigma_t,
                                    Coords psi_tt, std::string label) {
  VirtuallyTauGroup V;
  V.N = std::move(N);
  V.F = FiniteGroup::cyclic(2);
  std::vector<std::string> names;
  for (int i = 1; i <= V.N.h; ++i) names.push_back("X" + std::to_string(i));
  V.x_vars = make_vars(names);
  V.sigma.push_back(variable_tuple(V.x_vars, 0, V.N.h));
  V.sigma.push_back(std::move(sigma_t));
  Coords zero = mal_identity(V.N);
  V.psi = {{zero, zero}, {zero, std::move(psi_tt)}};
  V.label = std::move(label);
  return V;
}

}  // namespace

VirtuallyTauGroup make_dinfty() {
  MalcevPresentation N = make_abelian(1);
  std::vector<std::string> names = {"X1"};
  VarSetPtr ring = make_vars(names);
  std::vector<Polynomial> sigma_t = {-Polynomial::variable(ring, 0)};
  return make_c2_extension(std::move(N), std::move(sigma_t), {Int(0)},
                           "dinfty");
}

VirtuallyTauGroup make_zc2() {
  MalcevPresentation N = make_abelian(1);
  std::vector<std::string> names = {"X1"};
  VarSetPtr ring = make_vars(names);
  std::vector<Polynomial> sigma_t = {Polynomial::variable(ring, 0)};
  return make_c2_extension(std::move(N), std::move(sigma_t), {Int(1)}, "zc2");
}

VirtuallyTauGroup make_heisenberg_c2() {
  MalcevPresentation N = make_heisenberg();
  std::vector<std::string> names = {"X1", "X2", "X3"};
  VarSetPtr ring = make_vars(names);
  std::vector<Polynomial> sigma_t = {-Polynomial::variable(ring, 0),
                                     -Polynomial::variable(ring, 1),
                                     Polynomial::variable(ring, 2)};
  Coords psi_tt = mal_identity(N);
  return make_c2_extension(std::move(N), std::move(sigma_t),
                           std::move(psi_tt), "heisc2");
}

bool is_extension_catalog_name(const std::string& name) {
  return name == "dinfty" || name == "zc2" || name == "heisc2";
}

VirtuallyTauGroup make_extension_catalog_group(const std::string& name) {
  if (name == "dinfty") return make_dinfty();
  if (name == "zc2") return make_zc2();
  if (name == "heisc2") return make_heisenberg_c2();
  throw UsageError("unknown catalog extension '" + name + "'");
}

std::vector<std::pair<std::string, std::string>> extension_catalog() {
  return {
      {"dinfty", "infinite dihedral group Z x| C2"},
      {"zc2", "Z presented as an index-2 extension of Z with cocycle"},
      {"heisc2", "Heisenberg group extended by the inverting involution"},
  };
}

}  // namespace conezeta
