#include "conezeta/malcev.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "conezeta/errors.hpp"

namespace conezeta {

namespace {

std::vector<std::string> var_names_xy(int h) {
  std::vector<std::string> names;
  for (int i = 1; i <= h; ++i) names.push_back("X" + std::to_string(i));
  for (int i = 1; i <= h; ++i) names.push_back("Y" + std::to_string(i));
  return names;
}

std::vector<std::string> var_names_xw(int h) {
  std::vector<std::string> names;
  for (int i = 1; i <= h; ++i) names.push_back("X" + std::to_string(i));
  names.push_back("W");
  return names;
}

QCoords to_q(const Coords& a) {
  QCoords q;
  q.reserve(a.size());
  for (const Int& x : a) q.emplace_back(x);
  return q;
}

Coords to_z(const QCoords& a, const char* what, const std::string& label) {
  Coords z;
  z.reserve(a.size());
  for (const Rat& x : a) {
    if (!is_integer(x)) {
      throw IntegralityError(std::string(what) + " produced non-integer coordinate " +
                             rat_to_string(x) + " in group '" + label + "'");
    }
    z.push_back(numerator(x));
  }
  return z;
}

QCoords eval_tuple(const std::vector<Polynomial>& tup, const QCoords& args) {
  QCoords out;
  out.reserve(tup.size());
  for (const Polynomial& p : tup) out.push_back(p.eval(args));
  return out;
}

QCoords concat(const QCoords& a, const QCoords& b) {
  QCoords r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

std::vector<Polynomial> compose_tuple(const std::vector<Polynomial>& tup,
                                      const std::vector<Polynomial>& args) {
  std::vector<Polynomial> out;
  out.reserve(tup.size());
  for (const Polynomial& p : tup) out.push_back(p.compose(args));
  return out;
}

void check_shape(const MalcevPresentation& N) {
  if (N.h < 1) throw StructuralError("presentation has nonpositive Hirsch length");
  if (static_cast<int>(N.mul.size()) != N.h ||
      static_cast<int>(N.pow.size()) != N.h ||
      static_cast<int>(N.comm.size()) != N.h) {
    throw StructuralError("presentation '" + N.label +
                          "': tuple sizes do not match Hirsch length");
  }
}

}  // namespace

std::string variant_name(Variant v) {
  return v == Variant::Subgroup ? "sub" : "normal";
}

Variant parse_variant(const std::string& s) {
  if (s == "sub") return Variant::Subgroup;
  if (s == "normal") return Variant::Normal;
  throw UsageError("unknown variant '" + s + "' (expected 'sub' or 'normal')");
}

bool VerificationReport::all_passed() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string VerificationReport::summary() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.pass ? "  ok   " : "  FAIL ") << c.law;
    if (!c.pass && !c.detail.empty()) os << ": " << c.detail;
    os << "\n";
  }
  return os.str();
}

VarSetPtr make_xy_vars(int h) { return make_vars(var_names_xy(h)); }
VarSetPtr make_xw_vars(int h) { return make_vars(var_names_xw(h)); }

std::vector<Int> MalcevPresentation::denominator_primes() const {
  std::set<Int> acc;
  auto scan = [&acc](const std::vector<Polynomial>& tup) {
    for (const Polynomial& p : tup)
      for (const Int& q : prime_factors(p.denominator_lcm())) acc.insert(q);
  };
  scan(mul);
  scan(pow);
  scan(comm);
  return std::vector<Int>(acc.begin(), acc.end());
}

std::vector<Int> MalcevPresentation::bad_primes() const {
  std::set<Int> acc;
  for (const Int& q : denominator_primes()) acc.insert(q);
  for (const Int& q : declared_bad_primes) acc.insert(q);
  return std::vector<Int>(acc.begin(), acc.end());
}

QCoords mal_multiply(const MalcevPresentation& N, const QCoords& a,
                     const QCoords& b) {
  return eval_tuple(N.mul, concat(a, b));
}

Coords mal_multiply(const MalcevPresentation& N, const Coords& a,
                    const Coords& b) {
  return to_z(mal_multiply(N, to_q(a), to_q(b)), "multiplication", N.label);
}

QCoords mal_power(const MalcevPresentation& N, const QCoords& a, const Rat& w) {
  QCoords args = a;
  args.push_back(w);
  return eval_tuple(N.pow, args);
}

Coords mal_power(const MalcevPresentation& N, const Coords& a, const Int& w) {
  return to_z(mal_power(N, to_q(a), Rat(w)), "power", N.label);
}

QCoords mal_inverse(const MalcevPresentation& N, const QCoords& a) {
  return mal_power(N, a, Rat(-1));
}

Coords mal_inverse(const MalcevPresentation& N, const Coords& a) {
  return to_z(mal_inverse(N, to_q(a)), "inverse", N.label);
}

QCoords mal_commutator(const MalcevPresentation& N, const QCoords& a,
                       const QCoords& b) {
  return eval_tuple(N.comm, concat(a, b));
}

Coords mal_commutator(const MalcevPresentation& N, const Coords& a,
                      const Coords& b) {
  return to_z(mal_commutator(N, to_q(a), to_q(b)), "commutator", N.label);
}

Coords mal_identity(const MalcevPresentation& N) {
  return Coords(static_cast<std::size_t>(N.h), Int(0));
}

bool is_identity(const Coords& a) {
  for (const Int& x : a)
    if (x != 0) return false;
  return true;
}

VerificationReport verify_presentation(const MalcevPresentation& N, long bound,
                                       int samples, unsigned long seed) {
  VerificationReport rep;
  auto add = [&rep](const std::string& law, bool pass,
                    const std::string& detail = "") {
    rep.checks.push_back({law, pass, detail});
  };

  try {
    check_shape(N);
    add("shape", true);
  } catch (const Error& e) {
    add("shape", false, e.what());
    return rep;  // nothing else is meaningful
  }

  const int h = N.h;

  // Triangular unipotent form: mul_i - X_i - Y_i involves only coordinates
  // < i, pow_i - X_i*W involves only coordinates < i, comm_i only
  // coordinates < i. This is the structure every check below leans on.
  {
    bool ok = true;
    std::string detail;
    for (int i = 1; i <= h && ok; ++i) {
      Polynomial fi = N.mul[i - 1] -
                      Polynomial::variable(N.xy_vars, i - 1) -
                      Polynomial::variable(N.xy_vars, h + i - 1);
      Polynomial gi = N.pow[i - 1] -
                      Polynomial::variable(N.xw_vars, i - 1) *
                          Polynomial::variable(N.xw_vars, h);
      for (int k = i; k <= h && ok; ++k) {
        if (fi.degree_in(k - 1) > 0 || fi.degree_in(h + k - 1) > 0) {
          ok = false;
          detail = "mul_" + std::to_string(i) + " has a non-triangular term";
        } else if (gi.degree_in(k - 1) > 0) {
          ok = false;
          detail = "pow_" + std::to_string(i) + " has a non-triangular term";
        } else if (N.comm[i - 1].degree_in(k - 1) > 0 ||
                   N.comm[i - 1].degree_in(h + k - 1) > 0) {
          ok = false;
          detail = "comm_" + std::to_string(i) + " has a non-triangular term";
        }
      }
    }
    add("triangular-form", ok, detail);
  }

  // Identity element: mul(X, 0) == X and mul(0, Y) == Y as polynomials.
  {
    std::vector<Polynomial> xa, ya, zero;
    for (int i = 0; i < h; ++i) {
      xa.push_back(Polynomial::variable(N.xy_vars, i));
      ya.push_back(Polynomial::variable(N.xy_vars, h + i));
      zero.push_back(Polynomial::zero(N.xy_vars));
    }
    std::vector<Polynomial> right = compose_tuple(N.mul, concat_polys(xa, zero));
    std::vector<Polynomial> left = compose_tuple(N.mul, concat_polys(zero, ya));
    bool ok = true;
    std::string detail;
    for (int i = 0; i < h; ++i) {
      if (right[i] != xa[i]) {
        ok = false;
        detail = "mul(X,0) coordinate " + std::to_string(i + 1);
        break;
      }
      if (left[i] != ya[i]) {
        ok = false;
        detail = "mul(0,Y) coordinate " + std::to_string(i + 1);
        break;
      }
    }
    add("identity", ok, detail);
  }

  // Associativity as a polynomial identity over (X, Y, Z).
  {
    std::vector<std::string> names = var_names_xy(h);
    for (int i = 1; i <= h; ++i) names.push_back("Z" + std::to_string(i));
    VarSetPtr ring = make_vars(names);
    std::vector<Polynomial> xa, ya, za;
    for (int i = 0; i < h; ++i) {
      xa.push_back(Polynomial::variable(ring, i));
      ya.push_back(Polynomial::variable(ring, h + i));
      za.push_back(Polynomial::variable(ring, 2 * h + i));
    }
    std::vector<Polynomial> ab = compose_tuple(N.mul, concat_polys(xa, ya));
    std::vector<Polynomial> bc = compose_tuple(N.mul, concat_polys(ya, za));
    std::vector<Polynomial> lhs = compose_tuple(N.mul, concat_polys(ab, za));
    std::vector<Polynomial> rhs = compose_tuple(N.mul, concat_polys(xa, bc));
    bool ok = true;
    std::string detail;
    for (int i = 0; i < h; ++i) {
      if (lhs[i] != rhs[i]) {
        ok = false;
        detail = "coordinate " + std::to_string(i + 1) + ": (" +
                 lhs[i].to_string() + ") vs (" + rhs[i].to_string() + ")";
        break;
      }
    }
    add("associativity", ok, detail);
  }

  // Inverse: mul(X, pow(X,-1)) == 0 as polynomials over X.
  {
    std::vector<Polynomial> xa, inv_args;
    for (int i = 0; i < h; ++i)
      xa.push_back(Polynomial::variable(N.xy_vars, i));
    inv_args = xa;
    inv_args.push_back(Polynomial::constant(N.xy_vars, Rat(-1)));
    std::vector<Polynomial> inv = compose_tuple(N.pow, inv_args);
    std::vector<Polynomial> prod = compose_tuple(N.mul, concat_polys(xa, inv));
    bool ok = true;
    std::string detail;
    for (int i = 0; i < h; ++i) {
      if (!prod[i].is_zero()) {
        ok = false;
        detail = "coordinate " + std::to_string(i + 1) + " = " +
                 prod[i].to_string();
        break;
      }
    }
    add("inverse", ok, detail);
  }

  // Power laws over (X, W1, W2): pow(X, W1+W2) == mul(pow(X,W1), pow(X,W2)),
  // pow(X, 1) == X, pow(X, 0) == 0.
  {
    std::vector<std::string> names;
    for (int i = 1; i <= h; ++i) names.push_back("X" + std::to_string(i));
    names.push_back("W1");
    names.push_back("W2");
    VarSetPtr ring = make_vars(names);
    std::vector<Polynomial> xa;
    for (int i = 0; i < h; ++i) xa.push_back(Polynomial::variable(ring, i));
    Polynomial w1 = Polynomial::variable(ring, h);
    Polynomial w2 = Polynomial::variable(ring, h + 1);

    auto pow_at = [&](const Polynomial& w) {
      std::vector<Polynomial> args = xa;
      args.push_back(w);
      return compose_tuple(N.pow, args);
    };
    std::vector<Polynomial> lhs = pow_at(w1 + w2);
    std::vector<Polynomial> rhs =
        compose_tuple(N.mul, concat_polys(pow_at(w1), pow_at(w2)));
    bool ok = true;
    std::string detail;
    for (int i = 0; i < h; ++i) {
      if (lhs[i] != rhs[i]) {
        ok = false;
        detail = "coordinate " + std::to_string(i + 1);
        break;
      }
    }
    add("power-additivity", ok, detail);

    std::vector<Polynomial> at1 = pow_at(Polynomial::constant(ring, Rat(1)));
    std::vector<Polynomial> at0 = pow_at(Polynomial::constant(ring, Rat(0)));
    bool ok1 = true, ok0 = true;
    for (int i = 0; i < h; ++i) {
      if (at1[i] != xa[i]) ok1 = false;
      if (!at0[i].is_zero()) ok0 = false;
    }
    add("power-one", ok1);
    add("power-zero", ok0);
  }

  // Commutator word: comm(X, Y) == coords of X^-1 Y^-1 X Y.
  {
    std::vector<Polynomial> xa, ya;
    for (int i = 0; i < h; ++i) {
      xa.push_back(Polynomial::variable(N.xy_vars, i));
      ya.push_back(Polynomial::variable(N.xy_vars, h + i));
    }
    auto inverse_of = [&](const std::vector<Polynomial>& t) {
      std::vector<Polynomial> args = t;
      args.push_back(Polynomial::constant(N.xy_vars, Rat(-1)));
      return compose_tuple(N.pow, args);
    };
    std::vector<Polynomial> w =
        compose_tuple(N.mul, concat_polys(inverse_of(xa), inverse_of(ya)));
    w = compose_tuple(N.mul, concat_polys(w, xa));
    w = compose_tuple(N.mul, concat_polys(w, ya));
    bool ok = true;
    std::string detail;
    for (int i = 0; i < h; ++i) {
      if (w[i] != N.comm[i]) {
        ok = false;
        detail = "coordinate " + std::to_string(i + 1) + ": word gives (" +
                 w[i].to_string() + "), comm gives (" + N.comm[i].to_string() +
                 ")";
        break;
      }
    }
    add("commutator-word", ok, detail);
  }

  // Suffix vanishing: coordinate k of comm(a, b) vanishes identically when
  // a is supported on coordinates >= i, b on coordinates >= j, k <= max(i,j).
  {
    bool ok = true;
    std::string detail;
    for (int i = 1; i <= h && ok; ++i) {
      for (int j = 1; j <= h && ok; ++j) {
        std::vector<Polynomial> args;
        for (int k = 1; k <= h; ++k)
          args.push_back(k < i ? Polynomial::zero(N.xy_vars)
                               : Polynomial::variable(N.xy_vars, k - 1));
        for (int k = 1; k <= h; ++k)
          args.push_back(k < j ? Polynomial::zero(N.xy_vars)
                               : Polynomial::variable(N.xy_vars, h + k - 1));
        std::vector<Polynomial> c = compose_tuple(N.comm, args);
        for (int k = 1; k <= std::max(i, j); ++k) {
          if (!c[k - 1].is_zero()) {
            ok = false;
            detail = "comm coordinate " + std::to_string(k) +
                     " of suffix inputs (" + std::to_string(i) + "," +
                     std::to_string(j) + ") is " + c[k - 1].to_string();
            break;
          }
        }
      }
    }
    add("commutator-suffix-vanishing", ok, detail);
  }

  // Leading linearity of powers: for a supported on coordinates >= i,
  // pow_i(a, W) == a_i * W identically.
  {
    bool ok = true;
    std::string detail;
    for (int i = 1; i <= h && ok; ++i) {
      std::vector<Polynomial> args;
      for (int k = 1; k <= h; ++k)
        args.push_back(k < i ? Polynomial::zero(N.xw_vars)
                             : Polynomial::variable(N.xw_vars, k - 1));
      args.push_back(Polynomial::variable(N.xw_vars, h));
      Polynomial gi = N.pow[i - 1].compose(args);
      Polynomial want = Polynomial::variable(N.xw_vars, i - 1) *
                        Polynomial::variable(N.xw_vars, h);
      if (gi != want) {
        ok = false;
        detail = "pow_" + std::to_string(i) + " on suffix input is " +
                 gi.to_string();
      }
    }
    add("power-suffix-linearity", ok, detail);
  }

  // Sampled integrality: products, powers, inverses and commutators of
  // integer points have integer coordinates.
  {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> dist(-bound, bound);
    bool ok = true;
    std::string detail;
    for (int s = 0; s < samples && ok; ++s) {
      Coords a, b;
      for (int i = 0; i < h; ++i) a.emplace_back(dist(rng));
      for (int i = 0; i < h; ++i) b.emplace_back(dist(rng));
      Int w(dist(rng));
      try {
        mal_multiply(N, a, b);
        mal_power(N, a, w);
        mal_inverse(N, a);
        mal_commutator(N, a, b);
      } catch (const IntegralityError& e) {
        ok = false;
        detail = e.what();
      }
    }
    add("integrality", ok, detail);
  }

  return rep;
}

MalcevPresentation make_abelian(int h) {
  if (h < 1 || h > 16) throw UsageError("abelian rank must be in 1..16");
  MalcevPresentation N;
  N.h = h;
  N.nil_class = 1;
  N.xy_vars = make_xy_vars(h);
  N.xw_vars = make_xw_vars(h);
  for (int i = 0; i < h; ++i) {
    N.mul.push_back(Polynomial::variable(N.xy_vars, i) +
                    Polynomial::variable(N.xy_vars, h + i));
    N.pow.push_back(Polynomial::variable(N.xw_vars, i) *
                    Polynomial::variable(N.xw_vars, h));
    N.comm.push_back(Polynomial::zero(N.xy_vars));
  }
  N.label = "abelian:" + std::to_string(h);
  return N;
}

MalcevPresentation make_heisenberg() {
  MalcevPresentation N;
  N.h = 3;
  N.nil_class = 2;
  N.xy_vars = make_xy_vars(3);
  N.xw_vars = make_xw_vars(3);
  auto X = [&N](int i) { return Polynomial::variable(N.xy_vars, i - 1); };
  auto Y = [&N](int i) { return Polynomial::variable(N.xy_vars, 3 + i - 1); };
  auto Xw = [&N](int i) { return Polynomial::variable(N.xw_vars, i - 1); };
  Polynomial W = Polynomial::variable(N.xw_vars, 3);

  N.mul = {X(1) + Y(1), X(2) + Y(2), X(3) + Y(3) - X(2) * Y(1)};
  // (W^2 - W)/2 is the binomial coefficient C(W,2); the shared factor makes
  // 2 a denominator prime of this presentation.
  Polynomial choose2 = (W * W - W) * Rat(1, 2);
  N.pow = {Xw(1) * W, Xw(2) * W, Xw(3) * W - choose2 * (Xw(1) * Xw(2))};
  N.comm = {Polynomial::zero(N.xy_vars), Polynomial::zero(N.xy_vars),
            X(1) * Y(2) - X(2) * Y(1)};
  N.label = "heisenberg";
  return N;
}

MalcevPresentation make_direct_product(const MalcevPresentation& a,
                                       const MalcevPresentation& b) {
  check_shape(a);
  check_shape(b);
  const int h = a.h + b.h;
  MalcevPresentation N;
  N.h = h;
  N.nil_class = std::max(a.nil_class, b.nil_class);
  N.xy_vars = make_xy_vars(h);
  N.xw_vars = make_xw_vars(h);

  // Index maps embedding each factor's variables into the product rings.
  auto embed_xy = [&](const MalcevPresentation& src, int offset) {
    std::vector<int> m(static_cast<std::size_t>(2 * src.h));
    for (int i = 0; i < src.h; ++i) {
      m[static_cast<std::size_t>(i)] = offset + i;
      m[static_cast<std::size_t>(src.h + i)] = h + offset + i;
    }
    return m;
  };
  auto embed_xw = [&](const MalcevPresentation& src, int offset) {
    std::vector<int> m(static_cast<std::size_t>(src.h + 1));
    for (int i = 0; i < src.h; ++i) m[static_cast<std::size_t>(i)] = offset + i;
    m[static_cast<std::size_t>(src.h)] = h;
    return m;
  };

  auto place = [&](const MalcevPresentation& src, int offset) {
    std::vector<int> mxy = embed_xy(src, offset);
    std::vector<int> mxw = embed_xw(src, offset);
    for (int i = 0; i < src.h; ++i) {
      N.mul.push_back(src.mul[i].rename(N.xy_vars, mxy));
      N.pow.push_back(src.pow[i].rename(N.xw_vars, mxw));
      N.comm.push_back(src.comm[i].rename(N.xy_vars, mxy));
    }
  };
  place(a, 0);
  place(b, a.h);

  for (const Int& q : a.declared_bad_primes) N.declared_bad_primes.push_back(q);
  for (const Int& q : b.declared_bad_primes) N.declared_bad_primes.push_back(q);
  N.label = a.label + "x" + b.label;
  return N;
}

MalcevPresentation sublattice_presentation(const MalcevPresentation& N,
                                           const std::vector<Coords>& basis) {
  check_shape(N);
  if (N.nil_class != 1) {
    throw StructuralError(
        "sublattice presentations are supported for class-1 groups only");
  }
  for (int i = 0; i < N.h; ++i) {
    Polynomial want = Polynomial::variable(N.xy_vars, i) +
                      Polynomial::variable(N.xy_vars, N.h + i);
    if (N.mul[i] != want) {
      throw StructuralError(
          "sublattice presentations require componentwise-sum multiplication");
    }
  }
  if (static_cast<int>(basis.size()) != N.h) {
    throw StructuralError("sublattice basis must have one row per coordinate");
  }
  for (int i = 0; i < N.h; ++i) {
    if (static_cast<int>(basis[i].size()) != N.h) {
      throw StructuralError("sublattice basis rows must have length h");
    }
    if (basis[i][static_cast<std::size_t>(i)] == 0) {
      throw StructuralError("sublattice basis must have nonzero diagonal");
    }
    for (int j = 0; j < i; ++j) {
      if (basis[i][static_cast<std::size_t>(j)] != 0) {
        throw StructuralError("sublattice basis must be upper triangular");
      }
    }
  }
  // The coordinate change a |-> sum a_i * basis_i is linear, so the induced
  // presentation on sublattice coordinates has the same defining tuples.
  MalcevPresentation S = N;
  std::ostringstream label;
  label << N.label << "|sub[";
  for (int i = 0; i < N.h; ++i) {
    if (i) label << ";";
    for (int j = 0; j < N.h; ++j) {
      if (j) label << ",";
      label << basis[i][static_cast<std::size_t>(j)].get_str();
    }
  }
  label << "]";
  S.label = label.str();
  return S;
}

MalcevPresentation suffix_presentation(const MalcevPresentation& N, int j) {
  check_shape(N);
  if (j < 1 || j > N.h) {
    throw UsageError("suffix index out of range");
  }
  if (j == 1) return N;
  const int h2 = N.h - j + 1;
  MalcevPresentation S;
  S.h = h2;
  S.nil_class = N.nil_class;
  S.xy_vars = make_xy_vars(h2);
  S.xw_vars = make_xw_vars(h2);
  S.declared_bad_primes = N.declared_bad_primes;
  S.label = N.label + "#suffix" + std::to_string(j);

  std::vector<Polynomial> axy, axw;
  for (int k = 1; k <= N.h; ++k)
    axy.push_back(k < j ? Polynomial::zero(S.xy_vars)
                        : Polynomial::variable(S.xy_vars, k - j));
  for (int k = 1; k <= N.h; ++k)
    axy.push_back(k < j ? Polynomial::zero(S.xy_vars)
                        : Polynomial::variable(S.xy_vars, h2 + k - j));
  for (int k = 1; k <= N.h; ++k)
    axw.push_back(k < j ? Polynomial::zero(S.xw_vars)
                        : Polynomial::variable(S.xw_vars, k - j));
  axw.push_back(Polynomial::variable(S.xw_vars, h2));

  for (int k = 1; k <= N.h; ++k) {
    Polynomial f = N.mul[k - 1].compose(axy);
    Polynomial g = N.pow[k - 1].compose(axw);
    Polynomial c = N.comm[k - 1].compose(axy);
    if (k < j) {
      if (!f.is_zero() || !g.is_zero() || !c.is_zero()) {
        throw StructuralError("suffix restriction of '" + N.label +
                              "' leaks into coordinate " + std::to_string(k));
      }
    } else {
      S.mul.push_back(f);
      S.pow.push_back(g);
      S.comm.push_back(c);
    }
  }
  return S;
}

bool is_malcev_catalog_name(const std::string& name) {
  if (name == "heisenberg" || name == "a1xheis" || name == "abelian2sub2")
    return true;
  return name.rfind("abelian:", 0) == 0;
}

MalcevPresentation make_catalog_group(const std::string& name) {
  if (name == "heisenberg") return make_heisenberg();
  if (name == "a1xheis")
    return make_direct_product(make_abelian(1), make_heisenberg());
  if (name == "abelian2sub2") {
    std::vector<Coords> basis = {{Int(2), Int(0)}, {Int(0), Int(1)}};
    return sublattice_presentation(make_abelian(2), basis);
  }
  if (name.rfind("abelian:", 0) == 0) {
    const std::string arg = name.substr(8);
    try {
      std::size_t used = 0;
      int h = std::stoi(arg, &used);
      if (used != arg.size()) throw std::invalid_argument(arg);
      return make_abelian(h);
    } catch (const std::exception&) {
      throw UsageError("bad abelian rank '" + arg + "'");
    }
  }
  throw UsageError("unknown catalog group '" + name + "'");
}

std::vector<std::pair<std::string, std::string>> malcev_catalog() {
  return {
      {"abelian:h", "free abelian group of rank h (h in 1..16)"},
      {"heisenberg", "discrete Heisenberg group, Hirsch length 3"},
      {"a1xheis", "direct product of abelian:1 with heisenberg"},
      {"abelian2sub2", "index-2 sublattice 2Z x Z of abelian:2"},
  };
}

}  // namespace conezeta
