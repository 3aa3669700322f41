#include "conezeta/evaluator.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <mutex>
#include <set>
#include <string>
#include <thread>

#include "conezeta/errors.hpp"

namespace conezeta {

namespace {

using std::int64_t;

int64_t mulmod(int64_t a, int64_t b, int64_t mod) {
  return static_cast<int64_t>((static_cast<__int128>(a) * b) % mod);
}

struct PackedCongruence {
  // Terms with coefficients reduced into [0, p^depth).
  std::vector<std::pair<Exps, int64_t>> terms;
  long depth = 0;
  std::vector<int> support;
};

struct Walker {
  const CongruenceProblem& P;
  int64_t p;
  int nvars;
  std::vector<int64_t> ppow;           // p^0..p^M
  std::vector<PackedCongruence> cgs;
  std::vector<int> mval;               // forced valuation per var, -1 if free
  std::vector<int64_t> residue;
  Int total = 0;

  explicit Walker(const CongruenceProblem& prob) : P(prob) {
    nvars = P.vars->size();
    if (P.p < 2) throw StructuralError("count_residues: p must be >= 2");
    if (!P.p.fits_slong_p())
      throw BudgetError("count_residues: p does not fit a machine word");
    p = static_cast<int64_t>(P.p.get_si());
    ppow.assign(static_cast<std::size_t>(P.M) + 1, 1);
    for (int l = 1; l <= P.M; ++l) {
      if (ppow[static_cast<std::size_t>(l - 1)] >
          (int64_t{1} << 62) / p)
        throw BudgetError("residue modulus p^M exceeds the 63-bit budget");
      ppow[static_cast<std::size_t>(l)] =
          ppow[static_cast<std::size_t>(l - 1)] * p;
    }

    mval.assign(static_cast<std::size_t>(nvars), -1);
    if (P.diag_index.size() != P.diag_val.size())
      throw InternalError("count_residues: mismatched diagonal data");
    for (std::size_t i = 0; i < P.diag_index.size(); ++i) {
      int v = P.diag_index[i];
      if (v < 0 || v >= nvars)
        throw InternalError("count_residues: bad diagonal index");
      if (P.diag_val[i] < 0 || P.diag_val[i] >= P.M)
        throw InternalError("count_residues: diagonal valuation out of range");
      mval[static_cast<std::size_t>(v)] = P.diag_val[i];
    }

    for (const Congruence& c : P.congruences) {
      if (c.depth < 1 || c.depth > P.M)
        throw InternalError("count_residues: congruence depth out of range");
      PackedCongruence pc;
      pc.depth = c.depth;
      int64_t mod = ppow[static_cast<std::size_t>(c.depth)];
      std::set<int> sup;
      for (const auto& [e, coef] : c.poly.terms()) {
        if (denominator(coef) != 1)
          throw InternalError("count_residues: non-integer congruence coefficient");
        Int r = mod_floor(numerator(coef), Int(mod));
        int64_t ri = static_cast<int64_t>(r.get_si());
        if (ri == 0) continue;
        pc.terms.emplace_back(e, ri);
        for (int v = 0; v < nvars; ++v) {
          if (e[static_cast<std::size_t>(v)] > 0) sup.insert(v);
        }
      }
      if (pc.terms.empty()) continue;  // identically 0 mod p^depth
      // A nonzero constant congruence can never hold.
      if (sup.empty()) {
        total = 0;
        cgs.clear();
        impossible = true;
        return;
      }
      pc.support.assign(sup.begin(), sup.end());
      cgs.push_back(std::move(pc));
    }
    residue.assign(static_cast<std::size_t>(nvars), 0);
  }

  bool impossible = false;

  // Number of ways to extend variable v from `level` digits to M digits.
  Int completions(int v, int level) const {
    int m = mval[static_cast<std::size_t>(v)];
    if (m >= 0 && m >= level) {
      // Digits level..m-1 forced to 0, digit m nonzero, the rest free.
      Int r = p - 1;
      return r * int_pow(Int(p), static_cast<unsigned long>(P.M - m - 1));
    }
    return int_pow(Int(p), static_cast<unsigned long>(P.M - level));
  }

  // Factor contributed by one digit of an inactive variable at `level`.
  Int level_factor(int v, int level) const {
    int m = mval[static_cast<std::size_t>(v)];
    if (m >= 0 && level < m) return 1;
    if (m >= 0 && level == m) return p - 1;
    return Int(p);
  }

  int64_t eval_mod(const PackedCongruence& c, int64_t mod) const {
    int64_t acc = 0;
    for (const auto& [e, coef] : c.terms) {
      int64_t t = coef % mod;
      for (int v = 0; v < nvars; ++v) {
        std::int32_t ev = e[static_cast<std::size_t>(v)];
        if (ev == 0) continue;
        int64_t base = residue[static_cast<std::size_t>(v)] % mod;
        for (std::int32_t q = 0; q < ev; ++q) t = mulmod(t, base, mod);
      }
      acc = (acc + t) % mod;
    }
    return acc;
  }

  void walk(int level, const std::vector<int>& undecided, const Int& mult) {
    if (undecided.empty()) {
      Int tail = mult;
      for (int v = 0; v < nvars; ++v) tail *= completions(v, level);
      total += tail;
      return;
    }
    if (level >= P.M)
      throw InternalError("count_residues: undecided congruence at full depth");

    // Variables whose next digit can still matter.
    std::vector<bool> active(static_cast<std::size_t>(nvars), false);
    for (int ci : undecided) {
      for (int v : cgs[static_cast<std::size_t>(ci)].support)
        active[static_cast<std::size_t>(v)] = true;
    }
    Int mult2 = mult;
    std::vector<int> branch;
    for (int v = 0; v < nvars; ++v) {
      if (active[static_cast<std::size_t>(v)])
        branch.push_back(v);
      else
        mult2 *= level_factor(v, level);
    }

    enumerate(level, 0, branch, undecided, mult2);
  }

  void enumerate(int level, std::size_t bi, const std::vector<int>& branch,
                 const std::vector<int>& undecided, const Int& mult) {
    if (bi == branch.size()) {
      // All digits at this level placed; re-examine the congruences.
      std::vector<int> next;
      for (int ci : undecided) {
        const PackedCongruence& c = cgs[static_cast<std::size_t>(ci)];
        long look = std::min<long>(level + 1, c.depth);
        int64_t val = eval_mod(c, ppow[static_cast<std::size_t>(look)]);
        if (val != 0) return;  // violated now, or unfixable later
        if (level + 1 < c.depth) next.push_back(ci);
      }
      walk(level + 1, next, mult);
      return;
    }
    int v = branch[bi];
    int m = mval[static_cast<std::size_t>(v)];
    int64_t save = residue[static_cast<std::size_t>(v)];
    int64_t lo = 0, hi = p - 1;
    if (m >= 0 && level < m) {
      lo = hi = 0;
    } else if (m >= 0 && level == m) {
      lo = 1;
    }
    for (int64_t d = lo; d <= hi; ++d) {
      residue[static_cast<std::size_t>(v)] =
          save + d * ppow[static_cast<std::size_t>(level)];
      enumerate(level, bi + 1, branch, undecided, mult);
    }
    residue[static_cast<std::size_t>(v)] = save;
  }
};

}  // namespace

Int count_residues(const CongruenceProblem& P) {
  if (P.M < 1) throw InternalError("count_residues: M must be >= 1");
  Walker w(P);
  if (w.impossible) return 0;
  std::vector<int> all;
  for (std::size_t i = 0; i < w.cgs.size(); ++i)
    all.push_back(static_cast<int>(i));
  w.walk(0, all, Int(1));
  return w.total;
}

long condition_depth(const ConeCondition& c,
                     const std::vector<int>& diag_index,
                     const std::vector<int>& m, const Int& p) {
  const Exps& de = c.den.terms().begin()->first;
  long depth = 0;
  for (std::size_t i = 0; i < diag_index.size(); ++i) {
    depth += static_cast<long>(de[static_cast<std::size_t>(diag_index[i])]) *
             m[i];
  }
  Int d = c.num.denominator_lcm();
  if (d != 1) depth += valuation(d, p);
  return depth;
}

Rat slice_measure(const ConeIntegralData& D, const Int& p,
                  const std::vector<int>& m, int extra_levels) {
  const int dim = D.vars->size();
  const int h = static_cast<int>(D.diag_index.size());
  if (static_cast<int>(m.size()) != h)
    throw InternalError("slice_measure: bad slice length");

  CongruenceProblem P;
  P.vars = D.vars;
  P.p = p;
  P.diag_index = D.diag_index;
  P.diag_val = m;

  long maxdepth = 0;
  for (const auto& [f, g] : D.pairs) {
    ConeCondition c{g, f};
    long depth = condition_depth(c, D.diag_index, m, p);
    if (depth <= 0) continue;
    auto [pint, d] = g.clear_denominators();
    P.congruences.push_back({std::move(pint), depth});
    maxdepth = std::max(maxdepth, depth);
  }
  int M = 1;
  for (int mi : m) M = std::max(M, mi + 1);
  M = std::max<int>(M, static_cast<int>(maxdepth));
  M += extra_levels;
  P.M = M;

  Int count = count_residues(P);
  Rat denom(int_pow(p, static_cast<unsigned long>(M) *
                           static_cast<unsigned long>(dim)));
  Rat meas = Rat(count) / denom;
  meas.canonicalize();
  return meas;
}

namespace {

void compositions_of(int k, int parts, std::vector<int>& cur,
                     std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    cur.push_back(k);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int first = 0; first <= k; ++first) {
    cur.push_back(first);
    compositions_of(k - first, parts - 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<Rat> cone_coeffs(const ConeIntegralData& D, const Int& p, int kmax,
                             int workers) {
  const int h = static_cast<int>(D.diag_index.size());
  if (kmax < 0) throw UsageError("kmax must be nonnegative");
  if (workers < 1) workers = 1;

  // All slices for all k, in (k, lexicographic m) order.
  struct Slice {
    int k;
    std::vector<int> m;
    Rat weighted;  // p^{-sum (h-i) m_i} * measure
    bool done = false;
  };
  std::vector<Slice> slices;
  for (int k = 0; k <= kmax; ++k) {
    std::vector<std::vector<int>> comps;
    std::vector<int> cur;
    compositions_of(k, h, cur, comps);
    for (auto& m : comps) slices.push_back({k, std::move(m), Rat(0), false});
  }

  auto run_slice = [&D, &p](Slice& s) {
    long wexp = 0;
    for (std::size_t i = 0; i < s.m.size(); ++i)
      wexp += static_cast<long>(D.diag_weight[i]) * s.m[i];
    Rat w = Rat(1) / Rat(int_pow(p, static_cast<unsigned long>(wexp)));
    w.canonicalize();
    s.weighted = w * slice_measure(D, p, s.m);
    s.weighted.canonicalize();
    s.done = true;
  };

  if (workers == 1 || slices.size() <= 1) {
    for (Slice& s : slices) run_slice(s);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mx;
    auto body = [&]() {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= slices.size()) return;
        try {
          run_slice(slices[i]);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mx);
          if (!err) err = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    int nt = std::min<int>(workers, static_cast<int>(slices.size()));
    for (int t = 0; t < nt; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
  }

  std::vector<Rat> a(static_cast<std::size_t>(kmax) + 1, Rat(0));
  for (const Slice& s : slices) {
    if (!s.done) throw InternalError("cone_coeffs: slice left unevaluated");
    a[static_cast<std::size_t>(s.k)] += s.weighted;
    a[static_cast<std::size_t>(s.k)].canonicalize();
  }
  return a;
}

LocalSeries local_counts(const ConeConditionSystem& S, const Int& p, int kmax,
                         int workers) {
  if (!is_prime(p)) throw UsageError("local evaluation requires a prime p");
  ConeIntegralData D = emit_cone_data(S);
  std::vector<Rat> a = cone_coeffs(D, p, kmax, workers);

  LocalSeries out;
  out.p = p;
  out.kmax = kmax;
  out.coeffs = a;
  out.label = S.label;

  Rat norm = Rat(p, p - 1);
  Rat normh(1);
  for (int i = 0; i < S.normalization(); ++i) normh *= norm;
  normh.canonicalize();

  for (int k = 0; k <= kmax; ++k) {
    Rat c = normh * a[static_cast<std::size_t>(k)] *
            Rat(int_pow(p, static_cast<unsigned long>(k) *
                               static_cast<unsigned long>(S.shift())));
    c.canonicalize();
    if (!is_integer(c) || c < 0) {
      throw ConsistencyError("local count at p=" + p.get_str() + ", k=" +
                             std::to_string(k) + " is not a nonnegative integer: " +
                             rat_to_string(c) + " [" + S.label + "]");
    }
    out.counts.push_back(numerator(c));
  }
  if (out.counts[0] != 1) {
    throw ConsistencyError("local count at k=0 must be 1, got " +
                           out.counts[0].get_str() + " [" + S.label + "]");
  }

  // Depth-sufficiency self-check: re-measure the first nontrivial slice at
  // one extra digit of precision.
  if (kmax >= 1) {
    std::vector<int> m(static_cast<std::size_t>(S.h), 0);
    m[0] = 1;
    Rat base = slice_measure(D, p, m, 0);
    Rat refined = slice_measure(D, p, m, 1);
    if (base != refined) {
      throw ConsistencyError(
          "slice measure changed under refinement at p=" + p.get_str() + " [" +
          S.label + "]");
    }
  }
  return out;
}

int default_workers() {
  if (const char* env = std::getenv("CONEZETA_WORKERS")) {
    try {
      std::size_t used = 0;
      int n = std::stoi(env, &used);
      if (used == std::string(env).size() && n >= 1) return n;
    } catch (const std::exception&) {
    }
    throw UsageError("CONEZETA_WORKERS must be a positive integer");
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

}  // namespace conezeta
