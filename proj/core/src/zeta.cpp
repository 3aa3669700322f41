#include "conezeta/zeta.hpp"

#include <sstream>

#include "conezeta/errors.hpp"

namespace conezeta {

namespace {

// Prime-power factorization of a small integer by trial division.
std::vector<std::pair<Int, int>> factorize(Int m) {
  std::vector<std::pair<Int, int>> out;
  for (Int d = 2; d * d <= m; ++d) {
    if (m % d == 0) {
      int k = 0;
      while (m % d == 0) {
        m /= d;
        ++k;
      }
      out.emplace_back(d, k);
    }
  }
  if (m > 1) out.emplace_back(m, 1);
  return out;
}

}  // namespace

std::vector<Int> euler_coefficients(const LocalTable& T, int nmax) {
  if (nmax < 1) throw UsageError("euler_coefficients needs nmax >= 1");
  std::vector<std::pair<Int, int>> missing;
  auto lookup = [&](const Int& p, int k) -> const Int* {
    auto it = T.by_prime.find(p);
    if (it == T.by_prime.end() || k >= static_cast<int>(it->second.size())) {
      missing.emplace_back(p, k);
      return nullptr;
    }
    return &it->second[static_cast<std::size_t>(k)];
  };

  std::vector<Int> c(static_cast<std::size_t>(nmax) + 1, Int(0));
  c[1] = 1;
  for (int m = 2; m <= nmax; ++m) {
    Int prod = 1;
    bool ok = true;
    for (const auto& [p, k] : factorize(Int(m))) {
      const Int* v = lookup(p, k);
      if (!v) {
        ok = false;
        continue;  // keep scanning so the error lists every gap
      }
      prod *= *v;
    }
    if (ok) c[static_cast<std::size_t>(m)] = prod;
  }
  if (!missing.empty()) {
    std::ostringstream os;
    os << "local table lacks required prime powers:";
    for (const auto& [p, k] : missing) os << " (p=" << p << ", k=" << k << ")";
    throw GapError(os.str());
  }
  return c;
}

DirichletSeries assemble_global(const VirtuallyTauGroup& V, Variant variant,
                                int nmax, int workers) {
  if (nmax < 1) throw UsageError("assemble_global needs nmax >= 1");

  DirichletSeries D;
  D.nmax = nmax;
  D.a.assign(static_cast<std::size_t>(nmax) + 1, Int(0));
  D.label = V.label + ":" + variant_name(variant) + ":global";

  for (const FiniteSubgroup& K : fin_subgroups(V.F, variant)) {
    if (K.index > nmax) continue;
    int mmax = nmax / K.index;

    ConeConditionSystem S = relative_conditions(V, K, variant);
    LocalTable table;
    for (Int p = 2; p <= mmax; ++p) {
      if (!is_prime(p)) continue;
      int kmax = 0;
      Int pk = p;
      while (pk * p <= mmax) {
        pk *= p;
        ++kmax;
      }
      ++kmax;  // p^1 <= mmax already held
      table.by_prime[p] = local_counts(S, p, kmax, workers).counts;
    }
    std::vector<Int> c = euler_coefficients(table, mmax);
    for (int m = 1; m <= mmax; ++m)
      D.a[static_cast<std::size_t>(K.index * m)] += c[static_cast<std::size_t>(m)];
  }
  return D;
}

DirichletSeries assemble_global_from_tables(
    const std::vector<int>& indices, const std::vector<LocalTable>& tables,
    int nmax, const std::string& label) {
  if (indices.size() != tables.size())
    throw UsageError("assemble_global_from_tables: misaligned inputs");
  if (nmax < 1) throw UsageError("assemble_global_from_tables needs nmax >= 1");

  DirichletSeries D;
  D.nmax = nmax;
  D.a.assign(static_cast<std::size_t>(nmax) + 1, Int(0));
  D.label = label;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    int index = indices[i];
    if (index < 1) throw UsageError("subgroup index must be positive");
    if (index > nmax) continue;
    int mmax = nmax / index;
    std::vector<Int> c = euler_coefficients(tables[i], mmax);
    for (int m = 1; m <= mmax; ++m)
      D.a[static_cast<std::size_t>(index * m)] += c[static_cast<std::size_t>(m)];
  }
  return D;
}

CountReport compare_counts(const LocalSeries& engine,
                           const OracleReport& oracle) {
  if (engine.counts.size() != oracle.counts.size())
    throw UsageError("compare_counts: the two runs cover different k ranges");

  CountReport R;
  R.label = engine.label;
  R.p = engine.p;
  R.oracle_stable = oracle.stable;
  for (std::size_t k = 0; k < engine.counts.size(); ++k) {
    CountRow row;
    row.k = static_cast<int>(k);
    row.engine = engine.counts[k];
    row.oracle = oracle.counts[k];
    row.match = (row.engine == row.oracle);
    if (!row.match) R.all_match = false;
    R.rows.push_back(std::move(row));
  }
  return R;
}

}  // namespace conezeta
