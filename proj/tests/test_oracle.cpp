#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "conezeta/conegen.hpp"
#include "conezeta/errors.hpp"
#include "conezeta/evaluator.hpp"
#include "conezeta/extension.hpp"
#include "conezeta/malcev.hpp"
#include "conezeta/oracle.hpp"

using namespace conezeta;

namespace {

Coords rnd_coords(int h, std::mt19937& rng, int bound) {
  std::uniform_int_distribution<int> d(-bound, bound);
  Coords c;
  for (int i = 0; i < h; ++i) c.push_back(d(rng));
  return c;
}

}  // namespace

TEST_SUITE("quotient") {
  TEST_CASE("finite quotient arithmetic") {
    MalcevPresentation H = make_heisenberg();
    FiniteQuotient Q(H, 3, 2);  // coordinates mod 9
    CHECK(Q.h() == 3);
    CHECK(Q.modulus() == 9);
    Coords a = Q.reduce({4, 7, 2});
    Coords b = Q.reduce({-1, 5, 8});
    Coords ab = Q.mul(a, b);
    // Against exact arithmetic, reduced mod 9.
    Coords exact = mal_multiply(H, Coords{4, 7, 2}, Coords{-1, 5, 8});
    CHECK(ab == Q.reduce(exact));
    CHECK(Q.is_id(Q.mul(a, Q.inv(a))));
    CHECK(Q.mul(Q.identity(), a) == a);
    // Powers by square-and-multiply, never through the pow polynomials.
    Coords a4 = Q.mul(Q.mul(a, a), Q.mul(a, a));
    CHECK(Q.pow(a, 4) == a4);
    CHECK(Q.pow(a, -1) == Q.inv(a));
    CHECK(Q.word(Coords{1, 2, 3}) == Q.reduce(Coords{1, 2, 3}));
  }

  TEST_CASE("quotient works at the denominator prime") {
    // heisenberg's pow polynomials carry 1/2 coefficients, but mul and the
    // composed inverse tuple are integral, so p = 2 quotients are defined.
    MalcevPresentation H = make_heisenberg();
    FiniteQuotient Q(H, 2, 3);
    Coords a = {1, 1, 1};
    CHECK(Q.is_id(Q.mul(a, Q.inv(a))));
    CHECK(Q.pow(a, 8) == Q.reduce(mal_power(H, Coords{1, 1, 1}, Int(8))));
  }

  TEST_CASE("bad parameters are refused") {
    MalcevPresentation H = make_heisenberg();
    CHECK_THROWS_AS(FiniteQuotient(H, 3, 0), UsageError);
    CHECK_THROWS_AS(FiniteQuotient(H, 1, 2), UsageError);
  }
}

TEST_SUITE("sifted") {
  TEST_CASE("full subgroup and simple sublattices") {
    MalcevPresentation A = make_catalog_group("abelian:2");
    FiniteQuotient Q(A, 2, 3);
    long work = 0;
    const long budget = 1000000;
    SiftedSubgroup full = SiftedSubgroup::full(Q, work, budget);
    CHECK(full.index() == 1);
    CHECK(full.contains(Coords{5, 7}));

    SiftedSubgroup B(Q);
    B.insert(Q.reduce(Coords{2, 0}), work, budget);
    B.insert(Q.reduce(Coords{0, 1}), work, budget);
    CHECK(B.index() == 2);
    CHECK(B.mu(0) == 1);
    CHECK(B.mu(1) == 0);
    CHECK(B.contains(Q.reduce(Coords{6, 3})));
    CHECK_FALSE(B.contains(Q.reduce(Coords{1, 0})));
  }

  TEST_CASE("fingerprints are generator-order independent") {
    MalcevPresentation H = make_heisenberg();
    FiniteQuotient Q(H, 2, 3);
    long work = 0;
    const long budget = 5000000;
    SiftedSubgroup a(Q), b(Q);
    Coords g1 = Q.reduce(Coords{2, 1, 0});
    Coords g2 = Q.reduce(Coords{0, 2, 1});
    Coords g3 = Q.reduce(Coords{0, 0, 4});
    a.insert(g1, work, budget);
    a.insert(g2, work, budget);
    a.insert(g3, work, budget);
    b.insert(g3, work, budget);
    b.insert(g2, work, budget);
    b.insert(g1, work, budget);
    CHECK(a.fingerprint() == b.fingerprint());
    CHECK(a.index() == b.index());
    // Membership agrees with construction.
    CHECK(a.contains(Q.mul(g1, g2)));
    CHECK(a.contains(Q.inv(g1)));
  }

  TEST_CASE("closure under commutators happens automatically") {
    MalcevPresentation H = make_heisenberg();
    FiniteQuotient Q(H, 3, 2);
    long work = 0;
    SiftedSubgroup B(Q);
    B.insert(Q.reduce(Coords{1, 0, 0}), work, 5000000);
    B.insert(Q.reduce(Coords{0, 1, 0}), work, 5000000);
    // [x1, x2] = x3 must have been adjoined.
    CHECK(B.contains(Q.reduce(Coords{0, 0, 1})));
    CHECK(B.index() == 1);
  }

  TEST_CASE("budget exhaustion raises BudgetError") {
    MalcevPresentation H = make_heisenberg();
    FiniteQuotient Q(H, 3, 3);
    long work = 0;
    SiftedSubgroup B(Q);
    CHECK_THROWS_AS(B.insert(Q.reduce(Coords{1, 1, 1}), work, 3),
                    BudgetError);
  }

  TEST_CASE("maximal subgroups of small quotients") {
    MalcevPresentation A = make_catalog_group("abelian:2");
    long work = 0;
    {
      FiniteQuotient Q(A, 2, 2);
      SiftedSubgroup full = SiftedSubgroup::full(Q, work, 1000000);
      std::vector<SiftedSubgroup> M =
          maximal_subgroups(full, work, 10000000);
      CHECK(M.size() == 3);  // (Z/2)^2 has three index-2 subgroups
      for (const SiftedSubgroup& m : M) CHECK(m.index() == 2);
    }
    {
      FiniteQuotient Q(A, 3, 2);
      SiftedSubgroup full = SiftedSubgroup::full(Q, work, 1000000);
      std::vector<SiftedSubgroup> M =
          maximal_subgroups(full, work, 10000000);
      CHECK(M.size() == 4);  // (Z/3)^2 has four index-3 subgroups
    }
    {
      // Heisenberg mod 4: Frattini quotient is (Z/2)^2, so 3 maximals.
      MalcevPresentation H = make_heisenberg();
      FiniteQuotient Q(H, 2, 2);
      SiftedSubgroup full = SiftedSubgroup::full(Q, work, 1000000);
      std::vector<SiftedSubgroup> M =
          maximal_subgroups(full, work, 10000000);
      CHECK(M.size() == 3);
    }
  }
}

TEST_SUITE("oracle-counts") {
  TEST_CASE("abelian counts match the HNF formula") {
    MalcevPresentation A = make_catalog_group("abelian:2");
    for (Int p : {Int(2), Int(3)}) {
      OracleReport R = oracle_counts(A, p, 2, Variant::Subgroup);
      CHECK(R.stable);
      REQUIRE(R.counts.size() == 3);
      for (int k = 0; k <= 2; ++k)
        CHECK(R.counts[static_cast<std::size_t>(k)] ==
              hnf_subgroup_count(2, int_pow(p, static_cast<unsigned long>(k))));
    }
  }

  TEST_CASE("heisenberg frozen counts, both variants") {
    MalcevPresentation H = make_heisenberg();
    OracleReport s2 = oracle_counts(H, 2, 2, Variant::Subgroup);
    CHECK(s2.counts == std::vector<Int>{1, 3, 19});
    CHECK(s2.stable);
    OracleReport n2 = oracle_counts(H, 2, 2, Variant::Normal);
    CHECK(n2.counts == std::vector<Int>{1, 3, 7});
    OracleReport n3 = oracle_counts(H, 3, 2, Variant::Normal);
    CHECK(n3.counts == std::vector<Int>{1, 4, 13});
  }

  TEST_CASE("instability at too-low precision is reported, not hidden") {
    MalcevPresentation H = make_heisenberg();
    OracleOptions opt;
    opt.e = 1;  // far below kmax + class + 1
    OracleReport R = oracle_counts(H, 2, 2, Variant::Subgroup, opt);
    CHECK_FALSE(R.stable);
  }

  TEST_CASE("budget propagates") {
    MalcevPresentation H = make_heisenberg();
    OracleOptions opt;
    opt.budget = 500;
    CHECK_THROWS_AS(oracle_counts(H, 2, 2, Variant::Subgroup, opt),
                    BudgetError);
  }

  TEST_CASE("usage validation") {
    MalcevPresentation H = make_heisenberg();
    CHECK_THROWS_AS(oracle_counts(H, 4, 1, Variant::Subgroup), UsageError);
    CHECK_THROWS_AS(oracle_counts(H, 2, -1, Variant::Subgroup), UsageError);
  }
}

TEST_SUITE("hnf") {
  TEST_CASE("rank 1 and 2") {
    CHECK(hnf_subgroup_count(1, 12) == 1);
    // sigma(n) for Z^2.
    CHECK(hnf_subgroup_count(2, 1) == 1);
    CHECK(hnf_subgroup_count(2, 2) == 3);
    CHECK(hnf_subgroup_count(2, 6) == 12);
    CHECK(hnf_subgroup_count(2, 8) == 15);
    CHECK(hnf_subgroup_count(2, 9) == 13);
  }

  TEST_CASE("rank 3 values and multiplicativity") {
    CHECK(hnf_subgroup_count(3, 2) == 7);
    CHECK(hnf_subgroup_count(3, 4) == 35);
    CHECK(hnf_subgroup_count(3, 8) == 155);
    CHECK(hnf_subgroup_count(3, 3) == 13);
    CHECK(hnf_subgroup_count(3, 6) ==
          hnf_subgroup_count(3, 2) * hnf_subgroup_count(3, 3));
  }
}

TEST_SUITE("membership") {
  TEST_CASE("oracle and condition verdicts coincide on random instances") {
    std::mt19937 rng(42);
    for (const char* name :
         {"abelian:2", "heisenberg", "a1xheis", "abelian2sub2"}) {
      CAPTURE(name);
      MalcevPresentation N = make_catalog_group(name);
      MembershipData M = membership_conditions(N);
      for (Int p : {Int(2), Int(3), Int(5)}) {
        for (int trial = 0; trial < 30; ++trial) {
          std::vector<Coords> rows;
          std::uniform_int_distribution<int> dm(0, 2);
          std::uniform_int_distribution<int> doff(-6, 6);
          for (int i = 0; i < N.h; ++i) {
            Coords row(static_cast<std::size_t>(N.h), 0);
            for (int j = i; j < N.h; ++j) {
              if (j == i) {
                row[static_cast<std::size_t>(j)] =
                    int_pow(p, static_cast<unsigned long>(dm(rng)));
              } else {
                row[static_cast<std::size_t>(j)] = doff(rng);
              }
            }
            rows.push_back(std::move(row));
          }
          Coords z = rnd_coords(N.h, rng, 8);
          bool via_oracle = membership_oracle(N, rows, z, p);
          bool via_conds = membership_via_conditions(M, rows, z, p);
          CAPTURE(p);
          CAPTURE(trial);
          CHECK(via_oracle == via_conds);
        }
      }
    }
  }

  TEST_CASE("membership oracle on known points") {
    MalcevPresentation A = make_catalog_group("abelian:2");
    std::vector<Coords> rows = {Coords{2, 1}, Coords{0, 4}};
    CHECK(membership_oracle(A, rows, Coords{2, 1}, 2));
    CHECK(membership_oracle(A, rows, Coords{2, 5}, 2));
    CHECK_FALSE(membership_oracle(A, rows, Coords{1, 0}, 2));
    CHECK_FALSE(membership_oracle(A, rows, Coords{2, 2}, 2));
    // At p = 3 the same lattice is all of Z_3^2: 2 and 4 are units.
    CHECK(membership_oracle(A, rows, Coords{1, 0}, 3));
  }

  TEST_CASE("good basis detection") {
    MalcevPresentation H = make_heisenberg();
    // Rows generating the whole group: a good basis for any variant.
    std::vector<Coords> full = {Coords{1, 0, 0}, Coords{0, 1, 0},
                                Coords{0, 0, 1}};
    CHECK(is_good_basis_oracle(H, full, Variant::Subgroup, 2));
    CHECK(is_good_basis_oracle(H, full, Variant::Normal, 2));
    // t = diag(2, 2, 2): [t1, t2] = (0,0,4), leading valuation 2 >= v(4)
    // fails the suffix requirement? [x1^2, x2^2] = x3^4, and 4 is in
    // 2 Z_2 = t33 Z_2, so this IS a good basis.
    std::vector<Coords> d222 = {Coords{2, 0, 0}, Coords{0, 2, 0},
                                Coords{0, 0, 2}};
    CHECK(is_good_basis_oracle(H, d222, Variant::Subgroup, 2));
    // diag(2, 2, 8): x3^4 not in x3^8 Z_2 -> not closed.
    std::vector<Coords> bad = {Coords{2, 0, 0}, Coords{0, 2, 0},
                               Coords{0, 0, 8}};
    CHECK_FALSE(is_good_basis_oracle(H, bad, Variant::Subgroup, 2));
    // Normal variant needs [e1, t2] = (0,0,2) in t33 Z_2: diag(2,2,4)
    // is good for subgroup but not normal at p = 2.
    std::vector<Coords> d224 = {Coords{2, 0, 0}, Coords{0, 2, 0},
                                Coords{0, 0, 4}};
    CHECK(is_good_basis_oracle(H, d224, Variant::Subgroup, 2));
    CHECK_FALSE(is_good_basis_oracle(H, d224, Variant::Normal, 2));
  }

  TEST_CASE("random good bases are good") {
    std::mt19937_64 rng(99);
    MalcevPresentation H = make_heisenberg();
    // Realizable diagonals: [x1^t11, x2^t22] = x3^{t11 t22} forces
    // m3 <= m1 + m2, exactly the main cone condition.
    const std::vector<std::vector<int>> ms = {
        {0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 1}, {2, 1, 2},
        {1, 1, 2}, {0, 2, 1}, {2, 0, 1}, {1, 2, 3}, {2, 2, 0}};
    for (Int p : {Int(2), Int(3)}) {
      for (int trial = 0; trial < 10; ++trial) {
        const std::vector<int>& m = ms[static_cast<std::size_t>(trial)];
        std::vector<Coords> rows =
            random_good_basis(H, Variant::Subgroup, p, m, rng);
        CHECK(is_good_basis_oracle(H, rows, Variant::Subgroup, p));
        for (int i = 0; i < 3; ++i)
          CHECK(valuation(rows[static_cast<std::size_t>(i)]
                              [static_cast<std::size_t>(i)],
                          p) == m[static_cast<std::size_t>(i)]);
      }
    }
  }
}

TEST_SUITE("ext-oracle") {
  TEST_CASE("dinfty frozen counts") {
    VirtuallyTauGroup D = make_extension_catalog_group("dinfty");
    FiniteSubgroup K1;
    K1.elems = {0, 1};
    K1.index = 1;
    K1.normal = true;
    OracleReport s = oracle_counts(D, K1, 2, 2, Variant::Subgroup);
    CHECK(s.counts == std::vector<Int>{1, 2, 4});
    CHECK(s.stable);
    OracleReport n2 = oracle_counts(D, K1, 2, 2, Variant::Normal);
    CHECK(n2.counts == std::vector<Int>{1, 2, 0});
    OracleReport n3 = oracle_counts(D, K1, 3, 2, Variant::Normal);
    CHECK(n3.counts == std::vector<Int>{1, 0, 0});
  }

  TEST_CASE("zc2 is another presentation of Z") {
    VirtuallyTauGroup Z = make_extension_catalog_group("zc2");
    FiniteSubgroup K1;
    K1.elems = {0, 1};
    K1.index = 1;
    K1.normal = true;
    // Subgroups hitting t must contain an element (a, t); its square is
    // x^{2a+1}, odd, so the intersection with Z has odd index: none for
    // p = 2, exactly one for odd p.
    OracleReport at2 = oracle_counts(Z, K1, 2, 2, Variant::Subgroup);
    CHECK(at2.counts == std::vector<Int>{1, 0, 0});
    OracleReport at3 = oracle_counts(Z, K1, 3, 2, Variant::Subgroup);
    CHECK(at3.counts == std::vector<Int>{1, 1, 1});
  }

  TEST_CASE("heisc2 engine agreement stays frozen") {
    VirtuallyTauGroup V = make_extension_catalog_group("heisc2");
    FiniteSubgroup K1;
    K1.elems = {0, 1};
    K1.index = 1;
    K1.normal = true;
    OracleReport s2 = oracle_counts(V, K1, 2, 2, Variant::Subgroup);
    CHECK(s2.counts == std::vector<Int>{1, 6, 52});
    CHECK(s2.stable);
    OracleReport n2 = oracle_counts(V, K1, 2, 2, Variant::Normal);
    CHECK(n2.counts == std::vector<Int>{1, 6, 4});
  }

  TEST_CASE("normal variant refuses a non-normal K") {
    // Z x S3 as a split extension with trivial action.
    MalcevPresentation N = make_abelian(1);
    VirtuallyTauGroup V = make_trivial_extension(N);
    V.F = FiniteGroup::symmetric3();
    V.sigma.assign(static_cast<std::size_t>(V.F.order), V.sigma[0]);
    V.psi.assign(
        static_cast<std::size_t>(V.F.order),
        std::vector<Coords>(static_cast<std::size_t>(V.F.order),
                            mal_identity(N)));
    V.label = "zxs3";
    VerificationReport rep = verify_cocycle(V, 3, 20);
    REQUIRE(rep.all_passed());
    std::vector<FiniteSubgroup> subs = fin_subgroups(V.F, Variant::Subgroup);
    const FiniteSubgroup* c2 = nullptr;
    for (const FiniteSubgroup& K : subs)
      if (K.elems.size() == 2) c2 = &K;
    REQUIRE(c2 != nullptr);
    CHECK_FALSE(c2->normal);
    CHECK_THROWS_AS(oracle_counts(V, *c2, 2, 1, Variant::Normal),
                    UsageError);
  }

  TEST_CASE("Z x S3: engine equals oracle across all K") {
    MalcevPresentation N = make_abelian(1);
    VirtuallyTauGroup V = make_trivial_extension(N);
    V.F = FiniteGroup::symmetric3();
    V.sigma.assign(static_cast<std::size_t>(V.F.order), V.sigma[0]);
    V.psi.assign(
        static_cast<std::size_t>(V.F.order),
        std::vector<Coords>(static_cast<std::size_t>(V.F.order),
                            mal_identity(N)));
    V.label = "zxs3";
    for (Variant v : {Variant::Subgroup, Variant::Normal}) {
      for (const FiniteSubgroup& K : fin_subgroups(V.F, v)) {
        CAPTURE(variant_name(v));
        CAPTURE(K.describe());
        ConeConditionSystem S = relative_conditions(V, K, v);
        LocalSeries L = local_counts(S, 2, 2);
        OracleReport R = oracle_counts(V, K, 2, 2, v);
        CHECK(R.stable);
        CHECK(L.counts == R.counts);
      }
    }
  }
}
