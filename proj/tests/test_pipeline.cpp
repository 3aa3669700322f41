#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <string>
#include <vector>

#include "conezeta/conegen.hpp"
#include "conezeta/errors.hpp"
#include "conezeta/evaluator.hpp"
#include "conezeta/extension.hpp"
#include "conezeta/json_io.hpp"
#include "conezeta/malcev.hpp"
#include "conezeta/zeta.hpp"

using namespace conezeta;

namespace {

FiniteSubgroup whole_C2() {
  FiniteSubgroup K;
  K.elems = {0, 1};
  K.index = 1;
  K.normal = true;
  return K;
}

FiniteSubgroup trivial_K() {
  FiniteSubgroup K;
  K.elems = {0};
  K.index = 2;
  K.normal = true;
  return K;
}

std::vector<Int> counts_of(const ConeConditionSystem& S, const Int& p,
                           int kmax) {
  return local_counts(S, p, kmax).counts;
}

Polynomial tvar(const ConeConditionSystem& S, int i, int j) {
  return Polynomial::variable(S.vars, tvar_offset(S.h, i, j));
}

}  // namespace

TEST_SUITE("conegen") {
  TEST_CASE("tvar_offset walks the triangle row-major") {
    CHECK(tvar_offset(3, 1, 1) == 0);
    CHECK(tvar_offset(3, 1, 2) == 1);
    CHECK(tvar_offset(3, 1, 3) == 2);
    CHECK(tvar_offset(3, 2, 2) == 3);
    CHECK(tvar_offset(3, 2, 3) == 4);
    CHECK(tvar_offset(3, 3, 3) == 5);
    CHECK(tvar_offset(1, 1, 1) == 0);
  }

  TEST_CASE("abelian systems have no conditions") {
    ConeConditionSystem S =
        good_basis_conditions(make_catalog_group("abelian:2"),
                              Variant::Subgroup);
    CHECK(S.h == 2);
    CHECK(S.k_size == 1);
    CHECK(S.conditions.empty());
    CHECK(S.shift() == 2);
    CHECK(S.normalization() == 2);
    CHECK(S.weight_const() == std::vector<int>{-1, -2});
    CHECK(S.vars->names() ==
          std::vector<std::string>{"T11", "T12", "T22"});
    CHECK(S.diag_index == std::vector<int>{0, 2});
  }

  TEST_CASE("heisenberg subgroup variant: t33 divides t11 t22") {
    ConeConditionSystem S =
        good_basis_conditions(make_heisenberg(), Variant::Subgroup);
    REQUIRE(S.conditions.size() == 1);
    CHECK(S.conditions[0].num == tvar(S, 1, 1) * tvar(S, 2, 2));
    CHECK(S.conditions[0].den == tvar(S, 3, 3));
    CHECK(S.shift() == 3);
    CHECK(S.weight_const() == std::vector<int>{-1, -2, -3});
  }

  TEST_CASE("heisenberg normal variant adds the c(e_i, t_j) conditions") {
    ConeConditionSystem S =
        good_basis_conditions(make_heisenberg(), Variant::Normal);
    REQUIRE(S.conditions.size() == 4);
    CHECK(S.conditions[0].num == tvar(S, 1, 1) * tvar(S, 2, 2));
    CHECK(S.conditions[1].num == tvar(S, 1, 2));
    CHECK(S.conditions[2].num == tvar(S, 2, 2));
    CHECK(S.conditions[3].num == tvar(S, 1, 1));
    for (const ConeCondition& c : S.conditions)
      CHECK(c.den == tvar(S, 3, 3));
  }

  TEST_CASE("dinfty relative systems") {
    VirtuallyTauGroup D = make_extension_catalog_group("dinfty");
    ConeConditionSystem S =
        relative_conditions(D, whole_C2(), Variant::Subgroup);
    CHECK(S.h == 1);
    CHECK(S.k_size == 2);
    CHECK(S.shift() == 2);
    CHECK(S.conditions.empty());
    CHECK(S.vars->names() == std::vector<std::string>{"T11", "V1_1"});
    CHECK(S.weight_const() == std::vector<int>{-2});

    ConeConditionSystem N =
        relative_conditions(D, whole_C2(), Variant::Normal);
    REQUIRE(N.conditions.size() == 2);
    Polynomial two = Polynomial::constant(N.vars, Rat(2));
    Polynomial t11 = Polynomial::variable(N.vars, 0);
    Polynomial v11 = Polynomial::variable(N.vars, 1);
    CHECK(N.conditions[0].num == two);
    CHECK(N.conditions[0].den == t11);
    CHECK(N.conditions[1].num == two * v11);
    CHECK(N.conditions[1].den == t11);
  }

  TEST_CASE("trivial-K relative counts match the direct tau pipeline") {
    MalcevPresentation H = make_heisenberg();
    VirtuallyTauGroup T = make_trivial_extension(H);
    FiniteSubgroup K;
    K.elems = {0};
    K.index = 1;
    K.normal = true;
    for (Variant v : {Variant::Subgroup, Variant::Normal}) {
      ConeConditionSystem direct = good_basis_conditions(H, v);
      ConeConditionSystem rel = relative_conditions(T, K, v);
      CHECK(counts_of(direct, 2, 2) == counts_of(rel, 2, 2));
      CHECK(counts_of(direct, 3, 2) == counts_of(rel, 3, 2));
    }
  }

  TEST_CASE("emit_cone_data packages the integrand") {
    ConeConditionSystem S =
        good_basis_conditions(make_heisenberg(), Variant::Subgroup);
    ConeIntegralData D = emit_cone_data(S);
    Polynomial t11 = tvar(S, 1, 1), t22 = tvar(S, 2, 2), t33 = tvar(S, 3, 3);
    CHECK(D.f0 == t11 * t22 * t33);
    CHECK(D.g0 == t11.pow(2) * t22);
    REQUIRE(D.pairs.size() == 1);
    CHECK(D.pairs[0].first == t33);         // f_j = den
    CHECK(D.pairs[0].second == t11 * t22);  // g_j = num
    CHECK(D.shift == 3);
    CHECK(D.normalization_h == 3);
    CHECK(D.diag_weight == std::vector<int>{2, 1, 0});
  }

  TEST_CASE("membership data has one condition per coordinate") {
    MalcevPresentation H = make_heisenberg();
    MembershipData M = membership_conditions(H);
    CHECK(M.h == 3);
    CHECK(M.conds.size() == 3);
  }

  TEST_CASE("condition helpers") {
    ConeConditionSystem S =
        good_basis_conditions(make_heisenberg(), Variant::Subgroup);
    ConeCondition c = S.conditions[0];
    CHECK(same_condition(c, c));
    ConeCondition trivial;
    trivial.num = tvar(S, 3, 3);
    trivial.den = tvar(S, 3, 3);
    CHECK(condition_trivially_true(trivial));
    CHECK_FALSE(condition_trivially_true(c));
  }
}

TEST_SUITE("evaluator") {
  TEST_CASE("count_residues on hand-checked problems") {
    VarSetPtr v = make_vars({"x", "y"});
    Polynomial x = Polynomial::variable(v, 0);
    Polynomial y = Polynomial::variable(v, 1);
    CongruenceProblem P;
    P.vars = v;
    P.p = 2;
    P.M = 3;
    // x + 2y = 0 mod 4: x determined mod 4 by y -> 2 * 8 = 16 solutions.
    P.congruences.push_back({x + Rat(2) * y, 2});
    CHECK(count_residues(P) == 16);

    // Add forced valuation v(x) = 2: x in {4}: x = 4 fails 4 = 0 mod 4?
    // 4 mod 4 = 0 needs 2y = 0 mod 4, y in {0,2,4,6}: 4 solutions... but
    // x must also satisfy x = -2y mod 4 = 0 mod 4 with v(x)=2: x = 4 only.
    CongruenceProblem Q = P;
    Q.diag_index = {0};
    Q.diag_val = {2};
    CHECK(count_residues(Q) == 4);

    // Impossible constant congruence.
    CongruenceProblem R;
    R.vars = v;
    R.p = 2;
    R.M = 2;
    R.congruences.push_back({Polynomial::constant(v, Rat(1)), 1});
    CHECK(count_residues(R) == 0);
  }

  TEST_CASE("condition_depth") {
    ConeConditionSystem S =
        good_basis_conditions(make_heisenberg(), Variant::Subgroup);
    const ConeCondition& c = S.conditions[0];  // v(t11 t22) >= v(t33)
    CHECK(condition_depth(c, S.diag_index, {0, 0, 2}, 2) == 2);
    CHECK(condition_depth(c, S.diag_index, {3, 1, 0}, 2) == 0);
    CHECK(condition_depth(c, S.diag_index, {0, 0, 0}, 5) == 0);
  }

  TEST_CASE("slice measures of the abelian plane") {
    ConeConditionSystem S =
        good_basis_conditions(make_catalog_group("abelian:2"),
                              Variant::Subgroup);
    ConeIntegralData D = emit_cone_data(S);
    CHECK(slice_measure(D, 2, {1, 0}) == Rat(1, 8));
    CHECK(slice_measure(D, 2, {0, 0}) == Rat(1, 4));
    // Raising the working precision must not change the measure.
    CHECK(slice_measure(D, 2, {1, 0}, 2) == Rat(1, 8));
    CHECK(slice_measure(D, 3, {1, 1}, 1) == slice_measure(D, 3, {1, 1}));
  }

  TEST_CASE("local counts: frozen tau values") {
    auto C = [](const char* name, Variant v, const Int& p, int kmax) {
      return counts_of(good_basis_conditions(make_catalog_group(name), v), p,
                       kmax);
    };
    CHECK(C("abelian:2", Variant::Subgroup, 2, 2) ==
          std::vector<Int>{1, 3, 7});
    CHECK(C("abelian:2", Variant::Subgroup, 3, 2) ==
          std::vector<Int>{1, 4, 13});
    CHECK(C("abelian:2", Variant::Subgroup, 5, 2) ==
          std::vector<Int>{1, 6, 31});
    CHECK(C("abelian:3", Variant::Subgroup, 2, 3) ==
          std::vector<Int>{1, 7, 35, 155});
    CHECK(C("heisenberg", Variant::Subgroup, 2, 2) ==
          std::vector<Int>{1, 3, 19});
    CHECK(C("heisenberg", Variant::Subgroup, 3, 2) ==
          std::vector<Int>{1, 4, 49});
    CHECK(C("heisenberg", Variant::Normal, 2, 2) ==
          std::vector<Int>{1, 3, 7});
    CHECK(C("heisenberg", Variant::Normal, 3, 2) ==
          std::vector<Int>{1, 4, 13});
    CHECK(C("a1xheis", Variant::Subgroup, 2, 2) ==
          std::vector<Int>{1, 7, 59});
    CHECK(C("a1xheis", Variant::Subgroup, 3, 2) ==
          std::vector<Int>{1, 13, 238});
    CHECK(C("a1xheis", Variant::Normal, 2, 2) ==
          std::vector<Int>{1, 7, 35});
    CHECK(C("a1xheis", Variant::Normal, 3, 2) ==
          std::vector<Int>{1, 13, 130});
    // The sublattice presentation is another presentation of Z^2.
    CHECK(C("abelian2sub2", Variant::Subgroup, 2, 2) ==
          std::vector<Int>{1, 3, 7});
    CHECK(C("abelian2sub2", Variant::Subgroup, 3, 2) ==
          std::vector<Int>{1, 4, 13});
  }

  TEST_CASE("local counts: frozen extension values") {
    auto R = [](const char* name, const FiniteSubgroup& K, Variant v,
                const Int& p, int kmax) {
      return counts_of(
          relative_conditions(make_extension_catalog_group(name), K, v), p,
          kmax);
    };
    FiniteSubgroup K0 = trivial_K();
    FiniteSubgroup K1 = whole_C2();
    CHECK(R("dinfty", K0, Variant::Subgroup, 2, 2) ==
          std::vector<Int>{1, 1, 1});
    CHECK(R("dinfty", K1, Variant::Subgroup, 2, 2) ==
          std::vector<Int>{1, 2, 4});
    CHECK(R("dinfty", K1, Variant::Subgroup, 3, 2) ==
          std::vector<Int>{1, 3, 9});
    CHECK(R("dinfty", K1, Variant::Normal, 2, 2) ==
          std::vector<Int>{1, 2, 0});
    CHECK(R("dinfty", K1, Variant::Normal, 3, 2) ==
          std::vector<Int>{1, 0, 0});
    CHECK(R("zc2", K1, Variant::Subgroup, 2, 2) ==
          std::vector<Int>{1, 0, 0});
    CHECK(R("zc2", K1, Variant::Subgroup, 3, 2) ==
          std::vector<Int>{1, 1, 1});
    CHECK(R("zc2", K1, Variant::Normal, 5, 2) ==
          std::vector<Int>{1, 1, 1});
    CHECK(R("heisc2", K0, Variant::Subgroup, 2, 2) ==
          std::vector<Int>{1, 3, 19});
    CHECK(R("heisc2", K0, Variant::Normal, 3, 2) ==
          std::vector<Int>{1, 4, 13});
    CHECK(R("heisc2", K1, Variant::Subgroup, 2, 2) ==
          std::vector<Int>{1, 6, 52});
    CHECK(R("heisc2", K1, Variant::Subgroup, 3, 2) ==
          std::vector<Int>{1, 12, 129});
    CHECK(R("heisc2", K1, Variant::Normal, 2, 2) ==
          std::vector<Int>{1, 6, 4});
    CHECK(R("heisc2", K1, Variant::Normal, 3, 2) ==
          std::vector<Int>{1, 0, 0});
  }

  TEST_CASE("cone_coeffs is deterministic across worker counts") {
    ConeConditionSystem S =
        good_basis_conditions(make_heisenberg(), Variant::Subgroup);
    ConeIntegralData D = emit_cone_data(S);
    std::vector<Rat> a1 = cone_coeffs(D, 2, 3, 1);
    std::vector<Rat> a4 = cone_coeffs(D, 2, 3, 4);
    CHECK(a1 == a4);
    LocalSeries L1 = local_counts(S, 2, 3, 1);
    LocalSeries L3 = local_counts(S, 2, 3, 3);
    CHECK(L1.counts == L3.counts);
    CHECK(L1.coeffs == L3.coeffs);
  }

  TEST_CASE("non-prime p is refused") {
    ConeConditionSystem S = good_basis_conditions(
        make_catalog_group("abelian:1"), Variant::Subgroup);
    CHECK_THROWS_AS(local_counts(S, 4, 1), UsageError);
    CHECK_THROWS_AS(local_counts(S, 1, 1), UsageError);
  }

  TEST_CASE("a corrupted condition produces a non-integer count") {
    // v(t12^1) >= v(t11^2) cuts slice measures in a way no subgroup count
    // can realize; the integrality self-check must fire.
    ConeConditionSystem S =
        good_basis_conditions(make_catalog_group("abelian:2"),
                              Variant::Subgroup);
    ConeCondition junk;
    junk.num = Polynomial::variable(S.vars, 1);             // T12
    junk.den = Polynomial::variable(S.vars, 0).pow(2);      // T11^2
    S.conditions.push_back(junk);
    CHECK_THROWS_AS(local_counts(S, 2, 1), ConsistencyError);
  }

  TEST_CASE("default_workers honors the environment") {
    setenv("CONEZETA_WORKERS", "7", 1);
    CHECK(default_workers() == 7);
    setenv("CONEZETA_WORKERS", "0", 1);
    CHECK_THROWS_AS(default_workers(), UsageError);
    setenv("CONEZETA_WORKERS", "three", 1);
    CHECK_THROWS_AS(default_workers(), UsageError);
    unsetenv("CONEZETA_WORKERS");
    CHECK(default_workers() >= 1);
  }
}

TEST_SUITE("zeta") {
  TEST_CASE("euler_coefficients multiply local tables") {
    LocalTable T;
    T.by_prime[2] = {1, 3, 7, 15};
    T.by_prime[3] = {1, 4, 13};
    T.by_prime[5] = {1, 6};
    T.by_prime[7] = {1, 8};
    T.by_prime[11] = {1, 12};
    std::vector<Int> c = euler_coefficients(T, 12);
    CHECK(c[1] == 1);
    CHECK(c[2] == 3);
    CHECK(c[3] == 4);
    CHECK(c[4] == 7);
    CHECK(c[5] == 6);
    CHECK(c[6] == 12);
    CHECK(c[8] == 15);
    CHECK(c[9] == 13);
    CHECK(c[10] == 18);  // 3 * 6
    CHECK(c[12] == 28);  // 7 * 4
  }

  TEST_CASE("missing prime powers raise GapError, never silent zeros") {
    LocalTable T;
    T.by_prime[2] = {1, 3};
    try {
      euler_coefficients(T, 10);
      FAIL("expected GapError");
    } catch (const GapError& e) {
      std::string msg = e.what();
      CHECK(msg.find("p=3") != std::string::npos);
      CHECK(msg.find("p=5") != std::string::npos);
      CHECK(msg.find("p=7") != std::string::npos);
      // 2^3 = 8 needs k = 3, table stops at k = 1.
      CHECK(msg.find("p=2") != std::string::npos);
    }
  }

  TEST_CASE("global abelian series is the divisor function") {
    VirtuallyTauGroup A = make_trivial_extension(make_catalog_group("abelian:2"));
    DirichletSeries D = assemble_global(A, Variant::Subgroup, 30);
    for (int n = 1; n <= 30; ++n) {
      Int sigma = 0;
      for (int d = 1; d <= n; ++d)
        if (n % d == 0) sigma += d;
      CHECK(D.a[static_cast<std::size_t>(n)] == sigma);
    }
  }

  TEST_CASE("global multiplicativity for Z^2") {
    VirtuallyTauGroup A = make_trivial_extension(make_catalog_group("abelian:2"));
    DirichletSeries D = assemble_global(A, Variant::Subgroup, 36);
    auto a = [&](int n) { return D.a[static_cast<std::size_t>(n)]; };
    CHECK(a(6) == a(2) * a(3));
    CHECK(a(12) == a(4) * a(3));
    CHECK(a(35) == a(5) * a(7));
    CHECK(a(36) == a(4) * a(9));
  }

  TEST_CASE("dinfty global series, both variants") {
    VirtuallyTauGroup D = make_extension_catalog_group("dinfty");
    DirichletSeries S = assemble_global(D, Variant::Subgroup, 10);
    for (int n = 1; n <= 10; ++n) {
      Int expect = n + (n % 2 == 0 ? 1 : 0);
      CHECK(S.a[static_cast<std::size_t>(n)] == expect);
    }
    // Normal subgroups of the infinite dihedral group by index:
    // D_inf itself; Z and the two index-2 dihedral kernels; x^m Z for
    // even index 2m >= 4; nothing of odd index > 1.
    DirichletSeries N = assemble_global(D, Variant::Normal, 10);
    std::vector<Int> expect = {0, 1, 3, 0, 1, 0, 1, 0, 1, 0, 1};
    for (int n = 1; n <= 10; ++n)
      CHECK(N.a[static_cast<std::size_t>(n)] ==
            expect[static_cast<std::size_t>(n)]);
  }

  TEST_CASE("global reassembly at prime powers reproduces local counts") {
    VirtuallyTauGroup H = make_trivial_extension(make_heisenberg());
    DirichletSeries D = assemble_global(H, Variant::Subgroup, 9);
    ConeConditionSystem S =
        good_basis_conditions(make_heisenberg(), Variant::Subgroup);
    std::vector<Int> at2 = counts_of(S, 2, 3);
    std::vector<Int> at3 = counts_of(S, 3, 2);
    CHECK(D.a[2] == at2[1]);
    CHECK(D.a[4] == at2[2]);
    CHECK(D.a[8] == at2[3]);
    CHECK(D.a[3] == at3[1]);
    CHECK(D.a[9] == at3[2]);
  }

  TEST_CASE("assemble_global_from_tables validates alignment") {
    LocalTable T;
    T.by_prime[2] = {1, 3};
    CHECK_THROWS_AS(
        assemble_global_from_tables({1, 2}, {T}, 4, "x"),
        UsageError);
    DirichletSeries D = assemble_global_from_tables({1}, {T}, 2, "x");
    CHECK(D.a[2] == 3);
  }

  TEST_CASE("compare_counts") {
    LocalSeries L;
    L.p = 2;
    L.kmax = 1;
    L.counts = {1, 3};
    L.label = "demo";
    OracleReport R;
    R.counts = {1, 3};
    R.stable = true;
    R.label = "demo:oracle";
    CountReport C = compare_counts(L, R);
    CHECK(C.all_match);
    CHECK(C.oracle_stable);
    REQUIRE(C.rows.size() == 2);
    CHECK(C.rows[1].engine == 3);
    R.counts = {1, 4};
    CountReport M = compare_counts(L, R);
    CHECK_FALSE(M.all_match);
    CHECK(M.rows[1].match == false);
    R.counts = {1};
    CHECK_THROWS_AS(compare_counts(L, R), UsageError);
  }
}

TEST_SUITE("json_io") {
  TEST_CASE("presentation round trip is byte-stable") {
    MalcevPresentation H = make_heisenberg();
    std::string t1 = presentation_to_json(H);
    MalcevPresentation H2 = presentation_from_json(t1);
    CHECK(presentation_to_json(H2) == t1);
    CHECK(H2.h == 3);
    CHECK(H2.nil_class == 2);
    CHECK(H2.label == "heisenberg");
    CHECK(mal_commutator(H2, Coords{1, 0, 0}, Coords{0, 1, 0}) ==
          Coords{0, 0, 1});
  }

  TEST_CASE("extension round trip is byte-stable") {
    VirtuallyTauGroup V = make_extension_catalog_group("heisc2");
    std::string t1 = extension_to_json(V);
    VirtuallyTauGroup V2 = extension_from_json(t1);
    CHECK(extension_to_json(V2) == t1);
    CHECK(V2.F.order == 2);
    CHECK(V2.N.h == 3);
  }

  TEST_CASE("condition system round trip is byte-stable") {
    for (const char* name : {"heisenberg", "abelian:3"}) {
      for (Variant v : {Variant::Subgroup, Variant::Normal}) {
        ConeConditionSystem S =
            good_basis_conditions(make_catalog_group(name), v);
        std::string t1 = condition_system_to_json(S);
        ConeConditionSystem S2 = condition_system_from_json(t1);
        CHECK(condition_system_to_json(S2) == t1);
        CHECK(counts_of(S2, 2, 2) == counts_of(S, 2, 2));
      }
    }
  }

  TEST_CASE("reloaded groups produce identical counts") {
    VirtuallyTauGroup V = make_extension_catalog_group("heisc2");
    VirtuallyTauGroup V2 = extension_from_json(extension_to_json(V));
    FiniteSubgroup K = whole_C2();
    CHECK(counts_of(relative_conditions(V2, K, Variant::Subgroup), 2, 2) ==
          std::vector<Int>{1, 6, 52});
  }

  TEST_CASE("loader refuses broken presentations") {
    MalcevPresentation Bad = make_heisenberg();
    Bad.mul[2] += Polynomial::variable(Bad.xy_vars, 0);
    CHECK_THROWS_AS(presentation_from_json(presentation_to_json(Bad)),
                    StructuralError);
  }

  TEST_CASE("loader refuses a broken cocycle") {
    // sigma_t = -X1 forces psi(t,t) = 0; psi(t,t) = 1 breaks the cocycle
    // identity.
    std::string bad = R"({
      "schema": 1, "type": "extension", "label": "badc2",
      "group": "abelian:1",
      "F": {"order": 2, "table": [[0,1],[1,0]]},
      "sigma": {"1": [[{"exponents":[1],"coeff":"-1"}]]},
      "psi": {"1,1": ["1"]}
    })";
    CHECK_THROWS_AS(extension_from_json(bad), StructuralError);
    std::string good = R"({
      "schema": 1, "type": "extension", "label": "dinfty-file",
      "group": "abelian:1",
      "F": {"order": 2, "table": [[0,1],[1,0]]},
      "sigma": {"1": [[{"exponents":[1],"coeff":"-1"}]]},
      "psi": {"1,1": ["0"]}
    })";
    VirtuallyTauGroup D = extension_from_json(good);
    CHECK(D.label == "dinfty-file");
    CHECK(counts_of(relative_conditions(D, whole_C2(), Variant::Subgroup),
                    2, 2) == std::vector<Int>{1, 2, 4});
  }

  TEST_CASE("malformed input raises UsageError") {
    CHECK_THROWS_AS(presentation_from_json("{not json"), UsageError);
    CHECK_THROWS_AS(presentation_from_json("[1,2]"), UsageError);
    CHECK_THROWS_AS(presentation_from_json(R"({"schema": 2, "h": 1})"),
                    UsageError);
    // Wrong arity in an exponent list.
    std::string bad_arity = R"({
      "schema": 1, "type": "malcev", "label": "x", "h": 1, "class": 1,
      "f": [[{"exponents": [1], "coeff": "1"}]],
      "g": [[{"exponents": [1, 0], "coeff": "1"}]],
      "c": [[]]
    })";
    CHECK_THROWS_AS(presentation_from_json(bad_arity), UsageError);
    // psi key naming the identity is refused.
    std::string bad_psi = R"({
      "schema": 1, "type": "extension", "label": "x",
      "group": "abelian:1",
      "F": {"order": 2, "table": [[0,1],[1,0]]},
      "sigma": {"1": [[{"exponents":[1],"coeff":"1"}]]},
      "psi": {"0,1": ["1"]}
    })";
    CHECK_THROWS_AS(extension_from_json(bad_psi), UsageError);
  }

  TEST_CASE("derived condition fields are cross-checked on load") {
    ConeConditionSystem S =
        good_basis_conditions(make_catalog_group("abelian:2"),
                              Variant::Subgroup);
    std::string text = condition_system_to_json(S);
    std::string tampered = text;
    auto pos = tampered.find("\"shift\": 2");
    REQUIRE(pos != std::string::npos);
    tampered.replace(pos, 10, "\"shift\": 5");
    CHECK_THROWS_AS(condition_system_from_json(tampered), UsageError);
  }

  TEST_CASE("load_group dispatch") {
    LoadedGroup a = load_group("abelian:2");
    CHECK_FALSE(a.is_extension);
    CHECK(a.N.h == 2);
    CHECK(a.V.F.order == 1);
    LoadedGroup d = load_group("dinfty");
    CHECK(d.is_extension);
    CHECK(d.V.F.order == 2);
    CHECK_THROWS_AS(load_group("nosuchthing"), UsageError);
  }

  TEST_CASE("emission helpers") {
    ConeConditionSystem S =
        good_basis_conditions(make_catalog_group("abelian:2"),
                              Variant::Subgroup);
    LocalSeries L = local_counts(S, 2, 2);
    std::string j = local_series_to_json(L, S);
    CHECK(j.find("\"p\": \"2\"") != std::string::npos);
    CHECK(j.find("\"counts\"") != std::string::npos);
    CHECK(j.find("\"7\"") != std::string::npos);
    CHECK(j.find("\"a_raw\"") != std::string::npos);
    CHECK(j.find("\"schema\": 1") != std::string::npos);

    DirichletSeries D;
    D.nmax = 3;
    D.a = {Int(0), Int(1), Int(3), Int(4)};
    D.label = "demo";
    CHECK(dirichlet_to_csv(D) == "n,a_n\n1,1\n2,3\n3,4\n");
    std::string dj = dirichlet_to_json(D);
    CHECK(dj.find("\"nmax\": 3") != std::string::npos);

    LocalSeries L2 = L;
    OracleReport R;
    R.counts = {1, 3, 7};
    R.stable = true;
    R.label = "demo";
    CountReport C = compare_counts(L2, R);
    CHECK(count_report_to_csv(C) ==
          "k,engine,oracle,match\n0,1,1,yes\n1,3,3,yes\n2,7,7,yes\n");
    std::string cj = count_report_to_json(C);
    CHECK(cj.find("\"all_match\": true") != std::string::npos);
  }

  TEST_CASE("file helpers") {
    std::string path = "conezeta_test_tmp.json";
    write_text_file(path, "hello");
    CHECK(read_text_file(path) == "hello");
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_text_file("no/such/dir/file.json"), UsageError);
  }
}
