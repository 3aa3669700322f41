// conezeta command-line tool: catalog / verify / conditions / local /
// global / oracle-compare.  Exit codes: 0 success, 1 usage or refused
// input, 2 mismatch or verification failure, 3 budget exceeded,
// 4 inconclusive oracle stability.

#include <algorithm>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "conezeta/conegen.hpp"
#include "conezeta/errors.hpp"
#include "conezeta/evaluator.hpp"
#include "conezeta/extension.hpp"
#include "conezeta/json_io.hpp"
#include "conezeta/malcev.hpp"
#include "conezeta/oracle.hpp"
#include "conezeta/rational.hpp"
#include "conezeta/zeta.hpp"

namespace {

using namespace conezeta;

struct Job {
  std::string group;
  std::string variant = "sub";
  std::string ksel = "all";
  std::vector<std::string> primes;
  int kmax = 1;
  int nmax = 1;
  int e = 0;  // oracle coordinate precision; 0 = automatic
  long budget = 50000000;
  int workers = 0;  // 0 = default_workers()
  std::string format = "json";
  std::string out;
  std::string dump_conditions;
};

std::vector<Int> parse_primes(const std::vector<std::string>& tokens) {
  std::vector<Int> out;
  for (const std::string& tok : tokens) {
    Rat q = rat_from_string(tok);
    if (denominator(q) != 1)
      throw UsageError("'" + tok + "' is not an integer prime");
    Int p = numerator(q);
    if (!is_prime(p)) throw UsageError("'" + tok + "' is not prime");
    out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty())
    throw UsageError("no prime given (use --prime p or --primes 2,3,5)");
  return out;
}

std::vector<FiniteSubgroup> select_K(const LoadedGroup& G, const Job& job,
                                     Variant v) {
  std::vector<FiniteSubgroup> all = fin_subgroups(G.V.F, v);
  if (job.ksel == "all") return all;
  std::vector<FiniteSubgroup> out;
  std::vector<bool> seen(all.size(), false);
  std::stringstream ss(job.ksel);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    Rat q = rat_from_string(tok);
    if (denominator(q) != 1 || numerator(q) < 0 ||
        numerator(q) >= Int(static_cast<long>(all.size()))) {
      std::ostringstream msg;
      msg << "--K index '" << tok << "' out of range; available (variant "
          << variant_name(v) << "):";
      for (std::size_t i = 0; i < all.size(); ++i)
        msg << " " << i << "=" << all[i].describe();
      throw UsageError(msg.str());
    }
    std::size_t i = static_cast<std::size_t>(numerator(q).get_si());
    if (!seen[i]) {
      seen[i] = true;
      out.push_back(all[i]);
    }
  }
  if (out.empty()) throw UsageError("--K selected no subgroup of F");
  return out;
}

ConeConditionSystem system_for(const LoadedGroup& G, const FiniteSubgroup& K,
                               Variant v) {
  if (!G.is_extension) return good_basis_conditions(G.N, v);
  return relative_conditions(G.V, K, v);
}

void emit(const Job& job, const std::string& text) {
  if (job.out.empty()) {
    std::cout << text;
  } else {
    write_text_file(job.out, text);
  }
}

std::string join_elems(const std::vector<int>& elems, char sep) {
  std::string s;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(elems[i]);
  }
  return s;
}

int effective_workers(const Job& job) {
  return job.workers > 0 ? job.workers : default_workers();
}

// ----------------------------------------------------------- subcommands

int run_catalog() {
  std::ostringstream o;
  o << "tau groups:\n";
  for (const auto& [name, desc] : malcev_catalog())
    o << "  " << name << "  -  " << desc << "\n";
  o << "extensions (virtually tau):\n";
  for (const auto& [name, desc] : extension_catalog())
    o << "  " << name << "  -  " << desc << "\n";
  std::cout << o.str();
  return 0;
}

int run_verify(const Job& job) {
  LoadedGroup G = load_group(job.group);
  std::ostringstream o;
  VerificationReport rep = verify_presentation(G.N, 4, 60);
  o << "presentation '" << G.N.label << "':\n" << rep.summary();
  bool ok = rep.all_passed();
  if (G.is_extension) {
    VerificationReport rep2 = verify_cocycle(G.V, 3, 40);
    o << "extension '" << G.V.label << "':\n" << rep2.summary();
    ok = ok && rep2.all_passed();
  }
  for (Variant v : {Variant::Subgroup, Variant::Normal}) {
    std::vector<FiniteSubgroup> Ks = fin_subgroups(G.V.F, v);
    o << "K enumeration (variant " << variant_name(v) << "):";
    for (std::size_t i = 0; i < Ks.size(); ++i)
      o << " " << i << "=" << Ks[i].describe();
    o << "\n";
  }
  o << (ok ? "verify: PASS\n" : "verify: FAIL\n");
  std::cout << o.str();
  return ok ? 0 : 2;
}

int run_conditions(const Job& job) {
  LoadedGroup G = load_group(job.group);
  Variant v = parse_variant(job.variant);
  std::vector<FiniteSubgroup> Ks = select_K(G, job, v);
  std::string text;
  for (const FiniteSubgroup& K : Ks)
    text += condition_system_to_json(system_for(G, K, v));
  emit(job, text);
  return 0;
}

int run_local(const Job& job) {
  LoadedGroup G = load_group(job.group);
  Variant v = parse_variant(job.variant);
  std::vector<FiniteSubgroup> Ks = select_K(G, job, v);
  std::vector<Int> primes = parse_primes(job.primes);
  int workers = effective_workers(job);
  std::string json, dump;
  std::ostringstream text;
  if (job.format == "csv") text << "label,p,variant,K,k,count,a_raw\n";
  for (const FiniteSubgroup& K : Ks) {
    ConeConditionSystem S = system_for(G, K, v);
    if (!job.dump_conditions.empty()) dump += condition_system_to_json(S);
    for (const Int& p : primes) {
      LocalSeries L = local_counts(S, p, job.kmax, workers);
      if (job.format == "json") {
        json += local_series_to_json(L, S);
      } else if (job.format == "table") {
        text << L.label << "  p=" << p << "  K=" << K.describe()
             << "  shift=" << S.shift() << "\n";
        text << "  k  count  a_raw\n";
        for (int k = 0; k <= L.kmax; ++k)
          text << "  " << k << "  "
               << L.counts[static_cast<std::size_t>(k)].get_str() << "  "
               << rat_to_string(L.coeffs[static_cast<std::size_t>(k)]) << "\n";
      } else {
        for (int k = 0; k <= L.kmax; ++k)
          text << L.label << "," << p.get_str() << "," << variant_name(v)
               << "," << join_elems(S.k_elems, '|') << "," << k << ","
               << L.counts[static_cast<std::size_t>(k)].get_str() << ","
               << rat_to_string(L.coeffs[static_cast<std::size_t>(k)]) << "\n";
      }
    }
  }
  if (!job.dump_conditions.empty())
    write_text_file(job.dump_conditions, dump);
  emit(job, job.format == "json" ? json : text.str());
  return 0;
}

int run_global(const Job& job) {
  LoadedGroup G = load_group(job.group);
  Variant v = parse_variant(job.variant);
  DirichletSeries D = assemble_global(G.V, v, job.nmax, effective_workers(job));
  if (job.format == "json") {
    emit(job, dirichlet_to_json(D));
  } else if (job.format == "csv") {
    emit(job, dirichlet_to_csv(D));
  } else {
    std::ostringstream o;
    o << D.label << "  nmax=" << D.nmax << "\n  n  a_n\n";
    for (int n = 1; n <= D.nmax; ++n)
      o << "  " << n << "  " << D.a[static_cast<std::size_t>(n)].get_str()
        << "\n";
    emit(job, o.str());
  }
  return 0;
}

int run_compare(const Job& job) {
  LoadedGroup G = load_group(job.group);
  Variant v = parse_variant(job.variant);
  std::vector<FiniteSubgroup> Ks = select_K(G, job, v);
  std::vector<Int> primes = parse_primes(job.primes);
  int workers = effective_workers(job);
  OracleOptions opt;
  opt.e = job.e;
  opt.budget = job.budget;
  opt.check_stability = true;
  bool mismatch_stable = false, unstable = false;
  std::string json;
  std::ostringstream text;
  if (job.format == "csv") text << "label,p,k,engine,oracle,match\n";
  for (const FiniteSubgroup& K : Ks) {
    ConeConditionSystem S = system_for(G, K, v);
    for (const Int& p : primes) {
      LocalSeries L = local_counts(S, p, job.kmax, workers);
      OracleReport R = G.is_extension
                           ? oracle_counts(G.V, K, p, job.kmax, v, opt)
                           : oracle_counts(G.N, p, job.kmax, v, opt);
      CountReport C = compare_counts(L, R);
      if (!C.all_match && C.oracle_stable) mismatch_stable = true;
      if (!C.oracle_stable) unstable = true;
      if (job.format == "json") {
        json += count_report_to_json(C);
      } else if (job.format == "table") {
        text << C.label << "  p=" << C.p.get_str() << "  K=" << K.describe()
             << "  stable=" << (C.oracle_stable ? "yes" : "no") << "\n";
        text << "  k  engine  oracle  match\n";
        for (const CountRow& r : C.rows)
          text << "  " << r.k << "  " << r.engine.get_str() << "  "
               << r.oracle.get_str() << "  " << (r.match ? "yes" : "no")
               << "\n";
      } else {
        for (const CountRow& r : C.rows)
          text << C.label << "," << C.p.get_str() << "," << r.k << ","
               << r.engine.get_str() << "," << r.oracle.get_str() << ","
               << (r.match ? "yes" : "no") << "\n";
      }
    }
  }
  emit(job, job.format == "json" ? json : text.str());
  if (mismatch_stable) {
    std::cerr << "oracle-compare: MISMATCH (oracle stable)\n";
    return 2;
  }
  if (unstable) {
    std::cerr << "oracle-compare: inconclusive (oracle counts did not "
                 "stabilize; raise --e)\n";
    return 4;
  }
  std::cerr << "oracle-compare: all counts agree, oracle stable\n";
  return 0;
}

void add_group_option(CLI::App* s, Job& job) {
  s->add_option("--group", job.group,
                "catalog name or path to a group JSON file")
      ->required();
}

void add_variant_option(CLI::App* s, Job& job) {
  s->add_option("--variant", job.variant,
                "count all subgroups (sub) or normal subgroups (normal)")
      ->check(CLI::IsMember({"sub", "normal"}));
}

void add_K_option(CLI::App* s, Job& job) {
  s->add_option("--K", job.ksel,
                "subgroups K of F: 'all' or comma-separated indices into "
                "the enumeration printed by verify");
}

void add_format_option(CLI::App* s, Job& job) {
  s->add_option("--format", job.format, "output format")
      ->check(CLI::IsMember({"json", "table", "csv"}));
  s->add_option("--out", job.out, "write output to a file instead of stdout");
}

void add_prime_options(CLI::App* s, Job& job) {
  s->add_option("--prime,--primes", job.primes,
                "prime(s), repeatable or comma-separated")
      ->delimiter(',')
      ->required();
}

void add_workers_option(CLI::App* s, Job& job) {
  s->add_option("--workers", job.workers,
                "worker threads (0 = CONEZETA_WORKERS or hardware)")
      ->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "exact subgroup-counting zeta data for tau groups and their finite "
      "extensions"};
  app.require_subcommand(1);
  Job job;

  CLI::App* c_catalog =
      app.add_subcommand("catalog", "list built-in groups");

  CLI::App* c_verify = app.add_subcommand(
      "verify", "check the group laws of a presentation or extension");
  add_group_option(c_verify, job);

  CLI::App* c_cond = app.add_subcommand(
      "conditions", "emit the cone-condition system as canonical JSON");
  add_group_option(c_cond, job);
  add_variant_option(c_cond, job);
  add_K_option(c_cond, job);
  c_cond->add_option("--out", job.out,
                     "write output to a file instead of stdout");

  CLI::App* c_local = app.add_subcommand(
      "local", "exact counts of index-p^k (normal) subgroups, k <= kmax");
  add_group_option(c_local, job);
  add_variant_option(c_local, job);
  add_K_option(c_local, job);
  add_prime_options(c_local, job);
  c_local->add_option("--kmax", job.kmax, "largest k")
      ->check(CLI::PositiveNumber)
      ->required();
  add_workers_option(c_local, job);
  add_format_option(c_local, job);
  c_local->add_option("--dump-conditions", job.dump_conditions,
                      "also write the condition system JSON to this path");

  CLI::App* c_global = app.add_subcommand(
      "global", "Dirichlet coefficients a_n for n <= nmax");
  add_group_option(c_global, job);
  add_variant_option(c_global, job);
  c_global->add_option("--nmax", job.nmax, "largest n")
      ->check(CLI::PositiveNumber)
      ->required();
  add_workers_option(c_global, job);
  add_format_option(c_global, job);

  CLI::App* c_cmp = app.add_subcommand(
      "oracle-compare",
      "run the cone pipeline and the finite-quotient oracle, compare");
  add_group_option(c_cmp, job);
  add_variant_option(c_cmp, job);
  add_K_option(c_cmp, job);
  add_prime_options(c_cmp, job);
  c_cmp->add_option("--kmax", job.kmax, "largest k")
      ->check(CLI::PositiveNumber)
      ->required();
  c_cmp->add_option("--e", job.e,
                    "oracle coordinate precision (0 = automatic)")
      ->check(CLI::NonNegativeNumber);
  c_cmp->add_option("--budget", job.budget,
                    "oracle elementary-operation budget")
      ->check(CLI::PositiveNumber);
  add_workers_option(c_cmp, job);
  add_format_option(c_cmp, job);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  bool in_verify = c_verify->parsed();
  try {
    if (c_catalog->parsed()) return run_catalog();
    if (c_verify->parsed()) return run_verify(job);
    if (c_cond->parsed()) return run_conditions(job);
    if (c_local->parsed()) return run_local(job);
    if (c_global->parsed()) return run_global(job);
    if (c_cmp->parsed()) return run_compare(job);
    std::cerr << "no subcommand given\n";
    return 1;
  } catch (const BudgetError& e) {
    std::cerr << "error (budget): " << e.what() << "\n";
    return 3;
  } catch (const StabilityError& e) {
    std::cerr << "error (stability): " << e.what() << "\n";
    return 4;
  } catch (const UsageError& e) {
    std::cerr << "error (usage): " << e.what() << "\n";
    return 1;
  } catch (const GapError& e) {
    std::cerr << "error (gap): " << e.what() << "\n";
    return 1;
  } catch (const StructuralError& e) {
    std::cerr << "error (structure): " << e.what() << "\n";
    return in_verify ? 2 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 2;
  }
}
