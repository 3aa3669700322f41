#include "conezeta/json_io.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "conezeta/errors.hpp"
#include "json.hpp"

namespace conezeta {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& what) {
  throw UsageError("malformed JSON input: " + what);
}

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("JSON parse failure: ") + e.what());
  }
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

int int32_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer())
    bad(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

std::string string_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string())
    bad(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

// Integer/rational leaves are decimal strings; plain JSON integers are
// accepted on input for convenience.
Rat rat_leaf(const Json& v, const char* what) {
  if (v.is_number_integer())
    return Rat(static_cast<long>(v.get<long long>()));
  if (v.is_string()) return rat_from_string(v.get<std::string>());
  bad(std::string(what) + " must be an integer or a \"num/den\" string");
}

Int int_leaf(const Json& v, const char* what) {
  Rat q = rat_leaf(v, what);
  if (denominator(q) != 1) bad(std::string(what) + " must be an integer");
  return numerator(q);
}

Json poly_to_json(const Polynomial& P) {
  Json arr = Json::array();
  for (const auto& [e, c] : P.terms()) {
    Json t;
    t["exponents"] = e;
    t["coeff"] = rat_to_string(c);
    arr.push_back(std::move(t));
  }
  return arr;
}

Polynomial poly_from_json(const Json& j, const VarSetPtr& vars) {
  if (!j.is_array()) bad("a polynomial must be an array of terms");
  Polynomial P = Polynomial::zero(vars);
  for (const Json& t : j) {
    if (!t.is_object()) bad("each polynomial term must be an object");
    const Json& ejs = field(t, "exponents");
    if (!ejs.is_array() || static_cast<int>(ejs.size()) != vars->size())
      bad("term exponent list does not match the variable count");
    Exps e;
    for (const Json& x : ejs) {
      if (!x.is_number_integer()) bad("exponents must be integers");
      int xi = x.get<int>();
      if (xi < 0) bad("exponents must be nonnegative");
      e.push_back(xi);
    }
    P = P + Polynomial::monomial(vars, e, rat_leaf(field(t, "coeff"), "coeff"));
  }
  return P;
}

Json poly_list_to_json(const std::vector<Polynomial>& v) {
  Json arr = Json::array();
  for (const Polynomial& P : v) arr.push_back(poly_to_json(P));
  return arr;
}

// ------------------------------------------------------------ presentation

Json presentation_to_jobj(const MalcevPresentation& N) {
  Json j;
  j["schema"] = 1;
  j["type"] = "malcev";
  j["label"] = N.label;
  j["h"] = N.h;
  j["class"] = N.nil_class;
  j["f"] = poly_list_to_json(N.mul);
  j["g"] = poly_list_to_json(N.pow);
  j["c"] = poly_list_to_json(N.comm);
  Json bp = Json::array();
  for (const Int& p : N.declared_bad_primes) bp.push_back(p.get_str());
  j["bad_primes"] = bp;
  return j;
}

MalcevPresentation presentation_from_jobj(const Json& j) {
  if (!j.is_object()) bad("a presentation must be a JSON object");
  if (int32_field(j, "schema") != 1) bad("unsupported schema version");
  if (j.contains("type") && j.at("type") != "malcev")
    bad("expected type 'malcev'");
  MalcevPresentation N;
  N.h = int32_field(j, "h");
  if (N.h < 1 || N.h > 64) bad("h out of range (expected 1..64)");
  N.nil_class = int32_field(j, "class");
  if (N.nil_class < 1 || N.nil_class > N.h) bad("class out of range");
  N.label = j.contains("label") ? string_field(j, "label") : "unnamed";
  N.xy_vars = make_xy_vars(N.h);
  N.xw_vars = make_xw_vars(N.h);
  auto poly_vec = [&](const char* key, const VarSetPtr& ring) {
    const Json& a = field(j, key);
    if (!a.is_array() || static_cast<int>(a.size()) != N.h)
      bad(std::string("field '") + key + "' must list h polynomials");
    std::vector<Polynomial> v;
    for (const Json& pj : a) v.push_back(poly_from_json(pj, ring));
    return v;
  };
  N.mul = poly_vec("f", N.xy_vars);
  N.pow = poly_vec("g", N.xw_vars);
  N.comm = poly_vec("c", N.xy_vars);
  if (j.contains("bad_primes")) {
    const Json& bp = j.at("bad_primes");
    if (!bp.is_array()) bad("bad_primes must be an array");
    for (const Json& v : bp)
      N.declared_bad_primes.push_back(int_leaf(v, "bad prime"));
  }
  VerificationReport rep = verify_presentation(N, 4, 40);
  if (!rep.all_passed())
    throw StructuralError("input presentation '" + N.label +
                          "' fails the group laws:\n" + rep.summary());
  return N;
}

// --------------------------------------------------------------- extension

Json extension_to_jobj(const VirtuallyTauGroup& V) {
  Json j;
  j["schema"] = 1;
  j["type"] = "extension";
  j["label"] = V.label;
  j["group"] = presentation_to_jobj(V.N);
  Json Fj;
  Fj["order"] = V.F.order;
  Fj["table"] = V.F.table;
  j["F"] = std::move(Fj);
  Json sj = Json::object();
  for (int f = 1; f < V.F.order; ++f)
    sj[std::to_string(f)] = poly_list_to_json(V.sigma[static_cast<std::size_t>(f)]);
  j["sigma"] = std::move(sj);
  Json pj = Json::object();
  for (int f = 1; f < V.F.order; ++f) {
    for (int g = 1; g < V.F.order; ++g) {
      Json arr = Json::array();
      for (const Int& a :
           V.psi[static_cast<std::size_t>(f)][static_cast<std::size_t>(g)])
        arr.push_back(a.get_str());
      pj[std::to_string(f) + "," + std::to_string(g)] = std::move(arr);
    }
  }
  j["psi"] = std::move(pj);
  return j;
}

VirtuallyTauGroup extension_from_jobj(const Json& j) {
  if (!j.is_object()) bad("an extension must be a JSON object");
  if (int32_field(j, "schema") != 1) bad("unsupported schema version");
  if (j.contains("type") && j.at("type") != "extension")
    bad("expected type 'extension'");
  VirtuallyTauGroup V;

  const Json& gj = field(j, "group");
  if (gj.is_string()) {
    std::string name = gj.get<std::string>();
    if (!is_malcev_catalog_name(name))
      bad("'group' names no catalog presentation: '" + name + "'");
    V.N = make_catalog_group(name);
  } else {
    V.N = presentation_from_jobj(gj);
  }

  const Json& Fj = field(j, "F");
  int order = int32_field(Fj, "order");
  if (order < 1 || order > 512) bad("F.order out of range (expected 1..512)");
  const Json& tj = field(Fj, "table");
  if (!tj.is_array() || static_cast<int>(tj.size()) != order)
    bad("F.table must be an order x order matrix");
  std::vector<std::vector<int>> table;
  for (const Json& row : tj) {
    if (!row.is_array() || static_cast<int>(row.size()) != order)
      bad("F.table must be an order x order matrix");
    std::vector<int> r;
    for (const Json& x : row) {
      if (!x.is_number_integer() || x.get<int>() < 0 || x.get<int>() >= order)
        bad("F.table entries must be element indices in [0, order)");
      r.push_back(x.get<int>());
    }
    table.push_back(std::move(r));
  }
  V.F = FiniteGroup::from_table(std::move(table),
                                "F" + std::to_string(order));

  std::vector<std::string> names;
  for (int i = 1; i <= V.N.h; ++i) names.push_back("X" + std::to_string(i));
  V.x_vars = make_vars(names);
  std::vector<Polynomial> idt;
  for (int i = 0; i < V.N.h; ++i)
    idt.push_back(Polynomial::variable(V.x_vars, i));
  V.sigma.push_back(std::move(idt));
  if (order > 1) {
    const Json& sj = field(j, "sigma");
    for (int f = 1; f < order; ++f) {
      std::string key = std::to_string(f);
      if (!sj.is_object() || !sj.contains(key))
        bad("sigma is missing key '" + key + "'");
      const Json& a = sj.at(key);
      if (!a.is_array() || static_cast<int>(a.size()) != V.N.h)
        bad("sigma['" + key + "'] must list h polynomials");
      std::vector<Polynomial> tup;
      for (const Json& pj : a) tup.push_back(poly_from_json(pj, V.x_vars));
      V.sigma.push_back(std::move(tup));
    }
  }

  Coords zero = mal_identity(V.N);
  V.psi.assign(static_cast<std::size_t>(order),
               std::vector<Coords>(static_cast<std::size_t>(order), zero));
  if (j.contains("psi")) {
    const Json& pj = j.at("psi");
    if (!pj.is_object()) bad("psi must be an object keyed by \"f,g\"");
    for (auto it = pj.begin(); it != pj.end(); ++it) {
      const std::string& key = it.key();
      auto comma = key.find(',');
      int f = -1, g = -1;
      try {
        if (comma != std::string::npos) {
          f = std::stoi(key.substr(0, comma));
          g = std::stoi(key.substr(comma + 1));
        }
      } catch (const std::exception&) {
        f = -1;
      }
      if (f <= 0 || g <= 0 || f >= order || g >= order)
        bad("psi key '" + key +
            "' must name a pair of non-identity elements of F "
            "(values on the identity are fixed by normalization)");
      const Json& arr = it.value();
      if (!arr.is_array() || static_cast<int>(arr.size()) != V.N.h)
        bad("psi['" + key + "'] must be a coordinate vector of length h");
      Coords cvec;
      for (const Json& x : arr) cvec.push_back(int_leaf(x, "psi entry"));
      V.psi[static_cast<std::size_t>(f)][static_cast<std::size_t>(g)] =
          std::move(cvec);
    }
  }

  V.label = j.contains("label") ? string_field(j, "label")
                                : V.N.label + ":ext";
  VerificationReport rep = verify_cocycle(V, 3, 24);
  if (!rep.all_passed())
    throw StructuralError("input extension '" + V.label +
                          "' fails the extension laws:\n" + rep.summary());
  return V;
}

// -------------------------------------------------------------- conditions

Json condition_system_to_jobj(const ConeConditionSystem& S) {
  Json j;
  j["schema"] = 1;
  j["type"] = "conditions";
  j["label"] = S.label;
  j["variant"] = variant_name(S.variant);
  j["h"] = S.h;
  j["k_size"] = S.k_size;
  j["k_elems"] = S.k_elems;
  j["vars"] = S.vars->names();
  j["diag_index"] = S.diag_index;
  Json conds = Json::array();
  for (const ConeCondition& c : S.conditions) {
    Json cj;
    cj["num"] = poly_to_json(c.num);
    cj["den"] = poly_to_json(c.den);
    conds.push_back(std::move(cj));
  }
  j["conditions"] = std::move(conds);
  j["shift"] = S.shift();
  j["weights"] = S.weight_const();
  return j;
}

ConeConditionSystem condition_system_from_jobj(const Json& j) {
  if (!j.is_object()) bad("a condition system must be a JSON object");
  if (int32_field(j, "schema") != 1) bad("unsupported schema version");
  if (j.contains("type") && j.at("type") != "conditions")
    bad("expected type 'conditions'");
  ConeConditionSystem S;
  S.label = j.contains("label") ? string_field(j, "label") : "unnamed";
  S.variant = parse_variant(string_field(j, "variant"));
  S.h = int32_field(j, "h");
  if (S.h < 1 || S.h > 64) bad("h out of range (expected 1..64)");
  S.k_size = int32_field(j, "k_size");
  if (S.k_size < 1) bad("k_size must be positive");
  const Json& ke = field(j, "k_elems");
  if (!ke.is_array() || static_cast<int>(ke.size()) != S.k_size)
    bad("k_elems must list k_size element indices");
  S.k_elems.clear();
  for (const Json& x : ke) {
    if (!x.is_number_integer() || x.get<int>() < 0)
      bad("k_elems entries must be nonnegative integers");
    S.k_elems.push_back(x.get<int>());
  }
  const Json& vj = field(j, "vars");
  if (!vj.is_array() || vj.empty()) bad("vars must be a nonempty name list");
  std::vector<std::string> names;
  for (const Json& x : vj) {
    if (!x.is_string()) bad("vars entries must be strings");
    names.push_back(x.get<std::string>());
  }
  S.vars = make_vars(names);
  const Json& dj = field(j, "diag_index");
  if (!dj.is_array() || static_cast<int>(dj.size()) != S.h)
    bad("diag_index must list h variable indices");
  S.diag_index.clear();
  for (const Json& x : dj) {
    if (!x.is_number_integer() || x.get<int>() < 0 ||
        x.get<int>() >= static_cast<int>(names.size()))
      bad("diag_index entries must index into vars");
    S.diag_index.push_back(x.get<int>());
  }
  const Json& cj = field(j, "conditions");
  if (!cj.is_array()) bad("conditions must be an array");
  for (const Json& c : cj) {
    ConeCondition cc;
    cc.num = poly_from_json(field(c, "num"), S.vars);
    cc.den = poly_from_json(field(c, "den"), S.vars);
    S.conditions.push_back(std::move(cc));
  }
  if (j.contains("shift") && j.at("shift") != Json(S.shift()))
    bad("field 'shift' disagrees with the value derived from h and k_size");
  if (j.contains("weights")) {
    Json w = Json(S.weight_const());
    if (j.at("weights") != w)
      bad("field 'weights' disagrees with the derived weight vector");
  }
  return S;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

// ------------------------------------------------------------- public API

std::string presentation_to_json(const MalcevPresentation& N) {
  return dump(presentation_to_jobj(N));
}

MalcevPresentation presentation_from_json(const std::string& text) {
  return presentation_from_jobj(parse_text(text));
}

std::string extension_to_json(const VirtuallyTauGroup& V) {
  return dump(extension_to_jobj(V));
}

VirtuallyTauGroup extension_from_json(const std::string& text) {
  return extension_from_jobj(parse_text(text));
}

std::string condition_system_to_json(const ConeConditionSystem& S) {
  return dump(condition_system_to_jobj(S));
}

ConeConditionSystem condition_system_from_json(const std::string& text) {
  return condition_system_from_jobj(parse_text(text));
}

std::string local_series_to_json(const LocalSeries& L,
                                 const ConeConditionSystem& S) {
  Json j;
  j["schema"] = 1;
  j["type"] = "local";
  j["label"] = L.label;
  j["p"] = L.p.get_str();
  j["kmax"] = L.kmax;
  j["variant"] = variant_name(S.variant);
  j["K"] = S.k_elems;
  Json counts = Json::array();
  for (const Int& c : L.counts) counts.push_back(c.get_str());
  j["counts"] = std::move(counts);
  Json a = Json::array();
  for (const Rat& q : L.coeffs) a.push_back(rat_to_string(q));
  j["a_raw"] = std::move(a);
  return dump(j);
}

std::string dirichlet_to_json(const DirichletSeries& D) {
  Json j;
  j["schema"] = 1;
  j["type"] = "dirichlet";
  j["label"] = D.label;
  j["nmax"] = D.nmax;
  Json a = Json::array();
  for (int n = 1; n <= D.nmax; ++n)
    a.push_back(D.a[static_cast<std::size_t>(n)].get_str());
  j["a"] = std::move(a);
  return dump(j);
}

std::string dirichlet_to_csv(const DirichletSeries& D) {
  std::ostringstream out;
  out << "n,a_n\n";
  for (int n = 1; n <= D.nmax; ++n)
    out << n << "," << D.a[static_cast<std::size_t>(n)].get_str() << "\n";
  return out.str();
}

std::string count_report_to_json(const CountReport& R) {
  Json j;
  j["schema"] = 1;
  j["type"] = "count-report";
  j["label"] = R.label;
  j["p"] = R.p.get_str();
  j["oracle_stable"] = R.oracle_stable;
  j["all_match"] = R.all_match;
  Json rows = Json::array();
  for (const CountRow& r : R.rows) {
    Json rj;
    rj["k"] = r.k;
    rj["engine"] = r.engine.get_str();
    rj["oracle"] = r.oracle.get_str();
    rj["match"] = r.match;
    rows.push_back(std::move(rj));
  }
  j["rows"] = std::move(rows);
  return dump(j);
}

std::string count_report_to_csv(const CountReport& R) {
  std::ostringstream out;
  out << "k,engine,oracle,match\n";
  for (const CountRow& r : R.rows)
    out << r.k << "," << r.engine.get_str() << "," << r.oracle.get_str()
        << "," << (r.match ? "yes" : "no") << "\n";
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw UsageError("error while reading file '" + path + "'");
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot open file '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw UsageError("error while writing file '" + path + "'");
}

LoadedGroup load_group(const std::string& name_or_path) {
  LoadedGroup L;
  L.source = name_or_path;
  if (is_malcev_catalog_name(name_or_path)) {
    L.is_extension = false;
    L.N = make_catalog_group(name_or_path);
    L.V = make_trivial_extension(L.N);
    return L;
  }
  if (is_extension_catalog_name(name_or_path)) {
    L.is_extension = true;
    L.V = make_extension_catalog_group(name_or_path);
    L.N = L.V.N;
    return L;
  }
  std::string text;
  try {
    text = read_text_file(name_or_path);
  } catch (const UsageError&) {
    throw UsageError("'" + name_or_path +
                     "' is neither a catalog name nor a readable file "
                     "(run the catalog command for known names)");
  }
  Json j = parse_text(text);
  if (!j.is_object()) bad("a group file must hold a JSON object");
  bool looks_extension =
      j.contains("F") || j.contains("sigma") || j.contains("psi") ||
      (j.contains("type") && j.at("type") == "extension");
  if (looks_extension) {
    L.is_extension = true;
    L.V = extension_from_jobj(j);
    L.N = L.V.N;
  } else {
    L.is_extension = false;
    L.N = presentation_from_jobj(j);
    L.V = make_trivial_extension(L.N);
  }
  return L;
}

}  // namespace conezeta
