#pragma once

#include <string>

#include "conezeta/conegen.hpp"
#include "conezeta/evaluator.hpp"
#include "conezeta/extension.hpp"
#include "conezeta/malcev.hpp"
#include "conezeta/zeta.hpp"

namespace conezeta {

// A group loaded from a catalog name or a JSON file.  Tau groups are also
// carried as their trivial extension so downstream code can treat every
// input uniformly; `is_extension` records which kind the source described.
struct LoadedGroup {
  bool is_extension = false;
  MalcevPresentation N;  // always populated
  VirtuallyTauGroup V;   // trivial extension when !is_extension
  std::string source;    // catalog name or file path
};

// Resolve a catalog name first, then fall back to reading a JSON file at
// the given path.  File input is verified structurally before it is
// returned; input that fails a law raises StructuralError.
LoadedGroup load_group(const std::string& name_or_path);

// JSON text <-> objects.  Integer- and rational-valued leaves are decimal
// strings ("5", "-3/4") so arbitrary-precision values survive the trip;
// readers also accept plain JSON integers where a string is expected.
// Object key order is fixed, so to_json(from_json(text)) is byte-stable.
std::string presentation_to_json(const MalcevPresentation& N);
MalcevPresentation presentation_from_json(const std::string& text);

std::string extension_to_json(const VirtuallyTauGroup& V);
VirtuallyTauGroup extension_from_json(const std::string& text);

std::string condition_system_to_json(const ConeConditionSystem& S);
ConeConditionSystem condition_system_from_json(const std::string& text);

// Emission helpers for the command-line tool.  The condition system
// supplies the variant and coset labels that LocalSeries does not carry.
std::string local_series_to_json(const LocalSeries& L,
                                 const ConeConditionSystem& S);
std::string dirichlet_to_json(const DirichletSeries& D);
std::string dirichlet_to_csv(const DirichletSeries& D);
std::string count_report_to_json(const CountReport& R);
std::string count_report_to_csv(const CountReport& R);

// Small file helpers (UsageError on failure).
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace conezeta
