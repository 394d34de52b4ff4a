#pragma once
#include <string>

#include "json.hpp"
#include "limlab/colorings.hpp"
#include "limlab/homalg.hpp"
#include "limlab/search.hpp"
#include "limlab/simplicial.hpp"
#include "limlab/sset.hpp"
#include "limlab/trivialize.hpp"

namespace limlab {
namespace io {

using Json = nlohmann::json;

// Instance files are UTF-8 JSON objects with a top-level "kind"
// discriminator.  Keys serialize in lexicographic order, and integers that
// can outgrow 64 bits (presentation matrices, invariant factors) travel as
// decimal strings, so equal values dump to identical bytes.

// value-level serializers
Json order_to_json(const QuasiOrder& P);
Json coloring_to_json(const Coloring& c);
Json cofinal_fn_to_json(const CofinalFn& F);
Json stats_to_json(const SearchStats& s);  // wall time intentionally omitted
Json outcome_to_json(const SearchOutcome& o);
Json complex_to_json(const Complex& Y);
Json injection_system_to_json(const InjectionSystem& sys);
Json csequence_to_json(const CSequence& C);
Json group_to_json(const FGAbelianGroup& g);
Json hom_to_json(const GroupHom& h);
Json inverse_system_to_json(const InverseSystem& S);
Json tower_system_to_json(const TruncatedOmegaSystem& T);
Json cochain_to_json(const AlternatingCochain& phi);
Json invariants_to_json(const GroupInvariants& inv);
Json nerve_level_to_json(const NerveLevel& L);
Json ex_level_to_json(const ExNerveLevel& L);

// document builders; each embeds enough context to validate standalone
Json order_doc(const QuasiOrder& P);
Json coloring_doc(const QuasiOrder& P, const Coloring& c);
Json cofinal_fn_doc(const QuasiOrder& P, const CofinalFn& F);
Json instance_doc(const PHInstance& inst);
Json complex_doc(const Complex& Y);
Json injection_system_doc(const InjectionSystem& sys);
Json csequence_doc(const CSequence& C);
Json inverse_system_doc(const InverseSystem& S);
Json tower_system_doc(const TruncatedOmegaSystem& T);
Json trivialization_job_doc(const EvaluationContext& ctx, const CofinalFn& F);
Json nerve_level_doc(const NerveLevel& L);
Json ex_level_doc(const ExNerveLevel& L);

// parsers; StructuralError names the offending field
QuasiOrder order_from_json(const Json& j);
Coloring coloring_from_json(const Json& j);
CofinalFn cofinal_fn_from_json(const Json& j);
PHInstance instance_from_json(const Json& j);
Complex complex_from_json(const Json& j);
InjectionSystem injection_system_from_json(const Json& j);
CSequence csequence_from_json(const Json& j);
FGAbelianGroup group_from_json(const Json& j);
GroupHom hom_from_json(const Json& j);
InverseSystem inverse_system_from_json(const Json& j);
TruncatedOmegaSystem tower_system_from_json(const Json& j);
AlternatingCochain cochain_from_json(const Json& j);

// top-level "kind"; StructuralError when absent
std::string kind_of(const Json& doc);

// StructuralError on unreadable files and parse failures
Json load_file(const std::string& path);
void save_file(const std::string& path, const Json& doc);
std::string dump_canonical(const Json& doc);  // 2-space indent, final newline

// schema and invariant check for every kind above; parse failures inside a
// well-formed JSON object come back as diagnostics, not exceptions
Diagnostics validate_document(const Json& doc);

// Reports wrap a payload as {"kind":"report","command",...,"payload",
// "timing"}; everything outside "timing" is reproducible for a fixed seed.
Json make_report(const std::string& command, Json payload, double elapsed_ms);
Json strip_timing(Json report);

// "json" dumps the whole report; "csv" and "text" flatten the payload to
// path,value rows (timing excluded), for spreadsheets and logs
std::string render(const Json& report, const std::string& format);

}  // namespace io
}  // namespace limlab
