#include "limlab/io.hpp"

#include <algorithm>
#include <fstream>
#include <utility>
#include <vector>

#include "limlab/errors.hpp"

namespace limlab {
namespace io {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw StructuralError("expected an object");
  auto it = j.find(key);
  if (it == j.end())
    throw StructuralError(std::string("missing field \"") + key + "\"");
  return *it;
}

template <typename T>
T get_as(const Json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const std::exception&) {
    throw StructuralError(std::string("malformed ") + what + ": " + j.dump());
  }
}

int int_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer())
    throw StructuralError(std::string("field \"") + key +
                          "\" must be an integer");
  return v.get<int>();
}

std::string str_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string())
    throw StructuralError(std::string("field \"") + key +
                          "\" must be a string");
  return v.get<std::string>();
}

// big integers travel as decimal strings; plain JSON integers are accepted
// on input for hand-written files
Int int_from(const Json& v) {
  if (v.is_number_integer()) return Int(v.get<long long>());
  if (v.is_string()) {
    try {
      return Int(v.get<std::string>());
    } catch (const std::exception&) {
      throw StructuralError("bad integer literal " + v.dump());
    }
  }
  throw StructuralError("expected an integer, got " + v.dump());
}

Json int_to(const Int& x) { return Json(x.str()); }

Vec vec_from(const Json& v) {
  if (!v.is_array()) throw StructuralError("expected an integer array");
  Vec out;
  for (const Json& e : v) out.push_back(int_from(e));
  return out;
}

Json vec_to(const Vec& v) {
  Json a = Json::array();
  for (const Int& x : v) a.push_back(int_to(x));
  return a;
}

Mat mat_from(const Json& v) {
  if (!v.is_array()) throw StructuralError("expected a matrix");
  Mat out;
  for (const Json& row : v) out.push_back(vec_from(row));
  return out;
}

Json mat_to(const Mat& m) {
  Json a = Json::array();
  for (const Vec& row : m) a.push_back(vec_to(row));
  return a;
}

SearchMode mode_from_string(const std::string& s) {
  if (s == "total") return SearchMode::total;
  if (s == "partial-on-cofinal") return SearchMode::partial_on_cofinal;
  if (s == "strictly-increasing") return SearchMode::strictly_increasing;
  throw StructuralError("unknown search mode \"" + s + "\"");
}

Json with_kind(Json j, const char* kind) {
  j["kind"] = kind;
  return j;
}

}  // namespace

Json order_to_json(const QuasiOrder& P) {
  Json pairs = Json::array();
  for (Elem a = 0; a < P.size(); ++a)
    for (Elem b = 0; b < P.size(); ++b)
      if (a != b && P.le(a, b)) pairs.push_back(Json::array({a, b}));
  return Json{{"size", P.size()}, {"leq", pairs}, {"names", P.names}};
}

QuasiOrder order_from_json(const Json& j) {
  int size = int_field(j, "size");
  if (size < 0) throw StructuralError("order size must be nonnegative");
  std::vector<std::pair<int, int>> pairs;
  for (const Json& e : field(j, "leq")) {
    if (!e.is_array() || e.size() != 2)
      throw StructuralError("each leq entry must be a pair");
    int a = get_as<int>(e[0], "leq entry");
    int b = get_as<int>(e[1], "leq entry");
    if (a < 0 || a >= size || b < 0 || b >= size)
      throw StructuralError("leq entry out of range: " + e.dump());
    pairs.push_back({a, b});
  }
  QuasiOrder P(size, pairs, /*close_transitively=*/false);
  if (j.contains("names")) {
    auto names = get_as<std::vector<std::string>>(j.at("names"), "names");
    if (static_cast<int>(names.size()) != size)
      throw StructuralError("names length does not match size");
    P.names = std::move(names);
  }
  return P;
}

Json coloring_to_json(const Coloring& c) {
  Json entries = Json::array();
  for (const auto& [t, color] : c.table)
    entries.push_back(Json{{"tuple", t}, {"color", color}});
  return Json{{"arity", c.arity}, {"palette", c.palette}, {"entries", entries}};
}

Coloring coloring_from_json(const Json& j) {
  Coloring c;
  c.arity = int_field(j, "arity");
  c.palette = int_field(j, "palette");
  for (const Json& e : field(j, "entries")) {
    Tuple t = get_as<Tuple>(field(e, "tuple"), "tuple");
    c.table[t] = int_field(e, "color");
  }
  return c;
}

Json cofinal_fn_to_json(const CofinalFn& F) {
  Json table = Json::array();
  for (const auto& [t, v] : F.table)
    table.push_back(Json{{"tuple", t}, {"value", v}});
  return Json{{"arity", F.arity},
              {"domain", F.domain_kind == DomainKind::weak ? "weak" : "strict"},
              {"base", F.base ? Json(*F.base) : Json(nullptr)},
              {"table", table}};
}

CofinalFn cofinal_fn_from_json(const Json& j) {
  CofinalFn F;
  F.arity = int_field(j, "arity");
  std::string dom = str_field(j, "domain");
  if (dom == "weak")
    F.domain_kind = DomainKind::weak;
  else if (dom == "strict")
    F.domain_kind = DomainKind::strict;
  else
    throw StructuralError("unknown domain kind \"" + dom + "\"");
  const Json& base = field(j, "base");
  if (!base.is_null())
    F.base = get_as<std::vector<Elem>>(base, "base");
  for (const Json& e : field(j, "table")) {
    Tuple t = get_as<Tuple>(field(e, "tuple"), "tuple");
    F.table[t] = int_field(e, "value");
  }
  return F;
}

Json stats_to_json(const SearchStats& s) {
  return Json{{"budget", s.budget},
              {"nodes", s.nodes},
              {"prunes", s.prunes},
              {"workers", s.workers}};
}

Json outcome_to_json(const SearchOutcome& o) {
  return Json{{"status", to_string(o.status)},
              {"witness", o.witness ? cofinal_fn_to_json(*o.witness)
                                    : Json(nullptr)},
              {"constant_color",
               o.constant_color ? Json(*o.constant_color) : Json(nullptr)},
              {"stats", stats_to_json(o.stats)},
              {"note", o.note}};
}

Json instance_doc(const PHInstance& inst) {
  return Json{{"kind", "instance"},
              {"order", order_to_json(inst.order)},
              {"coloring", coloring_to_json(inst.coloring)},
              {"n", inst.n},
              {"mode", to_string(inst.mode)},
              {"strict_domain",
               inst.strict_domain ? Json(*inst.strict_domain) : Json(nullptr)},
              {"allowed_colors",
               inst.allowed_colors ? Json(*inst.allowed_colors) : Json(nullptr)}};
}

PHInstance instance_from_json(const Json& j) {
  PHInstance inst;
  inst.order = order_from_json(field(j, "order"));
  inst.coloring = coloring_from_json(field(j, "coloring"));
  inst.n = int_field(j, "n");
  inst.mode = mode_from_string(str_field(j, "mode"));
  if (j.contains("strict_domain") && !j.at("strict_domain").is_null())
    inst.strict_domain =
        get_as<std::vector<Elem>>(j.at("strict_domain"), "strict_domain");
  if (j.contains("allowed_colors") && !j.at("allowed_colors").is_null())
    inst.allowed_colors =
        get_as<std::vector<int>>(j.at("allowed_colors"), "allowed_colors");
  return inst;
}

Json complex_to_json(const Complex& Y) {
  Json faces = Json::array();
  for (const Face& f : Y.faces) faces.push_back(f);
  return Json{{"faces", faces}};
}

Complex complex_from_json(const Json& j) {
  Complex Y;
  for (const Json& f : field(j, "faces"))
    Y.faces.insert(get_as<Face>(f, "face"));
  return Y;
}

Json injection_system_to_json(const InjectionSystem& sys) {
  return Json{{"depth", sys.depth},
              {"level_sizes", sys.level_sizes},
              {"inj", sys.inj}};
}

InjectionSystem injection_system_from_json(const Json& j) {
  InjectionSystem sys;
  sys.depth = int_field(j, "depth");
  sys.level_sizes = get_as<std::vector<int>>(field(j, "level_sizes"),
                                             "level_sizes");
  sys.inj = get_as<std::vector<std::vector<std::vector<int>>>>(field(j, "inj"),
                                                               "inj");
  return sys;
}

Json csequence_to_json(const CSequence& C) {
  return Json{{"N", C.N}, {"clubs", C.clubs}};
}

CSequence csequence_from_json(const Json& j) {
  CSequence C;
  C.N = int_field(j, "N");
  C.clubs = get_as<std::vector<std::vector<int>>>(field(j, "clubs"), "clubs");
  return C;
}

Json group_to_json(const FGAbelianGroup& g) {
  return Json{{"generators", g.generators}, {"relations", mat_to(g.relations)}};
}

FGAbelianGroup group_from_json(const Json& j) {
  FGAbelianGroup g;
  g.generators = int_field(j, "generators");
  g.relations = mat_from(field(j, "relations"));
  for (const Vec& row : g.relations)
    if (static_cast<int>(row.size()) != g.generators)
      throw StructuralError("relation row width does not match generators");
  return g;
}

Json hom_to_json(const GroupHom& h) { return Json{{"matrix", mat_to(h.matrix)}}; }

GroupHom hom_from_json(const Json& j) {
  return GroupHom{mat_from(field(j, "matrix"))};
}

Json inverse_system_to_json(const InverseSystem& S) {
  Json bonds = Json::array();
  for (const auto& [key, hom] : S.bonds)
    bonds.push_back(
        Json{{"x", key.first}, {"y", key.second}, {"hom", hom_to_json(hom)}});
  Json terms = Json::array();
  for (const FGAbelianGroup& g : S.terms) terms.push_back(group_to_json(g));
  return Json{{"index", order_to_json(S.index)},
              {"terms", terms},
              {"bonds", bonds}};
}

InverseSystem inverse_system_from_json(const Json& j) {
  InverseSystem S;
  S.index = order_from_json(field(j, "index"));
  for (const Json& g : field(j, "terms"))
    S.terms.push_back(group_from_json(g));
  for (const Json& b : field(j, "bonds")) {
    Elem x = int_field(b, "x");
    Elem y = int_field(b, "y");
    S.bonds[{x, y}] = hom_from_json(field(b, "hom"));
  }
  return S;
}

Json tower_system_to_json(const TruncatedOmegaSystem& T) {
  Json grid = Json::array();
  for (const auto& tower : T.grid) {
    Json col = Json::array();
    for (const FGAbelianGroup& g : tower) col.push_back(group_to_json(g));
    grid.push_back(col);
  }
  Json step = Json::array();
  for (const auto& tower : T.step) {
    Json col = Json::array();
    for (const GroupHom& h : tower) col.push_back(hom_to_json(h));
    step.push_back(col);
  }
  return Json{{"width", T.width},
              {"height", T.height},
              {"grid", grid},
              {"step", step}};
}

TruncatedOmegaSystem tower_system_from_json(const Json& j) {
  TruncatedOmegaSystem T;
  T.width = int_field(j, "width");
  T.height = int_field(j, "height");
  for (const Json& col : field(j, "grid")) {
    std::vector<FGAbelianGroup> tower;
    for (const Json& g : col) tower.push_back(group_from_json(g));
    T.grid.push_back(std::move(tower));
  }
  for (const Json& col : field(j, "step")) {
    std::vector<GroupHom> tower;
    for (const Json& h : col) tower.push_back(hom_from_json(h));
    T.step.push_back(std::move(tower));
  }
  return T;
}

Json cochain_to_json(const AlternatingCochain& phi) {
  Json values = Json::array();
  for (const auto& [t, v] : phi.values)
    values.push_back(Json{{"tuple", t}, {"value", vec_to(v)}});
  return Json{{"degree", phi.degree}, {"values", values}};
}

AlternatingCochain cochain_from_json(const Json& j) {
  AlternatingCochain phi;
  phi.degree = int_field(j, "degree");
  for (const Json& e : field(j, "values")) {
    Tuple t = get_as<Tuple>(field(e, "tuple"), "tuple");
    phi.values[t] = vec_from(field(e, "value"));
  }
  return phi;
}

Json invariants_to_json(const GroupInvariants& inv) {
  Json torsion = Json::array();
  for (const Int& q : inv.torsion) torsion.push_back(int_to(q));
  return Json{{"free_rank", inv.free_rank}, {"torsion", torsion}};
}

Json nerve_level_to_json(const NerveLevel& L) {
  return Json{{"order", order_to_json(L.order)}, {"n", L.n},
              {"faces", L.faces}};
}

Json ex_level_to_json(const ExNerveLevel& L) {
  Json faces = Json::array();
  for (const ExFace& s : L.faces) {
    Json entries = Json::array();
    for (const auto& [subset, v] : s.values)
      entries.push_back(Json{{"subset", subset}, {"value", v}});
    faces.push_back(entries);
  }
  return Json{{"order", order_to_json(L.order)}, {"n", L.n}, {"faces", faces}};
}

Json order_doc(const QuasiOrder& P) { return with_kind(order_to_json(P), "order"); }

Json coloring_doc(const QuasiOrder& P, const Coloring& c) {
  return Json{{"kind", "coloring"},
              {"order", order_to_json(P)},
              {"coloring", coloring_to_json(c)}};
}

Json cofinal_fn_doc(const QuasiOrder& P, const CofinalFn& F) {
  return Json{{"kind", "cofinal_fn"},
              {"order", order_to_json(P)},
              {"fn", cofinal_fn_to_json(F)}};
}

Json complex_doc(const Complex& Y) {
  return with_kind(complex_to_json(Y), "complex");
}

Json injection_system_doc(const InjectionSystem& sys) {
  return with_kind(injection_system_to_json(sys), "injection_system");
}

Json csequence_doc(const CSequence& C) {
  return with_kind(csequence_to_json(C), "c_sequence");
}

Json inverse_system_doc(const InverseSystem& S) {
  return with_kind(inverse_system_to_json(S), "inverse_system");
}

Json tower_system_doc(const TruncatedOmegaSystem& T) {
  return with_kind(tower_system_to_json(T), "tower_system");
}

Json trivialization_job_doc(const EvaluationContext& ctx, const CofinalFn& F) {
  return Json{{"kind", "trivialization_job"},
              {"system", tower_system_to_json(ctx.system)},
              {"cocycle", cochain_to_json(ctx.cocycle)},
              {"cutoff", ctx.cutoff},
              {"fn", cofinal_fn_to_json(F)}};
}

Json nerve_level_doc(const NerveLevel& L) {
  return with_kind(nerve_level_to_json(L), "nerve_level");
}

Json ex_level_doc(const ExNerveLevel& L) {
  return with_kind(ex_level_to_json(L), "ex_level");
}

std::string kind_of(const Json& doc) { return str_field(doc, "kind"); }

Json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot read file " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw StructuralError("parse error in " + path + ": " + e.what());
  }
}

void save_file(const std::string& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw StructuralError("cannot write file " + path);
  out << dump_canonical(doc);
}

std::string dump_canonical(const Json& doc) { return doc.dump(2) + "\n"; }

namespace {

void merge(Diagnostics& into, const Diagnostics& from) {
  for (const std::string& s : from.issues) into.add(s);
}

void validate_complex(const Complex& Y, Diagnostics& d) {
  for (const Face& f : Y.faces) {
    if (f.empty()) d.add("empty face");
    if (!std::is_sorted(f.begin(), f.end()) ||
        std::adjacent_find(f.begin(), f.end()) != f.end())
      d.add("face is not a sorted vertex set: " + face_to_string(f));
    if (f.size() >= 2)
      for (const Tuple& sub : one_deletions(f))
        if (!Y.contains(sub))
          d.add("not downward closed at " + face_to_string(f));
  }
}

void validate_cochain_shape(const AlternatingCochain& phi, Diagnostics& d) {
  if (phi.degree < 0) d.add("cochain degree must be nonnegative");
  for (const auto& [t, v] : phi.values) {
    if (static_cast<int>(t.size()) != phi.degree + 1)
      d.add("key length does not match the degree: " + face_to_string(t));
    if (!std::is_sorted(t.begin(), t.end()) ||
        std::adjacent_find(t.begin(), t.end()) != t.end())
      d.add("key is not strictly increasing: " + face_to_string(t));
    (void)v;
  }
}

}  // namespace

Diagnostics validate_document(const Json& doc) {
  Diagnostics d;
  std::string kind;
  try {
    kind = kind_of(doc);
  } catch (const std::exception& e) {
    d.add(e.what());
    return d;
  }
  try {
    if (kind == "order") {
      merge(d, order_from_json(doc).validate());
    } else if (kind == "coloring") {
      QuasiOrder P = order_from_json(field(doc, "order"));
      Coloring c = coloring_from_json(field(doc, "coloring"));
      merge(d, P.validate());
      if (d.ok()) merge(d, c.validate_total(P));
    } else if (kind == "cofinal_fn") {
      QuasiOrder P = order_from_json(field(doc, "order"));
      CofinalFn F = cofinal_fn_from_json(field(doc, "fn"));
      merge(d, P.validate());
      if (d.ok()) merge(d, check_n_cofinal(P, F));
    } else if (kind == "instance") {
      merge(d, instance_from_json(doc).validate());
    } else if (kind == "complex") {
      validate_complex(complex_from_json(doc), d);
    } else if (kind == "injection_system") {
      merge(d, injection_system_from_json(doc).validate());
    } else if (kind == "c_sequence") {
      merge(d, csequence_from_json(doc).validate());
    } else if (kind == "inverse_system") {
      merge(d, inverse_system_from_json(doc).validate());
    } else if (kind == "tower_system") {
      merge(d, tower_system_from_json(doc).validate());
    } else if (kind == "cochain") {
      validate_cochain_shape(cochain_from_json(doc), d);
    } else if (kind == "trivialization_job") {
      TruncatedOmegaSystem sys = tower_system_from_json(field(doc, "system"));
      AlternatingCochain phi = cochain_from_json(field(doc, "cocycle"));
      CofinalFn F = cofinal_fn_from_json(field(doc, "fn"));
      int cutoff = int_field(doc, "cutoff");
      merge(d, sys.validate());
      validate_cochain_shape(phi, d);
      if (cutoff < 0) d.add("cutoff must be nonnegative");
      if (d.ok()) {
        InverseSystem S = sys.to_inverse_system();
        merge(d, check_n_cofinal(S.index, F));
        if (!cochain_is_zero(S, coboundary(S, phi)))
          d.add("the cochain is not a cocycle");
      }
    } else if (kind == "nerve_level") {
      QuasiOrder P = order_from_json(field(doc, "order"));
      int n = int_field(doc, "n");
      merge(d, P.validate());
      if (n < 0) d.add("level must be nonnegative");
      if (d.ok()) {
        std::size_t count = 0;
        for (const Json& f : field(doc, "faces")) {
          Tuple t = get_as<Tuple>(f, "face");
          if (static_cast<int>(t.size()) != n + 1 || !weakly_increasing(P, t))
            d.add("not a level face: " + tuple_to_string(P, t));
          ++count;
        }
        if (d.ok() && count != nerve_level(P, n).faces.size())
          d.add("face count does not match the level");
      }
    } else if (kind == "ex_level") {
      QuasiOrder P = order_from_json(field(doc, "order"));
      int n = int_field(doc, "n");
      merge(d, P.validate());
      if (n < 0) d.add("level must be nonnegative");
      if (d.ok())
        for (const Json& fj : field(doc, "faces")) {
          ExFace s;
          for (const Json& e : fj) {
            auto subset = get_as<std::vector<int>>(field(e, "subset"), "subset");
            s.values[subset] = int_field(e, "value");
          }
          merge(d, validate_ex_face(P, s, n));
        }
    } else if (kind == "outcome") {
      std::string status = str_field(doc, "status");
      if (status != "witness-found" && status != "refuted-by-exhaustion" &&
          status != "inconclusive")
        d.add("unknown status \"" + status + "\"");
    } else if (kind == "report") {
      field(doc, "command");
      field(doc, "payload");
    } else {
      d.add("unknown kind \"" + kind + "\"");
    }
  } catch (const std::exception& e) {
    d.add(e.what());
  }
  return d;
}

Json make_report(const std::string& command, Json payload, double elapsed_ms) {
  return Json{{"kind", "report"},
              {"command", command},
              {"payload", std::move(payload)},
              {"timing", Json{{"elapsed_ms", elapsed_ms}}}};
}

Json strip_timing(Json report) {
  report.erase("timing");
  return report;
}

namespace {

void flatten_into(const std::string& prefix, const Json& v,
                  std::vector<std::pair<std::string, Json>>& rows) {
  if (v.is_object()) {
    if (v.empty()) rows.push_back({prefix, Json("{}")});
    for (const auto& [k, val] : v.items())
      flatten_into(prefix.empty() ? k : prefix + "." + k, val, rows);
  } else if (v.is_array()) {
    if (v.empty()) rows.push_back({prefix, Json("[]")});
    for (std::size_t i = 0; i < v.size(); ++i)
      flatten_into(prefix + "[" + std::to_string(i) + "]", v[i], rows);
  } else {
    rows.push_back({prefix, v});
  }
}

std::string csv_cell(const Json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::string text_cell(const Json& v) {
  return v.is_string() ? v.get<std::string>() : v.dump();
}

}  // namespace

std::string render(const Json& report, const std::string& format) {
  if (format == "json") return dump_canonical(report);
  std::vector<std::pair<std::string, Json>> rows;
  if (report.contains("payload")) flatten_into("", report.at("payload"), rows);
  std::string command =
      report.contains("command") ? text_cell(report.at("command")) : "";
  if (format == "csv") {
    std::string out = "key,value\n";
    if (!command.empty()) out += "command," + csv_cell(Json(command)) + "\n";
    for (const auto& [k, v] : rows) out += csv_cell(Json(k)) + "," + csv_cell(v) + "\n";
    return out;
  }
  if (format == "text") {
    std::string out;
    if (!command.empty()) out += "command: " + command + "\n";
    for (const auto& [k, v] : rows) out += k + " = " + text_cell(v) + "\n";
    return out;
  }
  throw DomainError("unknown format \"" + format + "\"");
}

}  // namespace io
}  // namespace limlab
