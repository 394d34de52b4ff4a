#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "limlab/gen.hpp"
#include "limlab/io.hpp"
#include "limlab/rng.hpp"

using namespace limlab;
using io::Json;

namespace {

int log_level() {
  const char* e = std::getenv("LIMLAB_LOG");
  return e ? std::atoi(e) : 0;
}

void logmsg(const std::string& s) {
  if (log_level() >= 1) std::cerr << "[limlab] " << s << "\n";
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

int emit(const std::string& body, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << body;
    return 0;
  }
  std::ofstream f(out_path);
  if (!f) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return 2;
  }
  f << body;
  logmsg("wrote " + out_path);
  return 0;
}

Json load_kind(const std::string& path, const std::string& want) {
  Json doc = io::load_file(path);
  std::string kind = io::kind_of(doc);
  if (kind != want)
    throw StructuralError("expected a " + want + " file, found kind \"" +
                          kind + "\"");
  return doc;
}

Coloring random_total_coloring(const QuasiOrder& P, int arity, int palette,
                               Rng& rng) {
  Coloring c;
  c.arity = arity;
  c.palette = palette;
  for (const Tuple& t : enumerate_increasing_tuples(P, arity))
    c.table[t] = static_cast<int>(rng.below(palette));
  return c;
}

Complex random_complex(int size, Rng& rng) {
  std::vector<Face> faces;
  for (int i = 0; i < std::max(2, size); ++i) {
    Face f;
    for (int v = 0; v < size; ++v)
      if (rng.below(2)) f.push_back(v);
    if (f.empty()) f.push_back(static_cast<int>(rng.below(size)));
    faces.push_back(f);
  }
  return Complex::from_faces(faces);
}

struct Options {
  std::uint64_t seed = 0;
  long long budget = 1000000;
  int workers = 1;
  std::string out;
  std::string format = "json";
};

int finish(const std::string& command, Json payload, double elapsed,
           const Options& opt, int code = 0) {
  Json report = io::make_report(command, std::move(payload), elapsed);
  int rc = emit(io::render(report, opt.format), opt.out);
  return rc != 0 ? rc : code;
}

int run_gen(const Options& opt, const std::string& kind, int size, int palette,
            int n, const std::string& mode, int depth, int width, int height,
            int max_rank) {
  Rng rng{opt.seed};
  Json doc;
  if (kind == "order") {
    doc = io::order_doc(random_quasi_order(size, opt.seed));
  } else if (kind == "coloring") {
    QuasiOrder P = random_quasi_order(size, opt.seed);
    doc = io::coloring_doc(P, random_total_coloring(P, n + 1, palette, rng));
  } else if (kind == "instance") {
    PHInstance inst;
    inst.order = random_quasi_order(size, opt.seed);
    inst.coloring = random_total_coloring(inst.order, n + 1, palette, rng);
    inst.n = n;
    inst.mode = mode == "total" ? SearchMode::total
                : mode == "strictly-increasing"
                    ? SearchMode::strictly_increasing
                    : SearchMode::partial_on_cofinal;
    doc = io::instance_doc(inst);
  } else if (kind == "complex") {
    doc = io::complex_doc(random_complex(size, rng));
  } else if (kind == "injection_system") {
    std::vector<int> levels(depth + 1, size);
    doc = io::injection_system_doc(
        generate_injection_system(depth, levels, opt.seed));
  } else if (kind == "c_sequence") {
    doc = io::csequence_doc(generate_csequence(size, opt.seed));
  } else if (kind == "inverse_system") {
    doc = io::inverse_system_doc(random_tree_system(size, max_rank, opt.seed));
  } else {  // tower_system
    doc = io::tower_system_doc(
        random_tower_system(width, height, max_rank, opt.seed));
  }
  logmsg("generated " + kind + " with seed " + std::to_string(opt.seed));
  return emit(io::dump_canonical(doc), opt.out);
}

int run_validate(const Options& opt, const std::string& path) {
  auto t0 = std::chrono::steady_clock::now();
  Json doc = io::load_file(path);
  Diagnostics d = io::validate_document(doc);
  Json payload{{"path", path},
               {"kind", doc.contains("kind") ? doc.at("kind") : Json(nullptr)},
               {"ok", d.ok()},
               {"issues", d.issues}};
  return finish("validate", payload, ms_since(t0), opt, d.ok() ? 0 : 2);
}

int run_search(const Options& opt, const std::string& path) {
  auto t0 = std::chrono::steady_clock::now();
  PHInstance inst = io::instance_from_json(load_kind(path, "instance"));
  Diagnostics d = inst.validate();
  if (!d.ok()) {
    std::cerr << "error: " << d.joined() << "\n";
    return 2;
  }
  SearchOutcome o = find_witness(inst, opt.budget, opt.workers);
  Json payload = io::outcome_to_json(o);
  if (o.witness)
    payload["verification"] = verify_witness(inst, *o.witness).issues;
  logmsg("search: " + to_string(o.status));
  return finish("search", payload, ms_since(t0), opt,
                o.status == SearchStatus::inconclusive ? 3 : 0);
}

int run_refute(const Options& opt, int size) {
  auto t0 = std::chrono::steady_clock::now();
  InjectionSystem sys =
      generate_injection_system(1, {size, size}, opt.seed);
  RefutationCertificate cert = refute_injective_coloring(size, sys);
  Json payload{{"N", cert.N},
               {"pairs_scanned", cert.pairs_scanned},
               {"assignments", cert.assignments},
               {"monochromatic", cert.monochromatic}};
  return finish("refute", payload, ms_since(t0), opt,
                cert.monochromatic == 0 ? 0 : 2);
}

int run_homology(const Options& opt, const std::string& path) {
  auto t0 = std::chrono::steady_clock::now();
  Json doc = load_kind(path, "complex");
  Diagnostics d = io::validate_document(doc);
  if (!d.ok()) {
    std::cerr << "error: " << d.joined() << "\n";
    return 2;
  }
  Complex Y = io::complex_from_json(doc);
  int dim = Y.dim();
  Json payload{{"dim", dim}};
  if (dim >= 0) {
    Json counts = Json::array();
    for (int k = 0; k <= dim; ++k) counts.push_back(Y.faces_of_dim(k).size());
    CycleCheck chk = is_n_cycle(Y, dim);
    payload["face_counts"] = counts;
    payload["pure"] = Y.pure(dim);
    payload["components"] = n_path_components(Y, dim).size();
    payload["cycle_ok"] = chk.ok;
    payload["cycle_defect"] = chk.defect;
    if (dim >= 1) {
      std::vector<Face> tops = Y.faces_of_dim(dim);
      Chain top(tops.begin(), tops.end());
      payload["top_boundary_zero"] = z2_boundary(top, dim).empty();
    }
  }
  return finish("homology", payload, ms_since(t0), opt);
}

int run_limn(const Options& opt, const std::string& path, int degree) {
  auto t0 = std::chrono::steady_clock::now();
  Json doc = io::load_file(path);
  std::string kind = io::kind_of(doc);
  InverseSystem S;
  if (kind == "inverse_system") {
    S = io::inverse_system_from_json(doc);
  } else if (kind == "tower_system") {
    S = io::tower_system_from_json(doc).to_inverse_system();
  } else {
    throw StructuralError("expected an inverse_system or tower_system file");
  }
  Diagnostics d = S.validate();
  if (!d.ok()) {
    std::cerr << "error: " << d.joined() << "\n";
    return 2;
  }
  std::vector<int> degrees =
      degree >= 0 ? std::vector<int>{degree} : std::vector<int>{0, 1, 2};
  Json factors = Json::object();
  for (int deg : degrees) {
    GroupInvariants inv = lim_n(S, deg);
    factors[std::to_string(deg)] = io::invariants_to_json(inv);
    logmsg("lim^" + std::to_string(deg) + " = " + inv.to_string());
  }
  Json payload{{"index_size", S.index.size()}, {"invariant_factors", factors}};
  return finish("limn", payload, ms_since(t0), opt);
}

int run_trivialize(const Options& opt, const std::string& path) {
  auto t0 = std::chrono::steady_clock::now();
  Json doc = load_kind(path, "trivialization_job");
  Diagnostics d = io::validate_document(doc);
  if (!d.ok()) {
    std::cerr << "error: " << d.joined() << "\n";
    return 2;
  }
  EvaluationContext ctx;
  ctx.system = io::tower_system_from_json(doc.at("system"));
  ctx.cocycle = io::cochain_from_json(doc.at("cocycle"));
  ctx.cutoff = doc.at("cutoff").get<int>();
  CofinalFn F = io::cofinal_fn_from_json(doc.at("fn"));
  AlternatingCochain psi = trivialize_cocycle(ctx, F);
  InverseSystem S = ctx.system.to_inverse_system();
  AlternatingCochain diff =
      cochain_add(S, coboundary(S, psi), ctx.cocycle, Int(-1));
  bool exact = cochain_is_zero(S, diff);
  bool beyond_cutoff = true;
  EvaluationContext residual{ctx.system, diff, ctx.cutoff};
  for (const auto& [key, v] : diff.values) {
    (void)v;
    if (support_cutoff(residual, key) > ctx.cutoff) beyond_cutoff = false;
  }
  Json payload{{"cutoff", ctx.cutoff},
               {"psi", io::cochain_to_json(psi)},
               {"exact_match", exact},
               {"matches_beyond_cutoff", exact || beyond_cutoff}};
  return finish("trivialize", payload, ms_since(t0), opt,
                (exact || beyond_cutoff) ? 0 : 2);
}

int run_walks(const Options& opt, const std::string& path, int size) {
  auto t0 = std::chrono::steady_clock::now();
  CSequence C = path.empty()
                    ? generate_csequence(size, opt.seed)
                    : io::csequence_from_json(load_kind(path, "c_sequence"));
  Diagnostics d = C.validate();
  if (!d.ok()) {
    std::cerr << "error: " << d.joined() << "\n";
    return 2;
  }
  Json rows = Json::array();
  for (int a = 0; a < C.N; ++a)
    for (int b = a + 1; b < C.N; ++b)
      rows.push_back(Json{{"alpha", a},
                          {"beta", b},
                          {"rho2", rho2(C, a, b)},
                          {"d", walk_metric(C, a, b)}});
  bool triangle = true;
  for (int a = 0; a < C.N && triangle; ++a)
    for (int b = a + 1; b < C.N && triangle; ++b)
      for (int c = b + 1; c < C.N; ++c)
        if (walk_metric(C, a, b) >
            walk_metric(C, a, c) + walk_metric(C, b, c)) {
          triangle = false;
          break;
        }
  Json payload{{"N", C.N}, {"rows", rows}, {"triangle_ok", triangle}};
  return finish("walks", payload, ms_since(t0), opt, triangle ? 0 : 2);
}

int run_sset_check(const Options& opt, const std::string& path) {
  auto t0 = std::chrono::steady_clock::now();
  PHInstance inst = io::instance_from_json(load_kind(path, "instance"));
  Diagnostics d = inst.validate();
  if (!d.ok()) {
    std::cerr << "error: " << d.joined() << "\n";
    return 2;
  }
  SearchOutcome o = simplicial_ph_check(inst.order, inst.coloring, inst.n,
                                        opt.budget, opt.workers);
  Json payload = io::outcome_to_json(o);
  if (o.witness && o.witness->base) {
    std::vector<ExFace> S =
        spanning_faces(inst.order, *o.witness, *o.witness->base, inst.n);
    SpanReport rep = spans_neatly(S, *o.witness->base, inst.n);
    payload["span"] = Json{{"faces", S.size()},
                           {"spans", rep.spans},
                           {"neat", rep.neat},
                           {"missing", rep.missing.size()},
                           {"collisions", rep.collisions.size()}};
    PHInstance based = inst;
    based.mode = SearchMode::partial_on_cofinal;
    payload["verification"] = verify_witness(based, *o.witness).issues;
  }
  logmsg("sset-check: " + to_string(o.status));
  return finish("sset-check", payload, ms_since(t0), opt,
                o.status == SearchStatus::inconclusive ? 3 : 0);
}

int run_report(const Options& opt, const std::string& path, bool strip) {
  Json doc = load_kind(path, "report");
  if (strip) doc = io::strip_timing(doc);
  return emit(io::render(doc, opt.format), opt.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for finite orders, colorings, towers, and walks"};
  app.require_subcommand(1);

  Options opt;
  app.add_option("--seed", opt.seed, "rng seed");
  app.add_option("--budget", opt.budget, "search node budget")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--workers", opt.workers, "worker threads")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", opt.out, "output path (default stdout)");
  app.add_option("--format", opt.format, "report format")
      ->check(CLI::IsMember({"json", "csv", "text"}));

  std::string kind, mode = "total", path;
  int size = 4, palette = 2, n = 1, depth = 1, width = 2, height = 2;
  int max_rank = 2, degree = -1;
  bool strip = false;

  CLI::App* gen = app.add_subcommand("gen", "write a seeded instance file");
  gen->add_option("--kind", kind, "instance kind")
      ->required()
      ->check(CLI::IsMember({"order", "coloring", "instance", "complex",
                             "injection_system", "c_sequence",
                             "inverse_system", "tower_system"}));
  gen->add_option("--size", size, "points / vertices / sequence length");
  gen->add_option("--palette", palette, "colors");
  gen->add_option("--n", n, "dimension parameter");
  gen->add_option("--mode", mode, "search mode for instances")
      ->check(CLI::IsMember(
          {"total", "partial-on-cofinal", "strictly-increasing"}));
  gen->add_option("--depth", depth, "injection system depth");
  gen->add_option("--width", width, "tower count");
  gen->add_option("--height", height, "tower height");
  gen->add_option("--max-rank", max_rank, "group rank bound");

  CLI::App* validate = app.add_subcommand("validate", "check an instance file");
  validate->add_option("path", path, "instance file")->required();

  CLI::App* search = app.add_subcommand("search", "run the witness search");
  search->add_option("path", path, "instance file")->required();

  CLI::App* refute =
      app.add_subcommand("refute", "scan an injective coloring for "
                                   "monochromatic configurations");
  refute->add_option("--size", size, "point count");

  CLI::App* homology =
      app.add_subcommand("homology", "combinatorial cycle structure of a "
                                     "complex");
  homology->add_option("path", path, "complex file")->required();

  CLI::App* limn = app.add_subcommand("limn", "derived-limit invariant "
                                              "factors");
  limn->add_option("path", path, "system file")->required();
  limn->add_option("--degree", degree, "single degree (default 0..2)");

  CLI::App* trivialize =
      app.add_subcommand("trivialize", "solve d(psi) = phi over a tower block");
  trivialize->add_option("path", path, "trivialization job file")->required();

  CLI::App* walks = app.add_subcommand("walks", "walk lengths and the "
                                                "induced metric");
  walks->add_option("path", path, "c_sequence file");
  walks->add_option("--size", size, "generate a sequence of this length");

  CLI::App* sset_check =
      app.add_subcommand("sset-check", "face-level witness search");
  sset_check->add_option("path", path, "instance file")->required();

  CLI::App* report = app.add_subcommand("report", "re-render a report file");
  report->add_option("path", path, "report file")->required();
  report->add_flag("--strip-timing", strip, "drop the timing block");

  for (CLI::App* sub : {gen, validate, search, refute, homology, limn,
                        trivialize, walks, sset_check, report})
    sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return run_gen(opt, kind, size, palette, n, mode, depth, width, height,
                     max_rank);
    if (validate->parsed()) return run_validate(opt, path);
    if (search->parsed()) return run_search(opt, path);
    if (refute->parsed()) return run_refute(opt, size);
    if (homology->parsed()) return run_homology(opt, path);
    if (limn->parsed()) return run_limn(opt, path, degree);
    if (trivialize->parsed()) return run_trivialize(opt, path);
    if (walks->parsed()) return run_walks(opt, path, size);
    if (sset_check->parsed()) return run_sset_check(opt, path);
    if (report->parsed()) return run_report(opt, path, strip);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
