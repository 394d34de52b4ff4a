#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "limlab/gen.hpp"
#include "limlab/io.hpp"
#include "limlab/trivialize.hpp"

using namespace limlab;
using io::Json;

namespace {

namespace fs = std::filesystem;

#ifndef LIMLAB_FIXTURES
#define LIMLAB_FIXTURES "tests/fixtures"
#endif

std::string fixture(const std::string& name) {
  return (fs::path(LIMLAB_FIXTURES) / name).string();
}

const std::string& binary() {
  static const std::string bin = [] {
    const char* p = std::getenv("LIMLAB_BIN");
    return std::string(p ? p : "");
  }();
  return bin;
}

const fs::path& scratch() {
  static const fs::path dir = [] {
    fs::path d =
        fs::temp_directory_path() / ("limlab-cli-" + std::to_string(getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string tmpfile(const std::string& name) {
  return (scratch() / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

// invoke the tool through the shell, capturing streams and the exit code
Run run(const std::string& args, const std::string& env = "") {
  REQUIRE_MESSAGE(!binary().empty(),
                  "LIMLAB_BIN must point at the limlab binary");
  static int serial = 0;
  std::string o = tmpfile("stdout." + std::to_string(serial));
  std::string e = tmpfile("stderr." + std::to_string(serial));
  ++serial;
  std::string cmd = env + binary() + " " + args + " >" + o + " 2>" + e;
  int status = std::system(cmd.c_str());
  Run r;
  if (WIFEXITED(status)) r.code = WEXITSTATUS(status);
  r.out = slurp(o);
  r.err = slurp(e);
  return r;
}

Json payload_of(const Run& r) { return Json::parse(r.out).at("payload"); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("search finds a witness on the bundled sample instance") {
  Run r = run("search " + fixture("sample_instance.json"));
  CHECK(r.code == 0);
  Json report = Json::parse(r.out);
  CHECK(report.at("kind") == "report");
  CHECK(report.at("command") == "search");
  CHECK(report.at("timing").contains("elapsed_ms"));
  Json payload = report.at("payload");
  CHECK(payload.at("status") == "witness-found");
  CHECK(!payload.at("witness").is_null());
  CHECK(payload.at("verification").empty());
}

TEST_CASE("an exhausted budget exits 3 and reports inconclusive") {
  Run r = run("search " + fixture("sample_instance.json") + " --budget 1");
  CHECK(r.code == 3);
  Json payload = payload_of(r);
  CHECK(payload.at("status") == "inconclusive");
  CHECK(payload.at("witness").is_null());
}

TEST_CASE("malformed files exit 2 with a parse diagnostic") {
  for (const char* sub : {"validate", "search", "homology"}) {
    Run r = run(std::string(sub) + " " + fixture("malformed.json"));
    CHECK(r.code == 2);
    CHECK(r.err.find("parse error") != std::string::npos);
  }
  // well-formed JSON of the wrong kind is rejected the same way
  Run r = run("search " + fixture("tower.json"));
  CHECK(r.code == 2);
  CHECK(r.err.find("expected") != std::string::npos);
}

TEST_CASE("validate accepts the clean fixtures") {
  for (const char* name : {"sample_instance.json", "tower.json"}) {
    Run r = run("validate " + fixture(name));
    CHECK(r.code == 0);
    Json payload = payload_of(r);
    CHECK(payload.at("ok") == true);
    CHECK(payload.at("issues").empty());
  }
}

TEST_CASE("validate flags a non-transitive relation") {
  Run r = run("validate " + fixture("nontransitive_order.json"));
  CHECK(r.code == 2);
  Json payload = payload_of(r);
  CHECK(payload.at("ok") == false);
  std::string issue = payload.at("issues").at(0).get<std::string>();
  CHECK(issue.find("not transitive") != std::string::npos);
}

TEST_CASE("validate names the pair breaking the subsequence law") {
  Run r = run("validate " + fixture("bad_cofinal.json"));
  CHECK(r.code == 2);
  Json payload = payload_of(r);
  CHECK(payload.at("ok") == false);
  std::string issue = payload.at("issues").at(0).get<std::string>();
  CHECK(issue.find("monotonicity fails") != std::string::npos);
  CHECK(issue.find("F(1)") != std::string::npos);
  CHECK(issue.find("F(0,1)") != std::string::npos);
}

TEST_CASE("every generated kind passes validate") {
  const char* kinds[] = {"order",          "coloring",     "instance",
                         "complex",        "injection_system",
                         "c_sequence",     "inverse_system",
                         "tower_system"};
  int serial = 0;
  for (const char* kind : kinds) {
    std::string path = tmpfile("gen" + std::to_string(serial++) + ".json");
    Run g = run("gen --kind " + std::string(kind) + " --seed 5 --out " + path);
    CHECK(g.code == 0);
    Json doc = io::load_file(path);
    CHECK(doc.at("kind") == kind);
    CHECK(!doc.contains("payload"));  // plain document, not a report
    Run v = run("validate " + path);
    CHECK(v.code == 0);
  }
}

TEST_CASE("identical seeds give byte-identical outputs") {
  std::string a = tmpfile("det-a.json");
  std::string b = tmpfile("det-b.json");
  CHECK(run("gen --kind instance --size 4 --seed 9 --out " + a).code == 0);
  CHECK(run("gen --kind instance --size 4 --seed 9 --out " + b).code == 0);
  CHECK(slurp(a) == slurp(b));

  // json reports differ only in the timing block; csv and text never carry it
  std::string sample = fixture("sample_instance.json");
  Run c1 = run("search " + sample + " --format csv");
  Run c2 = run("search " + sample + " --format csv");
  CHECK(c1.out == c2.out);
  CHECK(c1.out.find("elapsed") == std::string::npos);

  std::string r1 = tmpfile("det-r1.json");
  std::string r2 = tmpfile("det-r2.json");
  CHECK(run("search " + sample + " --out " + r1).code == 0);
  CHECK(run("search " + sample + " --out " + r2).code == 0);
  std::string s1 = tmpfile("det-s1.json");
  std::string s2 = tmpfile("det-s2.json");
  CHECK(run("report " + r1 + " --strip-timing --out " + s1).code == 0);
  CHECK(run("report " + r2 + " --strip-timing --out " + s2).code == 0);
  CHECK(slurp(s1) == slurp(s2));
  CHECK(!Json::parse(slurp(s1)).contains("timing"));
}

TEST_CASE("limn reproduces the in-process invariant factors") {
  Json doc = io::load_file(fixture("tower.json"));
  InverseSystem S = io::tower_system_from_json(doc).to_inverse_system();
  Json expected = Json::object();
  for (int deg : {0, 1, 2})
    expected[std::to_string(deg)] = io::invariants_to_json(lim_n(S, deg));

  Run r = run("limn " + fixture("tower.json"));
  CHECK(r.code == 0);
  Json payload = payload_of(r);
  CHECK(payload.at("index_size") == S.index.size());
  CHECK(payload.at("invariant_factors") == expected);

  Run one = run("limn " + fixture("tower.json") + " --degree 1");
  CHECK(one.code == 0);
  Json factors = payload_of(one).at("invariant_factors");
  CHECK(factors.size() == 1);
  CHECK(factors.at("1") == expected.at("1"));
}

TEST_CASE("homology reports the cycle structure of a generated complex") {
  std::string path = tmpfile("cx.json");
  CHECK(run("gen --kind complex --size 5 --seed 11 --out " + path).code == 0);
  Run r = run("homology " + path);
  CHECK(r.code == 0);
  Json payload = payload_of(r);
  CHECK(payload.at("dim").get<int>() >= 0);
  CHECK(payload.at("components").get<int>() >= 1);
  CHECK(!payload.at("face_counts").empty());
  CHECK(payload.contains("cycle_ok"));
}

TEST_CASE("walks covers generated and file-backed sequences") {
  Run r = run("walks --size 5 --seed 2");
  CHECK(r.code == 0);
  Json payload = payload_of(r);
  CHECK(payload.at("N") == 5);
  CHECK(payload.at("rows").size() == 10);  // one row per pair
  CHECK(payload.at("triangle_ok") == true);

  std::string path = tmpfile("cs.json");
  CHECK(run("gen --kind c_sequence --size 7 --seed 4 --out " + path).code == 0);
  Run f = run("walks " + path);
  CHECK(f.code == 0);
  CHECK(payload_of(f).at("N") == 7);
  CHECK(payload_of(f).at("triangle_ok") == true);
}

TEST_CASE("refute scans injective colorings without finding repeats") {
  Run r = run("refute --size 6 --seed 1");
  CHECK(r.code == 0);
  Json payload = payload_of(r);
  CHECK(payload.at("N") == 6);
  CHECK(payload.at("monochromatic") == 0);
  CHECK(payload.at("assignments").get<long long>() > 0);
}

TEST_CASE("sset-check agrees with search on the sample instance") {
  Run r = run("sset-check " + fixture("sample_instance.json"));
  CHECK(r.code == 0);
  Json payload = payload_of(r);
  CHECK(payload.at("status") == "witness-found");
  CHECK(payload.at("span").at("neat") == true);
  CHECK(payload.at("span").at("collisions") == 0);
  CHECK(payload.at("verification").empty());
}

TEST_CASE("trivialize solves a seeded coboundary job exactly") {
  TruncatedOmegaSystem sys = random_tower_system(2, 2, 2, 21);
  InverseSystem S = sys.to_inverse_system();

  AlternatingCochain psi0;
  psi0.degree = 0;
  CochainLevel lv = cochain_level(S, 0);
  int k = 1;
  for (std::size_t b = 0; b < lv.tuples.size(); ++b) {
    int g = S.terms[static_cast<std::size_t>(lv.meets[b])].generators;
    Vec v(static_cast<std::size_t>(g));
    for (Int& x : v) x = (k++ % 5) - 2;
    psi0.values[lv.tuples[b]] = v;
  }

  EvaluationContext ctx{sys, coboundary(S, psi0), 0};
  CofinalFn F;
  F.arity = 2;
  Elem top = S.index.maximum().value();
  for (int len = 1; len <= 2; ++len)
    for (const Tuple& t : enumerate_increasing_tuples(S.index, len))
      F.table[t] = top;
  for (Elem i = 0; i < S.index.size(); ++i)
    for (Elem j = i + 1; j < S.index.size(); ++j) F.table[Tuple{i, j}] = top;

  std::string path = tmpfile("job.json");
  io::save_file(path, io::trivialization_job_doc(ctx, F));
  CHECK(run("validate " + path).code == 0);

  Run r = run("trivialize " + path);
  CHECK(r.code == 0);
  Json payload = payload_of(r);
  CHECK(payload.at("exact_match") == true);
  CHECK(payload.at("matches_beyond_cutoff") == true);
  CHECK(payload.at("psi").at("degree") == 0);
}

TEST_CASE("report re-renders saved reports") {
  std::string rep = tmpfile("rerender.json");
  CHECK(run("search " + fixture("sample_instance.json") + " --out " + rep)
            .code == 0);
  Run t = run("report " + rep + " --format text");
  CHECK(t.code == 0);
  CHECK(t.out.rfind("command: search", 0) == 0);
  Run c = run("report " + rep + " --format csv");
  CHECK(c.code == 0);
  CHECK(c.out.rfind("key,value\n", 0) == 0);
  CHECK(c.out.find("status,witness-found") != std::string::npos);

  // only report files re-render
  Run bad = run("report " + fixture("sample_instance.json"));
  CHECK(bad.code == 2);
}

TEST_CASE("bad invocations fail fast") {
  CHECK(run("").code != 0);             // a subcommand is required
  CHECK(run("bogus").code != 0);        // unknown subcommand
  CHECK(run("search").code != 0);       // missing path
  CHECK(run("gen --kind sonnet").code != 0);
  CHECK(run("walks --size 4 --format yaml").code != 0);
  CHECK(run("walks --size 4 --budget -1").code != 0);
  CHECK(run("walks --size 4 --workers 0").code != 0);
}

TEST_CASE("progress notes stay on stderr behind the environment switch") {
  std::string path = tmpfile("quiet.json");
  Run quiet = run("gen --kind order --seed 1 --out " + path);
  CHECK(quiet.code == 0);
  CHECK(quiet.err.empty());
  Run loud = run("gen --kind order --seed 1 --out " + path, "LIMLAB_LOG=1 ");
  CHECK(loud.code == 0);
  CHECK(loud.err.find("generated order") != std::string::npos);
  CHECK(loud.out.empty());  // logging never contaminates stdout payloads
}

}  // TEST_SUITE
