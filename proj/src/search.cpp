#include "limlab/search.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>
#include <thread>
#include <utility>

namespace limlab {

std::string to_string(SearchMode m) {
  switch (m) {
    case SearchMode::total:
      return "total";
    case SearchMode::partial_on_cofinal:
      return "partial-on-cofinal";
    case SearchMode::strictly_increasing:
      return "strictly-increasing";
  }
  return "?";
}

std::string to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::witness_found:
      return "witness-found";
    case SearchStatus::refuted_by_exhaustion:
      return "refuted-by-exhaustion";
    case SearchStatus::inconclusive:
      return "inconclusive";
  }
  return "?";
}

Diagnostics PHInstance::validate() const {
  Diagnostics d;
  if (order.size() == 0) {
    d.add("order has no elements");
    return d;
  }
  for (const auto& s : order.validate().issues) d.add(s);
  if (n < 1) d.add("level must be at least 1");
  if (coloring.arity != n + 1)
    d.add("coloring arity " + std::to_string(coloring.arity) +
          " does not match level " + std::to_string(n));
  for (const auto& s : coloring.validate_total(order).issues) d.add(s);
  if (allowed_colors) {
    if (allowed_colors->empty()) d.add("allowed color list is empty");
    for (int c : *allowed_colors)
      if (c < 0 || c >= coloring.palette)
        d.add("allowed color outside palette: " + std::to_string(c));
  }
  if (strict_domain) {
    if (mode != SearchMode::strictly_increasing)
      d.add("an explicit base set requires strictly-increasing mode");
    if (strict_domain->empty()) d.add("explicit base set is empty");
    for (Elem e : *strict_domain)
      if (e < 0 || e >= order.size())
        d.add("base element out of range: " + std::to_string(e));
  }
  return d;
}

namespace {

std::string set_to_string(const QuasiOrder& P, const std::vector<Elem>& s) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) os << ",";
    os << P.name(s[i]);
  }
  os << "}";
  return os.str();
}

// Variable layout shared by every worker on one (base, mode) search: tuples
// in (length, lex) order, immediate one-deletions resolved to variable ids,
// and full-length chains grouped under their top stage.
struct Space {
  std::vector<Tuple> vars;
  std::vector<std::vector<int>> dels;
  std::vector<std::vector<std::vector<int>>> chains_at;
  int singleton_count = 0;
};

Space build_space(const QuasiOrder& P, const std::vector<Elem>& base, int arity,
                  bool strict) {
  Space sp;
  std::map<Tuple, int> index;
  for (int len = 1; len <= arity; ++len) {
    auto ts = strict ? enumerate_strict_tuples_over(P, base, len)
                     : enumerate_increasing_tuples_over(P, base, len);
    for (auto& t : ts) {
      index[t] = static_cast<int>(sp.vars.size());
      sp.vars.push_back(t);
      if (t.size() == 1) ++sp.singleton_count;
    }
  }
  sp.dels.resize(sp.vars.size());
  for (std::size_t i = 0; i < sp.vars.size(); ++i)
    for (const Tuple& d : one_deletions(sp.vars[i]))
      sp.dels[i].push_back(index.at(d));
  sp.chains_at.resize(sp.vars.size());
  for (const ChainOfTuples& ch : enumerate_chains_over(P, base, arity, strict)) {
    std::vector<int> ids;
    ids.reserve(ch.stages.size());
    for (const Tuple& s : ch.stages) ids.push_back(index.at(s));
    sp.chains_at[ids.back()].push_back(std::move(ids));
  }
  return sp;
}

struct RunnerResult {
  bool sat = false;
  bool budget_hit = false;
  long long nodes = 0;
  long long prunes = 0;
  std::vector<Elem> assign;
  std::optional<int> color;
};

// One sequential backtracker.  Variables in fixed (length, lex) order, values
// ascending in the linear extension, so the first solution is the
// lexicographically least one reachable in this worker's slice of the first
// variable's candidates.
struct Runner {
  const QuasiOrder& P;
  const Coloring& c;
  const Space& sp;
  bool strict;
  bool pin_singletons;
  const std::vector<int>* allowed;
  long long budget;
  int worker_count;
  int worker_id;

  RunnerResult res;
  std::vector<Elem> assign;

  Runner(const QuasiOrder& P_, const Coloring& c_, const Space& sp_,
         bool strict_, bool pin_, const std::vector<int>* allowed_,
         long long budget_, int wc, int wid)
      : P(P_), c(c_), sp(sp_), strict(strict_), pin_singletons(pin_),
        allowed(allowed_), budget(budget_), worker_count(wc), worker_id(wid),
        assign(sp_.vars.size(), -1) {}

  bool admissible(int vi, Elem v) const {
    const Tuple& t = sp.vars[vi];
    if (t.size() == 1) {
      if (!P.le(t[0], v)) return false;
      if (strict) {
        for (int j = 0; j < vi && j < sp.singleton_count; ++j) {
          Elem u = sp.vars[j][0];
          if (P.lt(u, t[0]) && !P.lt(assign[j], v)) return false;
          if (P.lt(t[0], u) && !P.lt(v, assign[j])) return false;
        }
      }
      return true;
    }
    for (int j : sp.dels[vi]) {
      if (strict ? !P.lt(assign[j], v) : !P.le(assign[j], v)) return false;
    }
    return true;
  }

  bool dfs(int vi, std::optional<int> constant) {
    if (vi == static_cast<int>(sp.vars.size())) {
      res.sat = true;
      res.assign = assign;
      res.color = constant;
      return true;
    }
    const Tuple& t = sp.vars[vi];
    int ordinal = 0;
    for (Elem v : P.linext) {
      if (pin_singletons && t.size() == 1 && v != t[0]) continue;
      if (!admissible(vi, v)) {
        ++res.prunes;
        continue;
      }
      if (vi == 0 && worker_count > 1 &&
          (ordinal++ % worker_count) != worker_id)
        continue;
      if (res.nodes >= budget) {
        res.budget_hit = true;
        return false;
      }
      ++res.nodes;
      assign[vi] = v;
      std::optional<int> cst = constant;
      bool clash = false;
      if (static_cast<int>(t.size()) == c.arity) {
        for (const auto& ch : sp.chains_at[vi]) {
          Tuple img;
          img.reserve(ch.size());
          for (int j : ch) img.push_back(assign[j]);
          int col = c.at(img);
          if (!cst) {
            if (allowed && std::find(allowed->begin(), allowed->end(), col) ==
                               allowed->end()) {
              clash = true;
              break;
            }
            cst = col;
          } else if (*cst != col) {
            clash = true;
            break;
          }
        }
      }
      if (clash) {
        ++res.prunes;
        assign[vi] = -1;
        continue;
      }
      if (dfs(vi + 1, cst)) return true;
      assign[vi] = -1;
      if (res.budget_hit) return false;
    }
    return false;
  }

  RunnerResult run() {
    dfs(0, std::nullopt);
    return res;
  }
};

bool rank_seq_less(const QuasiOrder& P, const std::vector<Elem>& a,
                   const std::vector<Elem>& b) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
    if (P.rank(a[i]) != P.rank(b[i])) return P.rank(a[i]) < P.rank(b[i]);
  return false;
}

// Workers split the first variable's candidate list round-robin, each with a
// private budget share; results are reduced to the lexicographically least
// witness so the outcome does not depend on scheduling.
RunnerResult run_space(const QuasiOrder& P, const Coloring& c, const Space& sp,
                       bool strict, bool pin, const std::vector<int>* allowed,
                       long long budget, int workers) {
  int W = std::max(1, workers);
  std::vector<RunnerResult> outs(W);
  if (W == 1) {
    outs[0] = Runner(P, c, sp, strict, pin, allowed, budget, 1, 0).run();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(W);
    for (int w = 0; w < W; ++w) {
      long long share = budget / W + (w < budget % W ? 1 : 0);
      threads.emplace_back([&, w, share] {
        outs[w] = Runner(P, c, sp, strict, pin, allowed, share, W, w).run();
      });
    }
    for (auto& th : threads) th.join();
  }
  RunnerResult best;
  for (const auto& r : outs) {
    best.nodes += r.nodes;
    best.prunes += r.prunes;
    if (r.budget_hit) best.budget_hit = true;
    if (r.sat && (!best.sat || rank_seq_less(P, r.assign, best.assign))) {
      best.sat = true;
      best.assign = r.assign;
      best.color = r.color;
    }
  }
  if (best.sat) best.budget_hit = false;
  return best;
}

CofinalFn table_from(const Space& sp, const std::vector<Elem>& assign,
                     int arity, DomainKind kind,
                     std::optional<std::vector<Elem>> base) {
  CofinalFn F;
  F.arity = arity;
  F.domain_kind = kind;
  F.base = std::move(base);
  for (std::size_t i = 0; i < sp.vars.size(); ++i) F.table[sp.vars[i]] = assign[i];
  return F;
}

// ascending k-subsets of 0..n-1 in lexicographic order
std::vector<std::vector<Elem>> subsets_of_size(int n, int k) {
  std::vector<std::vector<Elem>> out;
  if (k < 1 || k > n) return out;
  std::vector<Elem> cur(k);
  for (int i = 0; i < k; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == n - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

}  // namespace

SearchOutcome find_witness(const PHInstance& inst, long long budget,
                           int workers) {
  auto t0 = std::chrono::steady_clock::now();
  Diagnostics pre = inst.validate();
  if (!pre.ok()) throw PreconditionError(pre.joined());

  const QuasiOrder& P = inst.order;
  const int arity = inst.n + 1;
  const std::vector<int>* allowed =
      inst.allowed_colors ? &*inst.allowed_colors : nullptr;

  SearchOutcome out;
  out.stats.budget = budget;
  out.stats.workers = std::max(1, workers);

  std::vector<Elem> all(P.size());
  for (int i = 0; i < P.size(); ++i) all[i] = i;

  if (inst.mode == SearchMode::total) {
    bool fast_done = false;
    if (auto top = P.maximum()) {
      int col = inst.coloring.at(Tuple(arity, *top));
      if (!allowed || std::find(allowed->begin(), allowed->end(), col) !=
                          allowed->end()) {
        CofinalFn F;
        F.arity = arity;
        F.domain_kind = DomainKind::weak;
        for (int len = 1; len <= arity; ++len)
          for (const Tuple& t : enumerate_increasing_tuples(P, len))
            F.table[t] = *top;
        out.status = SearchStatus::witness_found;
        out.witness = std::move(F);
        out.constant_color = col;
        out.note = "constant-maximum fast path";
        fast_done = true;
      }
    }
    if (!fast_done) {
      Space sp = build_space(P, all, arity, /*strict=*/false);
      RunnerResult r = run_space(P, inst.coloring, sp, false, false, allowed,
                                 budget, workers);
      out.stats.nodes = r.nodes;
      out.stats.prunes = r.prunes;
      if (r.sat) {
        out.status = SearchStatus::witness_found;
        out.witness =
            table_from(sp, r.assign, arity, DomainKind::weak, std::nullopt);
        out.constant_color = r.color;
      } else {
        out.status = r.budget_hit ? SearchStatus::inconclusive
                                  : SearchStatus::refuted_by_exhaustion;
      }
    }
  } else if (inst.mode == SearchMode::partial_on_cofinal) {
    long long left = budget;
    bool hit = false;
    bool found = false;
    for (int sz = P.size(); sz >= 1 && !found && !hit; --sz) {
      for (const auto& comb : subsets_of_size(P.size(), sz)) {
        if (!P.is_cofinal(comb)) continue;
        Space sp = build_space(P, comb, arity, /*strict=*/false);
        RunnerResult r = run_space(P, inst.coloring, sp, false,
                                   /*pin=*/true, allowed,
                                   std::max<long long>(left, 0), workers);
        out.stats.nodes += r.nodes;
        out.stats.prunes += r.prunes;
        if (r.sat) {
          CofinalFn F = table_from(sp, r.assign, arity, DomainKind::weak, comb);
          try {
            CofinalFn ext = extend_partial_witness(P, inst.coloring, F);
            out.witness = std::move(ext);
            out.note = "cofinal base " + set_to_string(P, comb) +
                       " extended to a total witness";
          } catch (const PreconditionError& e) {
            out.witness = std::move(F);
            out.note = "domain restricted to cofinal base " +
                       set_to_string(P, comb) + ": " + e.what();
          }
          out.status = SearchStatus::witness_found;
          out.constant_color = r.color;
          found = true;
          break;
        }
        left -= r.nodes;
        if (r.budget_hit) {
          hit = true;
          break;
        }
      }
    }
    if (!found)
      out.status = hit ? SearchStatus::inconclusive
                       : SearchStatus::refuted_by_exhaustion;
  } else {
    std::vector<std::vector<Elem>> bases;
    if (inst.strict_domain) {
      std::vector<Elem> b = *inst.strict_domain;
      std::sort(b.begin(), b.end());
      b.erase(std::unique(b.begin(), b.end()), b.end());
      bases.push_back(std::move(b));
    } else {
      bases = subsets_of_size(P.size(), arity);
    }
    long long left = budget;
    bool hit = false;
    bool found = false;
    for (const auto& D : bases) {
      Space sp = build_space(P, D, arity, /*strict=*/true);
      RunnerResult r =
          run_space(P, inst.coloring, sp, /*strict=*/true, false, allowed,
                    std::max<long long>(left, 0), workers);
      out.stats.nodes += r.nodes;
      out.stats.prunes += r.prunes;
      if (r.sat) {
        out.status = SearchStatus::witness_found;
        out.witness = table_from(sp, r.assign, arity, DomainKind::strict, D);
        out.constant_color = r.color;
        out.note = "base " + set_to_string(P, D);
        found = true;
        break;
      }
      left -= r.nodes;
      if (r.budget_hit) {
        hit = true;
        break;
      }
    }
    if (!found)
      out.status = hit ? SearchStatus::inconclusive
                       : SearchStatus::refuted_by_exhaustion;
  }

  auto t1 = std::chrono::steady_clock::now();
  out.stats.elapsed_ms =
      std::chrono::duration<double, std::milli>(t1 - t0).count();
  return out;
}

Diagnostics verify_witness(const PHInstance& inst, const CofinalFn& F) {
  Diagnostics d;
  const QuasiOrder& P = inst.order;
  const int arity = inst.n + 1;
  if (F.arity != arity)
    d.add("witness arity " + std::to_string(F.arity) +
          " does not match level " + std::to_string(inst.n));
  const bool strict = inst.mode == SearchMode::strictly_increasing;
  if (strict && F.domain_kind != DomainKind::strict)
    d.add("strictly-increasing instances need a strict-domain witness");
  if (!strict && F.domain_kind != DomainKind::weak)
    d.add("this mode needs a weak-domain witness");

  std::vector<Elem> base;
  if (F.base) {
    base = *F.base;
    if (inst.mode == SearchMode::partial_on_cofinal) {
      if (!P.is_cofinal(base)) d.add("declared base is not cofinal");
      for (Elem u : base)
        if (!F.defined({u}) || F.at({u}) != u)
          d.add("base singleton not fixed: " + P.name(u));
    }
  } else {
    base.resize(P.size());
    for (int i = 0; i < P.size(); ++i) base[i] = i;
  }

  std::vector<Tuple> dom = F.domain_tuples(P);
  bool missing = false;
  for (const Tuple& t : dom)
    if (!F.defined(t)) {
      d.add("missing value at " + tuple_to_string(P, t));
      missing = true;
    }
  if (missing) return d;

  for (const auto& s : check_n_cofinal(P, F).issues) d.add(s);

  if (strict) {
    for (const Tuple& a : dom)
      for (const Tuple& b : dom) {
        if (a.size() >= b.size() || !subseq(a, b)) continue;
        if (!P.lt(F.at(a), F.at(b)))
          d.add("strict monotonicity fails: F" + tuple_to_string(P, a) +
                " !< F" + tuple_to_string(P, b));
      }
    for (const Tuple& a : dom)
      for (const Tuple& b : dom) {
        if (a.size() != 1 || b.size() != 1 || !P.lt(a[0], b[0])) continue;
        if (!P.lt(F.at(a), F.at(b)))
          d.add("strictness fails on singletons: F" + tuple_to_string(P, a) +
                " !< F" + tuple_to_string(P, b));
      }
  }

  std::optional<int> constant;
  for (const ChainOfTuples& ch : enumerate_chains_over(P, base, arity, strict)) {
    Tuple img = apply_F_star(F, ch);
    if (!weakly_increasing(P, img)) {
      d.add("chain image is not increasing: " + tuple_to_string(P, img));
      continue;
    }
    int col;
    try {
      col = inst.coloring.at(img);
    } catch (const DomainError&) {
      d.add("chain image outside the coloring domain: " + tuple_to_string(P, img));
      continue;
    }
    if (!constant) {
      constant = col;
    } else if (col != *constant) {
      d.add("chain colors differ: " + tuple_to_string(P, img) + " has color " +
            std::to_string(col) + ", expected " + std::to_string(*constant));
    }
  }
  if (constant && inst.allowed_colors &&
      std::find(inst.allowed_colors->begin(), inst.allowed_colors->end(),
                *constant) == inst.allowed_colors->end())
    d.add("constant color " + std::to_string(*constant) + " is not allowed");
  return d;
}

Coloring strictify(const QuasiOrder& P, const Coloring& c) {
  Coloring out;
  out.arity = c.arity;
  out.palette = 2 * c.palette;
  for (const auto& [t, col] : c.table)
    out.table[t] = 2 * col + (strictly_increasing(P, t) ? 1 : 0);
  return out;
}

RefutationCertificate refute_injective_coloring(int N,
                                                const InjectionSystem& sys) {
  if (N < 2) throw PreconditionError("refutation needs at least two points");
  if (sys.depth < 1 || static_cast<int>(sys.level_sizes.size()) < 2 ||
      sys.level_sizes[1] < N)
    throw DomainError("injection system level 1 must cover the point range");
  RefutationCertificate cert;
  cert.N = N;
  for (int a = 0; a < N; ++a)
    for (int b = a + 1; b < N; ++b) {
      ++cert.pairs_scanned;
      for (int u = 0; u < N; ++u)
        for (int v = u + 1; v < N; ++v)
          for (int w = v + 1; w < N; ++w) {
            ++cert.assignments;
            if (sys.inj[1][w][u] == sys.inj[1][w][v]) ++cert.monochromatic;
          }
    }
  return cert;
}

}  // namespace limlab
