#include "limlab/colorings.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "limlab/rng.hpp"

namespace limlab {

Diagnostics InjectionSystem::validate() const {
  Diagnostics d;
  if (static_cast<int>(level_sizes.size()) != depth + 1) {
    d.add("level_sizes must have depth+1 entries");
    return d;
  }
  for (int m = 0; m <= depth; ++m)
    if (level_sizes[m] <= 0) d.add("level " + std::to_string(m) + " is empty");
  if (static_cast<int>(inj.size()) != depth + 1) {
    d.add("injection table must have depth+1 levels");
    return d;
  }
  for (int m = 1; m <= depth; ++m) {
    if (static_cast<int>(inj[m].size()) != level_sizes[m]) {
      d.add("level " + std::to_string(m) + " injection count mismatch");
      continue;
    }
    for (int beta = 0; beta < level_sizes[m]; ++beta) {
      const auto& h = inj[m][beta];
      if (static_cast<int>(h.size()) != beta) {
        d.add("h at level " + std::to_string(m) + ", point " +
              std::to_string(beta) + " must cover exactly the predecessors");
        continue;
      }
      std::set<int> seen;
      for (int alpha = 0; alpha < beta; ++alpha) {
        if (h[alpha] < 0 || h[alpha] >= level_sizes[m - 1])
          d.add("h value out of the level below at level " + std::to_string(m) +
                ", point " + std::to_string(beta));
        else if (!seen.insert(h[alpha]).second)
          d.add("h not injective at level " + std::to_string(m) + ", point " +
                std::to_string(beta));
      }
    }
  }
  return d;
}

InjectionSystem generate_injection_system(int depth,
                                          const std::vector<int>& level_sizes,
                                          std::uint64_t seed) {
  if (static_cast<int>(level_sizes.size()) != depth + 1)
    throw DomainError("level_sizes must have depth+1 entries");
  for (int m = 1; m <= depth; ++m)
    if (level_sizes[m - 1] < level_sizes[m] - 1)
      throw DomainError("level " + std::to_string(m - 1) +
                        " too small to receive injections from above");
  InjectionSystem sys;
  sys.depth = depth;
  sys.level_sizes = level_sizes;
  sys.inj.resize(depth + 1);
  Rng rng(seed);
  for (int m = 1; m <= depth; ++m) {
    sys.inj[m].resize(level_sizes[m]);
    for (int beta = 0; beta < level_sizes[m]; ++beta) {
      std::vector<int> candidates(level_sizes[m - 1]);
      for (int i = 0; i < level_sizes[m - 1]; ++i) candidates[i] = i;
      rng.shuffle(candidates);
      sys.inj[m][beta].assign(candidates.begin(), candidates.begin() + beta);
    }
  }
  return sys;
}

int c_tilde(const InjectionSystem& sys, int m, std::vector<int> face) {
  if (m < 0 || m > sys.depth) throw DomainError("level out of range");
  if (static_cast<int>(face.size()) != m + 1)
    throw DomainError("face must have m+1 vertices");
  std::sort(face.begin(), face.end());
  for (std::size_t i = 0; i + 1 < face.size(); ++i)
    if (face[i] == face[i + 1]) throw DomainError("repeated face vertex");
  if (face.front() < 0 || face.back() >= sys.level_sizes[m])
    throw DomainError("face vertex outside its level");
  if (m == 0) return face[0];
  int beta = face.back();
  if (m == 1) return sys.inj[1][beta][face[0]];
  std::vector<int> below(face.begin(), face.end() - 1);
  for (int& v : below) v = sys.inj[m][beta][v];
  return c_tilde(sys, m - 1, std::move(below));
}

namespace {

ConeWitness cone_witness_rec(const InjectionSystem& sys, int m,
                             const Complex& t, int delta,
                             std::vector<std::string>& trace) {
  ConeWitness w;
  if (m == 1) {
    auto vs = t.vertex_set();
    auto it = vs.begin();
    int a = *it++;
    int b = *it;
    w.a = {a, delta};
    w.b = {b, delta};
    w.color_a = c_tilde(sys, 1, w.a);
    w.color_b = c_tilde(sys, 1, w.b);
    std::ostringstream os;
    os << "level 1: f_" << delta << " separates " << a << " and " << b;
    trace.push_back(os.str());
    if (w.color_a == w.color_b)
      throw StructuralError("injectivity failed to separate the base pair");
    return w;
  }

  const auto& h = sys.inj[m][delta];
  // peel the vertex whose image under h_delta is largest
  int gamma = -1;
  for (int v : t.vertex_set())
    if (gamma < 0 || h[v] > h[gamma]) gamma = v;

  Chain link;
  for (const Face& top : t.faces_of_dim(m - 1)) {
    if (!std::binary_search(top.begin(), top.end(), gamma)) continue;
    Face rest;
    for (int v : top)
      if (v != gamma) rest.push_back(v);
    link.insert(rest);
  }

  auto components = connon_decompose(link, m - 2);
  const Face& least = *link.begin();
  int chosen = -1;
  for (std::size_t i = 0; i < components.size(); ++i)
    if (components[i].contains(least)) {
      chosen = static_cast<int>(i);
      break;
    }
  const Complex& s = components[chosen];

  std::vector<Face> mapped_tops;
  for (const Face& f : s.faces_of_dim(m - 2)) {
    Face g = f;
    for (int& v : g) v = h[v];
    std::sort(g.begin(), g.end());
    mapped_tops.push_back(std::move(g));
  }
  Complex s_image = Complex::from_faces(mapped_tops);
  int cone_point = h[gamma];

  {
    std::ostringstream os;
    os << "level " << m << ": peel " << gamma << " (image " << cone_point
       << "), link splits into " << components.size()
       << " cycle(s), descend on component " << chosen;
    trace.push_back(os.str());
  }

  ConeWitness inner = cone_witness_rec(sys, m - 1, s_image, cone_point, trace);

  std::map<int, int> back;  // h image -> vertex of t
  for (int v : s.vertex_set()) back[h[v]] = v;
  auto pull = [&](const Face& g) {
    Face out;
    for (int v : g)
      if (v != cone_point) out.push_back(back.at(v));
    out.push_back(gamma);
    out.push_back(delta);
    std::sort(out.begin(), out.end());
    return out;
  };
  w.a = pull(inner.a);
  w.b = pull(inner.b);
  w.color_a = c_tilde(sys, m, w.a);
  w.color_b = c_tilde(sys, m, w.b);
  if (w.color_a != inner.color_a || w.color_b != inner.color_b)
    throw StructuralError("pulled-back colors disagree with the recursion");
  return w;
}

}  // namespace

ConeWitness cone_nonconstancy_check(const InjectionSystem& sys, int m,
                                    const Complex& t, int delta) {
  if (m < 1 || m > sys.depth)
    throw PreconditionError("level must be between 1 and the system depth");
  CycleCheck ck = is_n_cycle(t, m - 1);
  if (!ck.ok)
    throw PreconditionError("base is not a cycle: " + ck.defect);
  if (delta < 0 || delta >= sys.level_sizes[m])
    throw PreconditionError("cone point outside its level");
  for (int v : t.vertex_set()) {
    if (v < 0 || v >= sys.level_sizes[m])
      throw PreconditionError("cycle vertex outside its level");
    if (v >= delta)
      throw PreconditionError("cycle vertex not below the cone point");
  }
  ConeWitness w;
  std::vector<std::string> trace;
  w = cone_witness_rec(sys, m, t, delta, trace);
  w.trace = std::move(trace);
  return w;
}

Diagnostics CSequence::validate() const {
  Diagnostics d;
  if (static_cast<int>(clubs.size()) != N) {
    d.add("club list must have one entry per point");
    return d;
  }
  if (N > 0 && !clubs[0].empty()) d.add("club at 0 must be empty");
  for (int a = 1; a < N; ++a) {
    if (clubs[a].empty()) {
      d.add("club at " + std::to_string(a) + " is empty");
      continue;
    }
    for (int x : clubs[a])
      if (x < 0 || x >= a)
        d.add("club at " + std::to_string(a) + " leaves the predecessors");
  }
  if (!d.ok()) return d;
  for (int b = 0; b < N; ++b)
    for (int a = 0; a <= b; ++a) {
      // run the walk; report the stuck pair instead of throwing
      int cur = b;
      bool stuck = false;
      while (cur != a) {
        int next = -1;
        for (int x : clubs[cur])
          if (x >= a && (next < 0 || x < next)) next = x;
        if (next < 0) {
          stuck = true;
          break;
        }
        cur = next;
      }
      if (stuck)
        d.add("walk from " + std::to_string(b) + " down to " +
              std::to_string(a) + " gets stuck");
    }
  return d;
}

CSequence generate_csequence(int N, std::uint64_t seed) {
  CSequence C;
  C.N = N;
  C.clubs.resize(std::max(N, 0));
  Rng rng(seed);
  for (int a = 1; a < N; ++a) {
    for (int x = 0; x < a - 1; ++x)
      if (rng.below(2)) C.clubs[a].push_back(x);
    // a-1 is the only admissible maximum: without it the one-step walk from
    // a-1 has nowhere to go, and with it every walk steps strictly down
    C.clubs[a].push_back(a - 1);
  }
  return C;
}

int rho2(const CSequence& C, int alpha, int beta) {
  if (alpha > beta || alpha < 0 || beta >= C.N)
    throw DomainError("walk endpoints out of order");
  int steps = 0;
  while (beta != alpha) {
    int next = -1;
    for (int x : C.clubs[beta])
      if (x >= alpha && (next < 0 || x < next)) next = x;
    if (next < 0)
      throw PreconditionError("walk from " + std::to_string(beta) +
                              " is stuck above " + std::to_string(alpha));
    beta = next;
    ++steps;
  }
  return steps;
}

int walk_metric(const CSequence& C, int alpha, int beta) {
  if (alpha >= beta) throw DomainError("walk metric needs alpha < beta");
  int best = 0;
  for (int xi = 0; xi <= alpha; ++xi) {
    int diff = rho2(C, xi, alpha) - rho2(C, xi, beta);
    best = std::max(best, diff < 0 ? -diff : diff);
  }
  return best;
}

namespace {
std::vector<Tuple> nonempty_subsets_sorted(const std::vector<Elem>& a) {
  std::vector<Tuple> out;
  int n = static_cast<int>(a.size());
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    Tuple t;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) t.push_back(a[i]);
    out.push_back(std::move(t));
  }
  return out;
}
}  // namespace

std::vector<Elem> choose_good_a(const CofinalFn& F, int N) {
  int n = F.arity - 1;
  std::vector<Elem> a = {0};
  if (N < 1) throw UniverseTooSmall("universe cannot hold the base point", 1);
  for (int j = 1; j <= n; ++j) {
    Elem biggest = -1;
    for (const Tuple& t : nonempty_subsets_sorted(a))
      biggest = std::max(biggest, F.at(t));
    Elem next = biggest + 1;
    if (next >= N)
      throw UniverseTooSmall("escalation step " + std::to_string(j) +
                                 " leaves the universe",
                             next + 1);
    a.push_back(next);
  }
  return a;
}

Complex build_X_a(const CofinalFn& F, const std::vector<Elem>& a) {
  int n = static_cast<int>(a.size()) - 1;
  if (n < 1) throw DomainError("a must have at least two elements");
  std::vector<Tuple> proper;
  for (const Tuple& t : nonempty_subsets_sorted(a))
    if (static_cast<int>(t.size()) <= n) proper.push_back(t);

  std::vector<Face> images;
  std::vector<const Tuple*> chain;
  auto emit = [&]() {
    Face img;
    for (const Tuple* s : chain) img.push_back(F.at(*s));
    std::sort(img.begin(), img.end());
    img.erase(std::unique(img.begin(), img.end()), img.end());
    images.push_back(std::move(img));
  };
  std::function<void()> extend = [&]() {
    emit();
    for (const Tuple& cand : proper) {
      if (cand.size() <= chain.back()->size()) continue;
      if (!std::includes(cand.begin(), cand.end(), chain.back()->begin(),
                         chain.back()->end()))
        continue;
      chain.push_back(&cand);
      extend();
      chain.pop_back();
    }
  };
  for (const Tuple& s : proper) {
    chain = {&s};
    extend();
  }
  return Complex::from_faces(images);
}

CycleExtraction extract_cycle_from_image(const CofinalFn& F,
                                         const std::vector<Elem>& a) {
  int n = static_cast<int>(a.size()) - 1;
  if (n < 1) throw DomainError("a must have at least two elements");
  CycleExtraction out;

  // maximal chains of proper subsets correspond to injective n-sequences
  std::vector<int> idx(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) idx[i] = static_cast<int>(i);
  std::vector<int> seq;
  std::function<void()> rec = [&]() {
    if (static_cast<int>(seq.size()) == n) {
      ++out.chains_pushed;
      Tuple stage;
      Face img;
      for (int i : seq) {
        stage.push_back(a[i]);
        std::sort(stage.begin(), stage.end());
        img.push_back(F.at(stage));
      }
      std::sort(img.begin(), img.end());
      img.erase(std::unique(img.begin(), img.end()), img.end());
      if (static_cast<int>(img.size()) < n) {
        ++out.degenerate_dropped;
        return;
      }
      if (out.reduced.count(img))
        out.reduced.erase(img);
      else
        out.reduced.insert(img);
      return;
    }
    for (int i : idx) {
      if (std::find(seq.begin(), seq.end(), i) != seq.end()) continue;
      seq.push_back(i);
      rec();
      seq.pop_back();
    }
  };
  rec();
  out.survivors = static_cast<long long>(out.reduced.size());

  Tuple stage;
  for (int j = 0; j < n; ++j) {
    stage.push_back(a[j]);
    out.distinguished.push_back(F.at(stage));
  }
  std::sort(out.distinguished.begin(), out.distinguished.end());
  out.distinguished.erase(
      std::unique(out.distinguished.begin(), out.distinguished.end()),
      out.distinguished.end());

  if (out.reduced.empty()) {
    out.failure = "image chain reduces to zero";
    return out;
  }
  if (static_cast<int>(out.distinguished.size()) < n) {
    out.failure = "distinguished face is degenerate";
    return out;
  }
  if (!out.reduced.count(out.distinguished)) {
    out.failure = "distinguished face cancels in the image chain";
    return out;
  }

  auto components = connon_decompose(out.reduced, n - 1);
  out.component_count = static_cast<int>(components.size());
  for (std::size_t i = 0; i < components.size(); ++i)
    if (components[i].contains(out.distinguished)) {
      out.component_index = static_cast<int>(i);
      out.cycle = components[i];
      break;
    }
  out.ok = true;
  return out;
}

CofinalFn ramsey_witness(const QuasiOrder& P, const Coloring& c,
                         const std::vector<Elem>& X,
                         const std::vector<Elem>& base) {
  for (int i = 0; i < P.size(); ++i)
    for (int j = 0; j < P.size(); ++j)
      if (!P.le(i, j) && !P.le(j, i))
        throw PreconditionError("the order is not linear");
  std::vector<Elem> xs = X;
  std::sort(xs.begin(), xs.end(), [&](Elem a, Elem b) { return P.lt(a, b); });

  // homogeneity of c on strictly increasing X-tuples
  {
    std::vector<Tuple> full = enumerate_strict_tuples_over(P, xs, c.arity);
    for (std::size_t i = 1; i < full.size(); ++i)
      if (c.at(full[i]) != c.at(full[0]))
        throw PreconditionError("X is not homogeneous for the coloring");
  }

  CofinalFn F;
  F.arity = c.arity;
  F.domain_kind = DomainKind::strict;
  F.base = base;
  for (int len = 1; len <= c.arity; ++len) {
    for (const Tuple& t : enumerate_strict_tuples_over(P, base, len)) {
      Elem bound = t[0];
      for (Elem v : t)
        if (P.lt(bound, v)) bound = v;
      for (const Tuple& d : one_deletions(t)) {
        Elem fv = F.at(d);
        if (P.lt(bound, fv)) bound = fv;
      }
      Elem pick = -1;
      for (Elem x : xs)
        if (P.lt(bound, x)) {
          pick = x;
          break;
        }
      if (pick < 0)
        throw UniverseTooSmall("homogeneous set exhausted above " +
                                   P.name(bound),
                               P.rank(bound) + 2);
      F.table[t] = pick;
    }
  }
  return F;
}

}  // namespace limlab
