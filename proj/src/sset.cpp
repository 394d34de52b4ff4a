#include "limlab/sset.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

namespace limlab {

namespace {

// ascending k-subsets of 0..n-1, lexicographic
std::vector<std::vector<int>> combinations(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 1 || k > n) return out;
  std::vector<int> cur(k);
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

// nonempty subsets of {0..n} in (size, lex) order, so every proper subset
// of a key precedes the key itself
std::vector<std::vector<int>> subset_keys(int n) {
  std::vector<std::vector<int>> keys;
  for (int sz = 1; sz <= n + 1; ++sz)
    for (auto& c : combinations(n + 1, sz)) keys.push_back(std::move(c));
  return keys;
}

// indices of the proper subsets of each key among the earlier keys
std::vector<std::vector<int>> proper_subsets_of(
    const std::vector<std::vector<int>>& keys) {
  std::vector<std::vector<int>> below(keys.size());
  for (std::size_t a = 0; a < keys.size(); ++a)
    for (std::size_t b = 0; b < keys.size(); ++b)
      if (keys[b].size() < keys[a].size() &&
          std::includes(keys[a].begin(), keys[a].end(), keys[b].begin(),
                        keys[b].end()))
        below[a].push_back(static_cast<int>(b));
  return below;
}

std::string subset_to_string(const std::vector<int>& a) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) os << ",";
    os << a[i];
  }
  os << "}";
  return os.str();
}

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

std::vector<Elem> sorted_unique(const std::vector<Elem>& xs) {
  std::vector<Elem> out(xs);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool pairwise_comparable(const QuasiOrder& P, const std::vector<Elem>& u) {
  for (std::size_t a = 0; a < u.size(); ++a)
    for (std::size_t b = a + 1; b < u.size(); ++b)
      if (!P.le(u[a], u[b]) && !P.le(u[b], u[a])) return false;
  return true;
}

// maximal inclusion chains of nonempty subsets of {0..n}, as index sequences
// into the (size, lex) key list; one chain per insertion order
std::vector<std::vector<int>> maximal_chains(
    const std::vector<std::vector<int>>& keys, int n) {
  std::map<std::vector<int>, int> index;
  for (std::size_t i = 0; i < keys.size(); ++i)
    index[keys[i]] = static_cast<int>(i);
  std::vector<int> perm(n + 1);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> chains;
  do {
    std::vector<int> chain;
    std::vector<int> acc;
    for (int x : perm) {
      acc.push_back(x);
      std::vector<int> key(acc);
      std::sort(key.begin(), key.end());
      chain.push_back(index.at(key));
    }
    chains.push_back(std::move(chain));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return chains;
}

}  // namespace

NerveLevel nerve_level(const QuasiOrder& P, int n) {
  if (n < 0) throw DomainError("level must be nonnegative");
  NerveLevel L;
  L.order = P;
  L.n = n;
  if (P.size() > 0) L.faces = enumerate_increasing_tuples(P, n + 1);
  return L;
}

std::vector<Tuple> nondegenerate_faces(const NerveLevel& level) {
  std::vector<Tuple> out;
  for (const Tuple& t : level.faces)
    if (strictly_increasing(level.order, t)) out.push_back(t);
  return out;
}

int ex_degree(const ExFace& s) {
  if (s.values.empty()) throw DomainError("the face table is empty");
  std::size_t widest = 0;
  for (const auto& [key, v] : s.values) widest = std::max(widest, key.size());
  return static_cast<int>(widest) - 1;
}

Diagnostics validate_ex_face(const QuasiOrder& P, const ExFace& s, int n) {
  Diagnostics d;
  if (n < 0) {
    d.add("level must be nonnegative");
    return d;
  }
  auto keys = subset_keys(n);
  for (const auto& key : keys)
    if (!s.values.count(key)) d.add("missing subset " + subset_to_string(key));
  std::set<std::vector<int>> expect(keys.begin(), keys.end());
  for (const auto& [key, v] : s.values) {
    if (!expect.count(key)) d.add("stray subset " + subset_to_string(key));
    if (v < 0 || v >= P.size())
      d.add("value out of range at " + subset_to_string(key));
  }
  if (!d.ok()) return d;
  for (const auto& [a, va] : s.values)
    for (const auto& [b, vb] : s.values) {
      if (a.size() >= b.size()) continue;
      if (!std::includes(b.begin(), b.end(), a.begin(), a.end())) continue;
      if (!P.le(va, vb))
        d.add("order violated between " + subset_to_string(a) + " and " +
              subset_to_string(b));
    }
  return d;
}

ExFace ex_restriction(const ExFace& s, int i) {
  int n = ex_degree(s);
  if (n < 1) throw DomainError("a point admits no face maps");
  if (i < 0 || i > n) throw DomainError("face index out of range");
  ExFace out;
  for (const auto& A : subset_keys(n - 1)) {
    std::vector<int> img(A);
    for (int& x : img)
      if (x >= i) ++x;
    auto it = s.values.find(img);
    if (it == s.values.end())
      throw StructuralError("face table misses subset " + subset_to_string(img));
    out.values[A] = it->second;
  }
  return out;
}

std::vector<Elem> vertex_set(const Tuple& face) { return sorted_unique(face); }

std::vector<Elem> vertex_set(const ExFace& face) {
  std::vector<Elem> vals;
  for (const auto& [key, v] : face.values)
    if (key.size() == 1) vals.push_back(v);
  return sorted_unique(vals);
}

ExNerveLevel ex_nerve_level(const QuasiOrder& P, int n) {
  if (n < 0) throw DomainError("level must be nonnegative");
  ExNerveLevel L;
  L.order = P;
  L.n = n;
  if (P.size() == 0) return L;

  const auto keys = subset_keys(n);
  const auto below = proper_subsets_of(keys);
  std::vector<Elem> assign(keys.size(), -1);
  long long nodes = 0;
  constexpr long long kNodeCap = 1LL << 26;
  constexpr std::size_t kFaceCap = 1u << 22;

  auto emit = [&]() {
    ExFace f;
    for (std::size_t i = 0; i < keys.size(); ++i) f.values[keys[i]] = assign[i];
    L.faces.push_back(std::move(f));
    if (L.faces.size() > kFaceCap)
      throw PreconditionError("the level is too large to materialize");
  };

  auto rec = [&](auto&& self, std::size_t idx) -> void {
    if (idx == keys.size()) {
      emit();
      return;
    }
    for (Elem v : P.linext) {
      if (++nodes > kNodeCap)
        throw PreconditionError("the level is too large to materialize");
      bool ok = true;
      for (int b : below[idx])
        if (!P.le(assign[b], v)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      assign[idx] = v;
      self(self, idx + 1);
      assign[idx] = -1;
    }
  };
  rec(rec, 0);
  return L;
}

SpanReport spans_neatly(const std::vector<ExFace>& S,
                        const std::vector<Elem>& T, int n) {
  if (n < 0) throw DomainError("level must be nonnegative");
  for (const ExFace& s : S)
    if (ex_degree(s) != n)
      throw StructuralError("face degree does not match the level");

  SpanReport rep;
  std::vector<Elem> targets = sorted_unique(T);
  std::vector<std::vector<Elem>> verts;
  verts.reserve(S.size());
  for (const ExFace& s : S) verts.push_back(vertex_set(s));

  for (const auto& ids : combinations(static_cast<int>(targets.size()), n + 1)) {
    std::vector<Elem> want;
    want.reserve(ids.size());
    for (int i : ids) want.push_back(targets[i]);
    bool found = false;
    for (std::size_t j = 0; j < S.size(); ++j)
      if (verts[j] == want) {
        rep.realized[want] = j;
        found = true;
        break;
      }
    if (!found) rep.missing.push_back(want);
  }
  rep.spans = rep.missing.empty();

  rep.neat = true;
  for (int i = 0; n >= 1 && i <= n; ++i) {
    std::map<std::vector<Elem>, std::pair<ExFace, std::size_t>> seen;
    for (std::size_t j = 0; j < S.size(); ++j) {
      ExFace d = ex_restriction(S[j], i);
      std::vector<Elem> v = vertex_set(d);
      auto it = seen.find(v);
      if (it == seen.end()) {
        seen.emplace(std::move(v), std::make_pair(std::move(d), j));
      } else if (!(it->second.first == d)) {
        rep.neat = false;
        rep.collisions.push_back({i, it->second.second, j});
      }
    }
  }
  return rep;
}

ExFace face_from_table(const CofinalFn& F, const Tuple& top) {
  if (top.empty()) throw DomainError("empty top tuple");
  int n = static_cast<int>(top.size()) - 1;
  ExFace out;
  for (const auto& A : subset_keys(n)) {
    Tuple sub;
    sub.reserve(A.size());
    for (int p : A) sub.push_back(top[p]);
    out.values[A] = F.at(sub);
  }
  return out;
}

std::vector<ExFace> spanning_faces(const QuasiOrder& P, const CofinalFn& F,
                                   const std::vector<Elem>& T, int n) {
  if (n < 0) throw DomainError("level must be nonnegative");
  std::vector<Elem> targets = sorted_unique(T);
  for (Elem u : targets)
    if (u < 0 || u >= P.size()) throw StructuralError("target out of range");

  std::vector<ExFace> out;
  for (int sz = 1; sz <= n + 1 && sz <= static_cast<int>(targets.size()); ++sz)
    for (const auto& ids : combinations(static_cast<int>(targets.size()), sz)) {
      std::vector<Elem> u;
      u.reserve(ids.size());
      for (int i : ids) u.push_back(targets[i]);
      if (!pairwise_comparable(P, u)) continue;
      std::sort(u.begin(), u.end(),
                [&](Elem a, Elem b) { return P.rank(a) < P.rank(b); });
      Tuple top(u.begin(), u.end());
      while (static_cast<int>(top.size()) < n + 1) top.push_back(u.back());
      out.push_back(face_from_table(F, top));
    }
  return out;
}

SearchOutcome simplicial_ph_check(const QuasiOrder& P, const Coloring& c,
                                  int n, long long budget, int workers) {
  auto t0 = std::chrono::steady_clock::now();
  {
    Diagnostics d;
    if (P.size() == 0) {
      d.add("order has no elements");
    } else {
      for (const auto& s : P.validate().issues) d.add(s);
      if (n < 1) d.add("level must be at least 1");
      if (c.arity != n + 1)
        d.add("coloring arity " + std::to_string(c.arity) +
              " does not match level " + std::to_string(n));
      for (const auto& s : c.validate_total(P).issues) d.add(s);
    }
    if (!d.ok()) throw PreconditionError(d.joined());
  }

  SearchOutcome out;
  out.stats.budget = budget;
  out.stats.workers = std::max(1, workers);

  const auto keys = subset_keys(n);
  const auto below = proper_subsets_of(keys);
  const auto chains = maximal_chains(keys, n);
  const int singles = n + 1;  // keys[0..n] are the singletons

  long long nodes = 0;
  long long prunes = 0;
  bool hit = false;

  // all monotone subset tables with the given vertex set whose maximal
  // chains all carry the color k
  auto candidates = [&](const std::vector<Elem>& vs, int k) {
    std::vector<ExFace> cands;
    std::vector<Elem> assign(keys.size(), -1);
    auto rec = [&](auto&& self, int idx) -> void {
      if (hit) return;
      if (idx == singles) {
        for (Elem u : vs)
          if (std::find(assign.begin(), assign.begin() + singles, u) ==
              assign.begin() + singles) {
            ++prunes;
            return;
          }
      }
      if (idx == static_cast<int>(keys.size())) {
        for (const auto& chain : chains) {
          Tuple img;
          img.reserve(chain.size());
          for (int j : chain) img.push_back(assign[j]);
          if (c.at(img) != k) {
            ++prunes;
            return;
          }
        }
        ExFace f;
        for (std::size_t i = 0; i < keys.size(); ++i)
          f.values[keys[i]] = assign[i];
        cands.push_back(std::move(f));
        return;
      }
      const bool single = idx < singles;
      for (Elem v : P.linext) {
        if (single &&
            std::find(vs.begin(), vs.end(), v) == vs.end())
          continue;
        if (nodes >= budget) {
          hit = true;
          return;
        }
        ++nodes;
        bool ok = true;
        for (int b : below[idx])
          if (!P.le(assign[b], v)) {
            ok = false;
            break;
          }
        if (!ok) {
          ++prunes;
          continue;
        }
        assign[idx] = v;
        self(self, idx + 1);
        assign[idx] = -1;
        if (hit) return;
      }
    };
    rec(rec, 0);
    return cands;
  };

  bool found = false;
  for (int sz = 1; sz <= P.size() && !found && !hit; ++sz) {
    for (const auto& comb : combinations(P.size(), sz)) {
      std::vector<Elem> T(comb.begin(), comb.end());
      if (!P.is_cofinal(T)) continue;

      std::vector<std::vector<Elem>> required;
      for (int m = 1; m <= n + 1 && m <= static_cast<int>(T.size()); ++m)
        for (const auto& ids :
             combinations(static_cast<int>(T.size()), m)) {
          std::vector<Elem> u;
          u.reserve(ids.size());
          for (int i : ids) u.push_back(T[i]);
          if (pairwise_comparable(P, u)) required.push_back(std::move(u));
        }

      for (int k = 0; k < c.palette && !found && !hit; ++k) {
        std::vector<std::vector<ExFace>> cand(required.size());
        bool feasible = true;
        for (std::size_t r = 0; r < required.size() && !hit; ++r) {
          cand[r] = candidates(required[r], k);
          if (cand[r].empty()) {
            feasible = false;
            break;
          }
        }
        if (!feasible || hit) continue;

        std::vector<ExFace> chosen;
        // per face-map index: vertex set -> restricted face already placed
        std::vector<std::map<std::vector<Elem>, ExFace>> neat(n + 1);
        auto place = [&](auto&& self, std::size_t r) -> bool {
          if (hit) return false;
          if (r == required.size()) return true;
          for (const ExFace& f : cand[r]) {
            if (nodes >= budget) {
              hit = true;
              return false;
            }
            ++nodes;
            std::vector<std::pair<int, std::vector<Elem>>> added;
            bool ok = true;
            for (int i = 0; i <= n && ok; ++i) {
              ExFace d = ex_restriction(f, i);
              std::vector<Elem> v = vertex_set(d);
              auto it = neat[i].find(v);
              if (it == neat[i].end()) {
                neat[i].emplace(v, std::move(d));
                added.push_back({i, std::move(v)});
              } else if (!(it->second == d)) {
                ok = false;
              }
            }
            if (ok) {
              chosen.push_back(f);
              if (self(self, r + 1)) return true;
              chosen.pop_back();
            } else {
              ++prunes;
            }
            for (auto& [i, v] : added) neat[i].erase(v);
            if (hit) return false;
          }
          return false;
        };

        if (place(place, 0)) {
          found = true;
          CofinalFn W;
          W.arity = n + 1;
          W.domain_kind = DomainKind::weak;
          W.base = T;
          std::map<std::vector<Elem>, const ExFace*> byset;
          for (std::size_t r = 0; r < required.size(); ++r)
            byset[required[r]] = &chosen[r];
          for (int len = 1; len <= n + 1; ++len)
            for (const Tuple& t : enumerate_increasing_tuples_over(P, T, len)) {
              if (len == 1) {
                W.table[t] = t[0];
                continue;
              }
              std::vector<int> prefix(len);
              std::iota(prefix.begin(), prefix.end(), 0);
              W.table[t] = byset.at(sorted_unique(t))->values.at(prefix);
            }
          out.status = SearchStatus::witness_found;
          out.witness = std::move(W);
          out.constant_color = k;
          out.note = "neat spanning over cofinal base " + set_to_string(P, T) +
                     " with " + std::to_string(chosen.size()) + " faces";
        }
      }
      if (found || hit) break;
    }
  }

  if (!found)
    out.status =
        hit ? SearchStatus::inconclusive : SearchStatus::refuted_by_exhaustion;
  out.stats.nodes = nodes;
  out.stats.prunes = prunes;
  auto t1 = std::chrono::steady_clock::now();
  out.stats.elapsed_ms =
      std::chrono::duration<double, std::milli>(t1 - t0).count();
  return out;
}

}  // namespace limlab
