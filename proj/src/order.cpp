#include "limlab/order.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace limlab {

std::string Diagnostics::joined() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    if (i) os << "; ";
    os << issues[i];
  }
  return os.str();
}

QuasiOrder::QuasiOrder(int n, const std::vector<std::pair<int, int>>& pairs,
                       bool close_transitively) {
  leq_.assign(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i) leq_[i][i] = 1;
  for (auto& [a, b] : pairs) {
    if (a < 0 || a >= n || b < 0 || b >= n)
      throw StructuralError("leq pair out of range");
    leq_[a][b] = 1;
  }
  if (close_transitively) {
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        if (leq_[i][k])
          for (int j = 0; j < n; ++j)
            if (leq_[k][j]) leq_[i][j] = 1;
  }
  default_names();
  recompute_linext();
}

void QuasiOrder::default_names() {
  names.resize(size());
  for (int i = 0; i < size(); ++i)
    if (names[i].empty()) names[i] = std::to_string(i);
}

void QuasiOrder::recompute_linext() {
  int n = size();
  linext.clear();
  std::vector<char> placed(n, 0);
  for (int step = 0; step < n; ++step) {
    int pick = -1;
    for (int x = 0; x < n && pick < 0; ++x) {
      if (placed[x]) continue;
      bool ready = true;
      for (int p = 0; p < n; ++p)
        if (!placed[p] && p != x && lt(p, x)) ready = false;
      if (ready) pick = x;
    }
    if (pick < 0) throw StructuralError("leq is not acyclic modulo equivalence");
    placed[pick] = 1;
    linext.push_back(pick);
  }
  rank_.assign(n, 0);
  for (int r = 0; r < n; ++r) rank_[linext[r]] = r;
}

bool QuasiOrder::tuple_less(const Tuple& a, const Tuple& b) const {
  std::size_t m = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < m; ++i) {
    if (rank_[a[i]] != rank_[b[i]]) return rank_[a[i]] < rank_[b[i]];
  }
  return a.size() < b.size();
}

std::optional<Elem> QuasiOrder::maximum() const {
  for (Elem t : linext) {
    bool top = true;
    for (int x = 0; x < size(); ++x)
      if (!le(x, t)) top = false;
    if (top) return t;
  }
  return std::nullopt;
}

bool QuasiOrder::directed() const {
  for (int a = 0; a < size(); ++a)
    for (int b = 0; b < size(); ++b) {
      bool bounded = false;
      for (int u = 0; u < size() && !bounded; ++u)
        if (le(a, u) && le(b, u)) bounded = true;
      if (!bounded) return false;
    }
  return true;
}

bool QuasiOrder::is_cofinal(const std::vector<Elem>& base) const {
  for (int x = 0; x < size(); ++x) {
    bool dominated = false;
    for (Elem u : base)
      if (le(x, u)) dominated = true;
    if (!dominated) return false;
  }
  return true;
}

std::optional<Elem> QuasiOrder::meet(Elem a, Elem b) const {
  for (Elem z : linext) {
    if (!le(z, a) || !le(z, b)) continue;
    bool greatest = true;
    for (int w = 0; w < size(); ++w)
      if (le(w, a) && le(w, b) && !le(w, z)) greatest = false;
    if (greatest) return z;
  }
  return std::nullopt;
}

std::optional<Elem> QuasiOrder::join(Elem a, Elem b) const {
  for (Elem z : linext) {
    if (!le(a, z) || !le(b, z)) continue;
    bool least = true;
    for (int w = 0; w < size(); ++w)
      if (le(a, w) && le(b, w) && !le(z, w)) least = false;
    if (least) return z;
  }
  return std::nullopt;
}

Diagnostics QuasiOrder::validate() const {
  Diagnostics d;
  int n = size();
  for (int i = 0; i < n; ++i)
    if (!leq_[i][i]) d.add("leq not reflexive at " + names[i]);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (leq_[i][j])
        for (int k = 0; k < n; ++k)
          if (leq_[j][k] && !leq_[i][k])
            d.add("leq not transitive: " + names[i] + " <= " + names[j] +
                  " <= " + names[k]);
  if (static_cast<int>(linext.size()) != n) {
    d.add("linear extension has wrong size");
    return d;
  }
  std::vector<char> seen(n, 0);
  for (Elem e : linext) {
    if (e < 0 || e >= n || seen[e]) {
      d.add("linear extension is not a permutation");
      return d;
    }
    seen[e] = 1;
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (lt(a, b) && rank_[a] > rank_[b])
        d.add("linear extension does not refine leq at " + names[a] + " < " +
              names[b]);
  return d;
}

bool weakly_increasing(const QuasiOrder& P, const Tuple& t) {
  for (std::size_t i = 0; i + 1 < t.size(); ++i)
    if (!P.le(t[i], t[i + 1])) return false;
  return true;
}

bool strictly_increasing(const QuasiOrder& P, const Tuple& t) {
  for (std::size_t i = 0; i + 1 < t.size(); ++i)
    if (!P.lt(t[i], t[i + 1])) return false;
  return true;
}

bool subseq(const Tuple& a, const Tuple& b) {
  std::size_t i = 0;
  for (std::size_t j = 0; j < b.size() && i < a.size(); ++j)
    if (a[i] == b[j]) ++i;
  return i == a.size();
}

namespace {

void enumerate_rec(const QuasiOrder& P, const std::vector<Elem>& pool, int n,
                   bool strict, Tuple& acc, std::vector<Tuple>& out) {
  if (static_cast<int>(acc.size()) == n) {
    out.push_back(acc);
    return;
  }
  for (Elem e : pool) {
    if (!acc.empty()) {
      if (strict ? !P.lt(acc.back(), e) : !P.le(acc.back(), e)) continue;
    }
    acc.push_back(e);
    enumerate_rec(P, pool, n, strict, acc, out);
    acc.pop_back();
  }
}

std::vector<Elem> rank_sorted(const QuasiOrder& P, std::vector<Elem> pool) {
  std::sort(pool.begin(), pool.end(),
            [&](Elem a, Elem b) { return P.rank(a) < P.rank(b); });
  return pool;
}

}  // namespace

std::vector<Tuple> enumerate_increasing_tuples_over(const QuasiOrder& P,
                                                    const std::vector<Elem>& base,
                                                    int n) {
  if (n <= 0) throw DomainError("tuple length must be positive");
  std::vector<Tuple> out;
  Tuple acc;
  enumerate_rec(P, rank_sorted(P, base), n, /*strict=*/false, acc, out);
  return out;
}

std::vector<Tuple> enumerate_increasing_tuples(const QuasiOrder& P, int n) {
  std::vector<Elem> all(P.size());
  for (int i = 0; i < P.size(); ++i) all[i] = i;
  return enumerate_increasing_tuples_over(P, all, n);
}

std::vector<Tuple> enumerate_strict_tuples_over(const QuasiOrder& P,
                                                const std::vector<Elem>& base,
                                                int n) {
  if (n <= 0) throw DomainError("tuple length must be positive");
  std::vector<Tuple> out;
  Tuple acc;
  enumerate_rec(P, rank_sorted(P, base), n, /*strict=*/true, acc, out);
  return out;
}

std::vector<Tuple> one_deletions(const Tuple& t) {
  std::set<Tuple> uniq;
  if (t.size() <= 1) return {};  // the empty tuple is not a stage
  for (std::size_t i = 0; i < t.size(); ++i) {
    Tuple s;
    s.reserve(t.size() - 1);
    for (std::size_t j = 0; j < t.size(); ++j)
      if (j != i) s.push_back(t[j]);
    uniq.insert(s);
  }
  return {uniq.begin(), uniq.end()};
}

namespace {

// all stage sequences below (and ending at) `top`
void chains_below(const Tuple& top, std::map<Tuple, std::vector<ChainOfTuples>>& memo) {
  if (memo.count(top)) return;
  std::vector<ChainOfTuples> result;
  if (top.size() == 1) {
    result.push_back(ChainOfTuples{{top}});
  } else {
    for (const Tuple& p : one_deletions(top)) {
      chains_below(p, memo);
      for (const ChainOfTuples& c : memo[p]) {
        ChainOfTuples ext = c;
        ext.stages.push_back(top);
        result.push_back(std::move(ext));
      }
    }
  }
  memo[top] = std::move(result);
}

}  // namespace

std::vector<ChainOfTuples> enumerate_chains_over(const QuasiOrder& P,
                                                 const std::vector<Elem>& base,
                                                 int n, bool strict) {
  if (n <= 0) throw DomainError("chain length must be positive");
  std::vector<Tuple> tops = strict ? enumerate_strict_tuples_over(P, base, n)
                                   : enumerate_increasing_tuples_over(P, base, n);
  std::map<Tuple, std::vector<ChainOfTuples>> memo;
  std::vector<ChainOfTuples> out;
  for (const Tuple& t : tops) {
    chains_below(t, memo);
    for (const ChainOfTuples& c : memo[t]) out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ChainOfTuples> enumerate_chains(const QuasiOrder& P, int n) {
  std::vector<Elem> all(P.size());
  for (int i = 0; i < P.size(); ++i) all[i] = i;
  return enumerate_chains_over(P, all, n);
}

Elem CofinalFn::at(const Tuple& t) const {
  auto it = table.find(t);
  if (it == table.end()) throw DomainError("tuple outside declared domain");
  return it->second;
}

std::vector<Tuple> CofinalFn::domain_tuples(const QuasiOrder& P) const {
  std::vector<Elem> pool;
  if (base) {
    pool = *base;
  } else {
    pool.resize(P.size());
    for (int i = 0; i < P.size(); ++i) pool[i] = i;
  }
  std::vector<Tuple> out;
  for (int len = 1; len <= arity; ++len) {
    auto ts = domain_kind == DomainKind::strict
                  ? enumerate_strict_tuples_over(P, pool, len)
                  : enumerate_increasing_tuples_over(P, pool, len);
    out.insert(out.end(), ts.begin(), ts.end());
  }
  return out;
}

int Coloring::at(const Tuple& t) const {
  auto it = table.find(t);
  if (it == table.end()) throw DomainError("coloring undefined on tuple");
  return it->second;
}

Diagnostics Coloring::validate_total(const QuasiOrder& P) const {
  Diagnostics d;
  for (const Tuple& t : enumerate_increasing_tuples(P, arity)) {
    auto it = table.find(t);
    if (it == table.end())
      d.add("coloring missing tuple " + tuple_to_string(P, t));
    else if (it->second < 0 || it->second >= palette)
      d.add("color out of palette at " + tuple_to_string(P, t));
  }
  return d;
}

Diagnostics check_n_cofinal(const QuasiOrder& P, const CofinalFn& F) {
  Diagnostics d;
  std::vector<Tuple> dom = F.domain_tuples(P);
  for (const Tuple& t : dom) {
    if (!F.defined(t)) {
      d.add("missing value at " + tuple_to_string(P, t));
      continue;
    }
    Elem v = F.table.at(t);
    if (v < 0 || v >= P.size()) d.add("value out of range at " + tuple_to_string(P, t));
  }
  if (!d.ok()) return d;
  for (const Tuple& t : dom)
    if (t.size() == 1 && !P.le(t[0], F.table.at(t)))
      d.add("domination fails: " + P.name(t[0]) + " !<= F = " +
            P.name(F.table.at(t)));
  for (const Tuple& a : dom)
    for (const Tuple& b : dom) {
      if (a.size() >= b.size() || !subseq(a, b)) continue;
      if (!P.le(F.table.at(a), F.table.at(b)))
        d.add("monotonicity fails: F" + tuple_to_string(P, a) + " !<= F" +
              tuple_to_string(P, b));
    }
  return d;
}

Tuple apply_F_star(const CofinalFn& F, const ChainOfTuples& sigma) {
  Tuple out;
  out.reserve(sigma.stages.size());
  for (const Tuple& s : sigma.stages) out.push_back(F.at(s));
  return out;
}

std::optional<std::vector<Elem>> monotone_selector(const QuasiOrder& P,
                                                   const std::vector<Elem>& base) {
  int n = P.size();
  std::vector<char> in_base(n, 0);
  for (Elem u : base) in_base[u] = 1;

  std::vector<Elem> g(n, -1);
  for (Elem u : base) g[u] = u;

  std::vector<Elem> vars;  // non-base elements, processed in rank order
  for (Elem e : P.linext)
    if (!in_base[e]) vars.push_back(e);

  std::vector<std::vector<Elem>> candidates(n);
  for (Elem x : vars) {
    for (Elem u : P.linext)
      if (in_base[u] && P.le(x, u)) candidates[x].push_back(u);
    if (candidates[x].empty()) return std::nullopt;  // base not cofinal over x
  }

  auto consistent = [&](Elem x, Elem value) {
    for (int y = 0; y < n; ++y) {
      if (g[y] < 0 || y == x) continue;
      if (P.le(y, x) && !P.le(g[y], value)) return false;
      if (P.le(x, y) && !P.le(value, g[y])) return false;
    }
    return true;
  };

  std::vector<std::size_t> cursor(vars.size(), 0);
  std::size_t i = 0;
  while (i < vars.size()) {
    Elem x = vars[i];
    bool advanced = false;
    while (cursor[i] < candidates[x].size()) {
      Elem u = candidates[x][cursor[i]++];
      if (consistent(x, u)) {
        g[x] = u;
        ++i;
        advanced = true;
        break;
      }
    }
    if (!advanced) {
      g[x] = -1;
      cursor[i] = 0;
      if (i == 0) return std::nullopt;
      --i;
      g[vars[i]] = -1;  // retry previous variable with its next candidate
    }
  }
  return g;
}

namespace {

// constant chain color of F over `base` (whole order when base is empty);
// throws PreconditionError when not constant
int chain_color_constant(const QuasiOrder& P, const Coloring& c,
                         const CofinalFn& F, const std::vector<Elem>& base,
                         bool strict) {
  auto chains = enumerate_chains_over(P, base, c.arity, strict);
  if (chains.empty()) throw PreconditionError("no chains in witness domain");
  int color = -1;
  for (const ChainOfTuples& sigma : chains) {
    int v = c.at(apply_F_star(F, sigma));
    if (color < 0) color = v;
    if (v != color)
      throw PreconditionError("chain colors are not constant over the domain");
  }
  return color;
}

}  // namespace

CofinalFn extend_partial_witness(const QuasiOrder& P, const Coloring& c,
                                 const CofinalFn& F) {
  if (!F.base) throw PreconditionError("witness carries no domain restriction");
  const std::vector<Elem>& base = *F.base;
  if (!P.is_cofinal(base)) throw PreconditionError("base is not cofinal");
  if (F.domain_kind != DomainKind::weak)
    throw PreconditionError("extension requires a weak-tuple domain");
  if (c.arity != F.arity)
    throw PreconditionError("coloring arity does not match witness arity");

  Diagnostics laws = check_n_cofinal(P, F);
  if (!laws.ok())
    throw PreconditionError("partial witness violates cofinality laws: " +
                            laws.joined());
  for (Elem u : base)
    if (F.at({u}) != u)
      throw PreconditionError("witness does not extend the identity on its base");
  int color = chain_color_constant(P, c, F, base, /*strict=*/false);

  auto g = monotone_selector(P, base);
  if (!g)
    throw PreconditionError(
        "no monotone selector into the base exists; the base cannot absorb "
        "every element order-compatibly");

  CofinalFn out;
  out.arity = F.arity;
  out.domain_kind = DomainKind::weak;
  for (int len = 1; len <= F.arity; ++len)
    for (const Tuple& t : enumerate_increasing_tuples(P, len)) {
      Tuple mapped(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) mapped[i] = (*g)[t[i]];
      out.table[t] = F.at(mapped);
    }

  Diagnostics post = check_n_cofinal(P, out);
  if (!post.ok())
    throw StructuralError("extended witness lost a law: " + post.joined());
  std::vector<Elem> all(P.size());
  for (int i = 0; i < P.size(); ++i) all[i] = i;
  if (chain_color_constant(P, c, out, all, false) != color)
    throw StructuralError("extension changed the constant chain color");
  return out;
}

CofinalFn transfer_witness(const QuasiOrder& P, const QuasiOrder& Q,
                           const std::vector<Elem>& f, const std::vector<Elem>& g,
                           const CofinalFn& F_P, const Coloring& c_Q) {
  if (static_cast<int>(f.size()) != P.size() ||
      static_cast<int>(g.size()) != Q.size())
    throw PreconditionError("map sizes do not match the orders");
  for (int a = 0; a < P.size(); ++a)
    for (int b = 0; b < P.size(); ++b)
      if (P.le(a, b) && !Q.le(f[a], f[b]))
        throw PreconditionError("forward map is not monotone");
  {
    std::vector<Elem> image;
    for (int a = 0; a < P.size(); ++a) image.push_back(f[a]);
    if (!Q.is_cofinal(image))
      throw PreconditionError("forward image is not cofinal");
  }
  for (int q = 0; q < Q.size(); ++q)
    if (!Q.le(q, f[g[q]]))
      throw PreconditionError("section fails f(g(q)) >= q");
  for (int q = 0; q < Q.size(); ++q)
    for (int r = 0; r < Q.size(); ++r)
      if (Q.le(q, r) && !P.le(g[q], g[r]))
        throw PreconditionError("section is not monotone");
  if (c_Q.arity != F_P.arity)
    throw PreconditionError("coloring arity does not match witness arity");

  Diagnostics laws = check_n_cofinal(P, F_P);
  if (!laws.ok())
    throw PreconditionError("witness violates cofinality laws: " + laws.joined());

  // pull the coloring back along f and demand monochromaticity upstream
  Coloring pulled;
  pulled.arity = c_Q.arity;
  pulled.palette = c_Q.palette;
  for (const Tuple& t : enumerate_increasing_tuples(P, pulled.arity)) {
    Tuple ft(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) ft[i] = f[t[i]];
    pulled.table[t] = c_Q.at(ft);
  }
  std::vector<Elem> allP(P.size());
  for (int i = 0; i < P.size(); ++i) allP[i] = i;
  int color = chain_color_constant(P, pulled, F_P, allP, false);

  CofinalFn out;
  out.arity = F_P.arity;
  out.domain_kind = DomainKind::weak;
  for (int len = 1; len <= out.arity; ++len)
    for (const Tuple& t : enumerate_increasing_tuples(Q, len)) {
      Tuple mapped(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) mapped[i] = g[t[i]];
      out.table[t] = f[F_P.at(mapped)];
    }

  Diagnostics post = check_n_cofinal(Q, out);
  if (!post.ok())
    throw StructuralError("transferred witness lost a law: " + post.joined());
  std::vector<Elem> allQ(Q.size());
  for (int i = 0; i < Q.size(); ++i) allQ[i] = i;
  if (chain_color_constant(Q, c_Q, out, allQ, false) != color)
    throw StructuralError("transfer changed the constant chain color");
  return out;
}

std::string tuple_to_string(const QuasiOrder& P, const Tuple& t) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) os << ",";
    os << P.name(t[i]);
  }
  os << ")";
  return os.str();
}

}  // namespace limlab
