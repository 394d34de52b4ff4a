#include "limlab/trivialize.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "limlab/errors.hpp"

namespace limlab {
namespace {

std::string int_body(const Tuple& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) os << ",";
    os << t[i];
  }
  return os.str();
}

// ascending sort with permutation parity; false on a repeated id
bool sort_alternating(Tuple& t, int& sign) {
  sign = 1;
  for (std::size_t i = 1; i < t.size(); ++i)
    for (std::size_t j = i; j > 0 && t[j] < t[j - 1]; --j) {
      std::swap(t[j], t[j - 1]);
      sign = -sign;
    }
  for (std::size_t i = 1; i < t.size(); ++i)
    if (t[i] == t[i - 1]) return false;
  return true;
}

std::vector<int> meet_digits(const TruncatedOmegaSystem& sys, const Tuple& t) {
  std::vector<int> d = sys.decode(t[0]);
  for (std::size_t k = 1; k < t.size(); ++k) {
    std::vector<int> e = sys.decode(t[k]);
    for (int i = 0; i < sys.width; ++i) d[i] = std::min(d[i], e[i]);
  }
  return d;
}

int digits_generators(const TruncatedOmegaSystem& sys,
                      const std::vector<int>& d) {
  int total = 0;
  for (int i = 0; i < sys.width; ++i) total += sys.grid[i][d[i]].generators;
  return total;
}

// matrix * vector with dimensions supplied, tolerant of shapeless empties
Vec apply_dims(const Mat& m, int r, int c, const Vec& v) {
  Vec out(static_cast<std::size_t>(r), Int(0));
  for (int i = 0; i < r && i < static_cast<int>(m.size()); ++i) {
    const Vec& row = m[i];
    for (int j = 0; j < c && j < static_cast<int>(row.size()); ++j)
      out[i] += row[j] * v[j];
  }
  return out;
}

Tuple drop(const Tuple& t, int i) {
  Tuple out;
  out.reserve(t.size() - 1);
  for (int j = 0; j < static_cast<int>(t.size()); ++j)
    if (j != i) out.push_back(t[j]);
  return out;
}

// column caps of the meet region of a key of positions; -1 empties a row
std::vector<int> region_caps(const CoherentFamily& fam, const Tuple& key) {
  std::vector<int> caps(static_cast<std::size_t>(fam.rows), fam.cols - 1);
  for (Elem t : key) {
    const std::vector<int>& x = fam.indices[static_cast<std::size_t>(t)];
    for (int i = 0; i < fam.rows; ++i)
      caps[static_cast<std::size_t>(i)] =
          std::min(caps[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(i)]);
  }
  return caps;
}

const Mat& family_map(const CoherentFamily& fam, const Tuple& key,
                      const char* who) {
  auto it = fam.maps.find(key);
  if (it == fam.maps.end())
    throw DomainError(std::string(who) + " map missing for key (" + int_body(key) + ")");
  if (static_cast<int>(it->second.size()) != fam.rows)
    throw StructuralError(std::string(who) + " map has the wrong shape");
  for (const Vec& row : it->second)
    if (static_cast<int>(row.size()) != fam.cols)
      throw StructuralError(std::string(who) + " map has the wrong shape");
  return it->second;
}

void flag_cells(FamilyCheck& rep, const Tuple& key, const Mat& sum,
                const std::vector<int>& caps, const CellSet& exceptional) {
  for (std::size_t i = 0; i < sum.size(); ++i) {
    int cap = caps[i];
    for (int j = 0; j <= cap; ++j) {
      if (sum[i][static_cast<std::size_t>(j)] == 0) continue;
      std::pair<int, int> cell{static_cast<int>(i), j};
      if (exceptional.count(cell)) continue;
      rep.ok = false;
      rep.cells.insert(cell);
      std::ostringstream os;
      os << "key (" << int_body(key) << "): cell (" << cell.first << ","
         << cell.second << ") = " << sum[i][static_cast<std::size_t>(j)];
      rep.details.push_back(os.str());
    }
  }
}

// every length-n tuple over {0..count-1}, with repetition
std::vector<Tuple> position_tuples(int count, int n) {
  std::vector<Tuple> out;
  if (count <= 0 && n > 0) return out;
  Tuple cur(static_cast<std::size_t>(n), 0);
  while (true) {
    out.push_back(cur);
    int k = n - 1;
    while (k >= 0 && cur[static_cast<std::size_t>(k)] == count - 1) {
      cur[static_cast<std::size_t>(k)] = 0;
      --k;
    }
    if (k < 0) break;
    ++cur[static_cast<std::size_t>(k)];
  }
  return out;
}

}  // namespace

int support_cutoff(const EvaluationContext& ctx, const Tuple& key) {
  if (key.empty()) throw DomainError("support needs a nonempty key");
  Tuple k = key;
  int sign = 1;
  if (!sort_alternating(k, sign)) return 0;
  auto it = ctx.cocycle.values.find(k);
  if (it == ctx.cocycle.values.end()) return 0;
  std::vector<int> d = meet_digits(ctx.system, k);
  const Vec& v = it->second;
  if (static_cast<int>(v.size()) != digits_generators(ctx.system, d))
    throw StructuralError("stored value has the wrong dimension");
  int off = 0, top = 0;
  for (int i = 0; i < ctx.system.width; ++i) {
    const FGAbelianGroup& g = ctx.system.grid[i][d[i]];
    Vec block(v.begin() + off, v.begin() + off + g.generators);
    if (!is_zero_element(g, block)) top = i;
    off += g.generators;
  }
  return top;
}

Coloring support_coloring(const EvaluationContext& ctx) {
  Coloring c;
  c.arity = ctx.cocycle.degree + 1;
  c.palette = std::max(1, ctx.system.width);
  InverseSystem S = ctx.system.to_inverse_system();
  for (const Tuple& t : enumerate_increasing_tuples(S.index, c.arity))
    c.table[t] = support_cutoff(ctx, t);
  return c;
}

int cofinal_grade(const TruncatedOmegaSystem& sys, const CofinalFn& F) {
  int g = 0;
  for (const auto& [key, val] : F.table) {
    if (key.size() != 1) continue;
    std::vector<int> dx = sys.decode(key[0]);
    std::vector<int> df = sys.decode(val);
    for (int i = 0; i < sys.width; ++i)
      if (df[i] < dx[i]) g = std::max(g, i + 1);
  }
  return g;
}

Vec evaluate_expression(const EvaluationContext& ctx, const Tuple& rho,
                        const FormalExpression& expr) {
  if (rho.empty()) throw DomainError("evaluation needs a nonempty base tuple");
  const int arity = ctx.cocycle.degree + 1;
  const std::vector<int> dr = meet_digits(ctx.system, rho);
  Vec acc(static_cast<std::size_t>(digits_generators(ctx.system, dr)), Int(0));

  for (const auto& [term, coeff] : expr.terms) {
    if (static_cast<int>(term.size()) != arity)
      throw DomainError("expression tuples must match the cocycle arity");
    Tuple key = term;
    int sign = 1;
    if (!sort_alternating(key, sign)) continue;
    auto it = ctx.cocycle.values.find(key);
    if (it == ctx.cocycle.values.end()) continue;
    const Vec& v = it->second;
    std::vector<int> ds = meet_digits(ctx.system, key);
    if (static_cast<int>(v.size()) != digits_generators(ctx.system, ds))
      throw StructuralError("stored value has the wrong dimension");
    long long c = coeff * sign;
    int offs = 0, offd = 0;
    for (int i = 0; i < ctx.system.width; ++i) {
      int gs = ctx.system.grid[i][ds[i]].generators;
      int gd = ctx.system.grid[i][dr[i]].generators;
      if (i >= ctx.cutoff) {
        if (ds[i] < dr[i])
          throw StructuralError("a term drops below the base on tower " +
                                std::to_string(i));
        Vec w(v.begin() + offs, v.begin() + offs + gs);
        int cur = gs;
        for (int j = ds[i] - 1; j >= dr[i]; --j) {
          int rows_j = ctx.system.grid[i][j].generators;
          w = apply_dims(ctx.system.step[i][j].matrix, rows_j, cur, w);
          cur = rows_j;
        }
        for (int r = 0; r < gd; ++r) acc[static_cast<std::size_t>(offd + r)] += c * w[static_cast<std::size_t>(r)];
      }
      offs += gs;
      offd += gd;
    }
  }
  return canonical_reduce(ctx.system.group_at(dr), acc);
}

AlternatingCochain trivialize_cocycle(const EvaluationContext& ctx,
                                      const CofinalFn& F, int seed_sign) {
  const int n = ctx.cocycle.degree;
  if (n < 1) throw DomainError("trivialization needs a positive-degree cochain");
  InverseSystem S = ctx.system.to_inverse_system();
  for (int i = 0; i < S.index.size(); ++i)
    if (S.index.linext[static_cast<std::size_t>(i)] != i)
      throw StructuralError("materialized index must rank points by code");
  if (!cochain_is_zero(S, coboundary(S, ctx.cocycle)))
    throw PreconditionError("the cochain does not pass the cocycle test");

  int constant = -1;
  for (const ChainOfTuples& sigma : enumerate_chains(S.index, n + 1)) {
    int c = support_cutoff(ctx, apply_F_star(F, sigma));
    if (constant < 0) {
      constant = c;
    } else if (c != constant) {
      std::string where;
      for (const Tuple& st : sigma.stages)
        where += " " + tuple_to_string(S.index, st);
      throw PreconditionError("support color varies along the chain" + where);
    }
  }
  if (constant < 0) constant = 0;
  if (ctx.cutoff < constant)
    throw PreconditionError("cutoff " + std::to_string(ctx.cutoff) +
                            " sits below the constant color " +
                            std::to_string(constant));
  int grade = cofinal_grade(ctx.system, F);
  if (ctx.cutoff < grade)
    throw PreconditionError("cutoff " + std::to_string(ctx.cutoff) +
                            " sits below the witness grade " +
                            std::to_string(grade));

  AlternatingCochain psi;
  psi.degree = n - 1;
  for (const Tuple& rho : cochain_level(S, n - 1).tuples) {
    Vec v = evaluate_expression(ctx, rho, acs_a(rho, F, n, seed_sign));
    bool nonzero = false;
    for (const Int& x : v)
      if (x != 0) {
        nonzero = true;
        break;
      }
    if (nonzero) psi.values[rho] = std::move(v);
  }
  return psi;
}

Diagnostics CoherentFamily::validate(int n) const {
  Diagnostics d;
  if (n < 0) {
    d.add("negative key arity");
    return d;
  }
  for (std::size_t t = 0; t < indices.size(); ++t)
    if (static_cast<int>(indices[t].size()) != rows)
      d.add("sequence " + std::to_string(t) + " does not have length " +
            std::to_string(rows));
  if (!d.ok()) return d;
  for (const Tuple& key : position_tuples(static_cast<int>(indices.size()), n))
    if (!maps.count(key)) d.add("map missing for key (" + int_body(key) + ")");
  for (const auto& [key, m] : maps) {
    if (static_cast<int>(key.size()) != n) {
      d.add("key (" + int_body(key) + ") does not have arity " +
            std::to_string(n));
      continue;
    }
    bool in_range = true;
    for (Elem t : key)
      if (t < 0 || t >= static_cast<int>(indices.size())) in_range = false;
    if (!in_range) {
      d.add("key (" + int_body(key) + ") references unknown sequences");
      continue;
    }
    if (static_cast<int>(m.size()) != rows) {
      d.add("map for key (" + int_body(key) + ") has the wrong shape");
      continue;
    }
    bool shaped = true;
    for (const Vec& row : m)
      if (static_cast<int>(row.size()) != cols) shaped = false;
    if (!shaped) {
      d.add("map for key (" + int_body(key) + ") has the wrong shape");
      continue;
    }
    std::vector<int> caps = region_caps(*this, key);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        if (m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != 0 &&
            j > caps[static_cast<std::size_t>(i)])
          d.add("map for key (" + int_body(key) + ") is supported outside its region at (" +
                std::to_string(i) + "," + std::to_string(j) + ")");
  }
  return d;
}

FamilyCheck check_coherence(const CoherentFamily& fam, int n,
                            const CellSet& exceptional) {
  if (n < 1) throw DomainError("coherence arity must be positive");
  FamilyCheck rep;
  for (const Tuple& tuple :
       position_tuples(static_cast<int>(fam.indices.size()), n + 1)) {
    Mat sum(static_cast<std::size_t>(fam.rows),
            Vec(static_cast<std::size_t>(fam.cols), Int(0)));
    for (int i = 0; i <= n; ++i) {
      const Mat& face = family_map(fam, drop(tuple, i), "family");
      long long sign = (i % 2 == 0) ? 1 : -1;
      for (int r = 0; r < fam.rows; ++r)
        for (int j = 0; j < fam.cols; ++j)
          sum[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] +=
              sign * face[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
    }
    flag_cells(rep, tuple, sum, region_caps(fam, tuple), exceptional);
  }
  return rep;
}

FamilyCheck check_triviality_witness(const CoherentFamily& fam,
                                     const CoherentFamily& witness, int n,
                                     const CellSet& exceptional) {
  if (n < 1) throw DomainError("triviality arity must be positive");
  if (witness.rows != fam.rows || witness.cols != fam.cols)
    throw StructuralError("witness truncation does not match the family");
  FamilyCheck rep;
  for (const auto& [key, phi] : fam.maps) {
    Mat sum = family_map(fam, key, "family");
    for (int i = 0; i < n; ++i) {
      const Mat& psi = family_map(witness, drop(key, i), "witness");
      long long sign = (i % 2 == 0) ? -1 : 1;  // subtract the display
      for (int r = 0; r < fam.rows; ++r)
        for (int j = 0; j < fam.cols; ++j)
          sum[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] +=
              sign * psi[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
    }
    flag_cells(rep, key, sum, region_caps(fam, key), exceptional);
  }
  return rep;
}

}  // namespace limlab
