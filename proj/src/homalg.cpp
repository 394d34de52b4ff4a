#include "limlab/homalg.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace limlab {

namespace {

GroupHom sum_hom_dims(const GroupHom& ha, int ra, int ca, const GroupHom& hb,
                      int rb, int cb) {
  GroupHom h;
  h.matrix = mat_zero(ra + rb, ca + cb);
  for (int i = 0; i < ra; ++i)
    for (int j = 0; j < ca; ++j) h.matrix[i][j] = ha.matrix[i][j];
  for (int i = 0; i < rb; ++i)
    for (int j = 0; j < cb; ++j) h.matrix[ra + i][ca + j] = hb.matrix[i][j];
  return h;
}

std::vector<Tuple> rank_sorted_subsets(const QuasiOrder& P, int k) {
  std::vector<Tuple> out;
  int n = P.size();
  if (k < 1 || k > n) return out;
  std::vector<int> pos(k);
  for (int i = 0; i < k; ++i) pos[i] = i;
  while (true) {
    Tuple t(k);
    for (int i = 0; i < k; ++i) t[i] = P.linext[pos[i]];
    out.push_back(std::move(t));
    int i = k - 1;
    while (i >= 0 && pos[i] == n - k + i) --i;
    if (i < 0) break;
    ++pos[i];
    for (int j = i + 1; j < k; ++j) pos[j] = pos[j - 1] + 1;
  }
  return out;
}

void require_rank_sorted(const QuasiOrder& P, const Tuple& key) {
  for (std::size_t i = 0; i + 1 < key.size(); ++i)
    if (P.rank(key[i]) >= P.rank(key[i + 1]))
      throw DomainError("cochain keys are rank-sorted and repeat-free");
  for (Elem e : key)
    if (e < 0 || e >= P.size()) throw DomainError("cochain key out of range");
}

Elem meet_or_throw(const QuasiOrder& P, const Tuple& t) {
  auto m = tuple_meet(P, t);
  if (!m)
    throw StructuralError("no meet under " + tuple_to_string(P, t));
  return *m;
}

}  // namespace

const GroupHom& InverseSystem::bond(Elem x, Elem y) const {
  if (!index.le(x, y)) throw DomainError("bond requested against the order");
  auto it = bonds.find({x, y});
  if (it == bonds.end())
    throw DomainError("bond missing for " + index.name(x) + " <= " +
                      index.name(y));
  return it->second;
}

std::optional<Elem> tuple_meet(const QuasiOrder& P, const Tuple& t) {
  if (t.empty()) return std::nullopt;
  Elem acc = t[0];
  for (std::size_t i = 1; i < t.size(); ++i) {
    auto m = P.meet(acc, t[i]);
    if (!m) return std::nullopt;
    acc = *m;
  }
  return acc;
}

Diagnostics InverseSystem::validate() const {
  Diagnostics d;
  for (const auto& s : index.validate().issues) d.add(s);
  int n = index.size();
  if (static_cast<int>(terms.size()) != n) {
    d.add("term count does not match the index");
    return d;
  }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (!index.meet(a, b))
        d.add("no meet for " + index.name(a) + ", " + index.name(b));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (!index.le(x, y)) {
        if (bonds.count({x, y}))
          d.add("bond on the incomparable pair " + index.name(x) + ", " +
                index.name(y));
        continue;
      }
      auto it = bonds.find({x, y});
      if (it == bonds.end()) {
        d.add("bond missing for " + index.name(x) + " <= " + index.name(y));
        continue;
      }
      const Mat& m = it->second.matrix;
      if (rows(m) != terms[x].generators ||
          (terms[x].generators > 0 && cols(m) != terms[y].generators)) {
        d.add("bond shape mismatch at " + index.name(x) + " <= " +
              index.name(y));
        continue;
      }
      for (const auto& s : check_hom(terms[y], terms[x], it->second).issues)
        d.add("bond " + index.name(x) + " <= " + index.name(y) + ": " + s);
    }
  if (!d.ok()) return d;

  for (int x = 0; x < n; ++x) {
    int g = terms[x].generators;
    const Mat& id = bonds.at({x, x}).matrix;
    Mat rel = terms[x].relation_columns();
    for (int j = 0; j < g; ++j) {
      Vec c(g, 0);
      for (int i = 0; i < g; ++i) c[i] = id[i][j];
      c[j] -= 1;
      if (!lattice_member(rel, c)) {
        d.add("bond at " + index.name(x) + " is not the identity");
        break;
      }
    }
  }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (!index.le(x, y)) continue;
      for (int z = 0; z < n; ++z) {
        if (!index.le(y, z)) continue;
        Mat comp = mat_mul_dims(bonds.at({x, y}).matrix, terms[x].generators,
                            terms[y].generators, bonds.at({y, z}).matrix,
                            terms[z].generators);
        const Mat& direct = bonds.at({x, z}).matrix;
        Mat rel = terms[x].relation_columns();
        for (int j = 0; j < terms[z].generators; ++j) {
          Vec c(terms[x].generators, 0);
          for (int i = 0; i < terms[x].generators; ++i)
            c[i] = comp[i][j] - direct[i][j];
          if (!lattice_member(rel, c)) {
            d.add("bonds do not compose over " + index.name(x) + " <= " +
                  index.name(y) + " <= " + index.name(z));
            break;
          }
        }
      }
    }
  return d;
}

int CochainLevel::block_of(const Tuple& t) const {
  auto it = std::lower_bound(tuples.begin(), tuples.end(), t);
  if (it == tuples.end() || *it != t)
    throw DomainError("tuple is not a block of this level");
  return static_cast<int>(it - tuples.begin());
}

CochainLevel cochain_level(const InverseSystem& S, int degree) {
  if (degree < 0) throw DomainError("cochain degree must be nonnegative");
  CochainLevel L;
  L.degree = degree;
  // rank_sorted_subsets yields tuples ordered by rank positions, which is
  // also plain lexicographic order only when ranks equal element ids; sort
  // to make block_of's binary search valid either way
  L.tuples = rank_sorted_subsets(S.index, degree + 1);
  std::sort(L.tuples.begin(), L.tuples.end());
  int rel_count = 0;
  for (const Tuple& t : L.tuples) {
    Elem m = meet_or_throw(S.index, t);
    L.meets.push_back(m);
    L.offsets.push_back(L.total_generators);
    L.total_generators += S.terms[m].generators;
    rel_count += rows(S.terms[m].relations);
  }
  L.relation_cols = mat_zero(L.total_generators, rel_count);
  int at = 0;
  for (std::size_t b = 0; b < L.tuples.size(); ++b) {
    const FGAbelianGroup& g = S.terms[L.meets[b]];
    for (int r = 0; r < rows(g.relations); ++r) {
      for (int i = 0; i < g.generators; ++i)
        L.relation_cols[L.offsets[b] + i][at] = g.relations[r][i];
      ++at;
    }
  }
  return L;
}

Mat coboundary_matrix(const InverseSystem& S, int degree) {
  CochainLevel from = cochain_level(S, degree);
  CochainLevel to = cochain_level(S, degree + 1);
  Mat D = mat_zero(to.total_generators, from.total_generators);
  for (std::size_t b = 0; b < to.tuples.size(); ++b) {
    const Tuple& q = to.tuples[b];
    int gr = S.terms[to.meets[b]].generators;
    for (int i = 0; i <= degree + 1; ++i) {
      Tuple sub = q;
      sub.erase(sub.begin() + i);
      int j = from.block_of(sub);
      int gc = S.terms[from.meets[j]].generators;
      const Mat& B = S.bond(to.meets[b], from.meets[j]).matrix;
      int sign = (i % 2 == 0) ? 1 : -1;
      for (int r = 0; r < gr; ++r)
        for (int c = 0; c < gc; ++c)
          D[to.offsets[b] + r][from.offsets[j] + c] += sign * B[r][c];
    }
  }
  return D;
}

Vec cochain_value(const InverseSystem& S, const AlternatingCochain& phi,
                  const Tuple& key) {
  require_rank_sorted(S.index, key);
  if (static_cast<int>(key.size()) != phi.degree + 1)
    throw DomainError("cochain key has the wrong length");
  Elem m = meet_or_throw(S.index, key);
  auto it = phi.values.find(key);
  if (it == phi.values.end())
    return Vec(S.terms[m].generators, 0);
  if (static_cast<int>(it->second.size()) != S.terms[m].generators)
    throw StructuralError("cochain value has the wrong dimension at " +
                          tuple_to_string(S.index, key));
  return it->second;
}

AlternatingCochain coboundary(const InverseSystem& S,
                              const AlternatingCochain& phi) {
  AlternatingCochain out;
  out.degree = phi.degree + 1;
  for (const Tuple& q : rank_sorted_subsets(S.index, phi.degree + 2)) {
    Elem mq = meet_or_throw(S.index, q);
    int g = S.terms[mq].generators;
    Vec acc(g, 0);
    for (int i = 0; i <= phi.degree + 1; ++i) {
      Tuple sub = q;
      sub.erase(sub.begin() + i);
      Vec v = cochain_value(S, phi, sub);
      Elem ms = meet_or_throw(S.index, sub);
      const Mat& B = S.bond(mq, ms).matrix;
      int sign = (i % 2 == 0) ? 1 : -1;
      for (int r = 0; r < g; ++r)
        for (int c = 0; c < S.terms[ms].generators; ++c)
          acc[r] += sign * B[r][c] * v[c];
    }
    bool nonzero = false;
    for (const Int& x : acc)
      if (x != 0) nonzero = true;
    if (nonzero) out.values[q] = std::move(acc);
  }
  return out;
}

AlternatingCochain cochain_add(const InverseSystem& S, AlternatingCochain a,
                               const AlternatingCochain& b, const Int& scale) {
  if (a.degree != b.degree) throw DomainError("cochain degrees differ");
  for (const auto& [key, v] : b.values) {
    Vec cur = cochain_value(S, a, key);
    for (std::size_t i = 0; i < v.size(); ++i) cur[i] += scale * v[i];
    bool nonzero = false;
    for (const Int& x : cur)
      if (x != 0) nonzero = true;
    if (nonzero)
      a.values[key] = std::move(cur);
    else
      a.values.erase(key);
  }
  return a;
}

bool cochain_is_zero(const InverseSystem& S, const AlternatingCochain& phi) {
  for (const auto& [key, v] : phi.values) {
    require_rank_sorted(S.index, key);
    Elem m = meet_or_throw(S.index, key);
    if (!is_zero_element(S.terms[m], v)) return false;
  }
  return true;
}

LimPresentation lim_presentation(const InverseSystem& S, int degree) {
  CochainLevel Cn = cochain_level(S, degree);
  int a = Cn.total_generators;
  LimPresentation P;
  if (a == 0) return P;

  CochainLevel Cup = cochain_level(S, degree + 1);
  Mat K;
  if (Cup.total_generators == 0) {
    K = mat_identity(a);
  } else {
    Mat stacked = coboundary_matrix(S, degree);
    if (cols(Cup.relation_cols) > 0) {
      Mat neg = Cup.relation_cols;
      for (auto& row : neg)
        for (auto& e : row) e = -e;
      stacked = mat_hconcat(stacked, neg);
    }
    Mat ker = kernel_basis(stacked);
    Mat proj(a, Vec(cols(ker), 0));
    for (int i = 0; i < a; ++i)
      for (int j = 0; j < cols(ker); ++j) proj[i][j] = ker[i][j];
    K = hnf_columns(proj);
  }
  P.cocycle_basis = K;
  int k = cols(K);
  if (k == 0) return P;

  std::vector<Vec> qcols;
  auto push_through = [&](const Vec& v) {
    auto x = solve(K, v);
    if (!x)
      throw StructuralError("a boundary column leaves the cocycle lattice");
    qcols.push_back(*x);
  };
  if (degree > 0) {
    Mat Dprev = coboundary_matrix(S, degree - 1);
    for (int j = 0; j < cols(Dprev); ++j) {
      Vec c(a);
      for (int i = 0; i < a; ++i) c[i] = Dprev[i][j];
      push_through(c);
    }
  }
  for (int j = 0; j < cols(Cn.relation_cols); ++j) {
    Vec c(a);
    for (int i = 0; i < a; ++i) c[i] = Cn.relation_cols[i][j];
    push_through(c);
  }
  P.quotient = mat_zero(k, static_cast<int>(qcols.size()));
  for (std::size_t j = 0; j < qcols.size(); ++j)
    for (int i = 0; i < k; ++i) P.quotient[i][j] = qcols[j][i];
  return P;
}

GroupInvariants lim_n(const InverseSystem& S, int degree) {
  LimPresentation P = lim_presentation(S, degree);
  int k = cols(P.cocycle_basis);
  if (k == 0) return GroupInvariants{};
  FGAbelianGroup g;
  g.generators = k;
  g.relations = mat_transpose(P.quotient);
  return invariant_factors(g);
}

InverseSystem direct_sum_system(const InverseSystem& A,
                                const InverseSystem& B) {
  if (A.index.leq_ != B.index.leq_)
    throw PreconditionError("systems live over different indexes");
  InverseSystem S;
  S.index = A.index;
  for (int i = 0; i < A.index.size(); ++i)
    S.terms.push_back(direct_sum(A.terms[i], B.terms[i]));
  for (const auto& [key, ha] : A.bonds) {
    const GroupHom& hb = B.bonds.at(key);
    S.bonds[key] = sum_hom_dims(ha, A.terms[key.first].generators,
                                A.terms[key.second].generators, hb,
                                B.terms[key.first].generators,
                                B.terms[key.second].generators);
  }
  return S;
}

AdditivityReport additivity_comparison(const InverseSystem& A,
                                       const InverseSystem& B, int degree) {
  if (A.index.leq_ != B.index.leq_)
    throw PreconditionError("systems live over different indexes");
  InverseSystem S = direct_sum_system(A, B);
  LimPresentation pa = lim_presentation(A, degree);
  LimPresentation pb = lim_presentation(B, degree);
  LimPresentation ps = lim_presentation(S, degree);
  int ka = cols(pa.cocycle_basis);
  int kb = cols(pb.cocycle_basis);
  int ks = cols(ps.cocycle_basis);

  auto invariants_of = [](const LimPresentation& p) {
    int k = cols(p.cocycle_basis);
    if (k == 0) return GroupInvariants{};
    FGAbelianGroup g;
    g.generators = k;
    g.relations = mat_transpose(p.quotient);
    return invariant_factors(g);
  };
  AdditivityReport rep;
  GroupInvariants ia = invariants_of(pa), ib = invariants_of(pb);
  rep.left = invariant_factors(
      direct_sum(FGAbelianGroup::from_normal_form(ia.free_rank, ia.torsion),
                 FGAbelianGroup::from_normal_form(ib.free_rank, ib.torsion)));
  rep.right = invariants_of(ps);

  CochainLevel la = cochain_level(A, degree);
  CochainLevel lb = cochain_level(B, degree);
  CochainLevel ls = cochain_level(S, degree);

  // coordinates of an embedded A- or B-cocycle inside C^degree(A + B)
  auto embed = [&](const Vec& v, bool from_a) {
    Vec w(ls.total_generators, 0);
    for (std::size_t b = 0; b < ls.tuples.size(); ++b) {
      int gens_a = A.terms[la.meets[b]].generators;
      int gens_b = B.terms[lb.meets[b]].generators;
      if (from_a)
        for (int i = 0; i < gens_a; ++i)
          w[ls.offsets[b] + i] = v[la.offsets[b] + i];
      else
        for (int i = 0; i < gens_b; ++i)
          w[ls.offsets[b] + gens_a + i] = v[lb.offsets[b] + i];
    }
    return w;
  };

  Mat M = mat_zero(ks, ka + kb);
  auto fill_column = [&](const Mat& basis, int col, bool from_a, int out_col) {
    Vec v(rows(basis));
    for (int i = 0; i < rows(basis); ++i) v[i] = basis[i][col];
    Vec w = embed(v, from_a);
    if (ks == 0) {
      for (const Int& x : w)
        if (x != 0)
          throw StructuralError("embedded cocycle misses the cocycle lattice");
      return;
    }
    auto x = solve(ps.cocycle_basis, w);
    if (!x)
      throw StructuralError("embedded cocycle misses the cocycle lattice");
    for (int i = 0; i < ks; ++i) M[i][out_col] = (*x)[i];
  };
  for (int j = 0; j < ka; ++j) fill_column(pa.cocycle_basis, j, true, j);
  for (int j = 0; j < kb; ++j) fill_column(pb.cocycle_basis, j, false, ka + j);

  // relations of the source: block diagonal of the two quotients
  int qa = cols(pa.quotient), qb = cols(pb.quotient);
  Mat src_rel = mat_zero(ka + kb, qa + qb);
  for (int i = 0; i < ka; ++i)
    for (int j = 0; j < qa; ++j) src_rel[i][j] = pa.quotient[i][j];
  for (int i = 0; i < kb; ++i)
    for (int j = 0; j < qb; ++j) src_rel[ka + i][qa + j] = pb.quotient[i][j];

  rep.natural_map_iso =
      decide_presented_map(ka + kb, ks, M, src_rel, ps.quotient).iso();
  return rep;
}

Diagnostics TruncatedOmegaSystem::validate() const {
  Diagnostics d;
  if (width < 1) d.add("width must be positive");
  if (height < 0) d.add("height must be nonnegative");
  if (static_cast<int>(grid.size()) != width) d.add("grid width mismatch");
  if (static_cast<int>(step.size()) != width) d.add("step width mismatch");
  if (!d.ok()) return d;
  for (int i = 0; i < width; ++i) {
    if (static_cast<int>(grid[i].size()) != height + 1)
      d.add("tower " + std::to_string(i) + " has the wrong number of stages");
    if (static_cast<int>(step[i].size()) != height)
      d.add("tower " + std::to_string(i) + " has the wrong number of steps");
  }
  if (!d.ok()) return d;
  for (int i = 0; i < width; ++i)
    for (int j = 0; j < height; ++j) {
      const Mat& m = step[i][j].matrix;
      if (rows(m) != grid[i][j].generators ||
          (grid[i][j].generators > 0 && cols(m) != grid[i][j + 1].generators)) {
        d.add("step shape mismatch in tower " + std::to_string(i) +
              " at stage " + std::to_string(j));
        continue;
      }
      for (const auto& s : check_hom(grid[i][j + 1], grid[i][j], step[i][j]).issues)
        d.add("tower " + std::to_string(i) + " stage " + std::to_string(j) +
              ": " + s);
    }
  return d;
}

int TruncatedOmegaSystem::index_size() const {
  int n = 1;
  for (int i = 0; i < width; ++i) n *= height + 1;
  return n;
}

std::vector<int> TruncatedOmegaSystem::decode(int point) const {
  std::vector<int> digits(width);
  for (int i = width - 1; i >= 0; --i) {
    digits[i] = point % (height + 1);
    point /= height + 1;
  }
  return digits;
}

int TruncatedOmegaSystem::encode(const std::vector<int>& digits) const {
  if (static_cast<int>(digits.size()) != width)
    throw DomainError("digit count does not match the width");
  int p = 0;
  for (int i = 0; i < width; ++i) {
    if (digits[i] < 0 || digits[i] > height)
      throw DomainError("digit outside the height range");
    p = p * (height + 1) + digits[i];
  }
  return p;
}

FGAbelianGroup TruncatedOmegaSystem::group_at(
    const std::vector<int>& digits) const {
  FGAbelianGroup g = grid[0][digits[0]];
  for (int i = 1; i < width; ++i) g = direct_sum(g, grid[i][digits[i]]);
  return g;
}

GroupHom TruncatedOmegaSystem::bond_between(const std::vector<int>& lo,
                                            const std::vector<int>& hi) const {
  for (int i = 0; i < width; ++i)
    if (lo[i] > hi[i]) throw DomainError("bond endpoints are not ordered");
  GroupHom total;
  int tr = 0, tc = 0;
  for (int i = 0; i < width; ++i) {
    GroupHom cur = hom_identity(grid[i][hi[i]]);
    int cur_rows = grid[i][hi[i]].generators;
    for (int j = hi[i] - 1; j >= lo[i]; --j) {
      Mat m = mat_mul_dims(step[i][j].matrix, grid[i][j].generators,
                       grid[i][j + 1].generators, cur.matrix,
                       grid[i][hi[i]].generators);
      cur.matrix = std::move(m);
      cur_rows = grid[i][j].generators;
    }
    if (i == 0) {
      total = cur;
      tr = cur_rows;
      tc = grid[i][hi[i]].generators;
    } else {
      total = sum_hom_dims(total, tr, tc, cur, cur_rows,
                           grid[i][hi[i]].generators);
      tr += cur_rows;
      tc += grid[i][hi[i]].generators;
    }
  }
  return total;
}

InverseSystem TruncatedOmegaSystem::to_inverse_system() const {
  Diagnostics d = validate();
  if (!d.ok()) throw PreconditionError(d.joined());
  int n = index_size();
  if (n > 4096) throw PreconditionError("index too large to materialize");
  std::vector<std::vector<int>> digit(n);
  for (int p = 0; p < n; ++p) digit[p] = decode(p);
  auto pointwise_le = [&](int a, int b) {
    for (int i = 0; i < width; ++i)
      if (digit[a][i] > digit[b][i]) return false;
    return true;
  };
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b && pointwise_le(a, b)) pairs.push_back({a, b});
  InverseSystem S;
  S.index = QuasiOrder(n, pairs);
  for (int p = 0; p < n; ++p) {
    std::ostringstream os;
    for (int i = 0; i < width; ++i) os << digit[p][i];
    S.index.names[p] = os.str();
  }
  for (int p = 0; p < n; ++p) S.terms.push_back(group_at(digit[p]));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (pointwise_le(a, b)) S.bonds[{a, b}] = bond_between(digit[a], digit[b]);
  return S;
}

}  // namespace limlab
