#include "limlab/gen.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace limlab {

namespace {

// generator orders of a diagonal presentation: 0 for free, q for a row q*e_i;
// nullopt when some relation touches several generators
std::optional<std::vector<Int>> diagonal_orders(const FGAbelianGroup& g) {
  std::vector<Int> ord(g.generators, 0);
  for (const auto& row : g.relations) {
    int at = -1;
    for (int j = 0; j < g.generators; ++j)
      if (row[j] != 0) {
        if (at >= 0) return std::nullopt;
        at = j;
      }
    if (at < 0) continue;
    Int q = row[at] < 0 ? Int(-row[at]) : Int(row[at]);
    ord[at] = ord[at] == 0 ? q : boost::multiprecision::gcd(ord[at], q);
  }
  return ord;
}

Int sample_entry(Rng& rng, const Int& src_order, const Int& dst_order) {
  if (dst_order == 0) {
    // free target coordinate: torsion sources must die
    if (src_order != 0) return 0;
    return Int(static_cast<long long>(rng.below(7)) - 3);
  }
  Int step = src_order == 0
                 ? Int(1)
                 : dst_order / boost::multiprecision::gcd(dst_order, src_order);
  Int count = dst_order / step;
  return step * Int(rng.below(static_cast<std::uint64_t>(count)));
}

FGAbelianGroup group_from_moduli(Rng& rng, int max_rank,
                                 const std::vector<int>& moduli,
                                 bool allow_free) {
  int rank = static_cast<int>(rng.below(max_rank + 1));
  FGAbelianGroup g;
  g.generators = rank;
  for (int i = 0; i < rank; ++i) {
    bool free = allow_free && rng.below(2) == 0;
    if (free) continue;
    Vec row(rank, 0);
    row[i] = moduli[rng.below(moduli.size())];
    g.relations.push_back(std::move(row));
  }
  return g;
}

template <class MakeGroup>
InverseSystem tree_system_impl(const std::vector<int>& parent, Rng& rng,
                               MakeGroup make_group) {
  int n = static_cast<int>(parent.size());
  if (n < 1 || parent[0] != -1)
    throw PreconditionError("parent array must root the tree at 0");
  std::vector<std::pair<int, int>> pairs;
  for (int i = 1; i < n; ++i) {
    if (parent[i] < 0 || parent[i] >= i)
      throw PreconditionError("parent array is not topologically sorted");
    pairs.push_back({parent[i], i});
  }
  InverseSystem S;
  S.index = QuasiOrder(n, pairs);
  for (int i = 0; i < n; ++i) S.terms.push_back(make_group(rng));
  std::vector<GroupHom> edge(n);
  for (int i = 1; i < n; ++i)
    edge[i] = random_hom(rng, S.terms[i], S.terms[parent[i]]);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      if (!S.index.le(x, y)) continue;
      GroupHom cur = hom_identity(S.terms[y]);
      for (int node = y; node != x; node = parent[node])
        cur.matrix =
            mat_mul_dims(edge[node].matrix, S.terms[parent[node]].generators,
                         S.terms[node].generators, cur.matrix,
                         S.terms[y].generators);
      S.bonds[{x, y}] = std::move(cur);
    }
  return S;
}

}  // namespace

QuasiOrder random_quasi_order(int points, std::uint64_t seed) {
  if (points < 1) throw PreconditionError("order needs at least one point");
  Rng rng(seed);
  std::vector<Elem> relabel(points);
  for (int i = 0; i < points; ++i) relabel[i] = i;
  rng.shuffle(relabel);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < points; ++i)
    for (int j = i + 1; j < points; ++j) {
      std::uint64_t roll = rng.below(10);
      if (roll < 3) pairs.push_back({relabel[i], relabel[j]});
      if (roll == 9) {
        pairs.push_back({relabel[i], relabel[j]});
        pairs.push_back({relabel[j], relabel[i]});
      }
    }
  return QuasiOrder(points, pairs);
}

FGAbelianGroup random_group(Rng& rng, int max_rank) {
  return group_from_moduli(rng, max_rank, {2, 3, 4, 6, 8, 9}, true);
}

FGAbelianGroup random_finite_group(Rng& rng, int max_rank) {
  return group_from_moduli(rng, max_rank, {2, 3}, false);
}

GroupHom random_hom(Rng& rng, const FGAbelianGroup& src,
                    const FGAbelianGroup& dst) {
  GroupHom h;
  h.matrix = mat_zero(dst.generators, src.generators);
  auto so = diagonal_orders(src);
  auto do_ = diagonal_orders(dst);
  if (so && do_) {
    for (int i = 0; i < dst.generators; ++i)
      for (int j = 0; j < src.generators; ++j)
        h.matrix[i][j] = sample_entry(rng, (*so)[j], (*do_)[i]);
    if (check_hom(src, dst, h).ok()) return h;
  }
  h.matrix = mat_zero(dst.generators, src.generators);
  return h;
}

std::vector<int> random_tree(int points, Rng& rng) {
  if (points < 1) throw PreconditionError("tree needs at least one point");
  std::vector<int> parent(points, -1);
  for (int i = 1; i < points; ++i)
    parent[i] = static_cast<int>(rng.below(i));
  return parent;
}

InverseSystem random_tree_system_over(const std::vector<int>& parent,
                                      int max_rank, std::uint64_t seed) {
  Rng rng(seed);
  return tree_system_impl(
      parent, rng, [&](Rng& r) { return random_group(r, max_rank); });
}

InverseSystem random_tree_system(int points, int max_rank,
                                 std::uint64_t seed) {
  Rng shape(seed ^ 0x9e3779b97f4a7c15ULL);
  return random_tree_system_over(random_tree(points, shape), max_rank, seed);
}

InverseSystem random_finite_tree_system(int points, int max_rank,
                                        std::uint64_t seed) {
  Rng shape(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<int> parent = random_tree(points, shape);
  Rng rng(seed);
  return tree_system_impl(
      parent, rng, [&](Rng& r) { return random_finite_group(r, max_rank); });
}

TruncatedOmegaSystem random_tower_system(int width, int height, int max_rank,
                                         std::uint64_t seed) {
  if (width < 1 || height < 0)
    throw PreconditionError("tower block needs positive width");
  Rng rng(seed);
  TruncatedOmegaSystem T;
  T.width = width;
  T.height = height;
  T.grid.resize(width);
  T.step.resize(width);
  for (int i = 0; i < width; ++i) {
    for (int j = 0; j <= height; ++j)
      T.grid[i].push_back(random_group(rng, max_rank));
    for (int j = 0; j < height; ++j)
      T.step[i].push_back(random_hom(rng, T.grid[i][j + 1], T.grid[i][j]));
  }
  return T;
}

}  // namespace limlab
