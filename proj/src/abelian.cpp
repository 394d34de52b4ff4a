#include "limlab/abelian.hpp"

#include <sstream>

namespace limlab {

FGAbelianGroup FGAbelianGroup::free_group(int rank) {
  FGAbelianGroup g;
  g.generators = rank;
  return g;
}

FGAbelianGroup FGAbelianGroup::cyclic(const Int& q) {
  FGAbelianGroup g;
  g.generators = 1;
  g.relations.push_back({q});
  return g;
}

FGAbelianGroup FGAbelianGroup::from_normal_form(int free_rank,
                                                const std::vector<Int>& torsion) {
  FGAbelianGroup g;
  g.generators = free_rank + static_cast<int>(torsion.size());
  for (std::size_t i = 0; i < torsion.size(); ++i) {
    Vec row(g.generators, 0);
    row[free_rank + i] = torsion[i];
    g.relations.push_back(std::move(row));
  }
  return g;
}

std::string GroupInvariants::to_string() const {
  std::ostringstream os;
  os << "Z^" << free_rank;
  for (const Int& t : torsion) os << " + Z/" << t;
  return os.str();
}

GroupInvariants invariant_factors(const FGAbelianGroup& g) {
  GroupInvariants out;
  if (g.relations.empty()) {
    out.free_rank = g.generators;
    return out;
  }
  SmithResult s = smith_normal_form(g.relations);
  out.free_rank = g.generators - s.rank;
  for (const Int& d : s.diagonal())
    if (d > 1) out.torsion.push_back(d);
  return out;
}

FGAbelianGroup direct_sum(const FGAbelianGroup& a, const FGAbelianGroup& b) {
  FGAbelianGroup g;
  g.generators = a.generators + b.generators;
  for (const Vec& r : a.relations) {
    Vec row = r;
    row.resize(g.generators, 0);
    g.relations.push_back(std::move(row));
  }
  for (const Vec& r : b.relations) {
    Vec row(a.generators, 0);
    row.insert(row.end(), r.begin(), r.end());
    g.relations.push_back(std::move(row));
  }
  return g;
}

GroupHom hom_identity(const FGAbelianGroup& g) {
  return GroupHom{mat_identity(g.generators)};
}

GroupHom hom_zero(const FGAbelianGroup& src, const FGAbelianGroup& dst) {
  return GroupHom{mat_zero(dst.generators, src.generators)};
}

GroupHom hom_compose(const GroupHom& outer, const GroupHom& inner) {
  return GroupHom{mat_mul(outer.matrix, inner.matrix)};
}

GroupHom hom_direct_sum(const GroupHom& a, const GroupHom& b) {
  int ra = rows(a.matrix), ca = cols(a.matrix);
  int rb = rows(b.matrix), cb = cols(b.matrix);
  Mat m = mat_zero(ra + rb, ca + cb);
  for (int i = 0; i < ra; ++i)
    for (int j = 0; j < ca; ++j) m[i][j] = a.matrix[i][j];
  for (int i = 0; i < rb; ++i)
    for (int j = 0; j < cb; ++j) m[ra + i][ca + j] = b.matrix[i][j];
  return GroupHom{std::move(m)};
}

Diagnostics check_hom(const FGAbelianGroup& src, const FGAbelianGroup& dst,
                      const GroupHom& h) {
  Diagnostics d;
  // a matrix with no rows cannot carry a column count, so a trivial target
  // only pins the row count
  if (rows(h.matrix) != dst.generators ||
      (dst.generators > 0 && cols(h.matrix) != src.generators)) {
    d.add("hom matrix shape does not match source/target generators");
    return d;
  }
  if (dst.generators == 0) return d;
  Mat dst_lattice = dst.relation_columns();
  for (std::size_t i = 0; i < src.relations.size(); ++i) {
    Vec image = mat_apply(h.matrix, src.relations[i]);
    if (!lattice_member(dst_lattice, image))
      d.add("relator " + std::to_string(i) +
            " does not map into the target relation lattice");
  }
  return d;
}

bool is_zero_element(const FGAbelianGroup& g, const Vec& v) {
  return lattice_member(g.relation_columns(), v);
}

bool equal_elements(const FGAbelianGroup& g, const Vec& a, const Vec& b) {
  Vec diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  return is_zero_element(g, diff);
}

Vec canonical_reduce(const FGAbelianGroup& g, const Vec& v) {
  if (g.relations.empty()) return v;
  return lattice_reduce(hnf_columns(g.relation_columns()), v);
}

MapDecision decide_presented_map(int src_gens, int dst_gens, const Mat& M,
                                 const Mat& src_rel_cols,
                                 const Mat& dst_rel_cols) {
  if (dst_gens > 0 && (rows(M) != dst_gens || cols(M) != src_gens))
    throw DomainError("map matrix shape mismatch");
  auto lattice_is_everything = [](int gens, const Mat& rel_cols) {
    if (gens == 0) return true;
    return hnf_columns(rel_cols) == mat_identity(gens);
  };

  MapDecision d;
  if (dst_gens == 0) {
    d.well_defined = true;
    d.surjective = true;
    d.injective = lattice_is_everything(src_gens, src_rel_cols);
    return d;
  }
  if (src_gens == 0) {
    d.well_defined = true;
    d.injective = true;
    d.surjective = lattice_is_everything(dst_gens, dst_rel_cols);
    return d;
  }

  d.well_defined = true;
  for (int j = 0; j < cols(src_rel_cols); ++j) {
    Vec c(src_gens);
    for (int i = 0; i < src_gens; ++i) c[i] = src_rel_cols[i][j];
    if (!lattice_member(dst_rel_cols, mat_apply(M, c))) d.well_defined = false;
  }

  Mat span = M;
  if (cols(dst_rel_cols) > 0) span = mat_hconcat(span, dst_rel_cols);
  d.surjective = hnf_columns(span) == mat_identity(dst_gens);

  // preimage of the target relation lattice, as the x-projection of
  // ker [M | -dst_rel_cols]
  Mat stacked = M;
  if (cols(dst_rel_cols) > 0) {
    Mat neg = dst_rel_cols;
    for (auto& row : neg)
      for (auto& e : row) e = -e;
    stacked = mat_hconcat(stacked, neg);
  }
  Mat ker = kernel_basis(stacked);
  Mat proj(src_gens, Vec(cols(ker), 0));
  for (int i = 0; i < src_gens; ++i)
    for (int j = 0; j < cols(ker); ++j) proj[i][j] = ker[i][j];
  Mat pre = hnf_columns(proj);
  d.injective = true;
  for (int j = 0; j < cols(pre); ++j) {
    Vec c(src_gens);
    for (int i = 0; i < src_gens; ++i) c[i] = pre[i][j];
    if (!lattice_member(src_rel_cols, c)) d.injective = false;
  }
  return d;
}

}  // namespace limlab
