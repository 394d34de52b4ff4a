#pragma once
#include <string>
#include <vector>

#include "limlab/order.hpp"  // Diagnostics
#include "limlab/snf.hpp"

namespace limlab {

// Z^generators modulo the row space of `relations`.  Elements are coordinate
// vectors; equality is membership of the difference in the relation lattice.
struct FGAbelianGroup {
  int generators = 0;
  Mat relations;  // each row has `generators` entries

  static FGAbelianGroup free_group(int rank);
  static FGAbelianGroup cyclic(const Int& q);
  static FGAbelianGroup from_normal_form(int free_rank,
                                         const std::vector<Int>& torsion);

  // columns generate the relation lattice in Z^generators
  Mat relation_columns() const { return mat_transpose(relations); }

  bool operator==(const FGAbelianGroup&) const = default;
};

struct GroupInvariants {
  std::vector<Int> torsion;  // invariant factors > 1, divisibility order
  int free_rank = 0;
  bool operator==(const GroupInvariants&) const = default;
  std::string to_string() const;
};

GroupInvariants invariant_factors(const FGAbelianGroup& g);

FGAbelianGroup direct_sum(const FGAbelianGroup& a, const FGAbelianGroup& b);

// matrix has target.generators rows and source.generators columns; an element
// v of the source maps to matrix * v
struct GroupHom {
  Mat matrix;
};

GroupHom hom_identity(const FGAbelianGroup& g);
GroupHom hom_zero(const FGAbelianGroup& src, const FGAbelianGroup& dst);
GroupHom hom_compose(const GroupHom& outer, const GroupHom& inner);
GroupHom hom_direct_sum(const GroupHom& a, const GroupHom& b);

// well-definedness: every source relator lands in the target relation lattice
Diagnostics check_hom(const FGAbelianGroup& src, const FGAbelianGroup& dst,
                      const GroupHom& h);

bool is_zero_element(const FGAbelianGroup& g, const Vec& v);
bool equal_elements(const FGAbelianGroup& g, const Vec& a, const Vec& b);

// canonical coset representative modulo the relation lattice
Vec canonical_reduce(const FGAbelianGroup& g, const Vec& v);

// Exact decisions for the map Z^src_gens/L(src_rel_cols) ->
// Z^dst_gens/L(dst_rel_cols) given by M (dst_gens x src_gens); relation
// arguments are column generating sets.
struct MapDecision {
  bool well_defined = false;
  bool surjective = false;
  bool injective = false;
  bool iso() const { return well_defined && surjective && injective; }
};
MapDecision decide_presented_map(int src_gens, int dst_gens, const Mat& M,
                                 const Mat& src_rel_cols,
                                 const Mat& dst_rel_cols);

}  // namespace limlab
