#pragma once
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "limlab/abelian.hpp"
#include "limlab/order.hpp"

namespace limlab {

// Inverse system over a finite index with all binary meets: one group per
// index point and a bond G_y -> G_x for every x <= y, functorial up to the
// target's relations.
struct InverseSystem {
  QuasiOrder index;
  std::vector<FGAbelianGroup> terms;
  std::map<std::pair<Elem, Elem>, GroupHom> bonds;  // key (x, y) with x <= y

  const GroupHom& bond(Elem x, Elem y) const;  // DomainError when x !<= y
  Diagnostics validate() const;
};

// meet of all coordinates; nullopt when some pair has none
std::optional<Elem> tuple_meet(const QuasiOrder& P, const Tuple& t);

// One graded piece of the alternating complex.  Blocks are indexed by the
// strictly increasing (degree+1)-subsets of the index, taken in the linear
// extension; the block at p lives in the term at the meet of p, so a missing
// meet is a structural error.
struct CochainLevel {
  int degree = 0;
  std::vector<Tuple> tuples;  // each rank-sorted; list in lexicographic order
  std::vector<Elem> meets;
  std::vector<int> offsets;  // first generator of each block
  int total_generators = 0;
  Mat relation_cols;  // block diagonal; columns generate the relations

  int block_of(const Tuple& t) const;  // DomainError for unknown keys
};

CochainLevel cochain_level(const InverseSystem& S, int degree);

// matrix of d: C^degree -> C^(degree+1); the alternating sum of the
// one-deletions of each block key, pushed down to the finer meet
Mat coboundary_matrix(const InverseSystem& S, int degree);

// Sparse element-level cochain; keys are rank-sorted tuples of distinct
// index points, missing keys read as zero.
struct AlternatingCochain {
  int degree = 0;
  std::map<Tuple, Vec> values;
};

// value at a key, materializing zeros at the right dimension
Vec cochain_value(const InverseSystem& S, const AlternatingCochain& phi,
                  const Tuple& key);
AlternatingCochain coboundary(const InverseSystem& S,
                              const AlternatingCochain& phi);
// a + scale * b, blockwise
AlternatingCochain cochain_add(const InverseSystem& S, AlternatingCochain a,
                               const AlternatingCochain& b,
                               const Int& scale = 1);
// zero modulo the relations of every block's term
bool cochain_is_zero(const InverseSystem& S, const AlternatingCochain& phi);

// lim^degree presented as the cocycle lattice modulo boundaries and relations
struct LimPresentation {
  Mat cocycle_basis;  // columns: Hermite basis of the cocycle lattice
  Mat quotient;       // columns: boundaries and relations in that basis
};
LimPresentation lim_presentation(const InverseSystem& S, int degree);
GroupInvariants lim_n(const InverseSystem& S, int degree);

// termwise direct sum over a shared index
InverseSystem direct_sum_system(const InverseSystem& A, const InverseSystem& B);

struct AdditivityReport {
  GroupInvariants left;   // lim(A) (+) lim(B)
  GroupInvariants right;  // lim(A (+) B)
  bool natural_map_iso = false;
};
// the inclusion-induced map lim(A) (+) lim(B) -> lim(A (+) B), decided exactly
AdditivityReport additivity_comparison(const InverseSystem& A,
                                       const InverseSystem& B, int degree);

// Finite block of towers: grid[i][j] holds tower i at stage j, with one
// downward step per level.  Induces an inverse system over the pointwise
// ordered functions {0..width-1} -> {0..height}.
struct TruncatedOmegaSystem {
  int width = 0;
  int height = 0;
  std::vector<std::vector<FGAbelianGroup>> grid;  // [width][height+1]
  std::vector<std::vector<GroupHom>> step;        // [width][height], j+1 -> j

  Diagnostics validate() const;
  int index_size() const;  // (height+1)^width
  std::vector<int> decode(int point) const;  // digits, tower 0 most significant
  int encode(const std::vector<int>& digits) const;
  FGAbelianGroup group_at(const std::vector<int>& digits) const;
  // composite of tower steps, pointwise, from hi down to lo
  GroupHom bond_between(const std::vector<int>& lo,
                        const std::vector<int>& hi) const;
  InverseSystem to_inverse_system() const;
};

}  // namespace limlab
