#pragma once
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "limlab/formal.hpp"
#include "limlab/homalg.hpp"

namespace limlab {

// A cocycle over a block of truncated towers, together with the cutoff
// below which evaluation reads every tower as zero.
struct EvaluationContext {
  TruncatedOmegaSystem system;
  AlternatingCochain cocycle;  // must pass the cocycle test
  int cutoff = 0;
};

// least m such that every tower component of the value at `key` with index
// above m vanishes modulo its block's relations; 0 for the zero value.
// The key may arrive unsorted; the value is read alternating-style.
int support_cutoff(const EvaluationContext& ctx, const Tuple& key);

// support_cutoff tabulated over the weakly increasing (degree+1)-tuples of
// the materialized index; palette = tower count
Coloring support_coloring(const EvaluationContext& ctx);

// least g such that F's singleton values dominate their arguments on every
// tower with index >= g, taken over F's declared domain
int cofinal_grade(const TruncatedOmegaSystem& sys, const CofinalFn& F);

// E^rho: evaluate an integer combination of (degree+1)-tuples by reading
// the cocycle at each tuple and pushing the value down the towers from the
// tuple's meet to rho's meet.  Towers below the cutoff contribute zero; on
// a kept tower a term whose meet drops below rho's meet is a structural
// error.  The result is reduced against the relations at rho's meet.
Vec evaluate_expression(const EvaluationContext& ctx, const Tuple& rho,
                        const FormalExpression& expr);

// Psi(rho) = E^rho(A_n(rho)) over the rank-sorted strict n-tuples, for a
// degree-n cocycle.  Preconditions: the support coloring is constant along
// F's chain images, and the cutoff clears both that constant and F's grade.
// d(Psi) then matches the cocycle modulo relations on every tower strictly
// above the cutoff; when F is constant at a top point the residual terms
// vanish outright and the match covers every kept tower.
AlternatingCochain trivialize_cocycle(const EvaluationContext& ctx,
                                      const CofinalFn& F, int seed_sign = -1);

// Finitely truncated coherent family: sequences of length `rows`, one
// rows x cols integer matrix per key, supported on the key's meet region
// I = {(i,j) | j <= min over the key of sequence(i)}.  Keys are tuples of
// positions into `indices`; a triviality witness for the one-dimensional
// case carries its single global map under the empty key.
struct CoherentFamily {
  int rows = 0;  // sequence length
  int cols = 0;  // value truncation per position
  std::vector<std::vector<int>> indices;
  std::map<Tuple, Mat> maps;

  // key lengths, completeness over the declared positions, matrix shapes,
  // support containment
  Diagnostics validate(int n) const;
};

using CellSet = std::set<std::pair<int, int>>;

struct FamilyCheck {
  bool ok = true;
  CellSet cells;  // violating cells outside the declared exceptional region
  std::vector<std::string> details;
};

// alternating-sum condition over every (n+1)-tuple of declared positions,
// restricted to the tuple's meet region; "almost everywhere" reads as
// "outside `exceptional`", and `cells` returns the least region that would
// have sufficed
FamilyCheck check_coherence(const CoherentFamily& fam, int n,
                            const CellSet& exceptional = {});

// phi_x ~ sum_i (-1)^i psi_{x^i} on the meet region of x, against a witness
// keyed by the (n-1)-subtuples (the empty key when n == 1)
FamilyCheck check_triviality_witness(const CoherentFamily& fam,
                                     const CoherentFamily& witness, int n,
                                     const CellSet& exceptional = {});

}  // namespace limlab
