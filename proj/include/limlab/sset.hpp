#pragma once
#include <cstdint>
#include <map>
#include <vector>

#include "limlab/order.hpp"
#include "limlab/search.hpp"

namespace limlab {

// One level of the nerve of an order: the weakly increasing (n+1)-tuples,
// in the canonical enumeration order.  Faces with a strict repeat-free
// ascent are the nondegenerate ones; the rest arise by repeating entries.
struct NerveLevel {
  QuasiOrder order;
  int n = 0;
  std::vector<Tuple> faces;
};

NerveLevel nerve_level(const QuasiOrder& P, int n);

std::vector<Tuple> nondegenerate_faces(const NerveLevel& level);

// A degree-n face of the extension level: a monotone map from the inclusion
// order on nonempty subsets of {0..n}, stored as a value table keyed by the
// sorted subsets.  Two faces are the same member exactly when their tables
// agree.
struct ExFace {
  std::map<std::vector<int>, Elem> values;

  bool operator==(const ExFace&) const = default;
  bool operator<(const ExFace& o) const { return values < o.values; }
};

// Degree read off the largest subset key.
int ex_degree(const ExFace& s);

// values complete over the nonempty subsets of {0..n}, in range, monotone
// under inclusion; lists every violation.
Diagnostics validate_ex_face(const QuasiOrder& P, const ExFace& s, int n);

// Restriction along the i-th coordinate inclusion of subset orders; the
// degree drops by one.  This is the i-th face map on extension levels.
ExFace ex_restriction(const ExFace& s, int i);

// Entry set of a tuple face / singleton images of a subset-table face,
// sorted ascending.
std::vector<Elem> vertex_set(const Tuple& face);
std::vector<Elem> vertex_set(const ExFace& face);

struct ExNerveLevel {
  QuasiOrder order;
  int n = 0;
  std::vector<ExFace> faces;
};

// Every monotone subset table into P, enumerated depth-first over subsets in
// (size, lex) order with values in linear-extension order.  Aborts with
// PreconditionError when the level cannot be materialized at desk scale.
ExNerveLevel ex_nerve_level(const QuasiOrder& P, int n);

// spans:  every (n+1)-subset of the targets is the vertex set of a member.
// neat:   for each i <= n, distinct i-th faces of members have distinct
//         vertex sets.
// Defects are reported: the unrealized subsets, and the colliding member
// pairs per face index.
struct SpanReport {
  bool spans = false;
  bool neat = false;

  struct Collision {
    int i = 0;             // face-map index
    std::size_t a = 0;     // positions into the tested family
    std::size_t b = 0;
  };

  std::vector<std::vector<Elem>> missing;
  std::vector<Collision> collisions;
  std::map<std::vector<Elem>, std::size_t> realized;  // subset -> first member

  bool ok() const { return spans && neat; }
};

SpanReport spans_neatly(const std::vector<ExFace>& S,
                        const std::vector<Elem>& T, int n);

// The subset table of one tuple: s(A) = F(top restricted to A).  Monotone
// whenever F satisfies the deletion law on the subtuples of top.
ExFace face_from_table(const CofinalFn& F, const Tuple& top);

// Canonical family realizing every comparable subset of the targets with at
// most n+1 elements: sort the subset by rank, pad with its last element to
// length n+1, and read the table along subsets.  When F fixes the targets
// pointwise (as base-restricted witnesses do) the family spans the targets
// neatly and its maximal chains are exactly chain images of F.
std::vector<ExFace> spanning_faces(const QuasiOrder& P, const CofinalFn& F,
                                   const std::vector<Elem>& T, int n);

// Face-level search for the reformulated principle: a cofinal target set T
// together with a monochromatic, neatly spanning family of degree-n faces.
// Target sets are tried by ascending size, colors in palette order, and the
// family is grown one required vertex set at a time, so the first solution
// is canonical.  The returned witness is the family read back as a
// base-restricted table (each face along its inclusion chains), which for
// n = 1 passes the direct verifier; the family itself is recoverable via
// spanning_faces on that table.  Satisfiability matches the direct search
// over cofinal bases.  Budget exhaustion yields an inconclusive outcome.
SearchOutcome simplicial_ph_check(const QuasiOrder& P, const Coloring& c,
                                  int n, long long budget = 1000000,
                                  int workers = 1);

}  // namespace limlab
