#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "limlab/errors.hpp"

namespace limlab {

using Elem = int;
using Tuple = std::vector<Elem>;

struct Diagnostics {
  std::vector<std::string> issues;
  bool ok() const { return issues.empty(); }
  void add(std::string s) { issues.push_back(std::move(s)); }
  std::string joined() const;
};

// Finite quasi-order: reflexive transitive leq over elements 0..size-1.
// Element identity is index identity; x <= y <= x with x != y is allowed and
// never collapsed.
struct QuasiOrder {
  std::vector<std::string> names;        // size() == element count
  std::vector<std::vector<char>> leq_;   // leq_[a][b] == 1  iff  a <= b
  std::vector<Elem> linext;              // linext[rank] = element
  std::vector<int> rank_;                // rank_[element] = rank

  QuasiOrder() = default;
  QuasiOrder(int n, const std::vector<std::pair<int, int>>& pairs,
             bool close_transitively = true);

  int size() const { return static_cast<int>(leq_.size()); }
  bool le(Elem a, Elem b) const { return leq_[a][b] != 0; }
  bool lt(Elem a, Elem b) const { return le(a, b) && !le(b, a); }
  bool equivalent(Elem a, Elem b) const { return le(a, b) && le(b, a); }
  int rank(Elem a) const { return rank_[a]; }
  const std::string& name(Elem a) const { return names[a]; }

  // lexicographic comparison of tuples by linear-extension rank
  bool tuple_less(const Tuple& a, const Tuple& b) const;

  std::optional<Elem> maximum() const;   // element above everything
  bool directed() const;                 // every pair has an upper bound
  bool is_cofinal(const std::vector<Elem>& base) const;

  // greatest lower / least upper bound when one exists; rank-least
  // representative among equivalent candidates, for determinism
  std::optional<Elem> meet(Elem a, Elem b) const;
  std::optional<Elem> join(Elem a, Elem b) const;

  Diagnostics validate() const;  // reflexivity, transitivity, linext refines leq

  void default_names();
  void recompute_linext();  // stable topological order refining leq
};

bool weakly_increasing(const QuasiOrder& P, const Tuple& t);
bool strictly_increasing(const QuasiOrder& P, const Tuple& t);

// a can be obtained from b by deleting coordinates (coordinate equality is
// element-index equality)
bool subseq(const Tuple& a, const Tuple& b);

// Exactly the weakly increasing n-tuples over `base` (default: all of P),
// each once, in lexicographic order of the linear extension. n == 0 rejected.
std::vector<Tuple> enumerate_increasing_tuples(const QuasiOrder& P, int n);
std::vector<Tuple> enumerate_increasing_tuples_over(const QuasiOrder& P,
                                                    const std::vector<Elem>& base,
                                                    int n);
std::vector<Tuple> enumerate_strict_tuples_over(const QuasiOrder& P,
                                                const std::vector<Elem>& base,
                                                int n);

// Stage sequence sigma with |sigma[i]| == i+1 and sigma[i] obtained from
// sigma[i+1] by deleting one coordinate.
struct ChainOfTuples {
  std::vector<Tuple> stages;
  bool operator==(const ChainOfTuples&) const = default;
  bool operator<(const ChainOfTuples& o) const { return stages < o.stages; }
};

std::vector<ChainOfTuples> enumerate_chains(const QuasiOrder& P, int n);
std::vector<ChainOfTuples> enumerate_chains_over(const QuasiOrder& P,
                                                 const std::vector<Elem>& base,
                                                 int n, bool strict = false);

// distinct tuples obtainable by deleting one coordinate
std::vector<Tuple> one_deletions(const Tuple& t);

enum class DomainKind { weak, strict };

// Mapping from increasing tuples (length 1..arity) into the order.  The two
// cofinality laws are checkable invariants, not construction-time guarantees.
struct CofinalFn {
  int arity = 1;
  DomainKind domain_kind = DomainKind::weak;
  std::optional<std::vector<Elem>> base;  // domain restriction, sorted
  std::map<Tuple, Elem> table;

  Elem at(const Tuple& t) const;
  bool defined(const Tuple& t) const { return table.count(t) != 0; }
  std::vector<Tuple> domain_tuples(const QuasiOrder& P) const;
};

struct Coloring {
  int arity = 2;       // n+1
  int palette = 1;     // colors 0..palette-1
  std::map<Tuple, int> table;

  int at(const Tuple& t) const;
  Diagnostics validate_total(const QuasiOrder& P) const;
};

// Lists every violated instance of the two laws over F's declared domain;
// empty report iff F is n-cofinal there.
Diagnostics check_n_cofinal(const QuasiOrder& P, const CofinalFn& F);

// <F(sigma[0]), ..., F(sigma[k-1])>; weakly increasing whenever F passes
// check_n_cofinal.
Tuple apply_F_star(const CofinalFn& F, const ChainOfTuples& sigma);

// Lexicographically least monotone selector g: P -> base with g(u) = u on
// base, x <= g(x), and x <= y implying g(x) <= g(y).  nullopt when no
// monotone selector exists (possible on non-directed orders).
std::optional<std::vector<Elem>> monotone_selector(const QuasiOrder& P,
                                                   const std::vector<Elem>& base);

// Extend a witness defined on a cofinal base to the whole order via the
// selector; preserves both laws and the constant chain color.
CofinalFn extend_partial_witness(const QuasiOrder& P, const Coloring& c,
                                 const CofinalFn& F);

// Push a witness through a monotone map with cofinal image, using a section
// g with f(g(q)) >= q; the coloring lives on Q and is pulled back along f.
CofinalFn transfer_witness(const QuasiOrder& P, const QuasiOrder& Q,
                           const std::vector<Elem>& f, const std::vector<Elem>& g,
                           const CofinalFn& F_P, const Coloring& c_Q);

std::string tuple_to_string(const QuasiOrder& P, const Tuple& t);

}  // namespace limlab
