#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "limlab/order.hpp"
#include "limlab/simplicial.hpp"

namespace limlab {

// Layered injections: linear levels L_0..L_depth (L_0 is the palette); for
// m >= 1 and beta in L_m, inj[m][beta] maps each alpha < beta injectively
// into L_{m-1}.
struct InjectionSystem {
  int depth = 0;
  std::vector<int> level_sizes;                     // depth+1 entries
  std::vector<std::vector<std::vector<int>>> inj;   // inj[0] unused

  Diagnostics validate() const;
};

InjectionSystem generate_injection_system(int depth,
                                          const std::vector<int>& level_sizes,
                                          std::uint64_t seed);

// Recursive face color: singletons are their own color, pairs read f_beta,
// higher faces strip the top vertex through its injection and recurse.
// Symmetric in the face argument; repeated vertices rejected.
int c_tilde(const InjectionSystem& sys, int m, std::vector<int> face);

struct ConeWitness {
  Face a, b;          // m-faces of cone(t, delta)
  int color_a = 0, color_b = 0;
  std::vector<std::string> trace;  // one line per recursion level
};

// Two differently-colored m-faces of cone(t, delta), found by peeling the
// vertex with the largest h_delta image and recursing on a cycle in its link.
ConeWitness cone_nonconstancy_check(const InjectionSystem& sys, int m,
                                    const Complex& t, int delta);

// C-sequence at finite scale: for every 0 < a < N a nonempty subset of a.
struct CSequence {
  int N = 0;
  std::vector<std::vector<int>> clubs;  // clubs[0] empty

  Diagnostics validate() const;  // shapes plus termination of every walk
};

CSequence generate_csequence(int N, std::uint64_t seed);

// walk length: rho2(a,a) = 0, rho2(a,b) = rho2(a, min(C_b setminus a)) + 1
int rho2(const CSequence& C, int alpha, int beta);

// d(a,b) = max over xi <= a of |rho2(xi,a) - rho2(xi,b)|, for a < b
int walk_metric(const CSequence& C, int alpha, int beta);

// a = {a_0 < ... < a_n} with a_0 = 0 and a_j past every F-value on tuples
// from {a_0..a_{j-1}}; guarantees the initial-segment chain has a unique
// F-image preimage.
std::vector<Elem> choose_good_a(const CofinalFn& F, int N);

// Complex on the F-values of proper nonempty subsets of a; faces are
// F-images of inclusion chains.
Complex build_X_a(const CofinalFn& F, const std::vector<Elem>& a);

struct CycleExtraction {
  bool ok = false;
  std::string failure;       // certificate text when not ok
  Complex cycle;             // component containing the distinguished face
  Chain reduced;             // full mod-2 image chain
  long long chains_pushed = 0;
  long long degenerate_dropped = 0;
  long long survivors = 0;   // faces of `reduced`
  Face distinguished;        // image of the initial-segment chain
  int component_index = -1;
  int component_count = 0;
};

// Push the top-dimensional chain of the subdivided boundary through F and
// locate the cycle component of the distinguished face.
CycleExtraction extract_cycle_from_image(const CofinalFn& F,
                                         const std::vector<Elem>& a);

// F(x) = least element of X strictly above all coordinates of x and above
// every F(y) for proper subsequences y; domain is strict tuples over `base`,
// lengths 1..c.arity.
CofinalFn ramsey_witness(const QuasiOrder& P, const Coloring& c,
                         const std::vector<Elem>& X,
                         const std::vector<Elem>& base);

}  // namespace limlab
