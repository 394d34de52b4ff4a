#pragma once
#include <set>
#include <string>
#include <vector>

#include "limlab/errors.hpp"

namespace limlab {

using Vertex = int;
using Face = std::vector<Vertex>;  // sorted, nonempty

// Downward-closed family of nonempty finite vertex sets; all faces stored
// explicitly (desk scale).
struct Complex {
  std::set<Face> faces;

  static Complex from_faces(const std::vector<Face>& fs);  // closes downward

  bool empty() const { return faces.empty(); }
  std::set<Vertex> vertex_set() const;
  int dim() const;  // -1 when empty
  bool pure(int n) const;
  std::vector<Face> faces_of_dim(int k) const;  // faces with k+1 vertices
  bool contains(const Face& f) const { return faces.count(f) != 0; }
  bool operator==(const Complex&) const = default;
};

Complex simplex(const Face& a);           // all nonempty subsets
Complex boundary_complex(const Face& a);  // omits a itself; |a| >= 2

Complex cone(const Complex& Y, Vertex v);  // Y together with b+{v}, b in Y+{0}

// Vertices of the subdivision are faces of Y (canonically the sorted vertex
// list); vertex i of `cx` is `label[i]`.  Faces are inclusion-chains.
struct Subdivision {
  Complex cx;
  std::vector<Face> label;
};
Subdivision barycentric_subdivision(const Complex& Y);

// Z/2 chain in dimension n: membership = coefficient 1.
using Chain = std::set<Face>;

Chain z2_add(const Chain& a, const Chain& b);  // symmetric difference
Chain z2_boundary(const Chain& c, int dim);    // dim >= 1; dim 0 is an error

// Partition of [Y]_n under the closure of |a \cap b| = n adjacency.
std::vector<Complex> n_path_components(const Complex& Y, int n);

struct CycleCheck {
  bool ok = false;
  std::string defect;  // empty when ok
};

// Pure n-dimensional, n-path connected, every (n-1)-face in an even number
// of n-faces; at n = 0, a nonempty even vertex set.
CycleCheck is_n_cycle(const Complex& Y, int n);

// n-path components of the complex generated by a zero-boundary chain; every
// component is an n-cycle.  At dimension 0 the chain itself must be even.
std::vector<Complex> connon_decompose(const Chain& chain, int n);

std::string face_to_string(const Face& f);

}  // namespace limlab
