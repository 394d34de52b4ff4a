#include "limlab/simplicial.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace limlab {

namespace {

Face sorted_unique(Face f) {
  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  return f;
}

void subsets_rec(const Face& a, std::size_t i, Face& acc, std::set<Face>& out) {
  if (i == a.size()) {
    if (!acc.empty()) out.insert(acc);
    return;
  }
  subsets_rec(a, i + 1, acc, out);
  acc.push_back(a[i]);
  subsets_rec(a, i + 1, acc, out);
  acc.pop_back();
}

}  // namespace

Complex Complex::from_faces(const std::vector<Face>& fs) {
  Complex Y;
  for (const Face& raw : fs) {
    Face f = sorted_unique(raw);
    if (f.empty()) throw StructuralError("empty face");
    Face acc;
    subsets_rec(f, 0, acc, Y.faces);
  }
  return Y;
}

std::set<Vertex> Complex::vertex_set() const {
  std::set<Vertex> vs;
  for (const Face& f : faces) vs.insert(f.begin(), f.end());
  return vs;
}

int Complex::dim() const {
  int d = -1;
  for (const Face& f : faces) d = std::max(d, static_cast<int>(f.size()) - 1);
  return d;
}

bool Complex::pure(int n) const {
  if (dim() != n) return false;
  // every face lies inside some n-face
  std::vector<Face> tops = faces_of_dim(n);
  for (const Face& f : faces) {
    bool covered = false;
    for (const Face& t : tops)
      if (std::includes(t.begin(), t.end(), f.begin(), f.end())) {
        covered = true;
        break;
      }
    if (!covered) return false;
  }
  return true;
}

std::vector<Face> Complex::faces_of_dim(int k) const {
  std::vector<Face> out;
  for (const Face& f : faces)
    if (static_cast<int>(f.size()) == k + 1) out.push_back(f);
  return out;
}

Complex simplex(const Face& a) {
  Face f = sorted_unique(a);
  if (f.empty()) throw DomainError("simplex needs a nonempty vertex set");
  return Complex::from_faces({f});
}

Complex boundary_complex(const Face& a) {
  Face f = sorted_unique(a);
  if (f.size() < 2) throw DomainError("boundary needs at least 2 vertices");
  Complex Y = simplex(f);
  Y.faces.erase(f);
  return Y;
}

Complex cone(const Complex& Y, Vertex v) {
  if (Y.vertex_set().count(v)) throw DomainError("cone vertex already present");
  Complex out = Y;
  out.faces.insert(Face{v});
  for (const Face& b : Y.faces) {
    Face g = b;
    g.push_back(v);
    out.faces.insert(sorted_unique(g));
  }
  return out;
}

Subdivision barycentric_subdivision(const Complex& Y) {
  if (Y.empty()) throw DomainError("subdividing the empty complex");
  Subdivision sd;
  sd.label.assign(Y.faces.begin(), Y.faces.end());
  std::map<Face, Vertex> id;
  for (std::size_t i = 0; i < sd.label.size(); ++i)
    id[sd.label[i]] = static_cast<Vertex>(i);

  // chains of faces linearly ordered by inclusion, grown by DFS over strict
  // supersets
  std::vector<Face> all(Y.faces.begin(), Y.faces.end());
  std::vector<Face> acc;
  std::vector<Face> sd_faces;
  auto dfs = [&](auto&& self, std::size_t start) -> void {
    if (!acc.empty()) {
      Face f;
      for (const Face& g : acc) f.push_back(id.at(g));
      std::sort(f.begin(), f.end());
      sd_faces.push_back(f);
    }
    for (std::size_t i = start; i < all.size(); ++i) {
      const Face& cand = all[i];
      if (!acc.empty()) {
        const Face& last = acc.back();
        if (cand.size() <= last.size() ||
            !std::includes(cand.begin(), cand.end(), last.begin(), last.end()))
          continue;
      }
      acc.push_back(cand);
      self(self, 0);
      acc.pop_back();
    }
  };
  dfs(dfs, 0);

  for (const Face& f : sd_faces) sd.cx.faces.insert(f);
  return sd;
}

Chain z2_add(const Chain& a, const Chain& b) {
  Chain out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::inserter(out, out.begin()));
  return out;
}

Chain z2_boundary(const Chain& c, int dim) {
  if (dim <= 0)
    throw DomainError("boundary of a 0-chain lands in a disallowed dimension");
  Chain out;
  for (const Face& f : c) {
    if (static_cast<int>(f.size()) != dim + 1)
      throw DomainError("chain term has the wrong dimension");
    for (std::size_t i = 0; i < f.size(); ++i) {
      Face g;
      for (std::size_t j = 0; j < f.size(); ++j)
        if (j != i) g.push_back(f[j]);
      auto it = out.find(g);
      if (it == out.end())
        out.insert(g);
      else
        out.erase(it);
    }
  }
  return out;
}

namespace {

int intersection_size(const Face& a, const Face& b) {
  std::size_t i = 0, j = 0;
  int k = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j])
      ++i;
    else if (b[j] < a[i])
      ++j;
    else
      ++k, ++i, ++j;
  }
  return k;
}

// union-find over the n-faces of a chain/complex under |a cap b| = n
std::vector<std::vector<Face>> adjacency_classes(const std::vector<Face>& tops,
                                                 int n) {
  std::vector<int> parent(tops.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < tops.size(); ++i)
    for (std::size_t j = i + 1; j < tops.size(); ++j)
      if (intersection_size(tops[i], tops[j]) == n)
        parent[root(static_cast<int>(i))] = root(static_cast<int>(j));
  std::map<int, std::vector<Face>> groups;
  for (std::size_t i = 0; i < tops.size(); ++i)
    groups[root(static_cast<int>(i))].push_back(tops[i]);
  std::vector<std::vector<Face>> out;
  for (auto& [r, fs] : groups) out.push_back(fs);
  return out;
}

}  // namespace

std::vector<Complex> n_path_components(const Complex& Y, int n) {
  std::vector<Face> tops = Y.faces_of_dim(n);
  std::vector<Complex> out;
  for (auto& group : adjacency_classes(tops, n))
    out.push_back(Complex::from_faces(group));
  return out;
}

CycleCheck is_n_cycle(const Complex& Y, int n) {
  CycleCheck r;
  if (n == 0) {
    if (Y.empty()) {
      r.defect = "empty complex";
      return r;
    }
    if (Y.dim() != 0) {
      r.defect = "not a pure 0-complex";
      return r;
    }
    if (Y.faces.size() % 2 != 0) {
      r.defect = "odd vertex count";
      return r;
    }
    r.ok = true;
    return r;
  }
  if (!Y.pure(n)) {
    r.defect = "not pure of dimension " + std::to_string(n);
    return r;
  }
  std::vector<Face> tops = Y.faces_of_dim(n);
  if (adjacency_classes(tops, n).size() != 1) {
    r.defect = "not path-connected in dimension " + std::to_string(n);
    return r;
  }
  for (const Face& f : Y.faces_of_dim(n - 1)) {
    int count = 0;
    for (const Face& t : tops)
      if (std::includes(t.begin(), t.end(), f.begin(), f.end())) ++count;
    if (count % 2 != 0) {
      r.defect = "face " + face_to_string(f) + " lies in " +
                 std::to_string(count) + " top faces";
      return r;
    }
  }
  r.ok = true;
  return r;
}

std::vector<Complex> connon_decompose(const Chain& chain, int n) {
  if (chain.empty()) return {};
  for (const Face& f : chain)
    if (static_cast<int>(f.size()) != n + 1)
      throw PreconditionError("chain term has the wrong dimension");
  if (n == 0) {
    // vertices are pairwise 0-adjacent: a single component; the cycle
    // condition is evenness
    if (chain.size() % 2 != 0)
      throw PreconditionError("0-chain with odd support is not a cycle sum");
    std::vector<Face> fs(chain.begin(), chain.end());
    return {Complex::from_faces(fs)};
  }
  if (!z2_boundary(chain, n).empty())
    throw PreconditionError("chain has nonzero boundary");
  std::vector<Face> tops(chain.begin(), chain.end());
  std::vector<Complex> out;
  for (auto& group : adjacency_classes(tops, n))
    out.push_back(Complex::from_faces(group));
  for (const Complex& c : out) {
    CycleCheck chk = is_n_cycle(c, n);
    if (!chk.ok)
      throw StructuralError("component fails the cycle check: " + chk.defect);
  }
  return out;
}

std::string face_to_string(const Face& f) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) os << ",";
    os << f[i];
  }
  os << "}";
  return os.str();
}

}  // namespace limlab
