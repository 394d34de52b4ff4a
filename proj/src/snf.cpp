#include "limlab/snf.hpp"

#include <algorithm>
#include <utility>

namespace limlab {

int rows(const Mat& m) { return static_cast<int>(m.size()); }
int cols(const Mat& m) { return m.empty() ? 0 : static_cast<int>(m[0].size()); }

Mat mat_identity(int n) {
  Mat m(n, Vec(n, 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

Mat mat_zero(int r, int c) { return Mat(r, Vec(c, 0)); }

Mat mat_mul(const Mat& a, const Mat& b) {
  int r = rows(a), k = cols(a), c = cols(b);
  if (k != rows(b)) throw DomainError("matrix shape mismatch in mat_mul");
  Mat out = mat_zero(r, c);
  for (int i = 0; i < r; ++i)
    for (int t = 0; t < k; ++t) {
      if (a[i][t] == 0) continue;
      for (int j = 0; j < c; ++j) out[i][j] += a[i][t] * b[t][j];
    }
  return out;
}

Mat mat_mul_dims(const Mat& a, int r, int k, const Mat& b, int c) {
  if ((rows(a) != r && !(rows(a) == 0 && (r == 0 || k == 0))) ||
      (rows(b) != k && !(rows(b) == 0 && (k == 0 || c == 0))))
    throw DomainError("matrix shape mismatch in mat_mul_dims");
  Mat out = mat_zero(r, c);
  for (int i = 0; i < r; ++i)
    for (int t = 0; t < k; ++t) {
      if (a[i][t] == 0) continue;
      for (int j = 0; j < c; ++j) out[i][j] += a[i][t] * b[t][j];
    }
  return out;
}

Mat mat_transpose(const Mat& m) {
  Mat out = mat_zero(cols(m), rows(m));
  for (int i = 0; i < rows(m); ++i)
    for (int j = 0; j < cols(m); ++j) out[j][i] = m[i][j];
  return out;
}

Vec mat_apply(const Mat& m, const Vec& v) {
  if (cols(m) != static_cast<int>(v.size()))
    throw DomainError("matrix shape mismatch in mat_apply");
  Vec out(rows(m), 0);
  for (int i = 0; i < rows(m); ++i)
    for (int j = 0; j < cols(m); ++j)
      if (m[i][j] != 0) out[i] += m[i][j] * v[j];
  return out;
}

Mat mat_hconcat(const Mat& a, const Mat& b) {
  if (rows(a) != rows(b)) throw DomainError("row mismatch in mat_hconcat");
  Mat out = a;
  for (int i = 0; i < rows(a); ++i)
    out[i].insert(out[i].end(), b[i].begin(), b[i].end());
  return out;
}

Mat columns_of(const Mat& m, const std::vector<int>& idx) {
  Mat out = mat_zero(rows(m), static_cast<int>(idx.size()));
  for (int i = 0; i < rows(m); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) out[i][j] = m[i][idx[j]];
  return out;
}

Int determinant(const Mat& m) {
  int n = rows(m);
  if (n != cols(m)) throw DomainError("determinant of a non-square matrix");
  if (n == 0) return 1;
  Mat a = m;
  Int prev = 1;
  int sign = 1;
  for (int k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      int pick = -1;
      for (int i = k + 1; i < n; ++i)
        if (a[i][k] != 0) {
          pick = i;
          break;
        }
      if (pick < 0) return 0;
      std::swap(a[k], a[pick]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

bool is_unimodular(const Mat& m) {
  if (rows(m) != cols(m)) return false;
  Int d = determinant(m);
  return d == 1 || d == -1;
}

std::vector<Int> SmithResult::diagonal() const {
  std::vector<Int> out;
  for (int i = 0; i < rank; ++i) out.push_back(D[i][i]);
  return out;
}

SmithResult smith_normal_form(const Mat& A) {
  int r = rows(A), c = cols(A);
  SmithResult s;
  s.D = A;
  s.U = mat_identity(r);
  s.V = mat_identity(c);
  Mat& D = s.D;
  Mat& U = s.U;
  Mat& V = s.V;

  auto row_axpy = [&](int dst, int src, const Int& q) {  // row_dst -= q row_src
    for (int k = 0; k < c; ++k) D[dst][k] -= q * D[src][k];
    for (int k = 0; k < r; ++k) U[dst][k] -= q * U[src][k];
  };
  auto col_axpy = [&](int dst, int src, const Int& q) {
    for (int k = 0; k < r; ++k) D[k][dst] -= q * D[k][src];
    for (int k = 0; k < c; ++k) V[k][dst] -= q * V[k][src];
  };
  auto row_swap = [&](int a, int b) {
    if (a == b) return;
    std::swap(D[a], D[b]);
    std::swap(U[a], U[b]);
  };
  auto col_swap = [&](int a, int b) {
    if (a == b) return;
    for (int k = 0; k < r; ++k) std::swap(D[k][a], D[k][b]);
    for (int k = 0; k < c; ++k) std::swap(V[k][a], V[k][b]);
  };

  int lim = std::min(r, c);
  int t = 0;
  for (; t < lim; ++t) {
    // smallest-magnitude pivot, earliest position on ties
    int pi = -1, pj = -1;
    for (int i = t; i < r; ++i)
      for (int j = t; j < c; ++j) {
        if (D[i][j] == 0) continue;
        if (pi < 0 || abs(D[i][j]) < abs(D[pi][pj])) {
          pi = i;
          pj = j;
        }
      }
    if (pi < 0) break;
    row_swap(t, pi);
    col_swap(t, pj);

    while (true) {
      bool dirty = false;
      for (int i = t + 1; i < r; ++i)
        while (D[i][t] != 0) {
          Int q = D[i][t] / D[t][t];
          if (q != 0) row_axpy(i, t, q);
          if (D[i][t] != 0) {
            row_swap(i, t);
            dirty = true;
          }
        }
      for (int j = t + 1; j < c; ++j)
        while (D[t][j] != 0) {
          Int q = D[t][j] / D[t][t];
          if (q != 0) col_axpy(j, t, q);
          if (D[t][j] != 0) {
            col_swap(j, t);
            dirty = true;
          }
        }
      if (dirty) continue;  // a swap re-dirtied the cleared line

      // pivot must divide the remaining block for the chain d1 | d2 | ...
      int bi = -1;
      for (int i = t + 1; i < r && bi < 0; ++i)
        for (int j = t + 1; j < c; ++j)
          if (D[i][j] % D[t][t] != 0) {
            bi = i;
            break;
          }
      if (bi < 0) break;
      row_axpy(t, bi, Int(-1));  // fold the offending row into row t
    }
  }

  for (int i = 0; i < lim; ++i)
    if (D[i][i] < 0) {
      for (int k = 0; k < c; ++k) D[i][k] = -D[i][k];
      for (int k = 0; k < r; ++k) U[i][k] = -U[i][k];
    }
  s.rank = 0;
  for (int i = 0; i < lim; ++i)
    if (D[i][i] != 0) ++s.rank;
  return s;
}

Mat kernel_basis(const Mat& A) {
  SmithResult s = smith_normal_form(A);
  int c = cols(A);
  std::vector<int> idx;
  for (int j = s.rank; j < c; ++j) idx.push_back(j);
  return columns_of(s.V, idx);
}

std::optional<Vec> solve(const Mat& A, const Vec& b) {
  int r = rows(A), c = cols(A);
  if (static_cast<int>(b.size()) != r)
    throw DomainError("matrix shape mismatch in solve");
  SmithResult s = smith_normal_form(A);
  Vec y = mat_apply(s.U, b);
  Vec z(c, 0);
  for (int i = 0; i < r; ++i) {
    if (i < s.rank) {
      if (y[i] % s.D[i][i] != 0) return std::nullopt;
      z[i] = y[i] / s.D[i][i];
    } else if (y[i] != 0) {
      return std::nullopt;
    }
  }
  return mat_apply(s.V, z);
}

namespace {
// g = gcd(a,b) >= 0 with u a + v b = g
void extgcd(Int a, Int b, Int& g, Int& u, Int& v) {
  Int u0 = 1, v0 = 0, u1 = 0, v1 = 1;
  while (b != 0) {
    Int q = a / b;
    Int t = a - q * b;
    a = b;
    b = t;
    t = u0 - q * u1;
    u0 = u1;
    u1 = t;
    t = v0 - q * v1;
    v0 = v1;
    v1 = t;
  }
  if (a < 0) {
    a = -a;
    u0 = -u0;
    v0 = -v0;
  }
  g = a;
  u = u0;
  v = v0;
}

Int floor_div(const Int& a, const Int& b) {  // b > 0
  Int q = a / b;
  if (a % b != 0 && a < 0) --q;
  return q;
}
}  // namespace

Mat hnf_columns(Mat m) {
  int r = rows(m), k = cols(m);
  int c = 0;
  for (int row = 0; row < r && c < k; ++row) {
    int lead = -1;
    for (int j = c; j < k; ++j)
      if (m[row][j] != 0) {
        lead = j;
        break;
      }
    if (lead < 0) continue;
    if (lead != c)
      for (int i = 0; i < r; ++i) std::swap(m[i][c], m[i][lead]);
    for (int j = c + 1; j < k; ++j) {
      if (m[row][j] == 0) continue;
      Int g, u, v;
      extgcd(m[row][c], m[row][j], g, u, v);
      Int a = m[row][c] / g, b = m[row][j] / g;
      for (int i = 0; i < r; ++i) {
        Int nc = u * m[i][c] + v * m[i][j];
        Int nj = -b * m[i][c] + a * m[i][j];
        m[i][c] = nc;
        m[i][j] = nj;
      }
    }
    if (m[row][c] < 0)
      for (int i = 0; i < r; ++i) m[i][c] = -m[i][c];
    for (int j = 0; j < c; ++j) {
      Int q = floor_div(m[row][j], m[row][c]);
      if (q == 0) continue;
      for (int i = 0; i < r; ++i) m[i][j] -= q * m[i][c];
    }
    ++c;
  }
  for (int i = 0; i < r; ++i) m[i].resize(c);
  return m;
}

bool lattice_member(const Mat& m, const Vec& v) {
  if (cols(m) == 0) {
    for (const Int& x : v)
      if (x != 0) return false;
    return true;
  }
  return solve(m, v).has_value();
}

Vec lattice_reduce(const Mat& hnf, Vec v) {
  int r = rows(hnf), k = cols(hnf);
  if (r != static_cast<int>(v.size()))
    throw DomainError("matrix shape mismatch in lattice_reduce");
  for (int j = 0; j < k; ++j) {
    int pr = -1;
    for (int i = 0; i < r; ++i)
      if (hnf[i][j] != 0) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    Int q = floor_div(v[pr], hnf[pr][j]);
    if (q == 0) continue;
    for (int i = 0; i < r; ++i) v[i] -= q * hnf[i][j];
  }
  return v;
}

}  // namespace limlab
