#pragma once
#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <vector>

#include "limlab/errors.hpp"

namespace limlab {

using Int = boost::multiprecision::cpp_int;
using Vec = std::vector<Int>;
using Mat = std::vector<Vec>;  // row-major; rows may be empty only if cols==0

int rows(const Mat& m);
int cols(const Mat& m);
Mat mat_identity(int n);
Mat mat_zero(int r, int c);
Mat mat_mul(const Mat& a, const Mat& b);
// a is r x k, b is k x c; for when empty operands cannot carry their shape
Mat mat_mul_dims(const Mat& a, int r, int k, const Mat& b, int c);
Mat mat_transpose(const Mat& m);
Vec mat_apply(const Mat& m, const Vec& v);
Mat mat_hconcat(const Mat& a, const Mat& b);  // side by side, equal row count
Mat columns_of(const Mat& m, const std::vector<int>& idx);

// exact determinant by fraction-free elimination
Int determinant(const Mat& m);
bool is_unimodular(const Mat& m);

// U * A * V = D with D diagonal, d1 | d2 | ..., entries nonnegative.
struct SmithResult {
  Mat U, D, V;
  int rank = 0;
  std::vector<Int> diagonal() const;  // the first `rank` entries, positive
};
SmithResult smith_normal_form(const Mat& A);

// basis of { x : A x = 0 } over the integers (a direct summand of Z^cols)
Mat kernel_basis(const Mat& A);

// one integral solution of A x = b, if any
std::optional<Vec> solve(const Mat& A, const Vec& b);

// Column-style Hermite form of the lattice spanned by the columns: zero
// columns dropped, pivots positive, entries right of a pivot reduced into
// [0, pivot).  Canonical for the lattice, so usable for equality tests.
Mat hnf_columns(Mat m);

// is v in the column lattice of m?
bool lattice_member(const Mat& m, const Vec& v);

// canonical representative of v modulo the column lattice of `hnf`
// (precomputed via hnf_columns)
Vec lattice_reduce(const Mat& hnf, Vec v);

}  // namespace limlab
