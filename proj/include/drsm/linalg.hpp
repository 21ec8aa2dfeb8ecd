#pragma once

#include <vector>

#include "drsm/core.hpp"

namespace drsm {

// Dense row-major matrix.
struct Matrix {
  int rows = 0, cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0)
      : rows(r), cols(c), a(static_cast<size_t>(r) * c, fill) {}

  double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
  bool symmetric(double tol = kEqTol) const;
};

Vec matvec(const Matrix& m, const Vec& x);
Vec matvec_t(const Matrix& m, const Vec& x);  // m^T x
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& m);

// LU factorization with partial pivoting (Doolittle, row swaps).
struct LuFactors {
  Matrix lu;              // L (unit diagonal, below) and U (on/above diagonal)
  std::vector<int> perm;  // row permutation applied to the input
  int perm_sign = 1;
  bool singular = false;  // an exactly-zero pivot was hit
};

LuFactors lu_factor(Matrix m);

struct LogDet {
  double log_abs = 0.0;  // log |det|
  int sign = 0;          // -1, 0, +1
};

LogDet lu_logdet(const LuFactors& f);
Vec lu_solve(const LuFactors& f, Vec b);
Matrix lu_inverse(const LuFactors& f);

// Dominant |eigenvalue| of a symmetric matrix by power iteration.
double sym_eig_max_abs(const Matrix& m, int iters = 50);
// Extremal eigenvalues of a symmetric matrix via shifted power iterations.
double sym_eig_max(const Matrix& m, int iters = 100);
double sym_eig_min(const Matrix& m, int iters = 100);
// All eigenvalues of a symmetric matrix (cyclic Jacobi sweeps), ascending.
Vec sym_eigenvalues(Matrix m, int sweeps = 30);

// Householder QR. q is rows x rows orthogonal, r upper triangular with the
// diagonal sign-normalized positive, so the factorization is unique.
struct Qr {
  Matrix q, r;
};
Qr householder_qr(const Matrix& m);

}  // namespace drsm
