#include "drsm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace drsm {

bool Matrix::symmetric(double tol) const {
  if (rows != cols) return false;
  for (int i = 0; i < rows; ++i)
    for (int j = i + 1; j < cols; ++j)
      if (std::fabs((*this)(i, j) - (*this)(j, i)) > tol) return false;
  return true;
}

Vec matvec(const Matrix& m, const Vec& x) {
  if (static_cast<int>(x.size()) != m.cols)
    throw std::invalid_argument("matvec: dimension mismatch");
  Vec y(static_cast<size_t>(m.rows), 0.0);
  for (int i = 0; i < m.rows; ++i) {
    double s = 0;
    const double* row = &m.a[static_cast<size_t>(i) * m.cols];
    for (int j = 0; j < m.cols; ++j) s += row[j] * x[static_cast<size_t>(j)];
    y[static_cast<size_t>(i)] = s;
  }
  return y;
}

Vec matvec_t(const Matrix& m, const Vec& x) {
  if (static_cast<int>(x.size()) != m.rows)
    throw std::invalid_argument("matvec_t: dimension mismatch");
  Vec y(static_cast<size_t>(m.cols), 0.0);
  for (int i = 0; i < m.rows; ++i) {
    const double* row = &m.a[static_cast<size_t>(i) * m.cols];
    for (int j = 0; j < m.cols; ++j) y[static_cast<size_t>(j)] += row[j] * x[static_cast<size_t>(i)];
  }
  return y;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matmul: dimension mismatch");
  Matrix c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Matrix transpose(const Matrix& m) {
  Matrix t(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
  return t;
}

LuFactors lu_factor(Matrix m) {
  if (m.rows != m.cols) throw std::invalid_argument("lu_factor: matrix not square");
  const int n = m.rows;
  LuFactors f;
  f.perm.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) f.perm[static_cast<size_t>(i)] = i;

  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::fabs(m(k, k));
    for (int i = k + 1; i < n; ++i) {
      double v = std::fabs(m(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
      std::swap(f.perm[static_cast<size_t>(k)], f.perm[static_cast<size_t>(piv)]);
      f.perm_sign = -f.perm_sign;
    }
    double pivot = m(k, k);
    if (pivot == 0.0) {
      f.singular = true;
      continue;
    }
    for (int i = k + 1; i < n; ++i) {
      double l = m(i, k) / pivot;
      m(i, k) = l;
      if (l == 0.0) continue;
      for (int j = k + 1; j < n; ++j) m(i, j) -= l * m(k, j);
    }
  }
  f.lu = std::move(m);
  return f;
}

LogDet lu_logdet(const LuFactors& f) {
  LogDet d;
  if (f.singular) return d;  // sign 0
  d.sign = f.perm_sign;
  for (int i = 0; i < f.lu.rows; ++i) {
    double u = f.lu(i, i);
    if (u == 0.0) {
      d.sign = 0;
      d.log_abs = 0.0;
      return d;
    }
    if (u < 0) d.sign = -d.sign;
    d.log_abs += std::log(std::fabs(u));
  }
  return d;
}

Vec lu_solve(const LuFactors& f, Vec b) {
  const int n = f.lu.rows;
  if (static_cast<int>(b.size()) != n)
    throw std::invalid_argument("lu_solve: dimension mismatch");
  if (f.singular) throw SingularMatrixError("lu_solve: singular matrix");
  Vec x(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] = b[static_cast<size_t>(f.perm[static_cast<size_t>(i)])];
  // forward substitution (L has unit diagonal)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) x[static_cast<size_t>(i)] -= f.lu(i, j) * x[static_cast<size_t>(j)];
  // back substitution
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) x[static_cast<size_t>(i)] -= f.lu(i, j) * x[static_cast<size_t>(j)];
    x[static_cast<size_t>(i)] /= f.lu(i, i);
  }
  return x;
}

Matrix lu_inverse(const LuFactors& f) {
  const int n = f.lu.rows;
  Matrix inv(n, n);
  Vec e(static_cast<size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    e[static_cast<size_t>(j)] = 1.0;
    Vec col = lu_solve(f, e);
    e[static_cast<size_t>(j)] = 0.0;
    for (int i = 0; i < n; ++i) inv(i, j) = col[static_cast<size_t>(i)];
  }
  return inv;
}

namespace {

// Deterministic, non-degenerate start vector for power iterations.
Vec power_start(int n) {
  Vec v(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = 1.0 + 0.01 * (i % 7) + 1e-3 * i;
  double nrm = norm2(v);
  for (double& x : v) x /= nrm;
  return v;
}

double power_iteration(const Matrix& m, int iters) {
  Vec v = power_start(m.rows);
  double lambda = 0.0;
  for (int it = 0; it < iters; ++it) {
    Vec w = matvec(m, v);
    double nrm = norm2(w);
    if (nrm < 1e-300) return 0.0;
    lambda = dot(v, w);
    for (size_t i = 0; i < w.size(); ++i) v[i] = w[i] / nrm;
  }
  return lambda;
}

}  // namespace

double sym_eig_max_abs(const Matrix& m, int iters) {
  Vec v = power_start(m.rows);
  double nrm = 1.0;
  for (int it = 0; it < iters; ++it) {
    Vec w = matvec(m, v);
    nrm = norm2(w);
    if (nrm < 1e-300) return 0.0;
    for (size_t i = 0; i < w.size(); ++i) v[i] = w[i] / nrm;
  }
  return nrm;
}

double sym_eig_max(const Matrix& m, int iters) {
  // Shift by the dominant magnitude so the iteration targets the top of the
  // spectrum: eig_max(m) = power(m + s I) - s with s = |lambda|_max.
  double s = sym_eig_max_abs(m, iters);
  Matrix shifted = m;
  for (int i = 0; i < m.rows; ++i) shifted(i, i) += s;
  return power_iteration(shifted, iters) - s;
}

double sym_eig_min(const Matrix& m, int iters) {
  double s = sym_eig_max_abs(m, iters);
  Matrix shifted = m;  // s I - m, dominant eigenvalue is s - eig_min
  for (size_t i = 0; i < shifted.a.size(); ++i) shifted.a[i] = -shifted.a[i];
  for (int i = 0; i < m.rows; ++i) shifted(i, i) += s;
  return s - power_iteration(shifted, iters);
}

Vec sym_eigenvalues(Matrix m, int sweeps) {
  if (m.rows != m.cols) throw std::invalid_argument("sym_eigenvalues: matrix not square");
  const int n = m.rows;
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    double off = 0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += m(p, q) * m(p, q);
    if (off < 1e-24) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = m(p, q);
        if (std::fabs(apq) < 1e-300) continue;
        double theta = (m(q, q) - m(p, p)) / (2 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1));
        double c = 1.0 / std::sqrt(t * t + 1);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double mkp = m(k, p), mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (int k = 0; k < n; ++k) {
          double mpk = m(p, k), mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
      }
    }
  }
  Vec eig(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) eig[static_cast<size_t>(i)] = m(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

Qr householder_qr(const Matrix& m) {
  const int n = m.rows, c = m.cols;
  Matrix r = m;
  Matrix q = Matrix::identity(n);
  std::vector<double> v(static_cast<size_t>(n));
  for (int k = 0; k < std::min(n - 1, c); ++k) {
    double alpha = 0;
    for (int i = k; i < n; ++i) alpha += r(i, k) * r(i, k);
    alpha = std::sqrt(alpha);
    if (alpha == 0.0) continue;
    if (r(k, k) > 0) alpha = -alpha;
    for (int i = 0; i < k; ++i) v[static_cast<size_t>(i)] = 0.0;
    v[static_cast<size_t>(k)] = r(k, k) - alpha;
    for (int i = k + 1; i < n; ++i) v[static_cast<size_t>(i)] = r(i, k);
    double vtv = 0;
    for (int i = k; i < n; ++i) vtv += v[static_cast<size_t>(i)] * v[static_cast<size_t>(i)];
    if (vtv < 1e-300) continue;
    // r <- (I - 2 v v^T / v^T v) r ; q <- q (I - 2 v v^T / v^T v)
    for (int j = 0; j < c; ++j) {
      double s = 0;
      for (int i = k; i < n; ++i) s += v[static_cast<size_t>(i)] * r(i, j);
      s = 2.0 * s / vtv;
      for (int i = k; i < n; ++i) r(i, j) -= s * v[static_cast<size_t>(i)];
    }
    for (int i = 0; i < n; ++i) {
      double s = 0;
      for (int j = k; j < n; ++j) s += q(i, j) * v[static_cast<size_t>(j)];
      s = 2.0 * s / vtv;
      for (int j = k; j < n; ++j) q(i, j) -= s * v[static_cast<size_t>(j)];
    }
  }
  // Sign-fix: make the diagonal of r nonnegative.
  for (int k = 0; k < std::min(n, c); ++k) {
    if (r(k, k) < 0) {
      for (int j = 0; j < c; ++j) r(k, j) = -r(k, j);
      for (int i = 0; i < n; ++i) q(i, k) = -q(i, k);
    }
  }
  return {std::move(q), std::move(r)};
}

}  // namespace drsm
