// gapflow — thin-gap Stokes auxiliary-field verification toolkit
// SPDX-License-Identifier: MIT
//
// Small dense linear algebra for the rigid-motion coefficient system:
// row-major storage, LU factorization with partial pivoting, determinant,
// 1-norm condition estimate, and a Cramer-rule cross check.  Systems here
// are tiny (m = d(d+1)/2, i.e. 6 at d=3), so clarity beats blocking.

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gapflow {

/// Thrown when the assembled coefficient system is not usable: an exactly
/// zero pivot appears during elimination, or the determinant fails the
/// positivity requirement of the energy form.
struct SingularSystem : std::runtime_error {
  explicit SingularSystem(const std::string& what_arg)
      : std::runtime_error("SingularSystem: " + what_arg) {}
};

/// LU factorization (Doolittle, partial pivoting) of an n-by-n row-major
/// matrix.  `lu` stores L below the diagonal (unit diagonal implied) and U
/// on and above it; `perm[i]` is the original row index now in slot i.
/// An exactly singular matrix yields `singular = true` with `det = 0`; its
/// determinant is a valid result, but solving with it is refused.
struct LuFactors {
  int n = 0;
  std::vector<double> lu;
  std::vector<int> perm;
  double det = 0.0;  // determinant of the original matrix
  bool singular = false;
};

inline LuFactors lu_factor(int n, std::vector<double> a) {
  if (n < 1 || static_cast<std::size_t>(n) * static_cast<std::size_t>(n) != a.size()) {
    throw std::invalid_argument("lu_factor: matrix size mismatch");
  }
  LuFactors f;
  f.n = n;
  f.lu = std::move(a);
  f.perm.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) f.perm[static_cast<std::size_t>(i)] = i;
  double sign = 1.0;
  auto at = [&f, n](int i, int j) -> double& {
    return f.lu[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                static_cast<std::size_t>(j)];
  };
  for (int col = 0; col < n; ++col) {
    int pivot_row = col;
    double pivot_mag = std::abs(at(col, col));
    for (int row = col + 1; row < n; ++row) {
      const double mag = std::abs(at(row, col));
      if (mag > pivot_mag) {
        pivot_mag = mag;
        pivot_row = row;
      }
    }
    if (pivot_mag == 0.0) {
      f.singular = true;
      f.det = 0.0;
      return f;
    }
    if (pivot_row != col) {
      for (int j = 0; j < n; ++j) std::swap(at(col, j), at(pivot_row, j));
      std::swap(f.perm[static_cast<std::size_t>(col)],
                f.perm[static_cast<std::size_t>(pivot_row)]);
      sign = -sign;
    }
    const double inv_pivot = 1.0 / at(col, col);
    for (int row = col + 1; row < n; ++row) {
      const double factor = at(row, col) * inv_pivot;
      at(row, col) = factor;
      for (int j = col + 1; j < n; ++j) at(row, j) -= factor * at(col, j);
    }
  }
  f.det = sign;
  for (int i = 0; i < n; ++i) f.det *= at(i, i);
  return f;
}

/// Solves A x = b using precomputed factors.
inline std::vector<double> lu_solve(const LuFactors& f, const std::vector<double>& b) {
  const int n = f.n;
  if (f.singular) {
    throw SingularSystem("cannot solve with an exactly singular factorization");
  }
  if (b.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("lu_solve: rhs size mismatch");
  }
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    x[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(f.perm[static_cast<std::size_t>(i)])];
  }
  auto at = [&f, n](int i, int j) {
    return f.lu[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                static_cast<std::size_t>(j)];
  };
  for (int i = 1; i < n; ++i) {
    double s = x[static_cast<std::size_t>(i)];
    for (int j = 0; j < i; ++j) s -= at(i, j) * x[static_cast<std::size_t>(j)];
    x[static_cast<std::size_t>(i)] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = x[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) s -= at(i, j) * x[static_cast<std::size_t>(j)];
    x[static_cast<std::size_t>(i)] = s / at(i, i);
  }
  return x;
}

/// Maximum absolute column sum.
inline double norm1(int n, const std::vector<double>& a) {
  double best = 0.0;
  for (int j = 0; j < n; ++j) {
    double col = 0.0;
    for (int i = 0; i < n; ++i) {
      col += std::abs(a[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                       static_cast<std::size_t>(j)]);
    }
    best = std::max(best, col);
  }
  return best;
}

/// Inverse by n column solves against the unit vectors.
inline std::vector<double> lu_inverse(const LuFactors& f) {
  const int n = f.n;
  std::vector<double> inv(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  std::vector<double> e(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    e[static_cast<std::size_t>(j)] = 1.0;
    const auto col = lu_solve(f, e);
    e[static_cast<std::size_t>(j)] = 0.0;
    for (int i = 0; i < n; ++i) {
      inv[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
          static_cast<std::size_t>(j)] = col[static_cast<std::size_t>(i)];
    }
  }
  return inv;
}

/// 1-norm condition number kappa_1 = ||A||_1 * ||A^{-1}||_1.
inline double cond1(int n, const std::vector<double>& a, const LuFactors& f) {
  return norm1(n, a) * norm1(n, lu_inverse(f));
}

/// Cramer-rule solution component alpha: det(A with column alpha replaced
/// by b) / det(A).  Used as a structural cross check against the LU path.
inline std::vector<double> cramer_solve(int n, const std::vector<double>& a,
                                        const std::vector<double>& b, double det) {
  std::vector<double> x(static_cast<std::size_t>(n));
  std::vector<double> modified = a;
  for (int col = 0; col < n; ++col) {
    for (int i = 0; i < n; ++i) {
      modified[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
               static_cast<std::size_t>(col)] = b[static_cast<std::size_t>(i)];
    }
    x[static_cast<std::size_t>(col)] = lu_factor(n, modified).det / det;
    for (int i = 0; i < n; ++i) {
      modified[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
               static_cast<std::size_t>(col)] =
          a[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
            static_cast<std::size_t>(col)];
    }
  }
  return x;
}

}  // namespace gapflow
