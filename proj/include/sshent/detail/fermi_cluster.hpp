#pragma once

// Resolution of nearly degenerate levels at the Fermi energy.
//
// Topological edge modes of a long open ladder split by an amount that decays
// exponentially with the length and easily drops below double-precision
// roundoff (1e-20 at L=16 is typical). A double eigensolver then returns an
// arbitrary rotation inside the near-zero subspace, and which combination ends
// up filled is noise. The splitting itself is well defined, so we recompute
// the cluster in quad precision: one step of shifted inverse subspace
// iteration started from the double eigenvectors, then Rayleigh-Ritz.

#include "sshent/core.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cstddef>
#include <utility>
#include <vector>

namespace sshent::detail {

using quad = boost::multiprecision::cpp_bin_float_quad;

struct QuadMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<quad> data;

  QuadMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, quad(0)) {}
  quad& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const quad& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

// In-place LU with partial pivoting; false if a pivot is exactly zero.
inline bool lu_factor(QuadMatrix& a, std::vector<std::size_t>& perm) {
  const std::size_t n = a.rows;
  perm.resize(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    quad best = abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const quad v = abs(a(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0) return false;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(perm[k], perm[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const quad f = a(i, k) / a(k, k);
      a(i, k) = f;
      if (f == 0) continue;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return true;
}

inline void lu_solve(const QuadMatrix& lu, const std::vector<std::size_t>& perm, std::vector<quad>& b) {
  const std::size_t n = lu.rows;
  std::vector<quad> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[perm[i]];
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) x[i] -= lu(i, j) * x[j];
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) x[i] -= lu(i, j) * x[j];
    x[i] /= lu(i, i);
  }
  b = std::move(x);
}

// Cyclic Jacobi for a small symmetric matrix. On return `a` is diagonal
// (eigenvalues) and `v` holds the eigenvectors as columns.
inline void jacobi_eigen(QuadMatrix& a, QuadMatrix& v) {
  const std::size_t n = a.rows;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) v(i, j) = (i == j) ? quad(1) : quad(0);
  for (int sweep = 0; sweep < 100; ++sweep) {
    quad off = 0;
    quad total = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        total += a(i, j) * a(i, j);
        if (i != j) off += a(i, j) * a(i, j);
      }
    if (off == 0 || off <= total * quad(1e-66)) return;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a(p, q) == 0) continue;
        const quad theta = (a(q, q) - a(p, p)) / (2 * a(p, q));
        const quad t = (theta >= 0 ? quad(1) : quad(-1)) / (abs(theta) + sqrt(theta * theta + 1));
        const quad c = 1 / sqrt(t * t + 1);
        const quad s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const quad akp = a(k, p);
          const quad akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const quad apk = a(p, k);
          const quad aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const quad vkp = v(k, p);
          const quad vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
}

struct ClusterBounds {
  Eigen::Index lo = 0;  // first index of the cluster
  Eigen::Index hi = 0;  // last index (inclusive)
};

/// Consecutive eigenvalues around the Fermi boundary [n_filled-1, n_filled]
/// whose neighbour spacings are below `spacing`.
inline ClusterBounds fermi_cluster(const RVector& evals, Eigen::Index n_filled, double spacing) {
  ClusterBounds c{n_filled - 1, n_filled};
  while (c.lo > 0 && evals(c.lo) - evals(c.lo - 1) < spacing) --c.lo;
  while (c.hi + 1 < evals.size() && evals(c.hi + 1) - evals(c.hi) < spacing) ++c.hi;
  return c;
}

/// Refine the eigenpairs of the Fermi-level cluster of a real symmetric h in
/// quad precision. `evals` (ascending) and `evecs` are updated in place.
/// Returns false when the cluster could not be refined (exactly singular shift).
inline bool refine_fermi_cluster(const RMatrix& h, RVector& evals, RMatrix& evecs, Eigen::Index n_filled,
                                 double spacing) {
  const auto N = static_cast<std::size_t>(h.rows());
  const ClusterBounds c = fermi_cluster(evals, n_filled, spacing);
  const auto k = static_cast<std::size_t>(c.hi - c.lo + 1);
  const quad shift = quad(0.5) * (quad(evals(n_filled - 1)) + quad(evals(n_filled)));

  QuadMatrix a(N, N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) a(i, j) = quad(h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
  for (std::size_t i = 0; i < N; ++i) a(i, i) -= shift;
  std::vector<std::size_t> perm;
  if (!lu_factor(a, perm)) return false;

  // Y = (h - shift)^{-1} X0, then orthonormalize (Gram-Schmidt, twice).
  QuadMatrix y(N, k);
  for (std::size_t col = 0; col < k; ++col) {
    std::vector<quad> b(N);
    for (std::size_t i = 0; i < N; ++i)
      b[i] = quad(evecs(static_cast<Eigen::Index>(i), c.lo + static_cast<Eigen::Index>(col)));
    lu_solve(a, perm, b);
    for (std::size_t i = 0; i < N; ++i) y(i, col) = b[i];
  }
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t col = 0; col < k; ++col) {
      for (std::size_t prev = 0; prev < col; ++prev) {
        quad dot = 0;
        for (std::size_t i = 0; i < N; ++i) dot += y(i, prev) * y(i, col);
        for (std::size_t i = 0; i < N; ++i) y(i, col) -= dot * y(i, prev);
      }
      quad norm = 0;
      for (std::size_t i = 0; i < N; ++i) norm += y(i, col) * y(i, col);
      norm = sqrt(norm);
      if (norm == 0) return false;
      for (std::size_t i = 0; i < N; ++i) y(i, col) /= norm;
    }
  }

  // Rayleigh-Ritz on span(Y), exploiting the sparsity of h.
  QuadMatrix hy(N, k);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) {
      const double hij = h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (hij == 0.0) continue;
      const quad q(hij);
      for (std::size_t col = 0; col < k; ++col) hy(i, col) += q * y(j, col);
    }
  }
  QuadMatrix r(k, k);
  for (std::size_t p = 0; p < k; ++p)
    for (std::size_t q = 0; q < k; ++q) {
      quad s = 0;
      for (std::size_t i = 0; i < N; ++i) s += y(i, p) * hy(i, q);
      r(p, q) = s;
    }
  for (std::size_t p = 0; p < k; ++p)
    for (std::size_t q = p + 1; q < k; ++q) r(p, q) = r(q, p) = (r(p, q) + r(q, p)) / 2;
  QuadMatrix s(k, k);
  jacobi_eigen(r, s);

  std::vector<std::size_t> order(k);
  for (std::size_t i = 0; i < k; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t z) { return r(x, x) < r(z, z); });
  for (std::size_t out = 0; out < k; ++out) {
    const std::size_t src = order[out];
    const Eigen::Index dst = c.lo + static_cast<Eigen::Index>(out);
    evals(dst) = static_cast<double>(r(src, src));
    for (std::size_t i = 0; i < N; ++i) {
      quad v = 0;
      for (std::size_t m = 0; m < k; ++m) v += y(i, m) * s(m, src);
      evecs(static_cast<Eigen::Index>(i), dst) = static_cast<double>(v);
    }
  }
  return true;
}

}  // namespace sshent::detail
