#pragma once

// Winding-number invariants of the chiral ladder, computed by two independent
// numerical routes plus the closed-form result for uniform dimerization.
//
// Sign convention: M=1 with delta > 0 has I = +1.

#include "sshent/model.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace sshent {

struct InvariantResult {
  int value = 0;
  double raw = 0.0;       // real-valued accumulator before rounding
  double residual = 0.0;  // |raw - value|
  double gap = 0.0;       // min |E(k)| over the grid
};

struct InvariantOptions {
  int n_k = 256;
  double rounding_tol = 1e-3;
  double gap_tol = 1e-8;
};

namespace detail {

inline double min_abs_eigenvalue(const CMatrix& H) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().minCoeff();
}

inline void check_grid(int n_k) {
  if (n_k < 4) throw InvalidParameters("n_k must be >= 4");
}

inline InvariantResult round_invariant(double raw, double gap, double rounding_tol) {
  InvariantResult r;
  r.raw = raw;
  r.value = static_cast<int>(std::lround(raw));
  r.residual = std::abs(raw - r.value);
  r.gap = gap;
  if (!(r.residual < rounding_tol)) {
    throw Unconverged("invariant accumulator " + std::to_string(raw) + " is not within " +
                      std::to_string(rounding_tol) + " of an integer");
  }
  return r;
}

}  // namespace detail

/// min over k_n = 2 pi n / n_k of min |eigenvalue of H(k_n)|.
inline double band_gap(const LadderParams& p, int n_k = 256) {
  p.validate();
  detail::check_grid(n_k);
  double gap = std::numeric_limits<double>::infinity();
  for (int n = 0; n < n_k; ++n) {
    const double k = 2.0 * kPi * n / n_k;
    gap = std::min(gap, detail::min_abs_eigenvalue(bloch_hamiltonian(p, k)));
  }
  return gap;
}

namespace detail {

// Golden-section search on [lo, hi]. |E(k)| is V-shaped at a band touching, so
// derivative-based or parabolic steps stall near sqrt(eps); bracketing does not.
template <class F>
double golden_minimum(F&& f, double lo, double hi, int iterations = 90) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  double best = std::min(f1, f2);
  for (int it = 0; it < iterations && hi - lo > 1e-15; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = f(x2);
    }
    best = std::min({best, f1, f2});
  }
  return best;
}

}  // namespace detail

/// Gap with every local grid minimum of min|E(k)| polished by golden-section search.
/// A band touching zero between grid points is invisible to band_gap but not
/// to this estimate; the winding routines use it for their gapped check.
inline double refined_gap(const LadderParams& p, int n_k = 256) {
  p.validate();
  detail::check_grid(n_k);
  const double dk = 2.0 * kPi / n_k;
  auto f = [&p](double k) { return detail::min_abs_eigenvalue(bloch_hamiltonian(p, k)); };
  std::vector<double> v(static_cast<std::size_t>(n_k));
  for (int n = 0; n < n_k; ++n) v[static_cast<std::size_t>(n)] = f(n * dk);
  double gap = *std::min_element(v.begin(), v.end());
  for (int n = 0; n < n_k; ++n) {
    const double prev = v[static_cast<std::size_t>((n + n_k - 1) % n_k)];
    const double next = v[static_cast<std::size_t>((n + 1) % n_k)];
    const double cur = v[static_cast<std::size_t>(n)];
    if (cur > prev || cur > next) continue;
    gap = std::min(gap, detail::golden_minimum(f, (n - 1) * dk, (n + 1) * dk));
  }
  return gap;
}

/// I = (1/4 pi i) tr \oint dk U g^{-1} d_k g with g = H^{-1}.
///
/// Uses g^{-1} d_k g = -(d_k H) g with the exact derivative of H(k) and the
/// midpoint rule on k_n = 2 pi (n + 1/2) / n_k. For a gapped, analytic Bloch
/// Hamiltonian the periodic midpoint rule converges exponentially in n_k.
inline InvariantResult winding_green(const LadderParams& p, SymmetryKind kind, const InvariantOptions& opt) {
  detail::check_grid(opt.n_k);
  const CMatrix U = chiral_unitary(p, kind);
  const double gap = refined_gap(p, opt.n_k);
  if (!(gap > opt.gap_tol)) throw GaplessSpectrum("spectrum closes (gap " + std::to_string(gap) + ")");

  const double dk = 2.0 * kPi / opt.n_k;
  cplx acc = 0.0;
  for (int n = 0; n < opt.n_k; ++n) {
    const double k = (n + 0.5) * dk;
    const CMatrix H = bloch_hamiltonian(p, k);
    const CMatrix g = H.partialPivLu().inverse();
    acc -= (U * bloch_hamiltonian_derivative(p, k) * g).trace();
  }
  const cplx invariant = acc * dk / (4.0 * kPi * I_unit);
  return detail::round_invariant(invariant.real(), gap, opt.rounding_tol);
}

inline InvariantResult winding_green(const LadderParams& p, SymmetryKind kind = SymmetryKind::S, int n_k = 256) {
  InvariantOptions opt;
  opt.n_k = n_k;
  return winding_green(p, kind, opt);
}

/// Unitary W whose columns are eigenvectors of U, +1 eigenspace first, so
/// W^dagger U W = diag(1, -1).
inline CMatrix chiral_frame(const CMatrix& U) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(U);
  const Eigen::Index n = U.rows();
  const Eigen::Index half = n / 2;
  // Eigenvalues come sorted ascending: the -1 block first.
  CMatrix W(n, n);
  W.leftCols(half) = es.eigenvectors().rightCols(half);
  W.rightCols(half) = es.eigenvectors().leftCols(half);
  return W;
}

/// Off-diagonal block q(k) of Q(k) = 1 - 2P(k), where P projects on the
/// negative-energy eigenvectors of H(k) written in the frame W.
inline CMatrix flattened_block(const CMatrix& H, const CMatrix& W) {
  const CMatrix Hw = W.adjoint() * H * W;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(Hw);
  const Eigen::Index n = H.rows();
  CMatrix P = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (es.eigenvalues()(i) < 0.0) P += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  }
  const CMatrix Q = CMatrix::Identity(n, n) - 2.0 * P;
  return Q.topRightCorner(n / 2, n / 2);
}

/// I = (i / 2 pi) tr \oint q^dagger d_k q, accumulated as the winding of
/// det q(k): principal-branch phase increments between consecutive grid points
/// summed and divided by -2 pi. P(k) and det q are gauge invariant, so no
/// eigenvector phase fixing is needed.
inline InvariantResult winding_projector(const LadderParams& p, SymmetryKind kind, const InvariantOptions& opt) {
  detail::check_grid(opt.n_k);
  const CMatrix U = chiral_unitary(p, kind);
  const double gap = refined_gap(p, opt.n_k);
  if (!(gap > opt.gap_tol)) throw GaplessSpectrum("spectrum closes (gap " + std::to_string(gap) + ")");

  const CMatrix W = chiral_frame(U);
  const double dk = 2.0 * kPi / opt.n_k;
  const cplx det0 = flattened_block(bloch_hamiltonian(p, 0.0), W).determinant();
  cplx prev = det0;
  double phase = 0.0;
  for (int n = 1; n <= opt.n_k; ++n) {
    const cplx cur = (n == opt.n_k) ? det0 : flattened_block(bloch_hamiltonian(p, n * dk), W).determinant();
    phase += std::arg(cur / prev);
    prev = cur;
  }
  return detail::round_invariant(phase / (-2.0 * kPi), gap, opt.rounding_tol);
}

inline InvariantResult winding_projector(const LadderParams& p, SymmetryKind kind = SymmetryKind::S, int n_k = 256) {
  InvariantOptions opt;
  opt.n_k = n_k;
  return winding_projector(p, kind, opt);
}

/// Closed-form invariant for uniform dimerization delta with
/// |z| cos(pi/(M+1)) < |delta|: 0 for delta < 0; for delta > 0, 1 when M is
/// odd and 0 when M is even. Returns nullopt outside that regime (including
/// points within 1e-9 of its boundary).
inline std::optional<int> winding_analytic(const LadderParams& p) {
  p.validate();
  const double delta = p.deltas.front();
  for (double d : p.deltas) {
    if (!detail::nearly_equal(d, delta)) return std::nullopt;
  }
  // The boundary itself is gapless; keep a margin so roundoff cannot put a
  // boundary point inside the regime.
  if (!(std::abs(p.z) * std::cos(kPi / (p.legs + 1)) < std::abs(p.J * delta) - 1e-9 * std::abs(p.J))) {
    return std::nullopt;
  }
  if (delta < 0.0) return 0;
  return (p.legs % 2 == 1) ? 1 : 0;
}

}  // namespace sshent
