#pragma once

// Gaussian (free-fermion) states: correlation matrices C_ij = <c_i^dagger c_j>,
// Wick determinants and quadratic time evolution.

#include "sshent/detail/fermi_cluster.hpp"
#include "sshent/model.hpp"

#include <vector>

namespace sshent {

/// C_ij = <c_i^dagger c_j> in the real-space mode basis.
class CorrelationMatrix {
 public:
  CorrelationMatrix() = default;
  explicit CorrelationMatrix(CMatrix c) : c_(std::move(c)) {
    if (c_.rows() != c_.cols()) throw DimensionMismatch("correlation matrix must be square");
  }

  const CMatrix& matrix() const { return c_; }
  Eigen::Index size() const { return c_.rows(); }
  cplx operator()(Eigen::Index i, Eigen::Index j) const { return c_(i, j); }
  cplx operator()(ModeIndex i, ModeIndex j) const {
    return c_(static_cast<Eigen::Index>(i.value), static_cast<Eigen::Index>(j.value));
  }

  double particle_number() const { return c_.trace().real(); }
  double purity_defect() const { return (c_ * c_ - c_).norm(); }
  bool is_pure(double tolerance = 1e-10) const { return purity_defect() < tolerance; }

  /// Hermitian within 1e-12 and spectrum inside [-1e-10, 1 + 1e-10].
  bool is_valid() const {
    if (hermiticity_defect(c_) > 1e-12) return false;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(c_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -1e-10 && es.eigenvalues().maxCoeff() <= 1.0 + 1e-10;
  }

 private:
  CMatrix c_;
};

/// Eigen-decomposition of a real symmetric single-particle Hamiltonian with
/// the Fermi-level cluster resolved for a given filling.
struct SingleParticleSpectrum {
  RVector energies;  // ascending
  RMatrix orbitals;  // columns
  bool refined = false;
};

struct FillingOptions {
  // Fermi-level gap below which double precision cannot order the levels.
  double resolve_below = 1e-10;
  // Neighbouring levels closer than this are refined together.
  double cluster_spacing = 1e-6;
};

/// Diagonalize h. When the gap at the Fermi boundary of `n_filled` is below
/// opt.resolve_below, the near-degenerate cluster is recomputed in quad
/// precision so that filling the lowest levels is well defined. An exact
/// degeneracy (still unresolved in quad) keeps the eigensolver's order.
inline SingleParticleSpectrum diagonalize_for_filling(const RMatrix& h, Eigen::Index n_filled,
                                                      const FillingOptions& opt = {}) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(h);
  SingleParticleSpectrum s{es.eigenvalues(), es.eigenvectors(), false};
  const Eigen::Index N = h.rows();
  if (n_filled <= 0 || n_filled >= N) return s;
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if (s.energies(n_filled) - s.energies(n_filled - 1) >= opt.resolve_below * scale) return s;
  s.refined = detail::refine_fermi_cluster(h, s.energies, s.orbitals, n_filled, opt.cluster_spacing * scale);
  return s;
}

/// Ground-state correlations with the n_filled lowest orbitals occupied:
/// C = sum_n conj(phi_n) phi_n^T.
inline CorrelationMatrix ground_state_correlations(const RMatrix& h, Eigen::Index n_filled,
                                                   const FillingOptions& opt = {}) {
  const Eigen::Index N = h.rows();
  if (h.cols() != N) throw DimensionMismatch("h must be square");
  if (n_filled < 0 || n_filled > N) throw InvalidParameters("n_filled outside [0, N]");
  const SingleParticleSpectrum s = diagonalize_for_filling(h, n_filled, opt);
  const RMatrix occ = s.orbitals.leftCols(n_filled);
  return CorrelationMatrix((occ * occ.transpose()).cast<cplx>());
}

/// Half filling (n_filled = N/2).
inline CorrelationMatrix ground_state_correlations(const RMatrix& h) {
  return ground_state_correlations(h, h.rows() / 2);
}

/// Complex Hermitian h. No cluster refinement: degenerate Fermi levels follow
/// the eigensolver's ascending order.
inline CorrelationMatrix ground_state_correlations(const CMatrix& h, Eigen::Index n_filled) {
  const Eigen::Index N = h.rows();
  if (h.cols() != N) throw DimensionMismatch("h must be square");
  if (n_filled < 0 || n_filled > N) throw InvalidParameters("n_filled outside [0, N]");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const CMatrix occ = es.eigenvectors().leftCols(n_filled);
  return CorrelationMatrix(occ.conjugate() * occ.transpose());
}

/// Fermi-Dirac occupation 1/(1 + e^{beta E}) written to avoid overflow.
inline double fermi_occupation(double beta, double energy) { return 0.5 * (1.0 - std::tanh(0.5 * beta * energy)); }

/// Grand-canonical thermal state at chemical potential 0.
inline CorrelationMatrix thermal_correlations(const RMatrix& h, double beta) {
  if (!(beta >= 0.0)) throw InvalidParameters("beta must be >= 0");
  if (h.cols() != h.rows()) throw DimensionMismatch("h must be square");
  Eigen::SelfAdjointEigenSolver<RMatrix> es(h);
  RVector f(h.rows());
  for (Eigen::Index n = 0; n < f.size(); ++n) f(n) = fermi_occupation(beta, es.eigenvalues()(n));
  const RMatrix& V = es.eigenvectors();
  return CorrelationMatrix((V * f.asDiagonal() * V.transpose()).cast<cplx>());
}

/// Heisenberg-picture propagation of C under a quadratic Hamiltonian h':
/// C(t) = e^{i h'^T t} C e^{-i h'^T t}. The exponential is spectral.
class QuadraticPropagator {
 public:
  explicit QuadraticPropagator(const CMatrix& h_prime) {
    if (h_prime.rows() != h_prime.cols()) throw DimensionMismatch("h' must be square");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h_prime);
    energies_ = es.eigenvalues();
    basis_ = es.eigenvectors().conjugate();  // eigenvectors of h'^T
  }

  CorrelationMatrix apply(const CorrelationMatrix& c, double t) const {
    if (c.size() != basis_.rows()) throw DimensionMismatch("C and h' have different sizes");
    CVector phase(energies_.size());
    for (Eigen::Index n = 0; n < phase.size(); ++n) phase(n) = std::exp(I_unit * energies_(n) * t);
    const CMatrix G = basis_ * phase.asDiagonal() * basis_.adjoint();
    return CorrelationMatrix(G * c.matrix() * G.adjoint());
  }

 private:
  RVector energies_;
  CMatrix basis_;
};

inline CorrelationMatrix evolve(const CorrelationMatrix& c, const CMatrix& h_prime, double t) {
  return QuadraticPropagator(h_prime).apply(c, t);
}

/// <c^dagger_{i1} ... c^dagger_{ip} c_{jp} ... c_{j1}> = det[C_{i_a j_b}].
/// Unequal list lengths give 0; repeated indices vanish through the determinant.
inline cplx wick_expectation(const CorrelationMatrix& c, const std::vector<ModeIndex>& creators,
                             const std::vector<ModeIndex>& annihilators) {
  if (creators.size() != annihilators.size()) return 0.0;
  const auto p = static_cast<Eigen::Index>(creators.size());
  if (p == 0) return 1.0;
  CMatrix m(p, p);
  for (Eigen::Index a = 0; a < p; ++a) {
    for (Eigen::Index b = 0; b < p; ++b) {
      const auto i = creators[static_cast<std::size_t>(a)].value;
      const auto j = annihilators[static_cast<std::size_t>(b)].value;
      if (i >= static_cast<std::size_t>(c.size()) || j >= static_cast<std::size_t>(c.size())) {
        throw InvalidParameters("mode index outside the correlation matrix");
      }
      m(a, b) = c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  if (p == 1) return m(0, 0);
  if (p == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return m.partialPivLu().determinant();
}

/// A single hopping term c^dagger_from c_to.
struct Bilinear {
  ModeIndex creator;
  ModeIndex annihilator;
};

/// Expectation of an ordered product of bilinears, prod_a (c^dagger_{i_a} c_{j_a}),
/// which equals the normal-ordered Wick determinant provided no annihilator
/// j_a coincides with a later creator i_b (b > a). Throws otherwise.
inline cplx bilinear_product_expectation(const CorrelationMatrix& c, const std::vector<Bilinear>& product) {
  std::vector<ModeIndex> cr;
  std::vector<ModeIndex> an;
  for (std::size_t a = 0; a < product.size(); ++a) {
    for (std::size_t b = a + 1; b < product.size(); ++b) {
      if (product[a].annihilator == product[b].creator) {
        throw InvalidParameters("bilinear product needs reordering contractions");
      }
    }
    cr.push_back(product[a].creator);
    an.push_back(product[a].annihilator);
  }
  return wick_expectation(c, cr, an);
}

}  // namespace sshent
