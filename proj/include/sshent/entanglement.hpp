#pragma once

// Number-resolved quantities of the 2+2-mode edge subsystem: joint number
// distribution, number entropy, projected two-qubit state rho^{1,1} and its
// entanglement, plus fidelity.
//
// Two-qubit encoding: qubit A is |0> = particle in A1, |1> = particle in A2,
// likewise for B. Basis order {A1B1, A1B2, A2B1, A2B2}, index 2a + b, with
// |A_i B_j> = A_i^dagger B_j^dagger |0>.

#include "sshent/gaussian.hpp"

#include <array>
#include <bit>
#include <functional>
#include <vector>

namespace sshent {

struct EdgeSelection {
  ModeIndex A1, A2, B1, B2;

  std::array<ModeIndex, 4> modes() const { return {A1, A2, B1, B2}; }

  void validate(Eigen::Index n_modes) const {
    const auto m = modes();
    for (std::size_t i = 0; i < 4; ++i) {
      if (m[i].value >= static_cast<std::size_t>(n_modes)) throw InvalidParameters("edge mode outside the system");
      for (std::size_t j = i + 1; j < 4; ++j) {
        if (m[i] == m[j]) throw InvalidParameters("edge modes must be distinct");
      }
    }
  }

  /// A1 = a on the first leg and A2 = a on the last leg, both in the first
  /// cell; B1, B2 = b on the same legs in the last cell. Needs M >= 2.
  static EdgeSelection default_for(const LadderParams& p) {
    p.validate();
    if (p.legs < 2) throw InvalidParameters("the default edge selection needs at least two legs");
    const int last = p.legs - 1;
    const int L = p.cells - 1;
    return EdgeSelection{mode_index(p, Sublattice::a, 0, 0), mode_index(p, Sublattice::a, last, 0),
                         mode_index(p, Sublattice::b, 0, L), mode_index(p, Sublattice::b, last, L)};
  }
};

/// p(n_A, n_B), n_A, n_B in {0, 1, 2}.
struct NumberDistribution {
  Eigen::Matrix3d p = Eigen::Matrix3d::Zero();

  double operator()(int nA, int nB) const { return p(nA, nB); }
  double total() const { return p.sum(); }
};

namespace detail {

// Occupation patterns of the four edge modes: bit 0 = A1, 1 = A2, 2 = B1, 3 = B2.
inline std::array<double, 16> pattern_probabilities(const CorrelationMatrix& c, const EdgeSelection& sel) {
  const auto m = sel.modes();
  // moments[S] = <prod_{i in S} n_i> = principal minor of C on S.
  std::array<double, 16> moments{};
  for (unsigned s = 0; s < 16; ++s) {
    std::vector<ModeIndex> idx;
    for (unsigned b = 0; b < 4; ++b) {
      if (s & (1u << b)) idx.push_back(m[b]);
    }
    moments[s] = wick_expectation(c, idx, idx).real();
  }
  // Moebius inversion: P(exactly T) = sum_{S >= T} (-1)^{|S|-|T|} moments[S].
  std::array<double, 16> prob{};
  for (unsigned t = 0; t < 16; ++t) {
    double acc = 0.0;
    for (unsigned s = 0; s < 16; ++s) {
      if ((s & t) != t) continue;
      acc += ((std::popcount(s ^ t) % 2) ? -1.0 : 1.0) * moments[s];
    }
    prob[t] = acc;
  }
  return prob;
}

}  // namespace detail

inline NumberDistribution joint_number_distribution(const CorrelationMatrix& c, const EdgeSelection& sel) {
  sel.validate(c.size());
  const auto prob = detail::pattern_probabilities(c, sel);
  NumberDistribution d;
  for (unsigned t = 0; t < 16; ++t) {
    const int nA = std::popcount(t & 3u);
    const int nB = std::popcount(t & 12u);
    d.p(nA, nB) += prob[t];
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (d.p(i, j) < -1e-12) {
        clamp_nonnegative(d.p(i, j), "number probability");
      }
    }
  return d;
}

/// E_n = -sum p ln p in nats.
inline double number_entropy(const NumberDistribution& d) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double q = clamp_nonnegative(d.p(i, j), "number probability");
      if (q > 0.0) s -= q * std::log(q);
    }
  return s;
}

struct ProjectedDensityMatrix {
  CMatrix rho = CMatrix::Zero(4, 4);
  double weight = 0.0;  // p(1,1)
};

inline constexpr double kEmptySectorTol = 1e-12;

namespace detail {

struct BilinearTerm {
  double coeff;
  std::vector<Bilinear> product;
};

// |X_i'><X_i| restricted to one particle on the pair (first, second), as a
// sum of bilinear products: i != i' gives X_i'^dagger X_i, i == i' gives
// n_i - n_first n_second.
inline std::vector<BilinearTerm> one_particle_transition(ModeIndex first, ModeIndex second, int to, int from) {
  const ModeIndex pair[2] = {first, second};
  if (to != from) return {{1.0, {Bilinear{pair[to], pair[from]}}}};
  return {{1.0, {Bilinear{pair[to], pair[to]}}}, {-1.0, {Bilinear{first, first}, Bilinear{second, second}}}};
}

}  // namespace detail

/// rho^{1,1} from Wick determinants on C. Element (row, col) is
/// <|col><row|> / p(1,1), with |col><row| written as products of bilinears.
inline ProjectedDensityMatrix projected_density_matrix(const CorrelationMatrix& c, const EdgeSelection& sel,
                                                       double empty_tol = kEmptySectorTol) {
  sel.validate(c.size());
  CMatrix raw(4, 4);
  for (int r = 0; r < 4; ++r) {
    for (int col = 0; col < 4; ++col) {
      const auto ta = detail::one_particle_transition(sel.A1, sel.A2, col / 2, r / 2);
      const auto tb = detail::one_particle_transition(sel.B1, sel.B2, col % 2, r % 2);
      cplx acc = 0.0;
      for (const auto& a : ta) {
        for (const auto& b : tb) {
          std::vector<Bilinear> prod = a.product;
          prod.insert(prod.end(), b.product.begin(), b.product.end());
          acc += a.coeff * b.coeff * bilinear_product_expectation(c, prod);
        }
      }
      raw(r, col) = acc;
    }
  }
  const double weight = raw.trace().real();
  if (!(weight > empty_tol)) throw EmptySector("p(1,1) = " + std::to_string(weight) + " is below the sector tolerance");
  ProjectedDensityMatrix out;
  out.rho = 0.5 * (raw + raw.adjoint()) / weight;
  out.weight = weight;
  return out;
}

/// Partial transpose over the first factor of a (dA x dB) bipartite matrix.
inline CMatrix partial_transpose_first(const CMatrix& rho, Eigen::Index dA, Eigen::Index dB) {
  if (rho.rows() != dA * dB || rho.cols() != dA * dB) throw DimensionMismatch("rho does not match dA * dB");
  CMatrix out(rho.rows(), rho.cols());
  for (Eigen::Index a = 0; a < dA; ++a)
    for (Eigen::Index ap = 0; ap < dA; ++ap)
      for (Eigen::Index b = 0; b < dB; ++b)
        for (Eigen::Index bp = 0; bp < dB; ++bp) out(a * dB + b, ap * dB + bp) = rho(ap * dB + b, a * dB + bp);
  return out;
}

/// E_neg = ln ||rho^{T_A}||_1 for a (dA x dB) state.
inline double log_negativity(const CMatrix& rho, Eigen::Index dA, Eigen::Index dB) {
  const CMatrix pt = partial_transpose_first(rho, dA, dB);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (pt + pt.adjoint()), Eigen::EigenvaluesOnly);
  const double norm = es.eigenvalues().cwiseAbs().sum();
  return std::max(0.0, std::log(norm));
}

inline double log_negativity(const CMatrix& rho) { return log_negativity(rho, 2, 2); }

inline CMatrix pauli_y() {
  CMatrix s(2, 2);
  s << 0.0, -I_unit, I_unit, 0.0;
  return s;
}

/// Wootters concurrence of a two-qubit state.
inline double concurrence(const CMatrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) throw DimensionMismatch("concurrence needs a 4x4 state");
  const CMatrix yy = kron(pauli_y(), pauli_y());
  const CMatrix tilde = yy * rho.conjugate() * yy;
  // Eigenvalues of rho * tilde are those of the Hermitian sqrt(rho) tilde sqrt(rho).
  const CMatrix s = psd_sqrt(0.5 * (rho + rho.adjoint()));
  const CMatrix m = s * tilde * s;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  std::array<double, 4> lam{};
  for (int i = 0; i < 4; ++i) lam[static_cast<std::size_t>(i)] = std::sqrt(clamp_nonnegative(es.eigenvalues()(i), "rho rho~ eigenvalue"));
  std::sort(lam.begin(), lam.end(), std::greater<>());
  return std::clamp(lam[0] - lam[1] - lam[2] - lam[3], 0.0, 1.0);
}

/// E_F = h(1/2 + sqrt(1 - C^2)/2) with h the binary entropy in nats.
inline double entanglement_of_formation(const CMatrix& rho) {
  const double c = concurrence(rho);
  const double x = 0.5 + 0.5 * std::sqrt(std::max(0.0, 1.0 - c * c));
  auto term = [](double q) { return q > 0.0 ? -q * std::log(q) : 0.0; };
  return term(x) + term(1.0 - x);
}

enum class EntanglementMeasure { negativity, formation };

inline double entanglement_measure(const CMatrix& rho, EntanglementMeasure m) {
  return m == EntanglementMeasure::negativity ? log_negativity(rho) : entanglement_of_formation(rho);
}

/// E_op = p(1,1) * E[rho^{1,1}]. Every other sector of two 2-mode subsystems
/// is locally a product, so this is the full sum over sectors. An empty
/// (1,1) sector contributes 0.
inline double operational_entanglement(const CorrelationMatrix& c, const EdgeSelection& sel,
                                       EntanglementMeasure m = EntanglementMeasure::negativity) {
  try {
    const auto pdm = projected_density_matrix(c, sel);
    return pdm.weight * entanglement_measure(pdm.rho, m);
  } catch (const EmptySector&) {
    return 0.0;
  }
}

/// Uhlmann fidelity F = (tr sqrt(sqrt(sigma) rho sqrt(sigma)))^2, clamped to [0, 1].
inline double fidelity(const CMatrix& rho, const CMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols() || rho.rows() != rho.cols()) {
    throw DimensionMismatch("fidelity needs density matrices of equal dimension");
  }
  const CMatrix s = psd_sqrt(0.5 * (sigma + sigma.adjoint()));
  const CMatrix m = s * rho * s;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  double tr = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    tr += std::sqrt(clamp_nonnegative(es.eigenvalues()(i), "fidelity eigenvalue"));
  }
  return std::clamp(tr * tr, 0.0, 1.0);
}

}  // namespace sshent
