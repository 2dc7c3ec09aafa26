#pragma once

// Brute-force many-body reference for tiny ladders. States live on the full
// 2^N occupation basis; bit i of a basis label is the occupation of mode i.
//
// Fermionic sign convention: c_i^dagger and c_i pick up (-1)^(number of
// occupied modes with index below i).

#include "sshent/entanglement.hpp"

#include <bit>
#include <cstdint>
#include <vector>

namespace sshent {

inline constexpr int kMaxFockModes = 14;

struct FockState {
  int n_modes = 0;
  CVector amplitudes;  // size 2^n_modes

  double norm() const { return amplitudes.norm(); }
};

namespace detail {

inline void check_fock_size(Eigen::Index n_modes) {
  if (n_modes > kMaxFockModes) {
    throw TooLarge("Fock oracle is capped at " + std::to_string(kMaxFockModes) + " modes, got " +
                   std::to_string(n_modes));
  }
}

inline double jw_sign(std::uint32_t state, int mode) {
  return (std::popcount(state & ((std::uint32_t{1} << mode) - 1u)) % 2) ? -1.0 : 1.0;
}

}  // namespace detail

/// A single c_i (dagger = false) or c_i^dagger (dagger = true).
struct FermionOp {
  ModeIndex mode;
  bool dagger = false;
};

inline FermionOp create(ModeIndex m) { return {m, true}; }
inline FermionOp annihilate(ModeIndex m) { return {m, false}; }
inline FermionOp create(std::size_t m) { return {ModeIndex{m}, true}; }
inline FermionOp annihilate(std::size_t m) { return {ModeIndex{m}, false}; }

/// Apply an operator string (written left to right, acting right to left).
inline CVector apply_string(const std::vector<FermionOp>& ops, const CVector& v, int n_modes) {
  CVector cur = v;
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    const int m = static_cast<int>(it->mode.value);
    if (m < 0 || m >= n_modes) throw InvalidParameters("operator references a mode outside the system");
    const std::uint32_t bit = std::uint32_t{1} << m;
    CVector next = CVector::Zero(cur.size());
    for (std::uint32_t s = 0; s < static_cast<std::uint32_t>(cur.size()); ++s) {
      if (cur(s) == 0.0) continue;
      const bool occ = (s & bit) != 0;
      if (occ == it->dagger) continue;
      next(s ^ bit) += detail::jw_sign(s, m) * cur(s);
    }
    cur = std::move(next);
  }
  return cur;
}

/// <psi| ops |psi>.
inline cplx fock_expectation(const FockState& psi, const std::vector<FermionOp>& ops) {
  return psi.amplitudes.dot(apply_string(ops, psi.amplitudes, psi.n_modes));
}

struct OperatorTerm {
  cplx coeff = 1.0;
  std::vector<FermionOp> ops;
};

/// Expectation of a linear combination of operator strings.
inline cplx fock_expectation(const FockState& psi, const std::vector<OperatorTerm>& terms) {
  cplx acc = 0.0;
  for (const auto& t : terms) acc += t.coeff * fock_expectation(psi, t.ops);
  return acc;
}

/// Basis labels with exactly n particles, ascending.
inline std::vector<std::uint32_t> sector_basis(int n_modes, int n_particles) {
  std::vector<std::uint32_t> basis;
  for (std::uint32_t s = 0; s < (std::uint32_t{1} << n_modes); ++s) {
    if (std::popcount(s) == n_particles) basis.push_back(s);
  }
  return basis;
}

/// Matrix of sum_ij c_i^dagger h_ij c_j on the n-particle sector.
inline CMatrix sector_hamiltonian(const CMatrix& h, const std::vector<std::uint32_t>& basis) {
  const auto N = static_cast<int>(h.rows());
  std::vector<Eigen::Index> position(std::size_t{1} << N, -1);
  for (std::size_t k = 0; k < basis.size(); ++k) position[basis[k]] = static_cast<Eigen::Index>(k);
  const auto D = static_cast<Eigen::Index>(basis.size());
  CMatrix H = CMatrix::Zero(D, D);
  for (Eigen::Index col = 0; col < D; ++col) {
    const std::uint32_t s = basis[static_cast<std::size_t>(col)];
    for (int j = 0; j < N; ++j) {
      if (!(s & (std::uint32_t{1} << j))) continue;
      const double sj = detail::jw_sign(s, j);
      const std::uint32_t s1 = s ^ (std::uint32_t{1} << j);
      for (int i = 0; i < N; ++i) {
        const cplx hij = h(i, j);
        if (hij == 0.0 || (s1 & (std::uint32_t{1} << i))) continue;
        const double si = detail::jw_sign(s1, i);
        H(position[s1 | (std::uint32_t{1} << i)], col) += hij * si * sj;
      }
    }
  }
  return H;
}

/// Lowest eigenvector of the n-particle sector of sum_ij c_i^dagger h_ij c_j.
/// Phase fix: first amplitude above 1e-12 in magnitude is made real positive.
inline FockState fock_ground_state(const CMatrix& h, int n_particles, double* energy = nullptr) {
  const auto N = static_cast<int>(h.rows());
  detail::check_fock_size(N);
  if (h.cols() != N) throw DimensionMismatch("h must be square");
  if (n_particles < 0 || n_particles > N) throw InvalidParameters("particle number outside [0, N]");
  const auto basis = sector_basis(N, n_particles);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sector_hamiltonian(h, basis));
  CVector g = es.eigenvectors().col(0);
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    if (std::abs(g(k)) > 1e-12) {
      g *= std::abs(g(k)) / g(k);
      break;
    }
  }
  if (energy) *energy = es.eigenvalues()(0);
  FockState psi{N, CVector::Zero(Eigen::Index{1} << N)};
  for (std::size_t k = 0; k < basis.size(); ++k) psi.amplitudes(basis[k]) = g(static_cast<Eigen::Index>(k));
  return psi;
}

inline FockState fock_ground_state(const LadderParams& p, int n_particles, double* energy = nullptr) {
  detail::check_fock_size(static_cast<Eigen::Index>(p.n_modes()));
  return fock_ground_state(CMatrix(real_space_hamiltonian(p).cast<cplx>()), n_particles, energy);
}

/// Half filling.
inline FockState fock_ground_state(const LadderParams& p) {
  return fock_ground_state(p, static_cast<int>(p.n_modes() / 2));
}

/// exp(-i H t) |psi> for the quadratic H = sum c^dagger h c, exact in each sector.
inline FockState fock_evolve(const FockState& psi, const CMatrix& h, double t) {
  if (h.rows() != psi.n_modes) throw DimensionMismatch("h and state have different mode counts");
  FockState out{psi.n_modes, CVector::Zero(psi.amplitudes.size())};
  for (int n = 0; n <= psi.n_modes; ++n) {
    const auto basis = sector_basis(psi.n_modes, n);
    CVector v(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k) v(static_cast<Eigen::Index>(k)) = psi.amplitudes(basis[k]);
    if (v.norm() == 0.0) continue;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(sector_hamiltonian(h, basis));
    CVector ph(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < ph.size(); ++i) ph(i) = std::exp(-I_unit * es.eigenvalues()(i) * t);
    const CVector w = es.eigenvectors() * ph.asDiagonal() * (es.eigenvectors().adjoint() * v);
    for (std::size_t k = 0; k < basis.size(); ++k) out.amplitudes(basis[k]) = w(static_cast<Eigen::Index>(k));
  }
  return out;
}

/// C_ij = <c_i^dagger c_j>.
inline CorrelationMatrix fock_correlations(const FockState& psi) {
  const auto N = static_cast<Eigen::Index>(psi.n_modes);
  CMatrix c(N, N);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = 0; j < N; ++j)
      c(i, j) = fock_expectation(psi, {create(static_cast<std::size_t>(i)), annihilate(static_cast<std::size_t>(j))});
  return CorrelationMatrix(c);
}

/// Exact reduced state of the four edge modes as a 16x16 matrix over local
/// occupation patterns t (bit 0 = A1, 1 = A2, 2 = B1, 3 = B2), with
/// |t> = product of creators in the order A1, A2, B1, B2 acting on |0>.
/// Element (t, t') = <psi| |t'><t| |psi>.
inline CMatrix fock_edge_state(const FockState& psi, const EdgeSelection& sel) {
  sel.validate(psi.n_modes);
  const auto m = sel.modes();
  std::uint32_t local_mask = 0;
  for (const auto& mi : m) local_mask |= std::uint32_t{1} << mi.value;
  std::vector<CVector> phi(16);
  for (unsigned t = 0; t < 16; ++t) {
    // Annihilators in reverse creation order: c_{m_k} ... c_{m_1} |psi>.
    std::vector<FermionOp> ops;
    for (unsigned b = 0; b < 4; ++b) {
      if (t & (1u << b)) ops.push_back(annihilate(m[b]));
    }
    CVector v = apply_string(ops, psi.amplitudes, psi.n_modes);
    for (Eigen::Index s = 0; s < v.size(); ++s) {
      if (static_cast<std::uint32_t>(s) & local_mask) v(s) = 0.0;
    }
    phi[t] = std::move(v);
  }
  CMatrix rho(16, 16);
  for (unsigned t = 0; t < 16; ++t)
    for (unsigned tp = 0; tp < 16; ++tp) rho(t, tp) = phi[tp].dot(phi[t]);
  return rho;
}

namespace detail {

// Patterns of one side (two modes, bits `lo` and `lo+1`) with n particles.
inline std::vector<unsigned> side_patterns(unsigned lo, int n) {
  std::vector<unsigned> out;
  for (unsigned x = 0; x < 4; ++x) {
    if (std::popcount(x) == n) out.push_back(x << lo);
  }
  return out;
}

}  // namespace detail

/// Unnormalized block of the edge state for the sector (n_A, n_B), ordered
/// A-configuration major.
inline CMatrix fock_sector_block(const CMatrix& edge, int nA, int nB) {
  const auto as = detail::side_patterns(0, nA);
  const auto bs = detail::side_patterns(2, nB);
  const auto dB = static_cast<Eigen::Index>(bs.size());
  const auto d = static_cast<Eigen::Index>(as.size()) * dB;
  CMatrix blk(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) {
      const unsigned tr = as[static_cast<std::size_t>(r / dB)] | bs[static_cast<std::size_t>(r % dB)];
      const unsigned tc = as[static_cast<std::size_t>(c / dB)] | bs[static_cast<std::size_t>(c % dB)];
      blk(r, c) = edge(tr, tc);
    }
  return blk;
}

inline NumberDistribution fock_number_distribution(const FockState& psi, const EdgeSelection& sel) {
  const CMatrix edge = fock_edge_state(psi, sel);
  NumberDistribution d;
  for (int nA = 0; nA <= 2; ++nA)
    for (int nB = 0; nB <= 2; ++nB) d.p(nA, nB) = fock_sector_block(edge, nA, nB).trace().real();
  return d;
}

inline ProjectedDensityMatrix fock_projected_density_matrix(const FockState& psi, const EdgeSelection& sel) {
  const CMatrix blk = fock_sector_block(fock_edge_state(psi, sel), 1, 1);
  const double w = blk.trace().real();
  if (!(w > kEmptySectorTol)) throw EmptySector("p(1,1) is below the sector tolerance");
  return ProjectedDensityMatrix{blk / w, w};
}

/// sum over all nine sectors of p(n_A, n_B) E[rho^{n_A, n_B}].
inline double fock_operational_entanglement(const FockState& psi, const EdgeSelection& sel,
                                            EntanglementMeasure measure = EntanglementMeasure::negativity) {
  detail::check_fock_size(psi.n_modes);
  const CMatrix edge = fock_edge_state(psi, sel);
  double total = 0.0;
  for (int nA = 0; nA <= 2; ++nA) {
    for (int nB = 0; nB <= 2; ++nB) {
      const CMatrix blk = fock_sector_block(edge, nA, nB);
      const double w = blk.trace().real();
      if (!(w > kEmptySectorTol)) continue;
      const Eigen::Index dA = (nA == 1) ? 2 : 1;
      const Eigen::Index dB = (nB == 1) ? 2 : 1;
      double e = 0.0;
      if (dA == 2 && dB == 2) {
        e = entanglement_measure(blk / w, measure);
      } else if (measure == EntanglementMeasure::negativity) {
        e = log_negativity(blk / w, dA, dB);
      }
      total += w * e;
    }
  }
  return total;
}

}  // namespace sshent
