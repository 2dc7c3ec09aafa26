#pragma once

// M-leg SSH ladder: Bloch and real-space single-particle Hamiltonians and the
// chiral-symmetry unitaries.
//
// Basis convention (chiral ordering). Sites split into two chiral blocks:
//   block 0 (chiral +1): a on odd legs, b on even legs   (a1, b2, a3, ...)
//   block 1 (chiral -1): b on odd legs, a on even legs   (b1, a2, b3, ...)
// Legs are 1-based in physics notation and 0-based in code, so "odd leg"
// means leg index 0, 2, 4, ...
//
//   Bloch index      = block * M + leg
//   real-space index = block * M * L + cell * M + leg
//
// In this basis every Bloch Hamiltonian is [[0, D(k)], [D(k)^dagger, 0]] and
// the chiral unitary of the ladder is diag(1_M, -1_M).

#include "sshent/core.hpp"

#include <cstddef>
#include <iostream>
#include <string>
#include <vector>

namespace sshent {

enum class Boundary { open, periodic };
enum class Sublattice { a, b };

/// Chiral symmetry flavours: the ladder symmetry S, and the two extra
/// symmetries that exist only for M=2 with delta1=delta2 (S2) and M=3 with
/// delta1=delta3 (S3).
enum class SymmetryKind { S, S2, S3 };

inline std::string to_string(SymmetryKind kind) {
  switch (kind) {
    case SymmetryKind::S: return "S";
    case SymmetryKind::S2: return "S2";
    case SymmetryKind::S3: return "S3";
  }
  return "?";
}

inline SymmetryKind symmetry_from_string(const std::string& s) {
  if (s == "S") return SymmetryKind::S;
  if (s == "S2") return SymmetryKind::S2;
  if (s == "S3") return SymmetryKind::S3;
  throw InvalidParameters("unknown symmetry kind '" + s + "' (expected S, S2 or S3)");
}

struct LadderParams {
  int legs = 1;     // M
  int cells = 1;    // L
  double J = 1.0;   // intrachain hopping scale
  std::vector<double> deltas{0.0};
  double z = 0.0;   // interchain hopping
  Boundary boundary = Boundary::open;

  static LadderParams uniform(int legs, int cells, double delta, double z,
                              Boundary boundary = Boundary::open) {
    return LadderParams{legs, cells, 1.0, std::vector<double>(static_cast<std::size_t>(legs), delta), z,
                        boundary};
  }

  std::size_t bloch_dim() const { return 2 * static_cast<std::size_t>(legs); }
  std::size_t n_modes() const { return 2 * static_cast<std::size_t>(legs) * static_cast<std::size_t>(cells); }

  void validate() const {
    if (legs < 1) throw InvalidParameters("legs must be >= 1");
    if (cells < 1) throw InvalidParameters("cells must be >= 1");
    if (deltas.size() != static_cast<std::size_t>(legs)) {
      throw InvalidParameters("deltas must have exactly " + std::to_string(legs) + " entries, got " +
                              std::to_string(deltas.size()));
    }
    for (double d : deltas) {
      if (!std::isfinite(d)) throw InvalidParameters("deltas must be finite");
    }
    if (!std::isfinite(J) || !std::isfinite(z)) throw InvalidParameters("J and z must be finite");
  }

  /// True when some |delta_s| >= 1 (allowed, but outside the usual dimerized regime).
  bool has_extreme_dimerization() const {
    return std::any_of(deltas.begin(), deltas.end(), [](double d) { return std::abs(d) >= 1.0; });
  }
};

struct ModeIndex {
  std::size_t value = 0;
  friend bool operator==(ModeIndex, ModeIndex) = default;
  friend auto operator<=>(ModeIndex, ModeIndex) = default;
};

struct SiteLabel {
  Sublattice sublattice;
  int leg;   // 0-based
  int cell;  // 0-based
  friend bool operator==(const SiteLabel&, const SiteLabel&) = default;
};

/// Chiral block (0 or 1) of a site.
inline int chiral_block(Sublattice s, int leg) {
  const bool even_index = (leg % 2) == 0;
  return ((s == Sublattice::a) == even_index) ? 0 : 1;
}

/// Position of (sublattice, leg) inside the 2M-dimensional Bloch basis.
inline std::size_t bloch_index(int legs, Sublattice s, int leg) {
  return static_cast<std::size_t>(chiral_block(s, leg) * legs + leg);
}

/// Real-space mode index of site (sublattice, leg, cell); all 0-based.
inline ModeIndex mode_index(const LadderParams& p, Sublattice s, int leg, int cell) {
  if (leg < 0 || leg >= p.legs || cell < 0 || cell >= p.cells) {
    throw InvalidParameters("site (leg=" + std::to_string(leg) + ", cell=" + std::to_string(cell) +
                            ") outside the ladder");
  }
  const auto block = static_cast<std::size_t>(chiral_block(s, leg));
  const auto M = static_cast<std::size_t>(p.legs);
  const auto L = static_cast<std::size_t>(p.cells);
  return ModeIndex{block * M * L + static_cast<std::size_t>(cell) * M + static_cast<std::size_t>(leg)};
}

/// Inverse of mode_index.
inline SiteLabel site_label(const LadderParams& p, ModeIndex idx) {
  const auto M = static_cast<std::size_t>(p.legs);
  const auto L = static_cast<std::size_t>(p.cells);
  if (idx.value >= 2 * M * L) throw InvalidParameters("mode index out of range");
  const std::size_t block = idx.value / (M * L);
  const std::size_t rest = idx.value % (M * L);
  const int cell = static_cast<int>(rest / M);
  const int leg = static_cast<int>(rest % M);
  const bool even_index = (leg % 2) == 0;
  const Sublattice s = ((block == 0) == even_index) ? Sublattice::a : Sublattice::b;
  return SiteLabel{s, leg, cell};
}

/// x_s(k) = J[(1 - delta_s) + (1 + delta_s) e^{-ik}].
inline cplx dimer_amplitude(const LadderParams& p, int leg, double k) {
  const double d = p.deltas[static_cast<std::size_t>(leg)];
  return p.J * ((1.0 - d) + (1.0 + d) * std::exp(-I_unit * k));
}

/// Upper-right block D(k) of the Bloch Hamiltonian.
inline CMatrix bloch_offdiagonal(const LadderParams& p, double k) {
  const int M = p.legs;
  CMatrix D = CMatrix::Zero(M, M);
  for (int s = 0; s < M; ++s) {
    const cplx x = dimer_amplitude(p, s, k);
    D(s, s) = (s % 2 == 0) ? x : std::conj(x);
    if (s + 1 < M) {
      D(s, s + 1) = p.z;
      D(s + 1, s) = p.z;
    }
  }
  return D;
}

inline CMatrix chiral_embed(const CMatrix& D) {
  const Eigen::Index M = D.rows();
  CMatrix H = CMatrix::Zero(2 * M, 2 * M);
  H.topRightCorner(M, M) = D;
  H.bottomLeftCorner(M, M) = D.adjoint();
  return H;
}

/// 2M x 2M Bloch Hamiltonian H(k) in the chiral ordering.
inline CMatrix bloch_hamiltonian(const LadderParams& p, double k) {
  p.validate();
  return chiral_embed(bloch_offdiagonal(p, k));
}

/// Exact k-derivative of bloch_hamiltonian.
inline CMatrix bloch_hamiltonian_derivative(const LadderParams& p, double k) {
  const int M = p.legs;
  CMatrix dD = CMatrix::Zero(M, M);
  for (int s = 0; s < M; ++s) {
    const double d = p.deltas[static_cast<std::size_t>(s)];
    const cplx dx = p.J * (1.0 + d) * (-I_unit) * std::exp(-I_unit * k);
    dD(s, s) = (s % 2 == 0) ? dx : std::conj(dx);
  }
  return chiral_embed(dD);
}

/// Single-particle hopping matrix h with H = sum_ij c_i^dagger h_ij c_j, in
/// the chiral real-space ordering. Real symmetric.
inline RMatrix real_space_hamiltonian(const LadderParams& p) {
  p.validate();
  const auto N = static_cast<Eigen::Index>(p.n_modes());
  RMatrix h = RMatrix::Zero(N, N);
  auto link = [&h](ModeIndex i, ModeIndex j, double t) {
    const auto a = static_cast<Eigen::Index>(i.value);
    const auto b = static_cast<Eigen::Index>(j.value);
    h(a, b) += t;
    h(b, a) += t;
  };
  for (int s = 0; s < p.legs; ++s) {
    const double d = p.deltas[static_cast<std::size_t>(s)];
    for (int j = 0; j < p.cells; ++j) {
      link(mode_index(p, Sublattice::a, s, j), mode_index(p, Sublattice::b, s, j), p.J * (1.0 - d));
      const bool last = (j + 1 == p.cells);
      if (!last || p.boundary == Boundary::periodic) {
        // With a single cell the wrap-around bond doubles up on the intracell pair; that is the
        // correct L=1 periodic limit.
        link(mode_index(p, Sublattice::b, s, j), mode_index(p, Sublattice::a, s, (j + 1) % p.cells),
             p.J * (1.0 + d));
      }
      if (s + 1 < p.legs) {
        link(mode_index(p, Sublattice::a, s, j), mode_index(p, Sublattice::a, s + 1, j), p.z);
        link(mode_index(p, Sublattice::b, s, j), mode_index(p, Sublattice::b, s + 1, j), p.z);
      }
    }
  }
  return h;
}

/// Real-space chiral operator diag(+1, -1) matching real_space_hamiltonian.
inline RVector real_space_chirality(const LadderParams& p) {
  const auto half = static_cast<Eigen::Index>(p.n_modes() / 2);
  RVector g(2 * half);
  g.head(half).setOnes();
  g.tail(half).setConstant(-1.0);
  return g;
}

namespace detail {
inline bool nearly_equal(double a, double b) { return std::abs(a - b) <= 1e-12; }
}  // namespace detail

/// Throws InvalidSymmetry unless `kind` is a symmetry of the given ladder.
inline void check_symmetry(const LadderParams& p, SymmetryKind kind) {
  switch (kind) {
    case SymmetryKind::S: return;
    case SymmetryKind::S2:
      if (p.legs != 2 || !detail::nearly_equal(p.deltas[0], p.deltas[1])) {
        throw InvalidSymmetry("S2 requires M=2 and delta1=delta2");
      }
      return;
    case SymmetryKind::S3:
      if (p.legs != 3 || !detail::nearly_equal(p.deltas[0], p.deltas[2])) {
        throw InvalidSymmetry("S3 requires M=3 and delta1=delta3");
      }
      return;
  }
}

/// Momentum-independent chiral unitary U with U H(k) U^dagger = -H(k).
inline CMatrix chiral_unitary(const LadderParams& p, SymmetryKind kind) {
  p.validate();
  check_symmetry(p, kind);
  const auto n = static_cast<Eigen::Index>(p.bloch_dim());
  CMatrix U = CMatrix::Zero(n, n);
  switch (kind) {
    case SymmetryKind::S:
      for (Eigen::Index i = 0; i < n; ++i) U(i, i) = (i < n / 2) ? 1.0 : -1.0;
      break;
    case SymmetryKind::S2:
      U(0, 3) = I_unit;
      U(1, 2) = I_unit;
      U(2, 1) = -I_unit;
      U(3, 0) = -I_unit;
      break;
    case SymmetryKind::S3:
      U(0, 2) = 1.0;
      U(1, 1) = 1.0;
      U(2, 0) = 1.0;
      U(3, 5) = -1.0;
      U(4, 4) = -1.0;
      U(5, 3) = -1.0;
      break;
  }
  return U;
}

inline std::ostream& operator<<(std::ostream& os, const LadderParams& p) {
  os << "LadderParams{M=" << p.legs << ", L=" << p.cells << ", J=" << p.J << ", deltas=[";
  for (std::size_t i = 0; i < p.deltas.size(); ++i) os << (i ? "," : "") << p.deltas[i];
  return os << "], z=" << p.z << ", " << (p.boundary == Boundary::open ? "open" : "periodic") << "}";
}

}  // namespace sshent
