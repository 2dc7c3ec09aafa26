#pragma once

// CHSH correlators on rho^{1,1}, theta scans at zero and finite temperature,
// and the hopping-quench rotation protocol.

#include "sshent/entanglement.hpp"
#include "sshent/sweep.hpp"

#include <optional>
#include <vector>

namespace sshent {

enum class PauliAxis { x, y, z };

inline CMatrix pauli(PauliAxis axis) {
  CMatrix s = CMatrix::Zero(2, 2);
  switch (axis) {
    case PauliAxis::x: s << 0.0, 1.0, 1.0, 0.0; break;
    case PauliAxis::y: s = pauli_y(); break;
    case PauliAxis::z: s << 1.0, 0.0, 0.0, -1.0; break;
  }
  return s;
}

/// cos(theta) sigma_z + sin(theta) sigma_x.
inline CMatrix xz_spin(double theta) {
  return std::cos(theta) * pauli(PauliAxis::z) + std::sin(theta) * pauli(PauliAxis::x);
}

/// tr(rho sigma_a (x) sigma_b).
inline double pauli_correlator(const CMatrix& rho, PauliAxis a, PauliAxis b) {
  if (rho.rows() != 4 || rho.cols() != 4) throw DimensionMismatch("two-qubit state expected");
  return (rho * kron(pauli(a), pauli(b))).trace().real();
}

inline double pauli_correlator(const ProjectedDensityMatrix& pdm, PauliAxis a, PauliAxis b) {
  return pauli_correlator(pdm.rho, a, b);
}

struct ChshAngles {
  double theta_a = 0.0;
  double theta_a_prime = 0.0;
  double theta_b = 0.0;
  double theta_b_prime = 0.0;
};

/// One-parameter angle families for theta scans, all with theta_b = 0.
enum class AngleSchedule {
  a_prime_triple,  // theta_a = t, theta_a' = 3t, theta_b' = 2t (default)
  b_prime_triple,  // theta_a = t, theta_a' = 2t, theta_b' = 3t
};

inline ChshAngles schedule_angles(double theta, AngleSchedule s = AngleSchedule::a_prime_triple) {
  if (s == AngleSchedule::a_prime_triple) return ChshAngles{theta, 3.0 * theta, 0.0, 2.0 * theta};
  return ChshAngles{theta, 2.0 * theta, 0.0, 3.0 * theta};
}

inline std::string to_string(AngleSchedule s) {
  return s == AngleSchedule::a_prime_triple ? "a_prime_triple" : "b_prime_triple";
}

inline AngleSchedule schedule_from_string(const std::string& s) {
  if (s == "a_prime_triple") return AngleSchedule::a_prime_triple;
  if (s == "b_prime_triple") return AngleSchedule::b_prime_triple;
  throw InvalidParameters("unknown angle schedule '" + s + "' (expected a_prime_triple or b_prime_triple)");
}

/// Sigma = E(a,b) - E(a',b) + E(a,b') + E(a',b').
inline double chsh_sigma(const CMatrix& rho, const ChshAngles& ang) {
  if (rho.rows() != 4 || rho.cols() != 4) throw DimensionMismatch("two-qubit state expected");
  auto E = [&rho](double ta, double tb) { return (rho * kron(xz_spin(ta), xz_spin(tb))).trace().real(); };
  return E(ang.theta_a, ang.theta_b) - E(ang.theta_a_prime, ang.theta_b) + E(ang.theta_a, ang.theta_b_prime) +
         E(ang.theta_a_prime, ang.theta_b_prime);
}

struct ChshPoint {
  double theta = 0.0;
  std::optional<double> sigma;  // empty when the (1,1) sector is empty
};

/// Sigma(theta) over the angle schedule on rho^{1,1}(C).
inline std::vector<ChshPoint> chsh_scan(const CorrelationMatrix& c, const EdgeSelection& sel,
                                        const std::vector<double>& thetas,
                                        AngleSchedule schedule = AngleSchedule::a_prime_triple) {
  std::vector<ChshPoint> out;
  out.reserve(thetas.size());
  std::optional<ProjectedDensityMatrix> pdm;
  try {
    pdm = projected_density_matrix(c, sel);
  } catch (const EmptySector&) {
  }
  for (double t : thetas) {
    ChshPoint pt{t, std::nullopt};
    if (pdm) pt.sigma = chsh_sigma(pdm->rho, schedule_angles(t, schedule));
    out.push_back(pt);
  }
  return out;
}

/// Largest defined Sigma in a scan, if any.
inline std::optional<double> max_sigma(const std::vector<ChshPoint>& scan) {
  std::optional<double> best;
  for (const auto& p : scan) {
    if (p.sigma && (!best || *p.sigma > *best)) best = p.sigma;
  }
  return best;
}

/// `n` equally spaced angles covering [0, pi].
inline std::vector<double> theta_grid(int n = 181) {
  if (n < 2) throw InvalidParameters("theta grid needs at least two points");
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = kPi * i / (n - 1);
  return t;
}

/// chsh_scan on the grand-canonical thermal state at mu = 0.
inline std::vector<ChshPoint> thermal_chsh(const LadderParams& p, const EdgeSelection& sel, double beta,
                                           const std::vector<double>& thetas,
                                           AngleSchedule schedule = AngleSchedule::a_prime_triple) {
  return chsh_scan(thermal_correlations(real_space_hamiltonian(p), beta), sel, thetas, schedule);
}

struct ProtocolResult {
  std::vector<double> times;
  std::vector<double> F1;
  std::vector<double> F2;
};

/// h' = h + lambda B1^dagger B2 + lambda^* B2^dagger B1 with lambda = -i kappa,
/// i.e. kappa sigma_y on qubit B.
inline CMatrix protocol_hamiltonian(const RMatrix& h, const EdgeSelection& sel, double kappa) {
  CMatrix hp = h.cast<cplx>();
  const auto b1 = static_cast<Eigen::Index>(sel.B1.value);
  const auto b2 = static_cast<Eigen::Index>(sel.B2.value);
  const cplx lambda = -I_unit * kappa;
  hp(b1, b2) += lambda;
  hp(b2, b1) += std::conj(lambda);
  return hp;
}

/// R = exp(-i pi/4 sigma_y), a pi/2 rotation about y.
inline CMatrix protocol_rotation() {
  const double r = 1.0 / std::sqrt(2.0);
  CMatrix R(2, 2);
  R << r, -r, r, r;
  return R;
}

/// `n` equally spaced times on [0, t_max].
inline std::vector<double> time_grid(double t_max = 20.0, int n = 200) {
  if (n < 1) throw InvalidParameters("time grid needs at least one point");
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = (n == 1) ? 0.0 : t_max * i / (n - 1);
  return t;
}

/// Quench the ground state with h' and track F1 = F(rho, sigma(t)) and
/// F2 = F((1 (x) R) rho (1 (x) R)^dagger, sigma(t)).
inline ProtocolResult rotation_protocol(const LadderParams& p, const EdgeSelection& sel, double kappa,
                                        const std::vector<double>& times, unsigned workers = 1) {
  const RMatrix h = real_space_hamiltonian(p);
  sel.validate(h.rows());
  const CorrelationMatrix c0 = ground_state_correlations(h);
  const ProjectedDensityMatrix rho = projected_density_matrix(c0, sel);
  const CMatrix rot = kron(CMatrix::Identity(2, 2), protocol_rotation());
  const CMatrix rho_rot = rot * rho.rho * rot.adjoint();
  const QuadraticPropagator prop(protocol_hamiltonian(h, sel, kappa));

  ProtocolResult out;
  out.times = times;
  const auto pairs = parallel_map(times.size(), workers, [&](std::size_t i) {
    const ProjectedDensityMatrix sigma = projected_density_matrix(prop.apply(c0, times[i]), sel);
    return std::pair<double, double>{fidelity(rho.rho, sigma.rho), fidelity(rho_rot, sigma.rho)};
  });
  for (const auto& [f1, f2] : pairs) {
    out.F1.push_back(f1);
    out.F2.push_back(f2);
  }
  return out;
}

}  // namespace sshent
