#pragma once

#include "sshent/sshent.hpp"

#include <random>

namespace testing_support {

using namespace sshent;

inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

/// Random density matrix of dimension d from a Ginibre matrix.
inline CMatrix random_density_matrix(std::mt19937_64& rng, Eigen::Index d) {
  std::normal_distribution<double> g;
  CMatrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = cplx(g(rng), g(rng));
  CMatrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

inline CMatrix projector(const CVector& v) { return v * v.adjoint() / v.squaredNorm(); }

/// Two-qubit state vector in the {00, 01, 10, 11} ordering.
inline CVector qubits(cplx a00, cplx a01, cplx a10, cplx a11) {
  CVector v(4);
  v << a00, a01, a10, a11;
  return v / v.norm();
}

inline LadderParams random_ladder(std::mt19937_64& rng, int legs, int cells, Boundary b = Boundary::open) {
  std::uniform_real_distribution<double> u(-0.95, 0.95);
  LadderParams p{legs, cells, 1.0, std::vector<double>(static_cast<std::size_t>(legs)), u(rng), b};
  for (auto& d : p.deltas) d = u(rng);
  return p;
}

}  // namespace testing_support
