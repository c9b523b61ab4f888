#pragma once

// Dense complex linear algebra for small multi-qubit operators (dimension <= 64).

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cqfi/errors.hpp"

namespace cqfi {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using CMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using CVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using MatrixXc = CMatrix<double>;
using VectorXc = CVector<double>;

inline constexpr int kMaxQubits = 6;
inline constexpr Eigen::Index kMaxDimension = Eigen::Index{1} << kMaxQubits;
inline constexpr double kHermitianTolerance = 1e-12;

/// 2x2 matrix of sigma_index; index 0 is the identity.
template <typename Real = double>
CMatrix<Real> pauli(int index) {
  using C = Complex<Real>;
  CMatrix<Real> m(2, 2);
  switch (index) {
    case 0: m << C(1), C(0), C(0), C(1); break;
    case 1: m << C(0), C(1), C(1), C(0); break;
    case 2: m << C(0), C(0, -1), C(0, 1), C(0); break;
    case 3: m << C(1), C(0), C(0), C(-1); break;
    default:
      throw std::invalid_argument("pauli: index must be in {0,1,2,3}, got " + std::to_string(index));
  }
  return m;
}

/// Kronecker product a (x) b. The first factor indexes the most significant bits.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  static_assert(std::is_same_v<typename DerivedA::Scalar, typename DerivedB::Scalar>,
                "kron: scalar types must match");
  const Eigen::Index rows = a.rows() * b.rows();
  const Eigen::Index cols = a.cols() * b.cols();
  if (rows > kMaxDimension || cols > kMaxDimension) {
    throw capacity_error("kron: result " + std::to_string(rows) + "x" + std::to_string(cols) +
                         " exceeds the maximum dimension " + std::to_string(kMaxDimension));
  }
  Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Largest |h - h^dagger| entry.
template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real hermitian_deviation(
    const Eigen::MatrixBase<Derived>& h) {
  if (h.rows() != h.cols()) {
    return std::numeric_limits<typename Eigen::NumTraits<typename Derived::Scalar>::Real>::infinity();
  }
  if (h.size() == 0) return 0;
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& h, double tol = kHermitianTolerance) {
  return h.rows() == h.cols() && hermitian_deviation(h) <= tol;
}

template <typename Real>
struct EigenSystem {
  RVector<Real> eigenvalues;   // ascending
  CMatrix<Real> eigenvectors;  // column k pairs with eigenvalues[k]
};

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Eigenvalues are returned in ascending order, ties kept in the order in
/// which they end up on the diagonal. Throws contract_violation when `h` is
/// not Hermitian within `hermitian_tol` and numerical_error when the sweeps
/// fail to converge.
template <typename Real>
EigenSystem<Real> eigh(const CMatrix<Real>& h, Real hermitian_tol = Real(kHermitianTolerance)) {
  using C = Complex<Real>;
  if (h.rows() != h.cols()) {
    throw contract_violation("eigh: matrix is not square");
  }
  if (h.rows() > kMaxDimension) {
    throw capacity_error("eigh: dimension exceeds " + std::to_string(kMaxDimension));
  }
  const Real dev = hermitian_deviation(h);
  if (!(dev <= hermitian_tol)) {
    throw contract_violation("eigh: matrix is not Hermitian (max deviation " + std::to_string(dev) + ")");
  }

  const Eigen::Index n = h.rows();
  CMatrix<Real> a = (h + h.adjoint()) / Real(2);
  for (Eigen::Index i = 0; i < n; ++i) a(i, i) = C(a(i, i).real(), 0);
  CMatrix<Real> v = CMatrix<Real>::Identity(n, n);

  const Real eps = std::numeric_limits<Real>::epsilon();
  const Real scale = a.norm();
  constexpr int kMaxSweeps = 60;

  auto off_norm = [&] {
    Real s = 0;
    for (Eigen::Index q = 1; q < n; ++q)
      for (Eigen::Index p = 0; p < q; ++p) s += std::norm(a(p, q));
    return std::sqrt(2 * s);
  };

  bool converged = n < 2 || scale == Real(0);
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    if (off_norm() <= eps * scale) {
      converged = true;
      break;
    }
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const C apq = a(p, q);
        const Real r = std::abs(apq);
        if (r == Real(0)) continue;
        // Negligible relative to both diagonal entries: zero it outright.
        if (sweep > 3 && r <= eps * eps * (std::abs(a(p, p).real()) + std::abs(a(q, q).real()))) {
          a(p, q) = a(q, p) = C(0);
          continue;
        }
        const C e = apq / r;  // phase of a_pq
        const Real tau = (a(q, q).real() - a(p, p).real()) / (2 * r);
        const Real t = (tau >= 0 ? Real(1) : Real(-1)) / (std::abs(tau) + std::sqrt(1 + tau * tau));
        const Real c = 1 / std::sqrt(1 + t * t);
        const Real s = t * c;
        // G = diag(1, conj(e)) * [[c, s], [-s, c]]; a <- G^dagger a G, v <- v G.
        const C g_qp = -s * std::conj(e);
        const C g_qq = c * std::conj(e);
        for (Eigen::Index k = 0; k < n; ++k) {
          const C akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * c + akq * g_qp;
          a(k, q) = akp * s + akq * g_qq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const C apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk + std::conj(g_qp) * aqk;
          a(q, k) = s * apk + std::conj(g_qq) * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const C vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * c + vkq * g_qp;
          v(k, q) = vkp * s + vkq * g_qq;
        }
        a(p, q) = a(q, p) = C(0);
        a(p, p) = C(a(p, p).real(), 0);
        a(q, q) = C(a(q, q).real(), 0);
      }
    }
  }
  if (!converged && off_norm() > eps * scale) {
    throw numerical_error("eigh: Jacobi sweeps did not converge");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return a(x, x).real() < a(y, y).real(); });

  EigenSystem<Real> out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]).real();
    out.eigenvectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

/// Number of qubits N for a 2^N x 2^N operator; throws std::invalid_argument otherwise.
inline int qubit_count(Eigen::Index dimension) {
  if (dimension < 2 || (dimension & (dimension - 1)) != 0) {
    throw std::invalid_argument("dimension " + std::to_string(dimension) + " is not a power of two >= 2");
  }
  int n = 0;
  while ((Eigen::Index{1} << n) < dimension) ++n;
  if (n > kMaxQubits) {
    throw capacity_error("dimension " + std::to_string(dimension) + " exceeds 2^" + std::to_string(kMaxQubits));
  }
  return n;
}

}  // namespace cqfi
