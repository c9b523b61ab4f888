#pragma once

// Quantum Fisher information of a one-parameter family of density matrices.
//
// Two independent evaluations are provided:
//   * qfi_sld: from rho and d(rho) alone, in the eigenbasis of rho,
//       F = sum_{l_i + l_j > tol} 2 |<i|d rho|j>|^2 / (l_i + l_j)  = Tr(L^2 rho),
//   * qfi_spectral: from eigenvalues, eigenvectors and their derivatives,
//       F = sum_i l_i'^2 / l_i + sum_i l_i F_i - sum_{i != j} 8 l_i l_j / (l_i + l_j) |<psi_i'|psi_j>|^2,
//     with F_i = 4 (<psi_i'|psi_i'> - |<psi_i'|psi_i>|^2).
// The second needs a smooth eigenvector gauge, which only the closed forms supply.

#include <cmath>
#include <cstdint>
#include <optional>

#include "cqfi/matrix_core.hpp"
#include "cqfi/pauli_channels.hpp"
#include "cqfi/probe_states.hpp"

namespace cqfi {

inline constexpr double kDefaultSupportTolerance = 1e-12;

template <typename Real>
struct SpectralData {
  RVector<Real> eigenvalues;
  CMatrix<Real> eigenvectors;
  RVector<Real> d_eigenvalues;
  CMatrix<Real> d_eigenvectors;
  RVector<Real> pure_term_qfi;  // F_i
};

/// F_i = 4 (<psi'|psi'> - |<psi'|psi>|^2) for every column.
template <typename Real>
RVector<Real> pure_term_qfi(const CMatrix<Real>& vectors, const CMatrix<Real>& d_vectors) {
  RVector<Real> f(vectors.cols());
  for (Eigen::Index i = 0; i < vectors.cols(); ++i) {
    const Real norm2 = d_vectors.col(i).squaredNorm();
    const Real overlap = std::norm(d_vectors.col(i).dot(vectors.col(i)));
    f(i) = 4 * (norm2 - overlap);
  }
  return f;
}

/// Assembles SpectralData and fills in the pure-state terms.
template <typename Real>
SpectralData<Real> make_spectral_data(RVector<Real> eigenvalues, CMatrix<Real> eigenvectors,
                                      RVector<Real> d_eigenvalues, CMatrix<Real> d_eigenvectors) {
  SpectralData<Real> data{std::move(eigenvalues), std::move(eigenvectors), std::move(d_eigenvalues),
                          std::move(d_eigenvectors), {}};
  data.pure_term_qfi = pure_term_qfi<Real>(data.eigenvectors, data.d_eigenvectors);
  return data;
}

namespace detail {

template <typename Real>
void check_qfi_inputs(const CMatrix<Real>& rho, const CMatrix<Real>& d_rho) {
  if (rho.rows() != rho.cols() || d_rho.rows() != rho.rows() || d_rho.cols() != rho.cols()) {
    throw contract_violation("qfi: rho and d_rho must be square matrices of equal size");
  }
  if (!is_hermitian(rho)) throw contract_violation("qfi: rho is not Hermitian");
  const Real scale = std::max<Real>(Real(1), d_rho.cwiseAbs().maxCoeff());
  if (hermitian_deviation(d_rho) > Real(kHermitianTolerance) * scale) {
    throw contract_violation("qfi: d_rho is not Hermitian");
  }
  if (std::abs(rho.trace().real() - Real(1)) > Real(1e-9)) {
    throw contract_violation("qfi: rho does not have unit trace");
  }
}

}  // namespace detail

/// QFI via the symmetric logarithmic derivative, evaluated in the eigenbasis of rho.
/// Pairs with lambda_i + lambda_j <= support_tol lie outside the support and are skipped.
template <typename Real>
Real qfi_sld(const CMatrix<Real>& rho, const CMatrix<Real>& d_rho,
             Real support_tol = Real(kDefaultSupportTolerance)) {
  detail::check_qfi_inputs(rho, d_rho);
  const EigenSystem<Real> es = eigh(rho);
  const CMatrix<Real> m = es.eigenvectors.adjoint() * d_rho * es.eigenvectors;
  Real f = 0;
  const Eigen::Index n = rho.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Real s = es.eigenvalues(i) + es.eigenvalues(j);
      if (s > support_tol) f += 2 * std::norm(m(i, j)) / s;
    }
  }
  return f;
}

/// SLD matrix L with d(rho) = (L rho + rho L)/2 on the support of rho.
template <typename Real>
CMatrix<Real> build_sld(const CMatrix<Real>& rho, const CMatrix<Real>& d_rho,
                        Real support_tol = Real(kDefaultSupportTolerance)) {
  detail::check_qfi_inputs(rho, d_rho);
  const EigenSystem<Real> es = eigh(rho);
  CMatrix<Real> m = es.eigenvectors.adjoint() * d_rho * es.eigenvectors;
  const Eigen::Index n = rho.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Real s = es.eigenvalues(i) + es.eigenvalues(j);
      m(i, j) = s > support_tol ? m(i, j) * (2 / s) : Complex<Real>(0);
    }
  }
  return es.eigenvectors * m * es.eigenvectors.adjoint();
}

/// QFI from spectral data. The classical term skips lambda_i <= support_tol and the
/// coherence term skips pairs with lambda_i + lambda_j <= support_tol.
template <typename Real>
Real qfi_spectral(const SpectralData<Real>& data, Real support_tol = Real(kDefaultSupportTolerance)) {
  const Eigen::Index n = data.eigenvalues.size();
  const auto& lam = data.eigenvalues;
  Real classical = 0, pure = 0, coherence = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lam(i) > support_tol) classical += data.d_eigenvalues(i) * data.d_eigenvalues(i) / lam(i);
    pure += lam(i) * data.pure_term_qfi(i);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const Real s = lam(i) + lam(j);
      if (s <= support_tol) continue;
      coherence += 8 * lam(i) * lam(j) / s * std::norm(data.d_eigenvectors.col(i).dot(data.eigenvectors.col(j)));
    }
  }
  return classical + pure - coherence;
}

/// Output state E(rho_0) and its parameter derivative E(d rho_0), using linearity of E.
struct ChannelOutput {
  MatrixXc rho;
  MatrixXc d_rho;
};

ChannelOutput channel_output(const ProbeSpec& probe, const ChannelSpec& channel, Param param);

/// QFI of the probe after the correlated channel, on the SLD path.
double qfi_numeric(const ProbeSpec& probe, const ChannelSpec& channel, Param param,
                   double support_tol = kDefaultSupportTolerance);

/// Repetitions and Monte-Carlo settings for an estimation experiment.
struct EstimationConfig {
  std::int64_t repetitions = 10000;  // M
  int trials = 200;
  std::uint64_t seed = 1;
};

/// Minimum variance 1/(M F) of an unbiased estimator; nullopt when F <= 0 (unbounded).
std::optional<double> cramer_rao_bound(double qfi, std::int64_t repetitions);

}  // namespace cqfi
