#include "cqfi/closed_forms.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <stdexcept>

namespace cqfi {

namespace {

using C = Complex<double>;
constexpr C kI{0.0, 1.0};

// The default gauge needs a usable phase of the coherence and a normalizer away from 0.
constexpr double kGaugePhaseFloor = 1e-6;
constexpr double kGaugeBetaFraction = 1e-3;
// Eigenvector derivatives grow like (block rate)/alpha and the spectral sum cancels
// terms of that size squared; below this ratio the SLD path is the accurate one.
constexpr double kConditioningRatio = 1e-3;

std::string short_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

struct PopulationWeights {
  double keep, leak, swap;
};

PopulationWeights population_weights(double eta, double mu) {
  return {(1 - eta) * (1 - eta + eta * mu), eta * (1 - eta) * (1 - mu), eta * eta + eta * (1 - eta) * mu};
}

void check_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
  }
}

// rho_11 = keep c^2 + swap s^2, rho_44 = keep s^2 + swap c^2,
// rho_14 = (direct e^{-i phi} + conjugate e^{i phi}) s c.
struct CoherenceBlock {
  double keep, swap, direct, conjugate;
};

CoherenceBlock block_of(const ChannelSpec& channel) {
  switch (channel.kind) {
    case ChannelKind::Depolarizing: {
      const auto k = depolarizing_coefficients(channel.p, channel.mu);
      return {k.keep, k.swap, k.coherence_direct, k.coherence_conjugate};
    }
    case ChannelKind::BitFlip:
    case ChannelKind::BitPhaseFlip: {
      const auto k = flip_coefficients(channel.p, channel.mu);
      return {k.keep, k.swap, k.keep, k.swap};
    }
    case ChannelKind::PhaseFlip:
      return {1.0, 0.0, phase_flip_coherence(channel.p, channel.mu), 0.0};
  }
  throw std::invalid_argument("unknown channel kind");
}

// One eigenpair of the {|00>,|11>} block: amplitudes on |00>, |11> and their derivatives.
struct BlockBranch {
  double lambda = 0, d_lambda = 0;
  C u, v, du, dv;
};

// Everything the branch formulas need, together with its derivative along `param`.
struct BlockGeometry {
  double delta, d_delta;  // (keep - swap) cos 2theta
  double s, d_s;          // sin 2theta
  C zeta, d_zeta;         // direct e^{i phi} + conjugate e^{-i phi}
  double kappa, d_kappa2;
  double alpha, d_alpha;
  double sigma;                               // keep + swap
  std::array<double, 2> n, d_n;               // delta -+ alpha
  std::array<double, 2> beta, d_beta;         // sqrt(2 alpha^2 -+ 2 delta alpha)
};

BlockGeometry geometry(const CoherenceBlock& b, double theta, double phi, Param param) {
  const bool wrt_theta = param == Param::Theta;
  BlockGeometry g{};
  const double c2 = std::cos(2 * theta);
  g.s = std::sin(2 * theta);
  g.d_s = wrt_theta ? 2 * c2 : 0.0;
  g.delta = (b.keep - b.swap) * c2;
  g.d_delta = wrt_theta ? -2 * (b.keep - b.swap) * g.s : 0.0;
  g.zeta = b.direct * std::polar(1.0, phi) + b.conjugate * std::polar(1.0, -phi);
  g.d_zeta = wrt_theta ? C(0) : kI * (b.direct * std::polar(1.0, phi) - b.conjugate * std::polar(1.0, -phi));
  g.kappa = std::abs(g.zeta);
  g.d_kappa2 = wrt_theta ? 0.0 : -4 * b.direct * b.conjugate * std::sin(2 * phi);
  g.sigma = b.keep + b.swap;

  const double coupling = g.kappa * g.s;
  g.alpha = std::hypot(g.delta, coupling);
  if (!(g.alpha > kDegeneracyTolerance)) {
    throw degenerate_spectrum("closed form: {|00>,|11>} block is degenerate (alpha = " + short_real(g.alpha) +
                              "); use the SLD path");
  }
  const double rate = std::hypot(g.d_delta, std::abs(g.d_zeta * g.s + g.zeta * g.d_s));
  if (g.alpha < kConditioningRatio * rate) {
    throw degenerate_spectrum("closed form: {|00>,|11>} block is nearly degenerate (alpha = " +
                              short_real(g.alpha) + "); use the SLD path");
  }
  g.d_alpha = (g.delta * g.d_delta + g.kappa * g.kappa * g.s * g.d_s + 0.5 * g.d_kappa2 * g.s * g.s) / g.alpha;

  // alpha +- delta without cancellation: their product is coupling^2.
  const double big = g.alpha + std::abs(g.delta);
  const double small = coupling * coupling / big;
  const double alpha_plus_delta = g.delta >= 0 ? big : small;
  const double alpha_minus_delta = g.delta >= 0 ? small : big;

  g.n = {-alpha_minus_delta, alpha_plus_delta};
  g.d_n = {g.d_delta - g.d_alpha, g.d_delta + g.d_alpha};
  g.beta = {std::sqrt(2 * g.alpha * alpha_minus_delta), std::sqrt(2 * g.alpha * alpha_plus_delta)};
  for (int k = 0; k < 2; ++k) {
    const double sign = k == 0 ? -1.0 : 1.0;
    const auto i = static_cast<std::size_t>(k);
    g.d_beta[i] = g.beta[i] > 0
                      ? (2 * g.alpha * g.d_alpha + sign * (g.d_delta * g.alpha + g.delta * g.d_alpha)) / g.beta[i]
                      : 0.0;
  }
  return g;
}

BlockBranch branch(const BlockGeometry& g, int k) {
  const auto b = static_cast<std::size_t>(k);
  const auto o = static_cast<std::size_t>(1 - k);
  const double sign = k == 0 ? -1.0 : 1.0;
  BlockBranch out;
  out.lambda = (g.sigma + sign * g.alpha) / 2;
  out.d_lambda = sign * g.d_alpha / 2;

  const double nb = g.n[b], dnb = g.d_n[b], bb = g.beta[b], dbb = g.d_beta[b];
  if (g.kappa > kGaugePhaseFloor && bb >= kGaugeBetaFraction * g.alpha) {
    // Amplitudes conj(zeta)/kappa * N/beta on |00> and kappa s / beta on |11>.
    const C chi_bar = std::conj(g.zeta) / g.kappa;
    const double d_kappa = g.d_kappa2 / (2 * g.kappa);
    const C d_chi_bar = std::conj(g.d_zeta) / g.kappa - std::conj(g.zeta) * d_kappa / (g.kappa * g.kappa);
    out.u = chi_bar * nb / bb;
    out.v = g.kappa * g.s / bb;
    out.du = d_chi_bar * nb / bb + chi_bar * (dnb * bb - nb * dbb) / (bb * bb);
    out.dv = ((d_kappa * g.s + g.kappa * g.d_s) * bb - g.kappa * g.s * dbb) / (bb * bb);
  } else if (bb >= g.beta[o]) {
    // Same eigenvector rephased by zeta/kappa: smooth as kappa -> 0.
    out.u = nb / bb;
    out.v = g.zeta * g.s / bb;
    out.du = (dnb * bb - nb * dbb) / (bb * bb);
    out.dv = ((g.d_zeta * g.s + g.zeta * g.d_s) * bb - g.zeta * g.s * dbb) / (bb * bb);
  } else {
    // Written through the partner branch: smooth as this branch's beta -> 0.
    const double no = g.n[o], dno = g.d_n[o], bo = g.beta[o], dbo = g.d_beta[o];
    const C w = std::conj(g.zeta) * g.s;
    const C dw = std::conj(g.d_zeta) * g.s + std::conj(g.zeta) * g.d_s;
    out.u = -w / bo;
    out.du = -(dw * bo - w * dbo) / (bo * bo);
    out.v = no / bo;
    out.dv = (dno * bo - no * dbo) / (bo * bo);
  }
  return out;
}

void place_block(const std::array<BlockBranch, 2>& br, Eigen::Index first_col, RVector<double>& lam,
                 RVector<double>& dlam, MatrixXc& vec, MatrixXc& dvec) {
  for (int k = 0; k < 2; ++k) {
    const Eigen::Index col = first_col + k;
    const auto& b = br[static_cast<std::size_t>(k)];
    lam(col) = b.lambda;
    dlam(col) = b.d_lambda;
    vec(0, col) = b.u;
    vec(3, col) = b.v;
    dvec(0, col) = b.du;
    dvec(3, col) = b.dv;
  }
}

std::array<BlockBranch, 2> block_branches(const CoherenceBlock& block, double theta, double phi, Param param) {
  const BlockGeometry g = geometry(block, theta, phi, param);
  return {branch(g, 0), branch(g, 1)};
}

void check_angles(double theta, double phi) {
  if (!std::isfinite(theta) || !std::isfinite(phi)) throw std::invalid_argument("theta and phi must be finite");
}

}  // namespace

DepolarizingCoefficients depolarizing_coefficients(double p, double mu) {
  check_unit(p, "p");
  check_unit(mu, "mu");
  const double eta = 2.0 * p / 3.0;
  const auto w = population_weights(eta, mu);
  DepolarizingCoefficients k;
  k.eta = eta;
  k.keep = w.keep;
  k.leak = w.leak;
  k.swap = w.swap;
  k.coherence_direct = (1 - 2 * eta) * (1 - 2 * eta) + (3 - 4 * eta) * eta * mu;
  k.coherence_conjugate = eta * mu;
  return k;
}

FlipCoefficients flip_coefficients(double p, double mu) {
  check_unit(p, "p");
  check_unit(mu, "mu");
  const auto w = population_weights(p, mu);
  return {w.keep, w.leak, w.swap};
}

double phase_flip_coherence(double p, double mu) {
  check_unit(p, "p");
  check_unit(mu, "mu");
  return 1.0 - 4.0 * p * (1.0 - p) * (1.0 - mu);
}

AppendixAux appendix_aux(const ChannelSpec& channel, double theta, double phi) {
  validate(channel);
  check_angles(theta, phi);
  const BlockGeometry g = geometry(block_of(channel), theta, phi, Param::Theta);
  return {g.alpha, g.beta, g.d_n, g.d_beta};
}

MatrixXc output_density(const ChannelSpec& channel, double theta, double phi) {
  validate(channel);
  check_angles(theta, phi);
  const double c = std::cos(theta), s = std::sin(theta);
  MatrixXc rho = MatrixXc::Zero(4, 4);
  C rho14;
  switch (channel.kind) {
    case ChannelKind::Depolarizing: {
      const auto k = depolarizing_coefficients(channel.p, channel.mu);
      rho(0, 0) = k.keep * c * c + k.swap * s * s;
      rho(1, 1) = rho(2, 2) = k.leak;
      rho(3, 3) = 1.0 - rho(0, 0).real() - 2 * k.leak;
      rho14 = (k.coherence_direct * std::polar(1.0, -phi) + k.coherence_conjugate * std::polar(1.0, phi)) * s * c;
      break;
    }
    case ChannelKind::BitFlip:
    case ChannelKind::BitPhaseFlip: {
      const auto k = flip_coefficients(channel.p, channel.mu);
      rho(0, 0) = k.keep * c * c + k.swap * s * s;
      rho(1, 1) = rho(2, 2) = k.leak;
      rho(3, 3) = 1.0 - rho(0, 0).real() - 2 * k.leak;
      const double sign = channel.kind == ChannelKind::BitFlip ? 1.0 : -1.0;
      rho(1, 2) = rho(2, 1) = sign * k.leak * std::sin(2 * theta) * std::cos(phi);
      rho14 = (k.keep * std::polar(1.0, -phi) + k.swap * std::polar(1.0, phi)) * s * c;
      break;
    }
    case ChannelKind::PhaseFlip: {
      rho(0, 0) = c * c;
      rho(3, 3) = s * s;
      rho14 = phase_flip_coherence(channel.p, channel.mu) * std::polar(1.0, -phi) * s * c;
      break;
    }
  }
  rho(0, 3) = rho14;
  rho(3, 0) = std::conj(rho14);
  return rho;
}

SpectralData<double> depolarizing_spectrum(double theta, double phi, double p, double mu, Param param) {
  check_angles(theta, phi);
  const auto k = depolarizing_coefficients(p, mu);
  const auto br = block_branches({k.keep, k.swap, k.coherence_direct, k.coherence_conjugate}, theta, phi, param);
  RVector<double> lam(4), dlam(4);
  MatrixXc vec = MatrixXc::Zero(4, 4), dvec = MatrixXc::Zero(4, 4);
  place_block(br, 0, lam, dlam, vec, dvec);
  lam(2) = lam(3) = k.leak;
  dlam(2) = dlam(3) = 0.0;
  vec(1, 2) = 1.0;  // |01>
  vec(2, 3) = 1.0;  // |10>
  return make_spectral_data<double>(lam, vec, dlam, dvec);
}

SpectralData<double> bitflip_spectrum(double theta, double phi, double p, double mu, Param param) {
  check_angles(theta, phi);
  const auto k = flip_coefficients(p, mu);
  const auto br = block_branches({k.keep, k.swap, k.keep, k.swap}, theta, phi, param);
  RVector<double> lam(4), dlam(4);
  MatrixXc vec = MatrixXc::Zero(4, 4), dvec = MatrixXc::Zero(4, 4);

  const double s2 = std::sin(2 * theta), c2 = std::cos(2 * theta);
  const double split = k.leak * s2 * std::cos(phi);
  const double d_split = param == Param::Theta ? 2 * k.leak * c2 * std::cos(phi) : -k.leak * s2 * std::sin(phi);
  const double r = 1.0 / std::sqrt(2.0);
  lam(0) = k.leak + split;
  lam(1) = k.leak - split;
  dlam(0) = d_split;
  dlam(1) = -d_split;
  vec(2, 0) = r;  // (|10> + |01>)/sqrt2
  vec(1, 0) = r;
  vec(2, 1) = r;  // (|10> - |01>)/sqrt2
  vec(1, 1) = -r;
  place_block(br, 2, lam, dlam, vec, dvec);
  return make_spectral_data<double>(lam, vec, dlam, dvec);
}

SpectralData<double> phaseflip_spectrum(double theta, double phi, double p, double mu, Param param) {
  check_angles(theta, phi);
  const double w = phase_flip_coherence(p, mu);
  const auto br = block_branches({1.0, 0.0, w, 0.0}, theta, phi, param);
  RVector<double> lam(4), dlam(4);
  MatrixXc vec = MatrixXc::Zero(4, 4), dvec = MatrixXc::Zero(4, 4);
  place_block(br, 0, lam, dlam, vec, dvec);
  lam(2) = lam(3) = 0.0;
  dlam(2) = dlam(3) = 0.0;
  vec(1, 2) = 1.0;
  vec(2, 3) = 1.0;
  return make_spectral_data<double>(lam, vec, dlam, dvec);
}

double closed_form_qfi(const ChannelSpec& channel, double theta, double phi, Param param) {
  validate(channel);
  switch (channel.kind) {
    case ChannelKind::Depolarizing:
      return qfi_spectral(depolarizing_spectrum(theta, phi, channel.p, channel.mu, param));
    case ChannelKind::BitFlip:
    case ChannelKind::BitPhaseFlip:
      return qfi_spectral(bitflip_spectrum(theta, phi, channel.p, channel.mu, param));
    case ChannelKind::PhaseFlip:
      return qfi_spectral(phaseflip_spectrum(theta, phi, channel.p, channel.mu, param));
  }
  throw std::invalid_argument("unknown channel kind");
}

bool closed_form_available(const ProbeSpec& probe) {
  return probe.family == ProbeFamily::PhiPlus && probe.n_qubits == 2;
}

}  // namespace cqfi
