#pragma once

// Closed-form output states and spectra for the two-qubit probe
// cos(theta)|00> + e^{i phi} sin(theta)|11> sent through the correlated channels.
//
// All four channels keep the output inside the X-shaped pattern
//   rho_11 = keep cos^2 + swap sin^2,   rho_44 = keep sin^2 + swap cos^2,
//   rho_14 = (direct e^{-i phi} + conjugate e^{i phi}) sin cos,
// plus populations `leak` on |01>, |10> (and, for the flip channels, a real
// rho_23 = +-leak sin(2 theta) cos(phi)). The {|00>,|11>} block is
// diagonalized analytically with
//   alpha = sqrt(((keep - swap) cos 2theta)^2 + kappa^2 sin^2 2theta),
//   kappa = |direct e^{i phi} + conjugate e^{-i phi}|.

#include <array>

#include "cqfi/matrix_core.hpp"
#include "cqfi/pauli_channels.hpp"
#include "cqfi/probe_states.hpp"
#include "cqfi/qfi.hpp"

namespace cqfi {

/// Below this alpha the {|00>,|11>} block is proportional to the identity and
/// the closed-form eigenvectors are undefined.
inline constexpr double kDegeneracyTolerance = 1e-9;

/// Output coefficients of the depolarizing channel, eta = 2p/3.
struct DepolarizingCoefficients {
  double eta = 0;
  double keep = 0;                 // weight of cos^2(theta) on rho_11
  double leak = 0;                 // population of |01> and |10>
  double swap = 0;                 // weight of sin^2(theta) on rho_11
  double coherence_direct = 0;     // weight of e^{-i phi} on rho_14
  double coherence_conjugate = 0;  // weight of e^{+i phi} on rho_14
};

/// Bit-flip (and bit-phase-flip) coefficients: the depolarizing keep/leak/swap with eta = p.
struct FlipCoefficients {
  double keep = 0;
  double leak = 0;
  double swap = 0;
};

DepolarizingCoefficients depolarizing_coefficients(double p, double mu);
FlipCoefficients flip_coefficients(double p, double mu);

/// Phase-flip coherence factor w = 1 - 4p(1-p)(1-mu).
double phase_flip_coherence(double p, double mu);

/// Auxiliary quantities of the {|00>,|11>} block for the theta derivative.
/// Index 0 is the lower eigenvalue branch, index 1 the upper one.
struct AppendixAux {
  double alpha = 0;
  std::array<double, 2> beta{};   // eigenvector normalizers
  std::array<double, 2> h{};      // d/dtheta of the unnormalized |00> amplitude
  std::array<double, 2> delta{};  // d/dtheta of beta
};

AppendixAux appendix_aux(const ChannelSpec& channel, double theta, double phi);

/// Closed-form 4x4 output state. BitPhaseFlip is BitFlip with rho_23, rho_32 negated.
MatrixXc output_density(const ChannelSpec& channel, double theta, double phi);

/// Eigen-systems with parameter derivatives. Eigenvalue order:
///   depolarizing / phase flip: {lower block, upper block, |01>, |10>}
///   bit flip: {(|10>+|01>)/sqrt2, (|10>-|01>)/sqrt2, lower block, upper block}
/// Throw degenerate_spectrum when alpha <= kDegeneracyTolerance, or when alpha is
/// below 1e-3 times the rate at which the block's traceless part moves with the
/// parameter (the eigenbasis then turns too fast for the spectral sum to stay accurate).
SpectralData<double> depolarizing_spectrum(double theta, double phi, double p, double mu, Param param);
SpectralData<double> bitflip_spectrum(double theta, double phi, double p, double mu, Param param);
SpectralData<double> phaseflip_spectrum(double theta, double phi, double p, double mu, Param param);

/// QFI assembled from the closed-form spectra; BitPhaseFlip shares the bit-flip result.
/// Propagates degenerate_spectrum (callers fall back to qfi_numeric).
double closed_form_qfi(const ChannelSpec& channel, double theta, double phi, Param param);

/// Closed forms exist only for the two-qubit phi+ probe.
bool closed_form_available(const ProbeSpec& probe);

}  // namespace cqfi
