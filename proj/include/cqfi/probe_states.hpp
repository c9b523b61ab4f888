#pragma once

#include <string>
#include <string_view>

#include "cqfi/matrix_core.hpp"

namespace cqfi {

enum class ProbeFamily { PhiPlus, PhiMinus, PsiPlus, PsiMinus, Ewl };

/// The encoded parameter a derivative or QFI refers to.
enum class Param { Theta, Phi };

inline constexpr double kDefaultEwlMixing = 0.9;

/// Probe state description.
///
/// Bell-type families are the two-qubit states
///   cos(theta)|00> +/- e^{i phi} sin(theta)|11>   (PhiPlus / PhiMinus)
///   cos(theta)|01> +/- e^{i phi} sin(theta)|10>   (PsiPlus / PsiMinus)
/// and Ewl is r|Xi><Xi| + (1-r) I/2^N with |Xi> = cos(theta)|0...0> + e^{i phi} sin(theta)|1...1>.
/// `r` is only read for Ewl. Qubit 1 is the most significant bit of the basis index.
struct ProbeSpec {
  ProbeFamily family = ProbeFamily::PhiPlus;
  double theta = 0.0;
  double phi = 0.0;
  double r = kDefaultEwlMixing;
  int n_qubits = 2;
};

bool is_bell_type(ProbeFamily family);

/// Throws std::invalid_argument if the spec is out of range.
void validate(const ProbeSpec& spec);

/// Length-4 state vector of a Bell-type probe.
VectorXc bell_state_vector(const ProbeSpec& spec);

/// The pure component (Bell state, or |Xi> for Ewl) and its exact derivative.
VectorXc pure_component(const ProbeSpec& spec);
VectorXc pure_component_derivative(const ProbeSpec& spec, Param param);

MatrixXc density(const ProbeSpec& spec);

/// Exact d(rho_0)/d(param); Hermitian and traceless.
MatrixXc density_derivative(const ProbeSpec& spec, Param param);

std::string_view to_string(ProbeFamily family);
std::string_view to_string(Param param);
ProbeFamily parse_family(std::string_view text);
Param parse_param(std::string_view text);

}  // namespace cqfi
