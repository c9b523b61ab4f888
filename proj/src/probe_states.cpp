#include "cqfi/probe_states.hpp"

#include <cmath>
#include <stdexcept>

namespace cqfi {

namespace {

struct Layout {
  Eigen::Index low;   // basis index carrying cos(theta)
  Eigen::Index high;  // basis index carrying e^{i phi} sin(theta)
  double sign;
};

Layout layout_of(const ProbeSpec& spec) {
  const Eigen::Index dim = Eigen::Index{1} << spec.n_qubits;
  switch (spec.family) {
    case ProbeFamily::PhiPlus: return {0, 3, 1.0};
    case ProbeFamily::PhiMinus: return {0, 3, -1.0};
    case ProbeFamily::PsiPlus: return {1, 2, 1.0};
    case ProbeFamily::PsiMinus: return {1, 2, -1.0};
    case ProbeFamily::Ewl: return {0, dim - 1, 1.0};
  }
  throw std::invalid_argument("unknown probe family");
}

double mixing(const ProbeSpec& spec) { return spec.family == ProbeFamily::Ewl ? spec.r : 1.0; }

}  // namespace

bool is_bell_type(ProbeFamily family) { return family != ProbeFamily::Ewl; }

void validate(const ProbeSpec& spec) {
  if (!std::isfinite(spec.theta) || !std::isfinite(spec.phi)) {
    throw std::invalid_argument("probe: theta and phi must be finite");
  }
  if (is_bell_type(spec.family)) {
    if (spec.n_qubits != 2) {
      throw std::invalid_argument("probe: Bell-type states are two-qubit states (n = 2)");
    }
    return;
  }
  if (spec.n_qubits < 2 || spec.n_qubits > kMaxQubits) {
    throw std::invalid_argument("probe: ewl requires 2 <= n <= " + std::to_string(kMaxQubits));
  }
  if (!(spec.r >= 0.0 && spec.r <= 1.0)) {
    throw std::invalid_argument("probe: mixing ratio r must lie in [0, 1]");
  }
}

VectorXc bell_state_vector(const ProbeSpec& spec) {
  if (!is_bell_type(spec.family)) {
    throw std::invalid_argument("bell_state_vector: ewl is not a Bell-type family");
  }
  return pure_component(spec);
}

VectorXc pure_component(const ProbeSpec& spec) {
  validate(spec);
  const Layout at = layout_of(spec);
  VectorXc v = VectorXc::Zero(Eigen::Index{1} << spec.n_qubits);
  v(at.low) = std::cos(spec.theta);
  v(at.high) = at.sign * std::polar(1.0, spec.phi) * std::sin(spec.theta);
  return v;
}

VectorXc pure_component_derivative(const ProbeSpec& spec, Param param) {
  validate(spec);
  const Layout at = layout_of(spec);
  const auto phase = std::polar(1.0, spec.phi);
  VectorXc dv = VectorXc::Zero(Eigen::Index{1} << spec.n_qubits);
  if (param == Param::Theta) {
    dv(at.low) = -std::sin(spec.theta);
    dv(at.high) = at.sign * phase * std::cos(spec.theta);
  } else {
    dv(at.high) = at.sign * Complex<double>(0, 1) * phase * std::sin(spec.theta);
  }
  return dv;
}

MatrixXc density(const ProbeSpec& spec) {
  const VectorXc v = pure_component(spec);
  const double r = mixing(spec);
  const Eigen::Index dim = v.size();
  MatrixXc rho = r * (v * v.adjoint());
  if (r < 1.0) {
    rho.diagonal().array() += (1.0 - r) / static_cast<double>(dim);
  }
  return rho;
}

MatrixXc density_derivative(const ProbeSpec& spec, Param param) {
  const VectorXc v = pure_component(spec);
  const VectorXc dv = pure_component_derivative(spec, param);
  MatrixXc outer = dv * v.adjoint();
  return mixing(spec) * (outer + outer.adjoint());
}

std::string_view to_string(ProbeFamily family) {
  switch (family) {
    case ProbeFamily::PhiPlus: return "phi+";
    case ProbeFamily::PhiMinus: return "phi-";
    case ProbeFamily::PsiPlus: return "psi+";
    case ProbeFamily::PsiMinus: return "psi-";
    case ProbeFamily::Ewl: return "ewl";
  }
  return "?";
}

std::string_view to_string(Param param) { return param == Param::Theta ? "theta" : "phi"; }

ProbeFamily parse_family(std::string_view text) {
  if (text == "phi+") return ProbeFamily::PhiPlus;
  if (text == "phi-") return ProbeFamily::PhiMinus;
  if (text == "psi+") return ProbeFamily::PsiPlus;
  if (text == "psi-") return ProbeFamily::PsiMinus;
  if (text == "ewl") return ProbeFamily::Ewl;
  throw std::invalid_argument("unknown probe family '" + std::string(text) + "' (expected phi+|phi-|psi+|psi-|ewl)");
}

Param parse_param(std::string_view text) {
  if (text == "theta") return Param::Theta;
  if (text == "phi") return Param::Phi;
  throw std::invalid_argument("unknown parameter '" + std::string(text) + "' (expected theta|phi)");
}

}  // namespace cqfi
