#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cqfi/matrix_core.hpp"

namespace cqfi {

enum class ChannelKind { Depolarizing, BitFlip, BitPhaseFlip, PhaseFlip };

/// A Pauli channel whose consecutive uses on a qubit sequence are classically
/// correlated: mu = 0 is memoryless, mu = 1 applies the same Pauli to every qubit.
struct ChannelSpec {
  ChannelKind kind = ChannelKind::Depolarizing;
  double p = 0.0;   // decoherence strength
  double mu = 0.0;  // correlation strength
};

void validate(const ChannelSpec& spec);

/// Probabilities (p_0, p_1, p_2, p_3) of applying sigma_0..sigma_3 on a single use.
std::array<double, 4> single_use_distribution(ChannelKind kind, double p);

/// p_{i|j} = (1 - mu) p_i + mu [i == j].
double conditional_probability(ChannelKind kind, double p, double mu, int i, int j);

struct PauliTerm {
  std::vector<std::uint8_t> indices;  // i_1 ... i_N, qubit 1 first
  double probability = 0.0;

  std::string label() const;
};

/// Markov-chain distribution over Pauli strings; only strictly positive terms are stored.
struct JointDistribution {
  int n_qubits = 0;
  std::vector<PauliTerm> terms;

  double total_probability() const;
};

/// p_{i_1...i_N} = p_{i_1} p_{i_2|i_1} ... p_{i_N|i_{N-1}}, enumerated depth first in
/// lexicographic order, abandoning a chain as soon as its running product is exactly 0.
JointDistribution joint_distribution(ChannelKind kind, double p, double mu, int n_qubits);

/// sum_k p_k U_k rho U_k with U_k = sigma_{i_1} (x) ... (x) sigma_{i_N}.
MatrixXc apply_channel(const MatrixXc& rho, const JointDistribution& dist);

/// Same, with the qubit count taken from rho's dimension. Linear in rho, so it
/// also maps d(rho_0) to d(rho).
MatrixXc apply_channel(const MatrixXc& rho, const ChannelSpec& spec);

/// Materialized N-fold Kronecker product of Pauli matrices.
MatrixXc pauli_string(const std::vector<std::uint8_t>& indices);

std::string_view to_string(ChannelKind kind);
ChannelKind parse_channel(std::string_view text);

}  // namespace cqfi
