#include "cqfi/pauli_channels.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace cqfi {

namespace {

void check_probability(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1], got " + std::to_string(value));
  }
}

void check_index(int i) {
  if (i < 0 || i > 3) throw std::invalid_argument("Pauli index must be in {0,1,2,3}");
}

// Pauli string as a signed permutation: U|j> = phase * (-1)^{popcount(j & z)} |j ^ x>.
// The global phase i^{#Y} cancels in U rho U^dagger.
struct PauliMasks {
  std::uint32_t x = 0;
  std::uint32_t z = 0;
};

PauliMasks masks_of(const std::vector<std::uint8_t>& indices) {
  PauliMasks m;
  const auto n = indices.size();
  for (std::size_t q = 0; q < n; ++q) {
    const std::uint32_t bit = 1u << (n - 1 - q);
    const auto idx = indices[q];
    if (idx == 1 || idx == 2) m.x |= bit;
    if (idx == 2 || idx == 3) m.z |= bit;
  }
  return m;
}

}  // namespace

void validate(const ChannelSpec& spec) {
  check_probability(spec.p, "p");
  check_probability(spec.mu, "mu");
}

std::array<double, 4> single_use_distribution(ChannelKind kind, double p) {
  check_probability(p, "p");
  switch (kind) {
    case ChannelKind::Depolarizing: return {1.0 - p, p / 3.0, p / 3.0, p / 3.0};
    case ChannelKind::BitFlip: return {1.0 - p, p, 0.0, 0.0};
    case ChannelKind::BitPhaseFlip: return {1.0 - p, 0.0, p, 0.0};
    case ChannelKind::PhaseFlip: return {1.0 - p, 0.0, 0.0, p};
  }
  throw std::invalid_argument("unknown channel kind");
}

double conditional_probability(ChannelKind kind, double p, double mu, int i, int j) {
  check_probability(mu, "mu");
  check_index(i);
  check_index(j);
  const auto single = single_use_distribution(kind, p);
  return (1.0 - mu) * single[static_cast<std::size_t>(i)] + (i == j ? mu : 0.0);
}

std::string PauliTerm::label() const {
  std::string s;
  s.reserve(indices.size());
  for (auto i : indices) s.push_back(static_cast<char>('0' + i));
  return s;
}

double JointDistribution::total_probability() const {
  double s = 0.0;
  for (const auto& t : terms) s += t.probability;
  return s;
}

JointDistribution joint_distribution(ChannelKind kind, double p, double mu, int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw std::invalid_argument("joint_distribution: n_qubits must be in [1, " + std::to_string(kMaxQubits) + "]");
  }
  check_probability(mu, "mu");
  const auto single = single_use_distribution(kind, p);
  std::array<std::array<double, 4>, 4> cond{};  // cond[j][i] = p_{i|j}
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i)
      cond[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
          (1.0 - mu) * single[static_cast<std::size_t>(i)] + (i == j ? mu : 0.0);

  JointDistribution dist;
  dist.n_qubits = n_qubits;
  std::vector<std::uint8_t> chain(static_cast<std::size_t>(n_qubits));

  auto descend = [&](auto&& self, int depth, double running) -> void {
    if (depth == n_qubits) {
      dist.terms.push_back({chain, running});
      return;
    }
    for (int i = 0; i < 4; ++i) {
      const double step = depth == 0
                              ? single[static_cast<std::size_t>(i)]
                              : cond[chain[static_cast<std::size_t>(depth - 1)]][static_cast<std::size_t>(i)];
      const double next = running * step;
      if (next == 0.0) continue;
      chain[static_cast<std::size_t>(depth)] = static_cast<std::uint8_t>(i);
      self(self, depth + 1, next);
    }
  };
  descend(descend, 0, 1.0);
  return dist;
}

MatrixXc apply_channel(const MatrixXc& rho, const JointDistribution& dist) {
  const Eigen::Index dim = Eigen::Index{1} << dist.n_qubits;
  if (rho.rows() != dim || rho.cols() != dim) {
    throw std::invalid_argument("apply_channel: state is " + std::to_string(rho.rows()) + "x" +
                                std::to_string(rho.cols()) + " but the channel acts on " +
                                std::to_string(dist.n_qubits) + " qubits");
  }
  MatrixXc out = MatrixXc::Zero(dim, dim);
  std::vector<double> sign(static_cast<std::size_t>(dim));
  for (const auto& term : dist.terms) {
    const PauliMasks m = masks_of(term.indices);
    for (Eigen::Index j = 0; j < dim; ++j) {
      sign[static_cast<std::size_t>(j)] =
          (std::popcount(static_cast<std::uint32_t>(j) & m.z) & 1) ? -term.probability : term.probability;
    }
    for (Eigen::Index k = 0; k < dim; ++k) {
      const Eigen::Index kk = k ^ m.x;
      const double sk = (std::popcount(static_cast<std::uint32_t>(k) & m.z) & 1) ? -1.0 : 1.0;
      for (Eigen::Index j = 0; j < dim; ++j) {
        out(j ^ m.x, kk) += (sign[static_cast<std::size_t>(j)] * sk) * rho(j, k);
      }
    }
  }
  return out;
}

MatrixXc apply_channel(const MatrixXc& rho, const ChannelSpec& spec) {
  validate(spec);
  if (rho.rows() != rho.cols()) throw std::invalid_argument("apply_channel: state is not square");
  const int n = qubit_count(rho.rows());
  return apply_channel(rho, joint_distribution(spec.kind, spec.p, spec.mu, n));
}

MatrixXc pauli_string(const std::vector<std::uint8_t>& indices) {
  if (indices.empty()) throw std::invalid_argument("pauli_string: empty index string");
  MatrixXc u = pauli<double>(indices.front());
  for (std::size_t q = 1; q < indices.size(); ++q) u = kron(u, pauli<double>(indices[q]));
  return u;
}

std::string_view to_string(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::Depolarizing: return "depolarizing";
    case ChannelKind::BitFlip: return "bitflip";
    case ChannelKind::BitPhaseFlip: return "bitphaseflip";
    case ChannelKind::PhaseFlip: return "phaseflip";
  }
  return "?";
}

ChannelKind parse_channel(std::string_view text) {
  if (text == "depolarizing") return ChannelKind::Depolarizing;
  if (text == "bitflip") return ChannelKind::BitFlip;
  if (text == "bitphaseflip") return ChannelKind::BitPhaseFlip;
  if (text == "phaseflip") return ChannelKind::PhaseFlip;
  throw std::invalid_argument("unknown channel '" + std::string(text) +
                              "' (expected depolarizing|bitflip|bitphaseflip|phaseflip)");
}

}  // namespace cqfi
