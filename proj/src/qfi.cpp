#include "cqfi/qfi.hpp"

#include <stdexcept>

namespace cqfi {

ChannelOutput channel_output(const ProbeSpec& probe, const ChannelSpec& channel, Param param) {
  validate(probe);
  validate(channel);
  const JointDistribution dist = joint_distribution(channel.kind, channel.p, channel.mu, probe.n_qubits);
  return {apply_channel(density(probe), dist), apply_channel(density_derivative(probe, param), dist)};
}

double qfi_numeric(const ProbeSpec& probe, const ChannelSpec& channel, Param param, double support_tol) {
  const ChannelOutput out = channel_output(probe, channel, param);
  return qfi_sld<double>(out.rho, out.d_rho, support_tol);
}

std::optional<double> cramer_rao_bound(double qfi, std::int64_t repetitions) {
  if (repetitions < 1) throw std::invalid_argument("cramer_rao_bound: repetitions must be >= 1");
  if (!(qfi > 0.0)) return std::nullopt;
  return 1.0 / (static_cast<double>(repetitions) * qfi);
}

}  // namespace cqfi
