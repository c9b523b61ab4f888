#pragma once

// Randomized agreement check between the closed forms, the SLD path with exact
// derivatives, and the SLD path with central-difference derivatives.

#include <cstdint>
#include <string>

#include "cqfi/pauli_channels.hpp"
#include "cqfi/probe_states.hpp"

namespace cqfi {

inline constexpr double kFiniteDifferenceStep = 1e-5;

/// QFI with d(rho) replaced by (rho(x + h) - rho(x - h)) / 2h.
double qfi_finite_difference(const ProbeSpec& probe, const ChannelSpec& channel, Param param,
                             double h = kFiniteDifferenceStep);

struct CrossCheckTuple {
  ChannelSpec channel;
  double theta = 0.0;
  double phi = 0.0;
  Param param = Param::Theta;
};

struct CrossCheckReport {
  int samples = 0;
  std::uint64_t seed = 0;
  double tol = 0.0;
  double max_closed_vs_sld = 0.0;  // absolute
  CrossCheckTuple worst_closed;
  double max_fd_vs_sld = 0.0;      // |fd - sld| / max(1, |sld|)
  CrossCheckTuple worst_fd;
  int degenerate = 0;              // tuples where the closed block had no eigenvector gauge

  bool passed() const { return max_closed_vs_sld <= tol && max_fd_vs_sld <= tol; }
};

/// Draws `samples` tuples (channel uniform over the four kinds, p, mu in [0, 1],
/// theta in [0, pi/2], phi in [0, 2pi), param uniform) for the phi+ probe.
CrossCheckReport cross_check(int samples, std::uint64_t seed, double tol);

/// Deterministic multi-line report ending in "PASS" or "FAIL".
std::string format_report(const CrossCheckReport& report);

}  // namespace cqfi
