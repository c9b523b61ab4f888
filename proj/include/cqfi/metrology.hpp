#pragma once

// Monte-Carlo estimation experiments: sample measurement records from the
// channel output, estimate the parameter by maximum likelihood, and compare the
// spread of the estimates with the Cramer-Rao bound 1/(M F).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cqfi/matrix_core.hpp"
#include "cqfi/pauli_channels.hpp"
#include "cqfi/probe_states.hpp"
#include "cqfi/qfi.hpp"

namespace cqfi {

/// A POVM: Hermitian positive elements summing to the identity.
struct MeasurementModel {
  std::vector<MatrixXc> elements;
  std::vector<std::string> labels;
};

MeasurementModel computational_basis_model(int n_qubits);

/// Computational basis and the Hadamard-rotated basis, each chosen with probability 1/2.
/// A single draw from this 2^{N+1}-outcome POVM is one shot of the interleaved scheme.
MeasurementModel two_basis_model(int n_qubits);

/// Throws model_error unless the elements are PSD (>= -1e-12) and sum to I within 1e-12.
void validate(const MeasurementModel& model);

/// Tr(rho E_k); throws model_error if they do not sum to 1 within 1e-9.
std::vector<double> outcome_probabilities(const MatrixXc& rho, const MeasurementModel& model);

/// Multinomial draw of `shots` outcomes; deterministic for a given seed.
std::vector<std::int64_t> sample_outcomes(const MatrixXc& rho, const MeasurementModel& model, std::int64_t shots,
                                          std::uint64_t seed);

/// Interval searched by the estimator. The two-basis statistics depend on phi only
/// through cos(phi), so each window is the half period on which they are injective.
std::pair<double, double> estimation_window(Param param);

inline constexpr int kDefaultMleGridPoints = 401;

/// Maximum-likelihood estimate of `param`, all other probe and channel settings
/// fixed at the values in `probe` / `channel`: grid search plus one golden-section
/// refinement around the best grid point.
double mle_estimate(std::span<const std::int64_t> counts, const ProbeSpec& probe, const ChannelSpec& channel,
                    Param param, const MeasurementModel& model, int grid_points = kDefaultMleGridPoints);

struct EstimationReport {
  double true_value = 0;
  std::vector<double> estimates;
  double empirical_variance = 0;
  double qfi = 0;
  std::optional<double> bound;  // nullopt: QFI vanishes, variance unbounded
  double slack = 0;             // 3 relative standard errors of a sample variance
  EstimationConfig config;

  bool unbounded() const { return !bound.has_value(); }
  /// Variance is at least (1 - slack) / (M F).
  bool respects_bound() const;
};

/// 3 sqrt(2 / (trials - 1)).
double variance_slack(int trials);

/// Sub-seed for trial `index`, derived only from (seed, index).
std::uint64_t trial_seed(std::uint64_t seed, int index);

EstimationReport cramer_rao_report(const ProbeSpec& probe, const ChannelSpec& channel, Param param,
                                   const EstimationConfig& config, const MeasurementModel& model);
EstimationReport cramer_rao_report(const ProbeSpec& probe, const ChannelSpec& channel, Param param,
                                   const EstimationConfig& config);

}  // namespace cqfi
