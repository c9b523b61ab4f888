#include "cqfi/metrology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace cqfi {

namespace {

constexpr double kModelTolerance = 1e-12;
constexpr double kProbabilityTolerance = 1e-9;
constexpr double kVanishingQfi = 1e-10;

std::string basis_label(Eigen::Index k, int n, char zero, char one) {
  std::string s(static_cast<std::size_t>(n), zero);
  for (int q = 0; q < n; ++q)
    if ((k >> (n - 1 - q)) & 1) s[static_cast<std::size_t>(q)] = one;
  return s;
}

MatrixXc hadamard_all(int n_qubits) {
  MatrixXc h1(2, 2);
  const double r = 1.0 / std::sqrt(2.0);
  h1 << r, r, r, -r;
  MatrixXc h = h1;
  for (int q = 1; q < n_qubits; ++q) h = kron(h, h1);
  return h;
}

double trace_product(const MatrixXc& a, const MatrixXc& b) { return (a.cwiseProduct(b.transpose())).sum().real(); }

// Outcome probabilities as a function of one parameter. The Pauli channel is
// self-adjoint, so Tr(E(rho_0) E_k) = Tr(rho_0 E(E_k)) and the channel is applied
// once to the POVM instead of once per likelihood evaluation.
class LikelihoodModel {
 public:
  LikelihoodModel(const ProbeSpec& probe, const ChannelSpec& channel, Param param, const MeasurementModel& model)
      : probe_(probe), param_(param) {
    const JointDistribution dist = joint_distribution(channel.kind, channel.p, channel.mu, probe.n_qubits);
    pulled_back_.reserve(model.elements.size());
    for (const auto& e : model.elements) pulled_back_.push_back(apply_channel(e, dist));
  }

  double log_likelihood(double value, std::span<const std::int64_t> counts) const {
    ProbeSpec at = probe_;
    (param_ == Param::Theta ? at.theta : at.phi) = value;
    const MatrixXc rho0 = density(at);
    double ll = 0.0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
      if (counts[k] == 0) continue;
      const double pk = trace_product(rho0, pulled_back_[k]);
      if (!(pk > 0.0)) return -std::numeric_limits<double>::infinity();
      ll += static_cast<double>(counts[k]) * std::log(pk);
    }
    return ll;
  }

  std::size_t outcomes() const { return pulled_back_.size(); }

 private:
  ProbeSpec probe_;
  Param param_;
  std::vector<MatrixXc> pulled_back_;
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

MeasurementModel computational_basis_model(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) throw std::invalid_argument("measurement: bad qubit count");
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  MeasurementModel m;
  for (Eigen::Index k = 0; k < dim; ++k) {
    MatrixXc e = MatrixXc::Zero(dim, dim);
    e(k, k) = 1.0;
    m.elements.push_back(std::move(e));
    m.labels.push_back(basis_label(k, n_qubits, '0', '1'));
  }
  return m;
}

MeasurementModel two_basis_model(int n_qubits) {
  const MeasurementModel z = computational_basis_model(n_qubits);
  const MatrixXc h = hadamard_all(n_qubits);
  MeasurementModel m;
  for (std::size_t k = 0; k < z.elements.size(); ++k) {
    m.elements.push_back(0.5 * z.elements[k]);
    m.labels.push_back("z:" + z.labels[k]);
  }
  for (std::size_t k = 0; k < z.elements.size(); ++k) {
    m.elements.push_back(0.5 * (h * z.elements[k] * h));
    m.labels.push_back("x:" + basis_label(static_cast<Eigen::Index>(k), n_qubits, '+', '-'));
  }
  return m;
}

void validate(const MeasurementModel& model) {
  if (model.elements.empty()) throw model_error("measurement model has no elements");
  if (!model.labels.empty() && model.labels.size() != model.elements.size()) {
    throw model_error("measurement model: label count does not match element count");
  }
  const Eigen::Index dim = model.elements.front().rows();
  MatrixXc sum = MatrixXc::Zero(dim, dim);
  for (const auto& e : model.elements) {
    if (e.rows() != dim || e.cols() != dim) throw model_error("measurement model: element dimensions differ");
    if (!is_hermitian(e)) throw model_error("measurement model: element is not Hermitian");
    if (eigh<double>(e).eigenvalues.minCoeff() < -kModelTolerance) {
      throw model_error("measurement model: element is not positive semidefinite");
    }
    sum += e;
  }
  if ((sum - MatrixXc::Identity(dim, dim)).cwiseAbs().maxCoeff() > kModelTolerance) {
    throw model_error("measurement model: elements do not sum to the identity");
  }
}

std::vector<double> outcome_probabilities(const MatrixXc& rho, const MeasurementModel& model) {
  std::vector<double> probs;
  probs.reserve(model.elements.size());
  double total = 0.0;
  for (const auto& e : model.elements) {
    if (e.rows() != rho.rows() || e.cols() != rho.cols()) {
      throw std::invalid_argument("outcome_probabilities: state and measurement dimensions differ");
    }
    probs.push_back(trace_product(rho, e));
    total += probs.back();
  }
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    throw model_error("outcome probabilities sum to " + std::to_string(total) + ", not 1");
  }
  return probs;
}

std::vector<std::int64_t> sample_outcomes(const MatrixXc& rho, const MeasurementModel& model, std::int64_t shots,
                                          std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("sample_outcomes: shots must be >= 1");
  const std::vector<double> probs = outcome_probabilities(rho, model);
  std::mt19937_64 rng(seed);
  std::vector<std::int64_t> counts(probs.size(), 0);
  // Conditional binomials: n_k ~ Bin(remaining, p_k / remaining mass).
  std::int64_t remaining = shots;
  double mass = 1.0;
  for (std::size_t k = 0; k + 1 < probs.size() && remaining > 0; ++k) {
    const double pk = std::clamp(probs[k], 0.0, 1.0);
    const double q = mass > 0.0 ? std::clamp(pk / mass, 0.0, 1.0) : 0.0;
    std::binomial_distribution<std::int64_t> draw(remaining, q);
    counts[k] = draw(rng);
    remaining -= counts[k];
    mass -= pk;
  }
  counts.back() += remaining;
  return counts;
}

std::pair<double, double> estimation_window(Param param) {
  return param == Param::Theta ? std::pair{0.0, std::numbers::pi / 2} : std::pair{0.0, std::numbers::pi};
}

double mle_estimate(std::span<const std::int64_t> counts, const ProbeSpec& probe, const ChannelSpec& channel,
                    Param param, const MeasurementModel& model, int grid_points) {
  if (std::all_of(counts.begin(), counts.end(), [](std::int64_t c) { return c == 0; })) {
    throw std::invalid_argument("mle_estimate: all counts are zero");
  }
  if (counts.size() != model.elements.size()) {
    throw std::invalid_argument("mle_estimate: counts do not match the measurement model");
  }
  if (grid_points < 3) throw std::invalid_argument("mle_estimate: need at least 3 grid points");
  validate(probe);
  validate(channel);

  const LikelihoodModel lm(probe, channel, param, model);
  const auto [lo, hi] = estimation_window(param);
  const double step = (hi - lo) / (grid_points - 1);

  int best = 0;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_points; ++i) {
    const double ll = lm.log_likelihood(lo + step * i, counts);
    if (ll > best_ll) {
      best_ll = ll;
      best = i;
    }
  }

  // Golden-section maximization on the bracket around the best grid point.
  double a = lo + step * std::max(best - 1, 0);
  double b = lo + step * std::min(best + 1, grid_points - 1);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = lm.log_likelihood(x1, counts), f2 = lm.log_likelihood(x2, counts);
  for (int it = 0; it < 200 && (b - a) > 1e-13; ++it) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = lm.log_likelihood(x1, counts);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = lm.log_likelihood(x2, counts);
    }
  }
  // Refinement must strictly beat the grid point; flat likelihoods stay on the grid.
  double estimate = lo + step * best;
  double estimate_ll = best_ll;
  for (double x : {(a + b) / 2, a, b}) {
    const double ll = lm.log_likelihood(x, counts);
    if (ll > estimate_ll) {
      estimate = x;
      estimate_ll = ll;
    }
  }
  return estimate;
}

bool EstimationReport::respects_bound() const {
  if (!bound) return true;
  return empirical_variance >= (1.0 - slack) * *bound;
}

double variance_slack(int trials) {
  if (trials < 2) throw std::invalid_argument("variance_slack: need at least 2 trials");
  return 3.0 * std::sqrt(2.0 / (trials - 1));
}

std::uint64_t trial_seed(std::uint64_t seed, int index) {
  return splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(index));
}

EstimationReport cramer_rao_report(const ProbeSpec& probe, const ChannelSpec& channel, Param param,
                                   const EstimationConfig& config, const MeasurementModel& model) {
  if (config.repetitions < 1) throw std::invalid_argument("estimate: repetitions must be >= 1");
  if (config.trials < 2) throw std::invalid_argument("estimate: need at least 2 trials");
  validate(model);

  EstimationReport report;
  report.config = config;
  report.true_value = param == Param::Theta ? probe.theta : probe.phi;
  report.qfi = qfi_numeric(probe, channel, param);
  report.slack = variance_slack(config.trials);
  if (report.qfi <= kVanishingQfi) return report;  // unbounded: no finite-variance target
  report.bound = cramer_rao_bound(report.qfi, config.repetitions);

  const MatrixXc rho = apply_channel(density(probe), channel);
  report.estimates.reserve(static_cast<std::size_t>(config.trials));
  for (int t = 0; t < config.trials; ++t) {
    const auto counts = sample_outcomes(rho, model, config.repetitions, trial_seed(config.seed, t));
    report.estimates.push_back(mle_estimate(counts, probe, channel, param, model));
  }
  double mean = 0.0;
  for (double e : report.estimates) mean += e;
  mean /= static_cast<double>(report.estimates.size());
  double ss = 0.0;
  for (double e : report.estimates) ss += (e - mean) * (e - mean);
  report.empirical_variance = ss / static_cast<double>(report.estimates.size() - 1);
  return report;
}

EstimationReport cramer_rao_report(const ProbeSpec& probe, const ChannelSpec& channel, Param param,
                                   const EstimationConfig& config) {
  return cramer_rao_report(probe, channel, param, config, two_basis_model(probe.n_qubits));
}

}  // namespace cqfi
