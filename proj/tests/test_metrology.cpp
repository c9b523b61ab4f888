#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "cqfi/errors.hpp"
#include "cqfi/metrology.hpp"
#include "support/oracles.hpp"

using namespace cqfi;
constexpr double pi = std::numbers::pi;

TEST_CASE("measurement models are valid POVMs") {
  for (int n = 1; n <= 4; ++n) {
    const auto z = computational_basis_model(n);
    CHECK(z.elements.size() == (std::size_t{1} << n));
    CHECK_NOTHROW(validate(z));
    const auto two = two_basis_model(n);
    CHECK(two.elements.size() == (std::size_t{2} << n));
    CHECK_NOTHROW(validate(two));
  }
  const auto two = two_basis_model(2);
  CHECK(two.labels.front() == "z:00");
  CHECK(two.labels.back() == "x:--");
  CHECK_THROWS_AS(computational_basis_model(0), std::invalid_argument);
}

TEST_CASE("validate rejects broken models") {
  MeasurementModel m = computational_basis_model(2);
  m.elements.pop_back();
  m.labels.pop_back();
  CHECK_THROWS_AS(validate(m), model_error);

  m = computational_basis_model(1);
  m.elements[0](0, 0) = 1.5;
  m.elements[1](0, 0) = -0.5;
  CHECK_THROWS_AS(validate(m), model_error);

  m = computational_basis_model(1);
  m.elements[0](0, 1) = 0.1;
  CHECK_THROWS_AS(validate(m), model_error);

  CHECK_THROWS_AS(validate(MeasurementModel{}), model_error);

  MeasurementModel bad = computational_basis_model(2);
  bad.elements[0] *= 0.5;
  CHECK_THROWS_AS(outcome_probabilities(MatrixXc::Identity(4, 4) / 4.0, bad), model_error);
}

TEST_CASE("sampling a pure basis state is deterministic") {
  MatrixXc rho = MatrixXc::Zero(4, 4);
  rho(0, 0) = 1.0;
  const auto counts = sample_outcomes(rho, computational_basis_model(2), 12345, 7);
  CHECK(counts == std::vector<std::int64_t>{12345, 0, 0, 0});
  CHECK_THROWS_AS(sample_outcomes(rho, computational_basis_model(2), 0, 7), std::invalid_argument);
}

TEST_CASE("sampling the maximally mixed state is uniform within 5 sigma") {
  const std::int64_t shots = 4'000'000;
  const auto counts = sample_outcomes(MatrixXc::Identity(4, 4) / 4.0, computational_basis_model(2), shots, 99);
  CHECK(std::accumulate(counts.begin(), counts.end(), std::int64_t{0}) == shots);
  const double sigma = std::sqrt(shots * 0.25 * 0.75);
  for (auto c : counts) CHECK(std::abs(static_cast<double>(c) - shots / 4.0) <= 5 * sigma);
}

TEST_CASE("outcome probabilities equal direct traces") {
  const ProbeSpec s{ProbeFamily::PhiPlus, pi / 8, pi / 6};
  const MatrixXc rho = apply_channel(density(s), ChannelSpec{ChannelKind::PhaseFlip, 0.3, 0.5});
  const auto model = two_basis_model(2);
  const auto probs = outcome_probabilities(rho, model);
  for (std::size_t k = 0; k < probs.size(); ++k) {
    CHECK(probs[k] == doctest::Approx((rho * model.elements[k]).trace().real()).epsilon(1e-14));
  }
  // the rotated basis carries cos(phi) through the surviving coherence
  const double w = 1 - 4 * 0.3 * 0.7 * 0.5;
  const double coh = w * std::sin(pi / 4) * std::cos(pi / 6);
  CHECK(probs[4] == doctest::Approx(0.5 * (1 + coh) / 4).epsilon(1e-14));
}

TEST_CASE("sampling is reproducible per seed") {
  const MatrixXc rho = density({ProbeFamily::PhiPlus, 0.4, 1.0});
  const auto model = two_basis_model(2);
  CHECK(sample_outcomes(rho, model, 1000, 5) == sample_outcomes(rho, model, 1000, 5));
  CHECK(sample_outcomes(rho, model, 1000, 5) != sample_outcomes(rho, model, 1000, 6));
}

TEST_CASE("mle on a noiseless channel lands within 3/sqrt(MF)") {
  const ProbeSpec s{ProbeFamily::PhiPlus, pi / 8, pi / 6};
  const ChannelSpec clean{ChannelKind::Depolarizing, 0.0, 0.0};
  const auto model = two_basis_model(2);
  const std::int64_t shots = 1'000'000;
  const auto counts = sample_outcomes(density(s), model, shots, 2024);
  const double est = mle_estimate(counts, s, clean, Param::Theta, model);
  CHECK(std::abs(est - pi / 8) <= 3 / std::sqrt(shots * 4.0));

  const double est_phi = mle_estimate(counts, s, clean, Param::Phi, model);
  CHECK(std::abs(est_phi - pi / 6) <= 3 / std::sqrt(shots * qfi_numeric(s, clean, Param::Phi) / 2));
}

TEST_CASE("mle at the window boundary") {
  const ProbeSpec s{ProbeFamily::PhiPlus, 0.0, pi / 6};
  const ChannelSpec clean{ChannelKind::BitFlip, 0.0, 0.0};
  const auto model = computational_basis_model(2);
  const auto counts = sample_outcomes(density(s), model, 5000, 3);
  CHECK(mle_estimate(counts, s, clean, Param::Theta, model) == 0.0);
}

TEST_CASE("mle input errors and seed sensitivity") {
  const ProbeSpec s{ProbeFamily::PhiPlus, pi / 8, pi / 6};
  const ChannelSpec c{ChannelKind::PhaseFlip, 0.3, 0.5};
  const auto model = two_basis_model(2);
  const std::vector<std::int64_t> zeros(model.elements.size(), 0);
  CHECK_THROWS_AS(mle_estimate(zeros, s, c, Param::Phi, model), std::invalid_argument);
  const std::vector<std::int64_t> short_counts{1, 2};
  CHECK_THROWS_AS(mle_estimate(short_counts, s, c, Param::Phi, model), std::invalid_argument);

  const MatrixXc rho = apply_channel(density(s), c);
  const double a = mle_estimate(sample_outcomes(rho, model, 10000, 1), s, c, Param::Phi, model);
  const double b = mle_estimate(sample_outcomes(rho, model, 10000, 2), s, c, Param::Phi, model);
  CHECK(a != b);
  CHECK(mle_estimate(sample_outcomes(rho, model, 10000, 1), s, c, Param::Phi, model) == a);
}

TEST_CASE("pure probe variance respects the bound") {
  const ProbeSpec s{ProbeFamily::PhiPlus, pi / 8, pi / 6};
  const EstimationConfig cfg{10000, 200, 17};
  const auto rep = cramer_rao_report(s, ChannelSpec{}, Param::Theta, cfg);
  REQUIRE(rep.bound.has_value());
  CHECK(rep.qfi == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(*rep.bound == doctest::Approx(1.0 / (10000 * 4.0)));
  CHECK(rep.estimates.size() == 200);
  CHECK(rep.empirical_variance >= 0.8 / (10000 * 4.0));
  CHECK(rep.respects_bound());
  const double ratio = rep.empirical_variance / *rep.bound;
  MESSAGE("variance / bound = " << ratio);
  if (ratio > 3.0) MESSAGE("measurement is far from saturating the bound");
}

TEST_CASE("correlations tighten the phase-flip bound") {
  const ProbeSpec s{ProbeFamily::PhiPlus, pi / 8, pi / 6};
  const EstimationConfig cfg{10000, 20, 4};
  const auto r0 = cramer_rao_report(s, ChannelSpec{ChannelKind::PhaseFlip, 0.3, 0.0}, Param::Phi, cfg);
  const auto r1 = cramer_rao_report(s, ChannelSpec{ChannelKind::PhaseFlip, 0.3, 1.0}, Param::Phi, cfg);
  REQUIRE(r0.bound.has_value());
  REQUIRE(r1.bound.has_value());
  CHECK(*r1.bound < *r0.bound);
}

TEST_CASE("vanishing QFI is flagged unbounded") {
  const ProbeSpec s{ProbeFamily::PhiPlus, pi / 8, pi / 6};
  const auto rep = cramer_rao_report(s, ChannelSpec{ChannelKind::Depolarizing, 0.75, 0.0}, Param::Phi, {});
  CHECK(rep.unbounded());
  CHECK(rep.estimates.empty());
  CHECK(rep.respects_bound());
}

TEST_CASE("reports are seed deterministic") {
  const ProbeSpec s{ProbeFamily::PhiPlus, pi / 8, pi / 6};
  const ChannelSpec c{ChannelKind::BitFlip, 0.2, 0.4};
  const EstimationConfig cfg{2000, 10, 77};
  const auto a = cramer_rao_report(s, c, Param::Phi, cfg);
  const auto b = cramer_rao_report(s, c, Param::Phi, cfg);
  CHECK(a.estimates == b.estimates);
  CHECK(a.empirical_variance == b.empirical_variance);
  CHECK(trial_seed(1, 0) != trial_seed(1, 1));
  CHECK(trial_seed(1, 0) != trial_seed(2, 0));
  CHECK(variance_slack(200) == doctest::Approx(3 * std::sqrt(2.0 / 199)));
  CHECK_THROWS_AS(variance_slack(1), std::invalid_argument);
  CHECK_THROWS_AS(cramer_rao_report(s, c, Param::Phi, EstimationConfig{0, 10, 1}), std::invalid_argument);
}
