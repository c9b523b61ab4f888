#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "cqfi/probe_states.hpp"
#include "support/oracles.hpp"

using namespace cqfi;
using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;

TEST_CASE("bell state vectors") {
  VectorXc v = bell_state_vector({ProbeFamily::PhiPlus, 0.0, 1.3});
  CHECK(oracle::max_abs(v - VectorXc(Eigen::Vector4cd(1, 0, 0, 0))) == 0.0);

  v = bell_state_vector({ProbeFamily::PhiPlus, pi / 4, 0.0});
  const double s = 1 / std::sqrt(2.0);
  CHECK(oracle::max_abs(v - VectorXc(Eigen::Vector4cd(s, 0, 0, s))) < 1e-15);

  v = bell_state_vector({ProbeFamily::PsiMinus, pi / 8, pi / 6});
  const VectorXc expected = Eigen::Vector4cd(0, std::cos(pi / 8), -std::polar(1.0, pi / 6) * std::sin(pi / 8), 0);
  CHECK(oracle::max_abs(v - expected) < 1e-16);

  v = bell_state_vector({ProbeFamily::PhiMinus, 0.3, 0.2});
  CHECK(v(3) == -std::polar(1.0, 0.2) * std::sin(0.3));
  v = bell_state_vector({ProbeFamily::PsiPlus, 0.3, 0.2});
  CHECK(v(2) == std::polar(1.0, 0.2) * std::sin(0.3));
  CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(bell_state_vector({ProbeFamily::Ewl, 0.3, 0.2}), std::invalid_argument);
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(validate(ProbeSpec{ProbeFamily::PhiPlus, 0.1, 0.2, 0.9, 3}), std::invalid_argument);
  CHECK_THROWS_AS(validate(ProbeSpec{ProbeFamily::Ewl, 0.1, 0.2, 1.1, 3}), std::invalid_argument);
  CHECK_THROWS_AS(validate(ProbeSpec{ProbeFamily::Ewl, 0.1, 0.2, 0.5, 7}), std::invalid_argument);
  CHECK_THROWS_AS(validate(ProbeSpec{ProbeFamily::Ewl, 0.1, 0.2, 0.5, 1}), std::invalid_argument);
  CHECK_THROWS_AS(validate(ProbeSpec{ProbeFamily::PhiPlus, std::nan(""), 0.2}), std::invalid_argument);
  CHECK_NOTHROW(validate(ProbeSpec{ProbeFamily::Ewl, 0.1, 0.2, 0.0, 6}));
}

TEST_CASE("density examples") {
  const ProbeSpec ewl{ProbeFamily::Ewl, pi / 4, 0.0, 1.0, 2};
  CHECK(oracle::max_abs(density(ewl) - density({ProbeFamily::PhiPlus, pi / 4, 0.0})) < 1e-16);

  const MatrixXc mixed = density({ProbeFamily::Ewl, 0.7, 0.1, 0.0, 3});
  CHECK(oracle::max_abs(mixed - MatrixXc::Identity(8, 8) / 8.0) == 0.0);

  const MatrixXc rho = density({ProbeFamily::PhiPlus, pi / 8, pi / 6});
  CHECK(rho(0, 0).real() == doctest::Approx(std::pow(std::cos(pi / 8), 2)));
  CHECK(rho(3, 3).real() == doctest::Approx(std::pow(std::sin(pi / 8), 2)));
  CHECK(std::abs(rho(0, 3) - std::polar(1.0, -pi / 6) * std::sin(pi / 8) * std::cos(pi / 8)) < 1e-16);
}

TEST_CASE("ewl pure component is the N-qubit GHZ-type vector") {
  const ProbeSpec s{ProbeFamily::Ewl, 0.4, 1.1, 0.6, 4};
  const VectorXc xi = pure_component(s);
  CHECK(xi.size() == 16);
  CHECK(xi(0) == std::cos(0.4));
  CHECK(xi(15) == std::polar(1.0, 1.1) * std::sin(0.4));
  CHECK(xi.segment(1, 14).norm() == 0.0);
  const MatrixXc expected = 0.6 * xi * xi.adjoint() + 0.4 / 16 * MatrixXc::Identity(16, 16);
  CHECK(oracle::max_abs(density(s) - expected) < 1e-16);
}

TEST_CASE("density derivative examples") {
  const double phi = 0.7;
  const MatrixXc d = density_derivative({ProbeFamily::PhiPlus, 0.0, phi}, Param::Theta);
  MatrixXc expected = MatrixXc::Zero(4, 4);
  expected(0, 3) = std::polar(1.0, -phi);
  expected(3, 0) = std::polar(1.0, phi);
  CHECK(oracle::max_abs(d - expected) < 1e-16);

  for (auto f : {ProbeFamily::PhiPlus, ProbeFamily::PhiMinus, ProbeFamily::PsiPlus, ProbeFamily::PsiMinus}) {
    CHECK(std::abs(density_derivative({f, 0.3, 0.9}, Param::Phi).trace()) < 1e-16);
  }
  for (Param p : {Param::Theta, Param::Phi}) {
    CHECK(oracle::max_abs(density_derivative({ProbeFamily::Ewl, 0.3, 0.9, 0.0, 3}, p)) == 0.0);
  }
}

TEST_CASE("analytic derivatives match finite differences") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 1);
  double worst = 0, worst_herm = 0, worst_trace = 0;
  for (int t = 0; t < 200; ++t) {
    ProbeSpec s;
    s.family = static_cast<ProbeFamily>(t % 5);
    s.theta = u(rng) * pi;
    s.phi = u(rng) * 2 * pi;
    s.r = u(rng);
    s.n_qubits = s.family == ProbeFamily::Ewl ? 2 + t % 5 : 2;
    for (Param p : {Param::Theta, Param::Phi}) {
      const MatrixXc d = density_derivative(s, p);
      worst = std::max(worst, oracle::max_abs(d - oracle::fd_density_derivative(s, p)));
      worst_herm = std::max(worst_herm, oracle::max_abs(d - d.adjoint()));
      worst_trace = std::max(worst_trace, std::abs(d.trace()));
    }
  }
  CHECK(worst <= 1e-8);
  CHECK(worst_herm <= 1e-14);
  CHECK(worst_trace <= 1e-14);
}

TEST_CASE("densities are valid states") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 100; ++t) {
    ProbeSpec s{static_cast<ProbeFamily>(t % 5), u(rng) * pi, u(rng) * 2 * pi, u(rng), 2};
    if (s.family == ProbeFamily::Ewl) s.n_qubits = 2 + t % 5;
    const MatrixXc rho = density(s);
    CHECK(oracle::max_abs(rho - rho.adjoint()) <= 1e-14);
    CHECK(rho.trace().real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(oracle::eigenvalues(rho).minCoeff() >= -1e-12);
  }
}

TEST_CASE("text forms round-trip") {
  for (auto f : {ProbeFamily::PhiPlus, ProbeFamily::PhiMinus, ProbeFamily::PsiPlus, ProbeFamily::PsiMinus,
                 ProbeFamily::Ewl}) {
    CHECK(parse_family(to_string(f)) == f);
  }
  CHECK(parse_param("theta") == Param::Theta);
  CHECK(parse_param("phi") == Param::Phi);
  CHECK_THROWS_AS(parse_family("ghz"), std::invalid_argument);
  CHECK_THROWS_AS(parse_param("r"), std::invalid_argument);
}
