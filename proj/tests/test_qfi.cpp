#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "cqfi/closed_forms.hpp"
#include "cqfi/cross_check.hpp"
#include "cqfi/errors.hpp"
#include "cqfi/qfi.hpp"
#include "support/oracles.hpp"

using namespace cqfi;
using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;
constexpr ChannelKind kAllKinds[] = {ChannelKind::Depolarizing, ChannelKind::BitFlip, ChannelKind::BitPhaseFlip,
                                     ChannelKind::PhaseFlip};

TEST_CASE("pure phi+ probe") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 50; ++t) {
    const ProbeSpec s{ProbeFamily::PhiPlus, u(rng) * pi, u(rng) * 2 * pi};
    const MatrixXc rho = density(s);
    CHECK(qfi_sld<double>(rho, density_derivative(s, Param::Theta)) == doctest::Approx(4.0).epsilon(1e-12));
    const double f_phi = qfi_sld<double>(rho, density_derivative(s, Param::Phi));
    CHECK(f_phi == doctest::Approx(std::pow(std::sin(2 * s.theta), 2)).epsilon(1e-10));
    CHECK(f_phi == doctest::Approx(oracle::pure_state_qfi(pure_component(s), pure_component_derivative(s, Param::Phi)))
                       .epsilon(1e-10));
  }
}

TEST_CASE("maximally mixed output carries no information") {
  const ProbeSpec s{ProbeFamily::PhiPlus, pi / 8, pi / 6};
  const ChannelSpec c{ChannelKind::Depolarizing, 0.75, 0.0};
  for (Param p : {Param::Theta, Param::Phi}) {
    const ChannelOutput out = channel_output(s, c, p);
    CHECK(oracle::max_abs(out.rho - MatrixXc::Identity(4, 4) / 4.0) < 1e-15);
    CHECK(std::abs(qfi_sld<double>(out.rho, out.d_rho)) <= 1e-9);
    CHECK(std::abs(qfi_numeric(s, c, p)) <= 1e-9);
  }
  for (auto f : {ProbeFamily::PsiPlus, ProbeFamily::PhiMinus}) {
    const MatrixXc d = density_derivative({f, 0.4, 1.0}, Param::Theta);
    CHECK(std::abs(qfi_sld<double>(MatrixXc::Identity(4, 4) / 4.0, apply_channel(d, c))) <= 1e-9);
  }
}

TEST_CASE("qfi_sld agrees with the Lyapunov-equation oracle") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(0, 1);
  double worst = 0;
  for (int t = 0; t < 200; ++t) {
    const int dim = 2 << (t % 4);
    const MatrixXc rho = oracle::random_density(rng, dim);
    const MatrixXc d = oracle::random_hermitian(rng, dim);
    const MatrixXc d_rho = d - d.trace().real() / dim * MatrixXc::Identity(dim, dim);
    const double f = qfi_sld<double>(rho, d_rho);
    worst = std::max(worst, std::abs(f - oracle::qfi_lyapunov(rho, d_rho)) / std::max(1.0, f));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("qfi_numeric agrees with the Lyapunov oracle on mixed ewl outputs") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 40; ++t) {
    const ProbeSpec s{ProbeFamily::Ewl, u(rng) * pi / 2, u(rng) * 2 * pi, 0.2 + 0.7 * u(rng), 2 + t % 3};
    const ChannelSpec c{kAllKinds[t % 4], u(rng), u(rng)};
    const Param p = t % 2 ? Param::Phi : Param::Theta;
    const ChannelOutput out = channel_output(s, c, p);
    CHECK(qfi_numeric(s, c, p) == doctest::Approx(oracle::qfi_lyapunov(out.rho, out.d_rho)).epsilon(1e-8));
  }
}

TEST_CASE("build_sld") {
  std::mt19937_64 rng(34);
  for (int t = 0; t < 50; ++t) {
    const int dim = 4 << (t % 2);
    const MatrixXc rho = oracle::random_density(rng, dim);
    MatrixXc d_rho = oracle::random_hermitian(rng, dim);
    d_rho -= d_rho.trace().real() / dim * MatrixXc::Identity(dim, dim);
    const MatrixXc l = build_sld<double>(rho, d_rho);
    CHECK(oracle::max_abs(d_rho - (l * rho + rho * l) / 2.0) <= 1e-9);
    CHECK(oracle::max_abs(l - l.adjoint()) <= 1e-9);
    CHECK((l * l * rho).trace().real() == doctest::Approx(qfi_sld<double>(rho, d_rho)).epsilon(1e-10));
  }

  const MatrixXc mixed = MatrixXc::Identity(4, 4) / 4.0;
  CHECK(oracle::max_abs(build_sld<double>(mixed, MatrixXc::Zero(4, 4))) == 0.0);

  const ProbeSpec s{ProbeFamily::PsiMinus, 0.3, 1.2};
  for (Param p : {Param::Theta, Param::Phi}) {
    const MatrixXc rho = density(s);
    const MatrixXc l = build_sld<double>(rho, density_derivative(s, p));
    CHECK((l * l * rho).trace().real() ==
          doctest::Approx(oracle::pure_state_qfi(pure_component(s), pure_component_derivative(s, p))).epsilon(1e-10));
  }
}

TEST_CASE("qfi_spectral limiting cases") {
  SUBCASE("rank one reduces to the pure-state term") {
    const ProbeSpec s{ProbeFamily::PhiPlus, 0.5, 0.3};
    MatrixXc vecs = MatrixXc::Zero(4, 4), dvecs = MatrixXc::Zero(4, 4);
    for (int i = 0; i < 4; ++i) vecs(i, i) = 1.0;
    vecs.col(0) = pure_component(s);
    dvecs.col(0) = pure_component_derivative(s, Param::Phi);
    Eigen::VectorXd lam = Eigen::VectorXd::Zero(4), dlam = Eigen::VectorXd::Zero(4);
    lam(0) = 1.0;
    const auto data = make_spectral_data<double>(lam, vecs, dlam, dvecs);
    CHECK(qfi_spectral(data) == doctest::Approx(data.pure_term_qfi(0)));
    CHECK(qfi_spectral(data) == doctest::Approx(std::pow(std::sin(1.0), 2)));
  }
  SUBCASE("fixed eigenbasis gives the classical Fisher information") {
    Eigen::VectorXd lam(3), dlam(3);
    lam << 0.2, 0.3, 0.5;
    dlam << 0.1, -0.4, 0.3;
    const MatrixXc id = MatrixXc::Identity(3, 3);
    const auto data = make_spectral_data<double>(lam, id, dlam, MatrixXc::Zero(3, 3));
    CHECK(qfi_spectral(data) == doctest::Approx(0.01 / 0.2 + 0.16 / 0.3 + 0.09 / 0.5));
    CHECK(qfi_sld<double>(lam.cast<cd>().asDiagonal(), dlam.cast<cd>().asDiagonal()) ==
          doctest::Approx(qfi_spectral(data)));
  }
}

TEST_CASE("qfi_spectral on closed-form data matches qfi_sld") {
  const auto data = depolarizing_spectrum(pi / 8, pi / 6, 0.3, 0.5, Param::Theta);
  const ProbeSpec s{ProbeFamily::PhiPlus, pi / 8, pi / 6};
  const ChannelSpec c{ChannelKind::Depolarizing, 0.3, 0.5};
  CHECK(std::abs(qfi_spectral(data) - qfi_numeric(s, c, Param::Theta)) <= 1e-7);

  std::mt19937_64 rng(35);
  std::uniform_real_distribution<double> u(0, 1);
  int compared = 0;
  for (int t = 0; t < 500; ++t) {
    const ChannelSpec ch{kAllKinds[t % 4], u(rng), u(rng)};
    const ProbeSpec pr{ProbeFamily::PhiPlus, u(rng) * pi / 2, u(rng) * 2 * pi};
    const Param p = t % 3 ? Param::Phi : Param::Theta;
    try {
      CHECK(std::abs(closed_form_qfi(ch, pr.theta, pr.phi, p) - qfi_numeric(pr, ch, p)) <= 1e-7);
      ++compared;
    } catch (const degenerate_spectrum&) {
    }
  }
  CHECK(compared >= 490);
}

TEST_CASE("qfi_spectral is invariant under constant eigenvector phases") {
  std::mt19937_64 rng(36);
  std::uniform_real_distribution<double> u(0, 2 * pi);
  for (int t = 0; t < 20; ++t) {
    auto data = bitflip_spectrum(0.3 + 0.05 * t, 0.2 * t, 0.27, 0.4, t % 2 ? Param::Phi : Param::Theta);
    const double before = qfi_spectral(data);
    for (Eigen::Index i = 0; i < 4; ++i) {
      const cd phase = std::polar(1.0, u(rng));
      data.eigenvectors.col(i) *= phase;
      data.d_eigenvectors.col(i) *= phase;
    }
    CHECK(qfi_spectral(data) == doctest::Approx(before).epsilon(1e-10));
  }
}

TEST_CASE("finite-difference derivative changes the QFI by at most 1e-5 relative") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 100; ++t) {
    ProbeSpec s{static_cast<ProbeFamily>(t % 5), u(rng) * pi / 2, u(rng) * 2 * pi, u(rng), 2};
    if (s.family == ProbeFamily::Ewl) s.n_qubits = 2 + t % 3;
    const ChannelSpec c{kAllKinds[t % 4], u(rng), u(rng)};
    const Param p = t % 2 ? Param::Phi : Param::Theta;
    const double f = qfi_numeric(s, c, p);
    CHECK(std::abs(qfi_finite_difference(s, c, p) - f) <= 1e-5 * std::max(1.0, f));
    CHECK(f >= -1e-10);
  }
}

TEST_CASE("mixing with white noise never increases the QFI") {
  for (auto k : kAllKinds)
    for (double p : {0.1, 0.4})
      for (double mu : {0.0, 0.6})
        for (int n : {2, 3}) {
          const ChannelSpec c{k, p, mu};
          for (Param par : {Param::Theta, Param::Phi}) {
            const double pure = qfi_numeric({ProbeFamily::Ewl, pi / 8, pi / 6, 1.0, n}, c, par);
            for (double r : {0.3, 0.9}) {
              CHECK(qfi_numeric({ProbeFamily::Ewl, pi / 8, pi / 6, r, n}, c, par) <= pure + 1e-10);
            }
          }
        }
}

TEST_CASE("qfi input contracts") {
  MatrixXc rho = MatrixXc::Identity(4, 4) / 4.0;
  MatrixXc bad = rho;
  bad(0, 1) = 1e-6;
  CHECK_THROWS_AS(qfi_sld<double>(bad, MatrixXc::Zero(4, 4)), contract_violation);
  CHECK_THROWS_AS(qfi_sld<double>(rho * 2.0, MatrixXc::Zero(4, 4)), contract_violation);
  MatrixXc d = MatrixXc::Zero(4, 4);
  d(0, 1) = 1.0;
  CHECK_THROWS_AS(qfi_sld<double>(rho, d), contract_violation);
  CHECK_THROWS_AS(build_sld<double>(rho, MatrixXc::Zero(2, 2)), contract_violation);
}

TEST_CASE("single precision instantiation") {
  const ProbeSpec s{ProbeFamily::PhiPlus, 0.3, 0.2};
  const CMatrix<float> rho = density(s).cast<std::complex<float>>();
  const CMatrix<float> d = density_derivative(s, Param::Theta).cast<std::complex<float>>();
  CHECK(qfi_sld<float>(rho, d, 1e-6f) == doctest::Approx(4.0f).epsilon(1e-4));
}

TEST_CASE("Cramer-Rao bound") {
  CHECK(*cramer_rao_bound(4.0, 1) == doctest::Approx(0.25));
  CHECK(*cramer_rao_bound(4.0, 100) == doctest::Approx(0.0025));
  CHECK(*cramer_rao_bound(std::pow(std::sin(pi / 4), 2), 10000) == doctest::Approx(2e-4));
  CHECK_FALSE(cramer_rao_bound(0.0, 10).has_value());
  CHECK_FALSE(cramer_rao_bound(-1e-12, 10).has_value());
  CHECK_THROWS_AS(cramer_rao_bound(1.0, 0), std::invalid_argument);
}

TEST_CASE("fully correlated depolarizing noise hurts odd-N ewl theta estimation") {
  // Z on every qubit is a phase flip of the GHZ component only when N is odd.
  const double expected[][2] = {{1.7647198522, 1.2609729730}, {2.3318315719, 1.2870620690}};
  for (int i = 0; i < 2; ++i) {
    const ProbeSpec s{ProbeFamily::Ewl, std::numbers::pi / 8, std::numbers::pi / 6, 0.9, 3 + 2 * i};
    for (int j = 0; j < 2; ++j) {
      const double mu = j;
      const MatrixXc rho = oracle::brute_force_channel(density(s), ChannelKind::Depolarizing, 0.3, mu);
      const MatrixXc d =
          oracle::brute_force_channel(density_derivative(s, Param::Theta), ChannelKind::Depolarizing, 0.3, mu);
      CHECK(oracle::qfi_lyapunov(rho, d) == doctest::Approx(expected[i][j]).epsilon(1e-9));
      CHECK(qfi_numeric(s, {ChannelKind::Depolarizing, 0.3, mu}, Param::Theta) ==
            doctest::Approx(expected[i][j]).epsilon(1e-9));
    }
  }
}
