#include "cqfi/cross_check.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <stdexcept>

#include "cqfi/closed_forms.hpp"
#include "cqfi/errors.hpp"
#include "cqfi/qfi.hpp"

namespace cqfi {

namespace {

// Portable uniform [0, 1) draw; std::uniform_real_distribution is not pinned by the standard.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::string describe(const CrossCheckTuple& t) {
  char buf[200];
  std::snprintf(buf, sizeof buf, "%s p=%.17g mu=%.17g theta=%.17g phi=%.17g param=%s",
                std::string(to_string(t.channel.kind)).c_str(), t.channel.p, t.channel.mu, t.theta, t.phi,
                std::string(to_string(t.param)).c_str());
  return buf;
}

}  // namespace

double qfi_finite_difference(const ProbeSpec& probe, const ChannelSpec& channel, Param param, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  auto shifted = [&](double delta) {
    ProbeSpec s = probe;
    (param == Param::Theta ? s.theta : s.phi) += delta;
    return apply_channel(density(s), channel);
  };
  const MatrixXc rho = apply_channel(density(probe), channel);
  const MatrixXc diff = (shifted(h) - shifted(-h)) / (2.0 * h);
  // Rounding in rho(x +- h) is amplified by 1/2h; keep only the Hermitian part.
  const MatrixXc d_rho = (diff + diff.adjoint()) / 2.0;
  return qfi_sld<double>(rho, d_rho);
}

CrossCheckReport cross_check(int samples, std::uint64_t seed, double tol) {
  if (samples < 1) throw std::invalid_argument("cross_check: samples must be >= 1");
  CrossCheckReport report;
  report.samples = samples;
  report.seed = seed;
  report.tol = tol;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < samples; ++i) {
    CrossCheckTuple t;
    t.channel.kind = static_cast<ChannelKind>(rng() % 4);
    t.channel.p = unit(rng);
    t.channel.mu = unit(rng);
    t.theta = unit(rng) * std::numbers::pi / 2;
    t.phi = unit(rng) * 2 * std::numbers::pi;
    t.param = rng() % 2 ? Param::Phi : Param::Theta;

    const ProbeSpec probe{ProbeFamily::PhiPlus, t.theta, t.phi};
    const double sld = qfi_numeric(probe, t.channel, t.param);
    const double fd = qfi_finite_difference(probe, t.channel, t.param);
    const double fd_dev = std::abs(fd - sld) / std::max(1.0, std::abs(sld));
    if (i == 0 || fd_dev > report.max_fd_vs_sld) {
      report.max_fd_vs_sld = fd_dev;
      report.worst_fd = t;
    }
    try {
      const double dev = std::abs(closed_form_qfi(t.channel, t.theta, t.phi, t.param) - sld);
      if (dev > report.max_closed_vs_sld) {
        report.max_closed_vs_sld = dev;
        report.worst_closed = t;
      }
    } catch (const degenerate_spectrum&) {
      ++report.degenerate;
    }
  }
  return report;
}

std::string format_report(const CrossCheckReport& r) {
  char buf[512];
  std::string out;
  std::snprintf(buf, sizeof buf, "cross-check: %d samples, seed %llu, tol %.3g\n", r.samples,
                static_cast<unsigned long long>(r.seed), r.tol);
  out += buf;
  std::snprintf(buf, sizeof buf, "  closed vs sld        max |dF|      = %.6e  at %s\n", r.max_closed_vs_sld,
                describe(r.worst_closed).c_str());
  out += buf;
  std::snprintf(buf, sizeof buf, "  finite diff vs sld   max rel |dF|  = %.6e  at %s\n", r.max_fd_vs_sld,
                describe(r.worst_fd).c_str());
  out += buf;
  std::snprintf(buf, sizeof buf, "  degenerate closed-form blocks skipped: %d\n", r.degenerate);
  out += buf;
  out += r.passed() ? "PASS\n" : "FAIL\n";
  return out;
}

}  // namespace cqfi
