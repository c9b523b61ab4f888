// cqfi: quantum Fisher information of Bell and EWL probes under correlated Pauli channels.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cqfi/cross_check.hpp"
#include "cqfi/errors.hpp"
#include "cqfi/expression.hpp"
#include "cqfi/figures.hpp"
#include "cqfi/heatmap.hpp"
#include "cqfi/metrology.hpp"
#include "cqfi/sweep.hpp"

namespace {

using namespace cqfi;

constexpr int kExitCheckFailed = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitRuntime = 3;

struct CommonArgs {
  std::string channel = "depolarizing";
  std::string family = "phi+";
  std::string theta = "pi/8";
  std::string phi = "pi/6";
  std::string r = "0.9";
  int n = 2;
  std::string p = "0";
  std::string mu = "0";
  std::vector<std::string> params;
  std::optional<std::string> method;
  std::string config;

  ProbeSpec probe() const {
    ProbeSpec s;
    s.family = parse_family(family);
    s.theta = parse_real_expression(theta);
    s.phi = parse_real_expression(phi);
    s.r = parse_real_expression(r);
    s.n_qubits = n;
    validate(s);
    return s;
  }

  ChannelSpec channel_spec() const {
    ChannelSpec c{parse_channel(channel), parse_real_expression(p), parse_real_expression(mu)};
    validate(c);
    return c;
  }

  std::vector<Param> param_list() const {
    if (params.empty()) return {Param::Theta, Param::Phi};
    std::vector<Param> out;
    for (const auto& s : params) {
      const Param p = parse_param(s);
      if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
    }
    return out;
  }

  Method resolved_method(const ProbeSpec& s) const { return method ? parse_method(*method) : default_method(s); }
};

void add_config_flag(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--config", a.config, "Read key = value defaults from a file; flags given here win");
}

void add_probe_flags(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--family", a.family, "phi+|phi-|psi+|psi-|ewl")->capture_default_str();
  cmd->add_option("--theta", a.theta, "Amplitude angle, e.g. pi/8")->capture_default_str();
  cmd->add_option("--phi", a.phi, "Relative phase, e.g. pi/6")->capture_default_str();
  cmd->add_option("--r", a.r, "EWL mixing ratio")->capture_default_str();
  cmd->add_option("--n", a.n, "Qubit count (ewl only)")->capture_default_str();
}

void add_channel_flags(CLI::App* cmd, CommonArgs& a, bool with_point) {
  cmd->add_option("--channel", a.channel, "depolarizing|bitflip|bitphaseflip|phaseflip")->capture_default_str();
  if (with_point) {
    cmd->add_option("--p", a.p, "Decoherence strength")->capture_default_str();
    cmd->add_option("--mu", a.mu, "Correlation strength")->capture_default_str();
  }
}

// Splices key = value lines from --config into argv right after the subcommand,
// skipping keys the command line already sets, so explicit flags take precedence.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::optional<std::string> path;
  std::set<std::string> given;
  std::size_t sub = 0;
  for (std::size_t i = 1; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (sub == 0 && !a.starts_with("-")) sub = i;
    if (!a.starts_with("--")) continue;
    const auto eq = a.find('=');
    const std::string key = a.substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
    given.insert(key);
    if (key == "config") path = eq == std::string::npos ? (i + 1 < args.size() ? args[i + 1] : "") : a.substr(eq + 1);
  }
  if (!path || sub == 0) return args;

  std::vector<std::string> injected;
  for (const auto& item : CLI::ConfigINI().from_file(*path)) {
    const std::string key = item.fullname();
    if (given.count(key)) continue;
    if (item.inputs.size() == 1 && item.inputs[0] == "true") {
      injected.push_back("--" + key);
      continue;
    }
    for (const auto& v : item.inputs) {
      injected.push_back("--" + key);
      injected.push_back(v);
    }
  }
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(sub) + 1, injected.begin(), injected.end());
  return args;
}

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int cmd_point(const CommonArgs& a) {
  const ProbeSpec probe = a.probe();
  const ChannelSpec channel = a.channel_spec();
  const Method method = a.resolved_method(probe);
  require_method_supported(probe, method);
  std::cout << kCsvHeader << '\n';
  std::vector<std::string> notes;
  for (Param param : a.param_list()) {
    const PointEvaluation eval = evaluate_point(probe, channel, param, method);
    for (const auto& r : eval.records) std::cout << format_csv_row(r) << '\n';
    if (eval.discrepancy) {
      notes.push_back("# " + std::string(to_string(param)) + ": |closed - sld| = " + g17(*eval.discrepancy) +
                      (eval.closed_fell_back ? " (closed-form block degenerate, sld value reused)" : ""));
    }
  }
  for (const auto& n : notes) std::cout << n << '\n';
  return 0;
}

int cmd_sweep(const CommonArgs& a, const std::string& grid_p, const std::string& grid_mu, const std::string& out,
              int jobs) {
  SweepConfig config;
  config.probe = a.probe();
  config.channel = parse_channel(a.channel);
  config.p_grid = parse_grid(grid_p);
  config.mu_grid = parse_grid(grid_mu);
  config.params = a.param_list();
  config.method = a.resolved_method(config.probe);
  config.output_path = out;
  config.jobs = jobs;
  const auto rows = run_sweep(config);
  std::cerr << "wrote " << rows.size() << " rows to " << out << '\n';
  return 0;
}

int cmd_estimate(const CommonArgs& a, const EstimationConfig& cfg, const std::string& basis) {
  const ProbeSpec probe = a.probe();
  const ChannelSpec channel = a.channel_spec();
  const auto params = a.param_list();
  const MeasurementModel model =
      basis == "z" ? computational_basis_model(probe.n_qubits) : two_basis_model(probe.n_qubits);
  bool all_consistent = true;
  for (Param param : params) {
    const EstimationReport r = cramer_rao_report(probe, channel, param, cfg, model);
    std::cout << "param " << to_string(param) << ": true " << g17(r.true_value) << ", qfi " << g17(r.qfi) << '\n';
    if (r.unbounded()) {
      std::cout << "  qfi vanishes: no finite Cramer-Rao bound, estimation skipped (unbounded)\n";
      continue;
    }
    double mean = 0.0;
    for (double e : r.estimates) mean += e;
    mean /= static_cast<double>(r.estimates.size());
    std::cout << "  M = " << cfg.repetitions << ", trials = " << cfg.trials << ", seed = " << cfg.seed << '\n'
              << "  mean estimate       " << g17(mean) << '\n'
              << "  empirical variance  " << g17(r.empirical_variance) << '\n'
              << "  bound 1/(M F)       " << g17(*r.bound) << '\n'
              << "  ratio var / bound   " << g17(r.empirical_variance / *r.bound) << '\n'
              << "  allowed minimum     " << g17((1.0 - r.slack) * *r.bound) << '\n'
              << "  " << (r.respects_bound() ? "consistent with the bound" : "BELOW the bound") << '\n';
    all_consistent = all_consistent && r.respects_bound();
  }
  return all_consistent ? 0 : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum Fisher information under correlated Pauli channels"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  CommonArgs common;
  std::string grid_p = "0:1:101", grid_mu = "0:1:101", out, in, column = "qfi";
  int jobs = 0, figure_which = 1, resolution = 101, samples = 1000;
  std::uint64_t seed = 1;
  double tol = 1e-6;
  EstimationConfig est;
  std::string basis = "two";
  std::vector<std::string> where;
  std::optional<std::string> filter_param, filter_method;

  auto* point = app.add_subcommand("point", "QFI at one (p, mu)");
  add_config_flag(point, common);
  add_probe_flags(point, common);
  add_channel_flags(point, common, true);
  point->add_option("--param", common.params, "theta|phi (repeatable; default both)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  point->add_option("--method", common.method, "sld|closed|both (default both where closed forms exist)");

  auto* sweep = app.add_subcommand("sweep", "QFI over a (p, mu) grid, written as CSV");
  add_config_flag(sweep, common);
  add_probe_flags(sweep, common);
  add_channel_flags(sweep, common, false);
  sweep->add_option("--param", common.params, "theta|phi (repeatable; default both)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  sweep->add_option("--method", common.method, "sld|closed|both");
  sweep->add_option("--grid-p", grid_p, "start:stop:count")->capture_default_str();
  sweep->add_option("--grid-mu", grid_mu, "start:stop:count")->capture_default_str();
  sweep->add_option("--out", out, "CSV path")->required();
  sweep->add_option("--jobs", jobs, "Worker threads (0: all cores)")->capture_default_str();

  auto* figure = app.add_subcommand("figure", "Data for figure 1, 2, 3 or 4");
  add_config_flag(figure, common);
  figure->add_option("which", figure_which, "1|2|3|4")->required()->check(CLI::Range(1, 4));
  figure->add_option("--out", out, "Output directory")->required();
  figure->add_option("--resolution", resolution, "Grid points per axis")->capture_default_str();
  figure->add_option("--r", common.r, "EWL mixing ratio (figure 4)")->capture_default_str();
  figure->add_option("--jobs", jobs, "Worker threads (0: all cores)")->capture_default_str();

  auto* check = app.add_subcommand("check", "Closed form vs SLD vs finite difference on random tuples");
  add_config_flag(check, common);
  check->add_option("--samples", samples)->capture_default_str()->check(CLI::PositiveNumber);
  check->add_option("--seed", seed)->capture_default_str();
  check->add_option("--tol", tol)->capture_default_str();

  auto* estimate = app.add_subcommand("estimate", "Monte-Carlo MLE variance against the Cramer-Rao bound");
  add_config_flag(estimate, common);
  add_probe_flags(estimate, common);
  add_channel_flags(estimate, common, true);
  estimate->add_option("--param", common.params, "theta|phi (repeatable; default both)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  estimate->add_option("--repetitions,-M", est.repetitions, "Shots per trial")->capture_default_str();
  estimate->add_option("--trials", est.trials)->capture_default_str();
  estimate->add_option("--seed", est.seed)->capture_default_str();
  estimate->add_option("--basis", basis, "two (Z and X bases, default) | z")
      ->check(CLI::IsMember({"two", "z"}))
      ->capture_default_str();

  auto* heatmap = app.add_subcommand("heatmap", "Text heatmap of a sweep CSV");
  add_config_flag(heatmap, common);
  heatmap->add_option("--in", in, "Sweep CSV")->required();
  heatmap->add_option("--out", out, "Output text file")->required();
  heatmap->add_option("--column", column)->capture_default_str();
  heatmap->add_option("--param", filter_param, "Keep rows with this param");
  heatmap->add_option("--method", filter_method, "Keep rows with this method");
  heatmap->add_option("--where", where, "column=value (repeatable)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  std::vector<std::string> args;
  try {
    args = expand_config(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "cqfi: config: " << e.what() << '\n';
    return kExitBadInput;
  }
  std::vector<const char*> cargs;
  for (const auto& s : args) cargs.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*point) return cmd_point(common);
    if (*sweep) return cmd_sweep(common, grid_p, grid_mu, out, jobs);
    if (*figure) {
      FigureOptions o;
      o.which = figure_which;
      o.out_dir = out;
      o.resolution = resolution;
      o.ewl_r = parse_real_expression(common.r);
      o.jobs = jobs;
      for (const auto& f : make_figure(o)) std::cout << f << '\n';
      return 0;
    }
    if (*check) {
      const CrossCheckReport r = cross_check(samples, seed, tol);
      std::cout << format_report(r);
      return r.passed() ? 0 : kExitCheckFailed;
    }
    if (*estimate) return cmd_estimate(common, est, basis);
    if (*heatmap) {
      RowFilter filter;
      if (filter_param) filter.emplace_back("param", *filter_param);
      if (filter_method) filter.emplace_back("method", *filter_method);
      for (const auto& w : where) {
        const auto eq = w.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("--where expects column=value, got '" + w + "'");
        filter.emplace_back(w.substr(0, eq), w.substr(eq + 1));
      }
      render_heatmap(in, column, out, filter);
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "cqfi: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "cqfi: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
