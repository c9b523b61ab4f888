#include "cqfi/figures.hpp"

#include <array>
#include <cstdio>
#include <filesystem>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "cqfi/errors.hpp"
#include "cqfi/heatmap.hpp"
#include "cqfi/sweep.hpp"

namespace cqfi {

namespace {

constexpr double kTheta = std::numbers::pi / 8;
constexpr double kFig4Noise = 0.3;

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

std::vector<std::string> surface_figure(const FigureOptions& o, ChannelKind channel) {
  const std::pair<char, double> settings[] = {{'a', std::numbers::pi / 6}, {'b', std::numbers::pi / 3}};
  std::vector<std::string> written;
  for (const auto& [tag, phi] : settings) {
    const std::string stem = "fig" + std::to_string(o.which) + tag;
    SweepConfig config;
    config.probe = {ProbeFamily::PhiPlus, kTheta, phi};
    config.channel = channel;
    config.p_grid = {0.0, 1.0, o.resolution};
    config.mu_grid = {0.0, 1.0, o.resolution};
    config.method = Method::Both;
    config.output_path = join(o.out_dir, stem + ".csv");
    config.jobs = o.jobs;
    run_sweep(config);
    written.push_back(config.output_path);
    for (Param param : config.params) {
      const std::string out = join(o.out_dir, stem + "_" + std::string(to_string(param)) + ".txt");
      render_heatmap(config.output_path, "qfi", out, {{"param", std::string(to_string(param))}, {"method", "sld"}});
      written.push_back(out);
    }
  }
  return written;
}

std::vector<std::string> ewl_figure(const FigureOptions& o) {
  const ChannelKind channels[] = {ChannelKind::Depolarizing, ChannelKind::BitFlip, ChannelKind::PhaseFlip};
  const std::vector<Param> params{Param::Theta, Param::Phi};
  const std::vector<double> mus = Grid{0.0, 1.0, o.resolution}.values();
  constexpr int kMinN = 2, kMaxN = 5;

  std::vector<PointTask> tasks;
  for (ChannelKind ch : channels)
    for (int n = kMinN; n <= kMaxN; ++n)
      for (double mu : mus) {
        const ProbeSpec probe{ProbeFamily::Ewl, kTheta, std::numbers::pi / 6, o.ewl_r, n};
        tasks.push_back({probe, {ch, kFig4Noise, mu}, params, Method::Sld});
      }
  const std::vector<SweepRecord> rows = evaluate_tasks(tasks, o.jobs);

  std::vector<std::string> written;
  std::ostringstream csv;
  write_csv(csv, rows);
  written.push_back(join(o.out_dir, "fig4.csv"));
  write_text_file(written.back(), csv.str());

  // series[(channel, param)][mu index][n - kMinN]
  std::map<std::pair<ChannelKind, Param>, std::vector<std::array<double, kMaxN - kMinN + 1>>> series;
  std::size_t row = 0;
  for (ChannelKind ch : channels)
    for (int n = kMinN; n <= kMaxN; ++n)
      for (std::size_t i = 0; i < mus.size(); ++i)
        for (Param param : params) {
          auto& s = series[{ch, param}];
          s.resize(mus.size());
          s[i][static_cast<std::size_t>(n - kMinN)] = rows[row++].qfi;
        }
  for (const auto& [key, values] : series) {
    std::string text = "# " + std::string(to_string(key.first)) + ", p = 0.3, r = ";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", o.ewl_r);
    text += buf;
    text += ", param " + std::string(to_string(key.second)) + "\n# mu";
    for (int n = kMinN; n <= kMaxN; ++n) text += " N=" + std::to_string(n);
    text += '\n';
    for (std::size_t i = 0; i < mus.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", mus[i]);
      text += buf;
      for (double v : values[i]) {
        std::snprintf(buf, sizeof buf, " %.17g", v);
        text += buf;
      }
      text += '\n';
    }
    written.push_back(join(o.out_dir, "fig4_" + std::string(to_string(key.first)) + "_" +
                                          std::string(to_string(key.second)) + ".dat"));
    write_text_file(written.back(), text);
  }
  return written;
}

}  // namespace

std::vector<std::string> make_figure(const FigureOptions& o) {
  if (o.which < 1 || o.which > 4) throw std::invalid_argument("figure must be 1, 2, 3 or 4");
  if (o.resolution < 2) throw std::invalid_argument("figure resolution must be >= 2");
  std::error_code ec;
  std::filesystem::create_directories(o.out_dir, ec);
  if (ec || !std::filesystem::is_directory(o.out_dir)) {
    throw io_error("cannot use output directory '" + o.out_dir + "'");
  }
  switch (o.which) {
    case 1: return surface_figure(o, ChannelKind::Depolarizing);
    case 2: return surface_figure(o, ChannelKind::BitFlip);
    case 3: return surface_figure(o, ChannelKind::PhaseFlip);
    default: return ewl_figure(o);
  }
}

}  // namespace cqfi
