#include "cqfi/heatmap.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include "cqfi/errors.hpp"
#include "cqfi/sweep.hpp"

namespace cqfi {

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

double to_real(std::string_view s, std::size_t line_no) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw format_error("line " + std::to_string(line_no) + ": '" + std::string(s) + "' is not a number");
  }
  return v;
}

std::size_t column_index(const std::vector<std::string_view>& header, std::string_view name) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw format_error("CSV has no column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - header.begin());
}

std::string g6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

HeatmapGrid read_heatmap_grid(std::istream& csv, std::string_view column, const RowFilter& filter) {
  std::string header_line;
  if (!std::getline(csv, header_line)) throw format_error("CSV is empty");
  if (!header_line.empty() && header_line.back() == '\r') header_line.pop_back();
  const auto header = split(header_line);
  const std::size_t ip = column_index(header, "p");
  const std::size_t imu = column_index(header, "mu");
  const std::size_t iv = column_index(header, column);
  std::vector<std::pair<std::size_t, std::string>> constraints;
  for (const auto& [name, value] : filter) constraints.emplace_back(column_index(header, name), value);

  std::map<std::pair<double, double>, double> cells;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(csv, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      throw format_error("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                         " fields, found " + std::to_string(fields.size()));
    }
    const bool keep = std::all_of(constraints.begin(), constraints.end(),
                                  [&](const auto& c) { return fields[c.first] == c.second; });
    if (!keep) continue;
    const std::pair key{to_real(fields[ip], line_no), to_real(fields[imu], line_no)};
    if (!cells.emplace(key, to_real(fields[iv], line_no)).second) {
      throw format_error("line " + std::to_string(line_no) + ": duplicate (p, mu) = (" + g6(key.first) + ", " +
                         g6(key.second) + "); filter on param/method to select one series");
    }
  }
  if (cells.empty()) throw format_error("no rows selected");

  HeatmapGrid grid;
  grid.column = std::string(column);
  for (const auto& [key, value] : cells) {
    grid.p_values.push_back(key.first);
    grid.mu_values.push_back(key.second);
  }
  for (auto* axis : {&grid.p_values, &grid.mu_values}) {
    std::sort(axis->begin(), axis->end());
    axis->erase(std::unique(axis->begin(), axis->end()), axis->end());
  }
  const auto np = static_cast<Eigen::Index>(grid.p_values.size());
  const auto nmu = static_cast<Eigen::Index>(grid.mu_values.size());
  if (static_cast<std::size_t>(np * nmu) != cells.size()) {
    throw format_error("rows do not form a rectangular grid: " + std::to_string(cells.size()) + " cells for " +
                       std::to_string(np) + " p values x " + std::to_string(nmu) + " mu values");
  }
  grid.values.resize(nmu, np);
  for (Eigen::Index i = 0; i < nmu; ++i)
    for (Eigen::Index j = 0; j < np; ++j)
      grid.values(i, j) =
          cells.at({grid.p_values[static_cast<std::size_t>(j)], grid.mu_values[static_cast<std::size_t>(i)]});
  return grid;
}

Eigen::MatrixXi shade_levels(const HeatmapGrid& grid) {
  const double lo = grid.values.minCoeff(), hi = grid.values.maxCoeff();
  const int top = static_cast<int>(kShades.size()) - 1;
  Eigen::MatrixXi levels = Eigen::MatrixXi::Zero(grid.values.rows(), grid.values.cols());
  if (!(hi > lo)) return levels;
  for (Eigen::Index i = 0; i < levels.rows(); ++i)
    for (Eigen::Index j = 0; j < levels.cols(); ++j) {
      const double t = (grid.values(i, j) - lo) / (hi - lo);
      levels(i, j) = std::clamp(static_cast<int>(std::floor(t * (top + 1))), 0, top);
    }
  return levels;
}

std::string shade_map(const HeatmapGrid& grid) {
  const Eigen::MatrixXi levels = shade_levels(grid);
  std::string out;
  for (Eigen::Index i = levels.rows() - 1; i >= 0; --i) {
    for (Eigen::Index j = 0; j < levels.cols(); ++j) out += kShades[static_cast<std::size_t>(levels(i, j))];
    out += '\n';
  }
  return out;
}

std::string render_heatmap_text(const HeatmapGrid& grid) {
  std::ostringstream out;
  out << "# " << grid.column << " over " << grid.p_values.size() << " p x " << grid.mu_values.size()
      << " mu values, min " << g6(grid.values.minCoeff()) << ", max " << g6(grid.values.maxCoeff()) << '\n';
  out << "# shades \"" << kShades << "\" from min to max; rows mu " << g6(grid.mu_values.back()) << " -> "
      << g6(grid.mu_values.front()) << ", columns p " << g6(grid.p_values.front()) << " -> "
      << g6(grid.p_values.back()) << '\n';
  std::istringstream rows(shade_map(grid));
  for (std::string row; std::getline(rows, row);) out << "# |" << row << "|\n";
  out << "#\n# p mu " << grid.column << '\n';
  for (std::size_t j = 0; j < grid.p_values.size(); ++j) {
    if (j > 0) out << '\n';
    for (std::size_t i = 0; i < grid.mu_values.size(); ++i) {
      out << g17(grid.p_values[j]) << ' ' << g17(grid.mu_values[i]) << ' '
          << g17(grid.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) << '\n';
    }
  }
  return out.str();
}

void render_heatmap(const std::string& csv_path, std::string_view column, const std::string& out_path,
                    const RowFilter& filter) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + csv_path + "'");
  write_text_file(out_path, render_heatmap_text(read_heatmap_grid(in, column, filter)));
}

}  // namespace cqfi
