#pragma once

// Text heatmaps of a sweep CSV: an ASCII shade map followed by gnuplot "p mu value" blocks.

#include <Eigen/Core>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cqfi {

/// Ten gray levels, lightest first.
inline constexpr std::string_view kShades = " .:-=+*#%@";

/// Column equality constraints applied before gridding, e.g. {"param", "phi"}.
using RowFilter = std::vector<std::pair<std::string, std::string>>;

struct HeatmapGrid {
  std::string column;
  std::vector<double> p_values;   // ascending
  std::vector<double> mu_values;  // ascending
  Eigen::MatrixXd values;         // values(mu index, p index)
};

/// Reads a sweep CSV and arranges `column` on the (p, mu) grid. Throws format_error
/// if a column is missing, a value does not parse, or the selected rows do not form
/// a rectangular grid with exactly one row per (p, mu).
HeatmapGrid read_heatmap_grid(std::istream& csv, std::string_view column, const RowFilter& filter = {});

/// Shade index 0..9 of every cell; a constant grid maps to shade 0 everywhere.
Eigen::MatrixXi shade_levels(const HeatmapGrid& grid);

/// Rows are mu descending, columns p ascending.
std::string shade_map(const HeatmapGrid& grid);

/// '#'-prefixed shade map and legend, then one blank-line separated block per p.
std::string render_heatmap_text(const HeatmapGrid& grid);

/// File-to-file form; throws io_error on unreadable input or unwritable output.
void render_heatmap(const std::string& csv_path, std::string_view column, const std::string& out_path,
                    const RowFilter& filter = {});

}  // namespace cqfi
