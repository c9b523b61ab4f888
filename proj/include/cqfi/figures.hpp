#pragma once

// Data sets for the four standard figures.
//
//   1, 2, 3: depolarizing, bit flip, phase flip on phi+(pi/8, pi/6) and phi+(pi/8, pi/3)
//            over the full (p, mu) square, files fig<k><a|b>.csv plus one heatmap
//            fig<k><a|b>_<param>.txt per parameter (SLD rows).
//   4:       ewl(pi/8, pi/6) with p = 0.3 for N = 2..5 under depolarizing, bit flip and
//            phase flip against mu, files fig4.csv and fig4_<channel>_<param>.dat with
//            one column per N.

#include <string>
#include <vector>

namespace cqfi {

struct FigureOptions {
  int which = 1;
  std::string out_dir = ".";
  int resolution = 101;  // points per axis
  double ewl_r = 0.9;
  int jobs = 0;
};

/// Writes the figure's files and returns their paths. Throws std::invalid_argument
/// for which outside 1..4 or resolution < 2, io_error for an unusable directory.
std::vector<std::string> make_figure(const FigureOptions& options);

}  // namespace cqfi
