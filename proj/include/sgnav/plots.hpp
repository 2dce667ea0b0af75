#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sgnav/curriculum.hpp"
#include "sgnav/evaluation.hpp"

namespace sgnav {

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
};

/// SVG line chart. Every data point is also emitted as a marker carrying its
/// exact values in data-x / data-y attributes, so the file can be read back.
void write_svg(const LinePlot& plot, const std::filesystem::path& path);
/// Recovers the series written by write_svg.
std::vector<PlotSeries> read_svg_series(const std::filesystem::path& path);

std::vector<CurriculumRecord> read_history_csv(const std::filesystem::path& path);

LinePlot difficulty_plot(const std::vector<CurriculumRecord>& history);
LinePlot success_plot(const EvalReport& report);

/// Renders difficulty.svg from difficulty.csv and success.svg from eval.csv,
/// whichever exist in `metrics_dir`, and copies the CSVs next to them when
/// `out_dir` differs. Throws Error(Io) when neither CSV is present.
std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& metrics_dir,
                                              const std::filesystem::path& out_dir);

}  // namespace sgnav
