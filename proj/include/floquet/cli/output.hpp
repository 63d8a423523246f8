#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "floquet/cli/config.hpp"

namespace floquet::cli {

/// "# floquet-lab <version> config=<hash> model=<variant>[ extra]" plus newline.
std::string file_header(const RunConfig& c, const std::string& extra = "");

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells);

struct Series {
  std::string label;
  std::vector<double> x, y;
};

std::string svg_line_plot(const std::vector<Series>& series, const std::string& title,
                          const std::string& xlabel, const std::string& ylabel);

/// values row-major, nx columns by ny rows; y grows upward.
std::string svg_heatmap(const std::vector<double>& values, int nx, int ny, double x0, double x1,
                        double y0, double y1, const std::string& title);

/// Creates the directory and probes it with a scratch file; ConfigError if that fails.
void ensure_writable(const std::filesystem::path& dir);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace floquet::cli
