#include "floquet/cli/output.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "floquet/errors.hpp"
#include "floquet/format.hpp"

namespace floquet::cli {
namespace {

constexpr double kW = 720, kH = 480, kL = 80, kR = 150, kT = 40, kB = 60;
const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

void frame(std::ostringstream& os, const std::string& title, double x0, double x1, double y0, double y1,
           const std::string& xlabel, const std::string& ylabel) {
  const double pw = kW - kL - kR, ph = kH - kT - kB;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << fixed(kW / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << esc(title)
     << "</text>\n";
  os << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double fx = kL + pw * k / 4, fy = kT + ph * (1.0 - k / 4.0);
    os << "<text x=\"" << fixed(fx) << "\" y=\"" << fixed(kH - kB + 16) << "\" text-anchor=\"middle\">"
       << label(x0 + (x1 - x0) * k / 4) << "</text>\n";
    os << "<text x=\"" << fixed(kL - 6) << "\" y=\"" << fixed(fy + 4) << "\" text-anchor=\"end\">"
       << label(y0 + (y1 - y0) * k / 4) << "</text>\n";
  }
  os << "<text x=\"" << fixed(kL + pw / 2) << "\" y=\"" << fixed(kH - 16) << "\" text-anchor=\"middle\">"
     << esc(xlabel) << "</text>\n";
  os << "<text x=\"18\" y=\"" << fixed(kT + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
     << fixed(kT + ph / 2) << ")\">" << esc(ylabel) << "</text>\n";
}

void pad_range(double& lo, double& hi) {
  if (!(hi > lo)) {
    const double d = std::max(1.0, std::abs(lo)) * 0.5;
    lo -= d;
    hi += d;
  }
}

}  // namespace

std::string file_header(const RunConfig& c, const std::string& extra) {
  std::string h = std::string("# ") + kToolName + " " + tool_version() + " config=" + c.hash() +
                  " model=" + std::string(variant_name(c.model.variant()));
  if (!extra.empty()) h += " " + extra;
  return h + "\n";
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
  os << "\n";
}

std::string svg_line_plot(const std::vector<Series>& series, const std::string& title, const std::string& xlabel,
                          const std::string& ylabel) {
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series)
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  pad_range(x0, x1);
  pad_range(y0, y1);
  const double pw = kW - kL - kR, ph = kH - kT - kB;
  std::ostringstream os;
  frame(os, title, x0, x1, y0, y1, xlabel, ylabel);
  for (size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % 6];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      os << fixed(kL + pw * (s.x[i] - x0) / (x1 - x0)) << "," << fixed(kT + ph * (1.0 - (s.y[i] - y0) / (y1 - y0)))
         << " ";
    }
    os << "\"/>\n";
    if (s.x.size() == 1)
      os << "<circle cx=\"" << fixed(kL + pw * (s.x[0] - x0) / (x1 - x0)) << "\" cy=\""
         << fixed(kT + ph * (1.0 - (s.y[0] - y0) / (y1 - y0))) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    const double ly = kT + 16 + 18 * k;
    os << "<line x1=\"" << fixed(kW - kR + 10) << "\" y1=\"" << fixed(ly) << "\" x2=\"" << fixed(kW - kR + 30)
       << "\" y2=\"" << fixed(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << fixed(kW - kR + 36) << "\" y=\"" << fixed(ly + 4) << "\">" << esc(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string svg_heatmap(const std::vector<double>& values, int nx, int ny, double x0, double x1, double y0,
                        double y1, const std::string& title) {
  double vmax = 0.0;
  for (double v : values)
    if (std::isfinite(v)) vmax = std::max(vmax, v);
  if (vmax <= 0.0) vmax = 1.0;
  const double pw = kW - kL - kR, ph = kH - kT - kB;
  const double cw = pw / nx, ch = ph / ny;
  std::ostringstream os;
  frame(os, title, x0, x1, y0, y1, "x1", "x2");
  for (int r = 0; r < ny; ++r)
    for (int c = 0; c < nx; ++c) {
      const double v = values[static_cast<size_t>(r) * nx + c];
      const double f = std::isfinite(v) ? std::clamp(v / vmax, 0.0, 1.0) : 0.0;
      const int shade = static_cast<int>(std::lround(255 * (1.0 - f)));
      if (shade == 255) continue;
      os << "<rect x=\"" << fixed(kL + c * cw) << "\" y=\"" << fixed(kT + ph - (r + 1) * ch) << "\" width=\""
         << fixed(cw + 0.05) << "\" height=\"" << fixed(ch + 0.05) << "\" fill=\"rgb(" << shade << "," << shade
         << ",255)\"/>\n";
    }
  os << "<text x=\"" << fixed(kW - kR + 10) << "\" y=\"" << fixed(kT + 16) << "\">max " << label(vmax)
     << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

void ensure_writable(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("output directory '" + dir.string() + "': " + ec.message());
  const auto probe = dir / ".floquet-lab-probe";
  {
    std::ofstream f(probe);
    if (!f) throw ConfigError("output directory '" + dir.string() + "' is not writable");
  }
  std::filesystem::remove(probe, ec);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw Error("cannot write '" + path.string() + "'");
}

}  // namespace floquet::cli
