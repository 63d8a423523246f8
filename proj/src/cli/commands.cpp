#include "floquet/cli/commands.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "floquet/analytic.hpp"
#include "floquet/errors.hpp"
#include "floquet/format.hpp"
#include "floquet/numerics.hpp"
#include "floquet/parallel.hpp"
#include "floquet/cli/output.hpp"

namespace floquet::cli {
namespace {

using numerics::Grid;
using analytic::cplx;

std::filesystem::path out_dir(const RunConfig& c, const CommandOptions& o) {
  return o.out ? *o.out : c.output.directory;
}

int jobs_for(const RunConfig& c, const CommandOptions& o) {
  return resolve_jobs(o.jobs > 0 ? o.jobs : c.jobs);
}

std::string num(double v) { return format_number(v); }

std::string svg_file(const RunConfig& c, const std::string& extra, const std::string& svg) {
  std::string h = file_header(c, extra);
  h.pop_back();
  return "<!--" + h.substr(1) + " -->\n" + svg;
}

std::string index_label(const ModelSpec& spec, ModeIndex idx) {
  return spec.dimension() == 1 ? std::to_string(idx.n1) : std::to_string(idx.n1) + "_" + std::to_string(idx.n2);
}

ModeIndex lowest(const ModelSpec& spec) {
  return spec.dimension() == 1 ? ModeIndex{analytic::first_index(spec.variant()), 0} : ModeIndex{0, 0};
}

}  // namespace

ModeIndex parse_index(const ModelSpec& spec, const std::string& text) {
  std::vector<int> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int v = 0;
    const auto r = std::from_chars(item.data(), item.data() + item.size(), v);
    if (r.ec != std::errc() || r.ptr != item.data() + item.size())
      throw ConfigError("--index: '" + text + "' is not an integer list");
    parts.push_back(v);
  }
  if (static_cast<int>(parts.size()) != spec.dimension())
    throw ConfigError("--index: expected " + std::to_string(spec.dimension()) + " integer(s) for this model");
  ModeIndex idx{parts[0], parts.size() > 1 ? parts[1] : 0};
  analytic::check_index(spec, idx);
  return idx;
}

void check_model(const ModelSpec& spec) {
  validate(spec);
  if (auto d = check_resonance(spec)) throw ResonanceError(d->message());
}

int run_quasienergy(const RunConfig& c, const CommandOptions& o, std::ostream& out) {
  const ModelSpec& spec = c.model;
  check_model(spec);
  const auto dir = out_dir(c, o);
  ensure_writable(dir);
  if (o.n_max < 0 || o.n_max > analytic::kMaxModeIndex)
    throw RangeError("--n-max must lie in [0, " + std::to_string(analytic::kMaxModeIndex) + "]");

  std::vector<ModeIndex> modes;
  if (spec.dimension() == 1) {
    const int first = analytic::first_index(spec.variant());
    for (int n = first; n <= std::max(first, o.n_max); ++n) modes.push_back({n, 0});
  } else {
    for (int n1 = 0; n1 <= o.n_max; ++n1)
      for (int n2 = 0; n1 + n2 <= o.n_max; ++n2) modes.push_back({n1, n2});
  }
  const double shift = analytic::drive_shift(spec);

  std::ostringstream csv;
  csv << file_header(c);
  if (spec.dimension() == 1)
    write_csv_row(csv, {"index", "quasienergy", "undriven_energy", "drive_shift"});
  else
    write_csv_row(csv, {"n1", "n2", "quasienergy", "undriven_energy", "drive_shift"});
  Series level{"quasienergy", {}, {}};
  for (const auto& m : modes) {
    const double e = analytic::quasienergy(spec, m);
    const double e0 = analytic::undriven_energy(spec, m);
    std::vector<std::string> row;
    row.push_back(std::to_string(m.n1));
    if (spec.dimension() == 2) row.push_back(std::to_string(m.n2));
    row.insert(row.end(), {num(e), num(e0), num(shift)});
    write_csv_row(csv, row);
    level.x.push_back(static_cast<double>(level.x.size()));
    level.y.push_back(e);
  }
  if (c.output.wants("csv")) {
    write_text(dir / "quasienergy.csv", csv.str());
    out << "wrote " << (dir / "quasienergy.csv").string() << "\n";
  } else {
    out << csv.str();
  }
  if (c.output.wants("svg")) {
    write_text(dir / "quasienergy.svg", svg_file(c, "", svg_line_plot({level}, "quasienergies", "row", "quasienergy")));
    out << "wrote " << (dir / "quasienergy.svg").string() << "\n";
  }
  return kOk;
}

int run_mode(const RunConfig& c, const CommandOptions& o, std::ostream& out) {
  const ModelSpec& spec = c.model;
  check_model(spec);
  const auto dir = out_dir(c, o);
  ensure_writable(dir);
  if (!std::isfinite(o.t)) throw ConfigError("--t must be finite");
  const ModeIndex idx = o.index ? parse_index(spec, *o.index) : lowest(spec);
  analytic::check_index(spec, idx);
  const Grid g = c.settings.grid.value_or(verify::default_grid(spec));
  const analytic::FloquetMode mode(spec, idx);
  const auto state = numerics::sample(mode, g, o.t);

  // trapezoid weights; end nodes carry half weight
  double norm = 0.0;
  std::ostringstream csv;
  const std::string label = index_label(spec, idx);
  csv << file_header(c, "index=" + label + " t=" + num(o.t));
  std::vector<double> abs2(state.values.size());
  if (g.dim() == 1) {
    write_csv_row(csv, {"x", "re", "im", "abs2"});
    const auto& ax = g.axis(0);
    for (int i = 0; i < ax.points; ++i) {
      const cplx v = state.values[i];
      abs2[i] = std::norm(v);
      const double w = (i == 0 || i == ax.points - 1) ? 0.5 : 1.0;
      norm += w * abs2[i] * ax.h();
      write_csv_row(csv, {num(ax.x(i)), num(v.real()), num(v.imag()), num(abs2[i])});
    }
  } else {
    write_csv_row(csv, {"x1", "x2", "re", "im", "abs2"});
    const auto &a1 = g.axis(0), &a2 = g.axis(1);
    for (int i = 0; i < a1.points; ++i)
      for (int j = 0; j < a2.points; ++j) {
        const auto k = numerics::flat(g, i, j);
        const cplx v = state.values[k];
        abs2[k] = std::norm(v);
        const double w = ((i == 0 || i == a1.points - 1) ? 0.5 : 1.0) * ((j == 0 || j == a2.points - 1) ? 0.5 : 1.0);
        norm += w * abs2[k] * a1.h() * a2.h();
        write_csv_row(csv, {num(a1.x(i)), num(a2.x(j)), num(v.real()), num(v.imag()), num(abs2[k])});
      }
  }
  const std::string stem = "mode_" + label;
  if (c.output.wants("csv")) {
    write_text(dir / (stem + ".csv"), csv.str());
    out << "wrote " << (dir / (stem + ".csv")).string() << "\n";
  }
  if (c.output.wants("svg")) {
    std::string svg;
    const std::string title = std::string(variant_name(spec.variant())) + " mode " + label + " at t=" + num(o.t);
    if (g.dim() == 1) {
      Series re{"re", {}, {}}, im{"im", {}, {}}, a{"|u|^2", {}, {}};
      for (int i = 0; i < g.axis(0).points; ++i) {
        const double x = g.axis(0).x(i);
        re.x.push_back(x), im.x.push_back(x), a.x.push_back(x);
        re.y.push_back(state.values[i].real());
        im.y.push_back(state.values[i].imag());
        a.y.push_back(abs2[i]);
      }
      svg = svg_line_plot({re, im, a}, title, "x", "u(x,t)");
    } else {
      // rows along x2 so the picture has x1 horizontal
      const int n1 = g.axis(0).points, n2 = g.axis(1).points;
      std::vector<double> img(abs2.size());
      for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) img[static_cast<size_t>(j) * n1 + i] = abs2[numerics::flat(g, i, j)];
      svg = svg_heatmap(img, n1, n2, g.axis(0).lo, g.axis(0).hi, g.axis(1).lo, g.axis(1).hi, title + " |u|^2");
    }
    write_text(dir / (stem + ".svg"), svg_file(c, "index=" + label + " t=" + num(o.t), svg));
    out << "wrote " << (dir / (stem + ".svg")).string() << "\n";
  }
  out << "quasienergy " << num(mode.quasienergy()) << "\n";
  out << "grid_norm " << num(norm) << "\n";
  return kOk;
}

namespace {

void write_verify_json(const std::filesystem::path& path, const RunConfig& c,
                       const std::vector<verify::VerificationReport>& reports, bool passed,
                       const std::optional<std::string>& error, bool timings) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"tool\": \"" << kToolName << "\",\n";
  os << "  \"version\": \"" << tool_version() << "\",\n";
  os << "  \"config_hash\": \"" << c.hash() << "\",\n";
  os << "  \"model\": " << verify::model_json(c.model) << ",\n";
  os << "  \"passed\": " << (passed ? "true" : "false") << ",\n";
  os << "  \"error\": " << (error ? nlohmann::json(*error).dump() : "null") << ",\n";
  os << "  \"reports\": [";
  for (size_t i = 0; i < reports.size(); ++i) {
    os << (i ? ",\n    " : "\n    ");
    verify::write_json(os, reports[i], timings, 4);
  }
  os << (reports.empty() ? "]\n" : "\n  ]\n");
  os << "}\n";
  write_text(path, os.str());
}

}  // namespace

int run_verify(const RunConfig& c, const CommandOptions& o, std::ostream& out, std::ostream& err) {
  const auto dir = out_dir(c, o);
  ensure_writable(dir);
  const auto path = dir / "verify.json";
  try {
    check_model(c.model);
  } catch (const Error& e) {
    write_verify_json(path, c, {}, false, std::string(e.what()), false);
    out << "wrote " << path.string() << "\n";
    throw;
  }
  const auto suites = o.suites.empty() ? c.suites : o.suites;
  const int jobs = jobs_for(c, o);
  verify::Settings s = c.settings;
  s.jobs = jobs;
  std::vector<std::vector<verify::VerificationReport>> per_suite(suites.size());
  parallel_for(suites.size(), std::min<int>(jobs, static_cast<int>(suites.size())),
               [&](size_t k) { per_suite[k] = verify::run_suite(c.model, suites[k], s); });

  std::vector<verify::VerificationReport> reports;
  for (auto& v : per_suite)
    for (auto& r : v) reports.push_back(std::move(r));
  bool passed = true;
  bool numerical = false;
  for (const auto& r : reports) {
    if (r.gated && !r.passed) passed = false;
    if (r.error) numerical = true;
    out << (r.verdict() == "pass" ? "PASS" : r.verdict() == "fail" ? "FAIL" : "INFO") << " " << r.check_name;
    if (r.error) out << " (" << *r.error << ")";
    out << "\n";
    if (o.timings) err << r.check_name << " " << num(r.runtime) << " s\n";
  }
  write_verify_json(path, c, reports, passed, std::nullopt, o.timings);
  out << "wrote " << path.string() << "\n";
  if (passed) return kOk;
  return numerical ? kNumerical : kVerificationFailed;
}

int run_sweep(const RunConfig& c, const CommandOptions& o, std::ostream& out) {
  if (!c.sweep) throw ConfigError("sweep: the config has no [sweep] section");
  const SweepSpec& sw = *c.sweep;
  const auto dir = out_dir(c, o);
  ensure_writable(dir);

  std::vector<ModelSpec> specs;
  std::vector<std::string> problems;
  for (int k = 0; k < sw.count; ++k) {
    ModelSpec s = c.model;
    set_parameter(s, sw.parameter, sw.value(k));
    try {
      validate(s);
      if (auto d = check_resonance(s)) problems.push_back(sw.parameter + "=" + num(sw.value(k)) + ": " + d->message());
    } catch (const Error& e) {
      problems.push_back(sw.parameter + "=" + num(sw.value(k)) + ": " + e.what());
    }
    specs.push_back(s);
  }
  // a resonance can sit strictly between two samples
  for (int k = 0; k + 1 < sw.count && problems.empty(); ++k) {
    const auto a = resonance_denominators(specs[k]);
    const auto b = resonance_denominators(specs[k + 1]);
    for (size_t i = 0; i < a.size() && i < b.size(); ++i)
      if ((a[i].value > 0) != (b[i].value > 0))
        problems.push_back(a[i].denominator + " changes sign between " + sw.parameter + "=" + num(sw.value(k)) +
                           " and " + sw.parameter + "=" + num(sw.value(k + 1)));
  }
  if (!problems.empty()) {
    std::string msg = "sweep rejected:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ResonanceError(msg);
  }

  const ModeIndex idx = lowest(c.model);
  const bool has_berry =
      c.model.variant() == Variant::HarmonicDriven || c.model.variant() == Variant::CoupledDriven;
  struct Row {
    double e, shift, berry;
  };
  std::vector<Row> rows(specs.size());
  parallel_for(specs.size(), jobs_for(c, o), [&](size_t k) {
    rows[k] = {analytic::quasienergy(specs[k], idx), analytic::drive_shift(specs[k]),
               has_berry ? analytic::berry_phase_analytic(specs[k]) : NAN};
  });

  std::ostringstream csv;
  csv << file_header(c, "sweep=" + sw.parameter + " index=" + index_label(c.model, idx));
  write_csv_row(csv, {sw.parameter, "quasienergy", "drive_shift", "berry_phase"});
  Series qe{"quasienergy", {}, {}}, berry{"berry phase", {}, {}};
  for (size_t k = 0; k < rows.size(); ++k) {
    const double v = sw.value(static_cast<int>(k));
    write_csv_row(csv, {num(v), num(rows[k].e), num(rows[k].shift), has_berry ? num(rows[k].berry) : ""});
    qe.x.push_back(v), qe.y.push_back(rows[k].e);
    berry.x.push_back(v), berry.y.push_back(rows[k].berry);
  }
  if (c.output.wants("csv")) {
    write_text(dir / "sweep.csv", csv.str());
    out << "wrote " << (dir / "sweep.csv").string() << "\n";
  } else {
    out << csv.str();
  }
  if (c.output.wants("svg")) {
    std::vector<Series> plot{qe};
    if (has_berry) plot.push_back(berry);
    write_text(dir / "sweep.svg", svg_file(c, "sweep=" + sw.parameter, svg_line_plot(plot, "sweep over " + sw.parameter, sw.parameter, "value")));
    out << "wrote " << (dir / "sweep.svg").string() << "\n";
  }
  return kOk;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ResonanceError*>(&e) ||
      dynamic_cast<const StabilityError*>(&e) || dynamic_cast<const RangeError*>(&e) ||
      dynamic_cast<const UnsupportedVariant*>(&e) || dynamic_cast<const DimensionError*>(&e))
    return kUsage;
  return kNumerical;
}

int run_command(const std::string& command, const std::filesystem::path& config, const CommandOptions& o,
                std::ostream& out, std::ostream& err) {
  try {
    const RunConfig c = load_config(config);
    if (command == "quasienergy") return run_quasienergy(c, o, out);
    if (command == "mode") return run_mode(c, o, out);
    if (command == "verify") return run_verify(c, o, out, err);
    if (command == "sweep") return run_sweep(c, o, out);
    throw ConfigError("unknown command '" + command + "'");
  } catch (const std::exception& e) {
    err << kToolName << ": error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace floquet::cli
