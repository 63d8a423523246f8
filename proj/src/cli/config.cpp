#include "floquet/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include "floquet/errors.hpp"
#include "floquet/format.hpp"

#ifndef FLOQUET_VERSION
#define FLOQUET_VERSION "0.0.0"
#endif

namespace floquet::cli {
namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
  if (r.ec != std::errc() || r.ptr != t.data() + t.size() || !std::isfinite(v))
    throw ConfigError("config: '" + key + "' is not a finite number: '" + text + "'");
  return v;
}

int to_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  int v = 0;
  const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
  if (r.ec != std::errc() || r.ptr != t.data() + t.size())
    throw ConfigError("config: '" + key + "' is not an integer: '" + text + "'");
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  const std::string t = lower(trim(text));
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError("config: '" + key + "' is not a boolean: '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = lower(trim(item));
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

numerics::KineticScheme parse_scheme(const std::string& text) {
  const std::string t = lower(trim(text));
  if (t == "numerov") return numerics::KineticScheme::Numerov;
  if (t == "second_order") return numerics::KineticScheme::SecondOrder;
  throw ConfigError("config: propagation.scheme must be 'numerov' or 'second_order'");
}

}  // namespace

const char* tool_version() { return FLOQUET_VERSION; }

double SweepSpec::value(int k) const {
  if (count == 1) return start;
  return start + (stop - start) * k / (count - 1);
}

bool OutputSpec::wants(const std::string& f) const {
  return std::find(formats.begin(), formats.end(), f) != formats.end();
}

KeyValues read_ini(const std::string& text) {
  boost::property_tree::ptree pt;
  std::istringstream is(text);
  try {
    boost::property_tree::ini_parser::read_ini(is, pt);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  KeyValues kv;
  for (const auto& [section, body] : pt) {
    if (body.empty()) throw ConfigError("config: key '" + section + "' outside a section");
    for (const auto& [key, value] : body) {
      // strip trailing "; comment"
      std::string v = value.data();
      if (auto c = v.find(';'); c != std::string::npos) v = v.substr(0, c);
      kv[lower(section) + "." + lower(key)] = trim(v);
    }
  }
  return kv;
}

KeyValues read_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  KeyValues kv;
  for (const auto& [section, body] : j.items()) {
    if (!body.is_object()) throw ConfigError("config: section '" + section + "' must be an object");
    for (const auto& [key, value] : body.items()) {
      std::string v;
      if (value.is_string()) {
        v = value.get<std::string>();
      } else if (value.is_array()) {
        for (const auto& e : value) {
          if (!v.empty()) v += ",";
          v += e.is_string() ? e.get<std::string>() : e.dump();
        }
      } else {
        v = value.dump();
      }
      kv[lower(section) + "." + lower(key)] = v;
    }
  }
  return kv;
}

RunConfig build_config(const KeyValues& kv) {
  RunConfig c;
  auto it = kv.find("model.variant");
  if (it == kv.end()) throw ConfigError("config: model.variant is required");
  const auto v = parse_variant(lower(trim(it->second)));
  if (!v) throw ConfigError("config: unknown model.variant '" + it->second + "'");
  c.model = default_spec(*v);

  std::set<std::string> used{"model.variant"};
  auto get = [&](const std::string& key) -> const std::string* {
    auto f = kv.find(key);
    if (f == kv.end()) return nullptr;
    used.insert(key);
    return &f->second;
  };

  for (const auto& [key, value] : kv) {
    if (key.rfind("model.", 0) == 0 && key != "model.variant") {
      set_parameter(c.model, key.substr(6), to_double(key, value));
      used.insert(key);
    }
  }
  validate(c.model);

  // grid
  const bool any_grid = std::any_of(kv.begin(), kv.end(), [](const auto& p) { return p.first.rfind("grid.", 0) == 0; });
  if (any_grid) {
    const verify::Grid d = verify::default_grid(c.model);
    numerics::Axis a0 = d.axis(0);
    if (auto s = get("grid.x_min")) a0.lo = to_double("grid.x_min", *s);
    if (auto s = get("grid.x_max")) a0.hi = to_double("grid.x_max", *s);
    if (auto s = get("grid.points")) a0.points = to_int("grid.points", *s);
    if (d.dim() == 1) {
      c.settings.grid = verify::Grid::line(a0.lo, a0.hi, a0.points);
    } else {
      numerics::Axis a1 = d.axis(1);
      if (kv.count("grid.x_min") || kv.count("grid.x_max") || kv.count("grid.points")) a1 = a0;
      if (auto s = get("grid.x2_min")) a1.lo = to_double("grid.x2_min", *s);
      if (auto s = get("grid.x2_max")) a1.hi = to_double("grid.x2_max", *s);
      if (auto s = get("grid.points2")) a1.points = to_int("grid.points2", *s);
      c.settings.grid = verify::Grid::plane(a0, a1);
    }
  }
  if (auto s = get("monodromy.points")) {
    const verify::Grid d = c.settings.grid.value_or(verify::default_grid(c.model));
    c.settings.monodromy_grid = verify::Grid::line(d.axis(0).lo, d.axis(0).hi, to_int("monodromy.points", *s));
  }
  if (auto s = get("monodromy.steps")) c.settings.monodromy_steps = to_int("monodromy.steps", *s);
  if (auto s = get("monodromy.modes")) c.settings.monodromy_modes = to_int("monodromy.modes", *s);
  if (auto s = get("propagation.steps")) c.settings.steps = to_int("propagation.steps", *s);
  if (auto s = get("propagation.scheme")) c.settings.scheme = parse_scheme(*s);
  if (auto s = get("verify.t_samples")) c.settings.t_samples = to_int("verify.t_samples", *s);
  if (auto s = get("verify.modes")) c.settings.modes = to_int("verify.modes", *s);
  if (auto s = get("verify.fd_order")) c.settings.fd_order = to_int("verify.fd_order", *s);
  if (auto s = get("verify.berry_t_steps")) c.settings.berry_t_steps = to_int("verify.berry_t_steps", *s);
  if (auto s = get("verify.berry_strict")) c.settings.berry_strict = to_bool("verify.berry_strict", *s);
  if (auto s = get("verify.suites")) {
    for (const auto& name : split_list(*s)) {
      const auto su = verify::parse_suite(name);
      if (!su) throw ConfigError("config: unknown suite '" + name + "'");
      c.suites.push_back(*su);
    }
  } else {
    c.suites = verify::all_suites();
  }
  if (c.settings.steps < 1 || c.settings.monodromy_steps < 1 || c.settings.t_samples < 1 ||
      c.settings.modes < 1 || c.settings.monodromy_modes < 1)
    throw ConfigError("config: step and sample counts must be positive");
  numerics::fd_weights(c.settings.fd_order);  // validates the order

  for (auto& [name, ptr] : verify::tolerance_fields(c.settings.tol)) {
    if (auto s = get("tolerances." + name)) {
      *ptr = to_double("tolerances." + name, *s);
      if (!(*ptr >= 0.0)) throw ConfigError("config: tolerances." + name + " must be >= 0");
    }
  }

  if (auto s = get("output.directory")) c.output.directory = trim(*s);
  if (auto s = get("output.formats")) {
    c.output.formats = split_list(*s);
    for (const auto& f : c.output.formats)
      if (f != "csv" && f != "json" && f != "svg") throw ConfigError("config: unknown output format '" + f + "'");
  }
  if (auto s = get("run.jobs")) c.jobs = to_int("run.jobs", *s);

  const bool any_sweep = std::any_of(kv.begin(), kv.end(), [](const auto& p) { return p.first.rfind("sweep.", 0) == 0; });
  if (any_sweep) {
    SweepSpec sw;
    const auto* p = get("sweep.parameter");
    const auto* a = get("sweep.start");
    const auto* b = get("sweep.stop");
    const auto* n = get("sweep.count");
    if (!p || !a || !b || !n) throw ConfigError("config: sweep needs parameter, start, stop and count");
    sw.parameter = lower(trim(*p));
    ModelSpec probe = c.model;
    set_parameter(probe, sw.parameter, 0.0);  // rejects names the variant does not have
    sw.start = to_double("sweep.start", *a);
    sw.stop = to_double("sweep.stop", *b);
    sw.count = to_int("sweep.count", *n);
    if (sw.count < 1) throw ConfigError("config: sweep.count must be >= 1");
    c.sweep = sw;
  }

  for (const auto& [key, value] : kv)
    if (!used.count(key)) throw ConfigError("config: unknown key '" + key + "'");
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const bool json = lower(path.extension().string()) == ".json";
  return build_config(json ? read_json(ss.str()) : read_ini(ss.str()));
}

std::string RunConfig::canonical() const {
  std::ostringstream os;
  os << "model.variant=" << variant_name(model.variant()) << "\n";
  for (const auto& [k, v] : parameters(model)) os << "model." << k << "=" << format_number(v) << "\n";
  const auto& s = settings;
  auto axis = [&](const std::string& tag, const numerics::Axis& a) {
    os << tag << ".lo=" << format_number(a.lo) << "\n" << tag << ".hi=" << format_number(a.hi) << "\n"
       << tag << ".points=" << a.points << "\n";
  };
  if (s.grid)
    for (int k = 0; k < s.grid->dim(); ++k) axis("grid.axis" + std::to_string(k), s.grid->axis(k));
  if (s.monodromy_grid) axis("monodromy.axis0", s.monodromy_grid->axis(0));
  os << "monodromy.steps=" << s.monodromy_steps << "\nmonodromy.modes=" << s.monodromy_modes << "\n";
  os << "propagation.steps=" << s.steps << "\npropagation.scheme="
     << (s.scheme == numerics::KineticScheme::Numerov ? "numerov" : "second_order") << "\n";
  os << "verify.t_samples=" << s.t_samples << "\nverify.modes=" << s.modes << "\nverify.fd_order=" << s.fd_order
     << "\nverify.berry_t_steps=" << s.berry_t_steps << "\nverify.berry_strict=" << s.berry_strict << "\n";
  os << "verify.suites=";
  for (size_t i = 0; i < suites.size(); ++i) os << (i ? "," : "") << verify::suite_name(suites[i]);
  os << "\n";
  verify::Tolerances tol = s.tol;
  for (const auto& [name, ptr] : verify::tolerance_fields(tol)) os << "tolerances." << name << "=" << format_number(*ptr) << "\n";
  if (sweep)
    os << "sweep.parameter=" << sweep->parameter << "\nsweep.start=" << format_number(sweep->start)
       << "\nsweep.stop=" << format_number(sweep->stop) << "\nsweep.count=" << sweep->count << "\n";
  return os.str();
}

std::string RunConfig::hash() const {
  const std::string text = canonical();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw NumericalError("config hash: SHA-256 failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < 8 && i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

}  // namespace floquet::cli
