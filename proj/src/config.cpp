#include "rdlab/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "rdlab/error.hpp"

namespace rdlab {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double x = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto res = std::from_chars(first, last, x);
  if (res.ec != std::errc{} || res.ptr != last) throw Error(ErrorCode::Config, "not a number: '" + text + "'");
  return x;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_u64(const std::string& text) {
  std::uint64_t x = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), x);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw Error(ErrorCode::Config, "not an unsigned integer: '" + text + "'");
  return x;
}

int parse_int(const std::string& text) {
  int x = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), x);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw Error(ErrorCode::Config, "not an integer: '" + text + "'");
  return x;
}

bool parse_bool(const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw Error(ErrorCode::Config, "not a boolean: '" + text + "'");
}

const char* bool_text(bool b) { return b ? "true" : "false"; }

const char* window_text(SpectrumWindow w) { return w == SpectrumWindow::None ? "none" : "cosine"; }

SpectrumWindow parse_window(const std::string& text) {
  if (text == "none") return SpectrumWindow::None;
  if (text == "cosine") return SpectrumWindow::CosineTaper;
  throw Error(ErrorCode::Config, "unknown spectrum window '" + text + "'");
}

struct Field {
  const char* key;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&)> set;
};

#define RD_DOUBLE(name, member)                                                       \
  Field {                                                                             \
    name, [](const ExperimentConfig& c) { return format_double(c.member); },          \
        [](ExperimentConfig& c, const std::string& v) { c.member = parse_double(v); } \
  }
#define RD_INT(name, member)                                                       \
  Field {                                                                          \
    name, [](const ExperimentConfig& c) { return std::to_string(c.member); },      \
        [](ExperimentConfig& c, const std::string& v) { c.member = parse_int(v); } \
  }
#define RD_BOOL(name, member)                                                       \
  Field {                                                                           \
    name, [](const ExperimentConfig& c) { return std::string(bool_text(c.member)); }, \
        [](ExperimentConfig& c, const std::string& v) { c.member = parse_bool(v); } \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      RD_DOUBLE("params.r", params.r),
      RD_DOUBLE("params.f", params.f),
      RD_DOUBLE("params.m", params.m),
      RD_DOUBLE("params.b", params.b),
      RD_DOUBLE("params.c", params.c),
      RD_DOUBLE("params.q", params.q),
      RD_DOUBLE("params.p", params.p),
      RD_DOUBLE("params.s", params.s),
      RD_DOUBLE("params.a", params.a),
      RD_DOUBLE("diffusion.d1", diffusion.d1),
      RD_DOUBLE("diffusion.d2", diffusion.d2),
      Field{"domain", [](const ExperimentConfig& c) { return format_domain(c.domain); },
            [](ExperimentConfig& c, const std::string& v) { c.domain = parse_domain(v); }},
      RD_DOUBLE("grid.h", h),
      RD_DOUBLE("sim.dt", sim.dt),
      RD_DOUBLE("sim.t_end", sim.t_end),
      RD_DOUBLE("sim.snapshot_every", sim.snapshot_every),
      RD_DOUBLE("sim.series_every", sim.series_every),
      Field{"sim.seed", [](const ExperimentConfig& c) { return std::to_string(c.sim.seed); },
            [](ExperimentConfig& c, const std::string& v) { c.sim.seed = parse_u64(v); }},
      RD_DOUBLE("sim.epsilon", sim.epsilon),
      RD_DOUBLE("sim.safety", sim.safety),
      RD_DOUBLE("sim.stationary_tol", sim.stationary_tol),
      RD_BOOL("sim.stop_on_stationary", sim.stop_on_stationary),
      RD_INT("sim.threads", sim.threads),
      Field{"sim.scheme", [](const ExperimentConfig& c) { return std::string(to_string(c.sim.scheme)); },
            [](ExperimentConfig& c, const std::string& v) { c.sim.scheme = parse_scheme(v); }},
      Field{"ic.kind", [](const ExperimentConfig& c) { return std::string(c.ic.kind == IcKind::Noise ? "noise" : "snapshot"); },
            [](ExperimentConfig& c, const std::string& v) {
              if (v == "noise") c.ic.kind = IcKind::Noise;
              else if (v == "snapshot") c.ic.kind = IcKind::Snapshot;
              else throw Error(ErrorCode::Config, "ic.kind must be noise or snapshot");
            }},
      Field{"ic.region", [](const ExperimentConfig& c) { return std::string(to_string(c.ic.region)); },
            [](ExperimentConfig& c, const std::string& v) { c.ic.region = parse_region(v); }},
      Field{"ic.path", [](const ExperimentConfig& c) { return c.ic.path; },
            [](ExperimentConfig& c, const std::string& v) { c.ic.path = v; }},
      Field{"ic.fill", [](const ExperimentConfig& c) { return std::string(to_string(c.ic.fill)); },
            [](ExperimentConfig& c, const std::string& v) { c.ic.fill = parse_fill(v); }},
      Field{"output.dir", [](const ExperimentConfig& c) { return c.output_dir; },
            [](ExperimentConfig& c, const std::string& v) { c.output_dir = v; }},
      RD_BOOL("output.snapshots", write_snapshots),
      RD_BOOL("output.pgm", write_pgm),
      RD_DOUBLE("classify.skew", classifier.skew),
      RD_DOUBLE("classify.homogeneous_rel_std", classifier.homogeneous_rel_std),
      Field{"classify.window", [](const ExperimentConfig& c) { return std::string(window_text(c.window)); },
            [](ExperimentConfig& c, const std::string& v) { c.window = parse_window(v); }},
      RD_DOUBLE("transient.onset_rel", transient.onset_rel),
      RD_DOUBLE("transient.settle_rel", transient.settle_rel),
      RD_DOUBLE("transient.smoothing", transient.smoothing),
      RD_DOUBLE("dispersion.k_max", dispersion_k_max),
      RD_INT("dispersion.samples", dispersion_samples),
      RD_DOUBLE("map.a_min", map_a_min),
      RD_DOUBLE("map.a_max", map_a_max),
      RD_DOUBLE("map.d2_min", map_d2_min),
      RD_DOUBLE("map.d2_max", map_d2_max),
      RD_INT("map.res_a", map_res_a),
      RD_INT("map.res_d2", map_res_d2),
      RD_DOUBLE("modes.L", modes_L),
  };
  return table;
}

#undef RD_DOUBLE
#undef RD_INT
#undef RD_BOOL

}  // namespace

std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& f : fields()) out.emplace_back(f.key, f.get(cfg));
  return out;
}

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& f : fields()) {
    if (key != f.key) continue;
    try {
      f.set(cfg, value);
    } catch (const Error& e) {
      throw Error(ErrorCode::Config, key + ": " + e.what());
    }
    return;
  }
  throw Error(ErrorCode::Config, "unknown config key '" + key + "'");
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::Config, "line " + std::to_string(lineno) + ": expected 'key = value'");
    set_config_value(cfg, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return cfg;
}

std::string emit_config(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& [k, v] : config_entries(cfg)) out += k + " = " + v + "\n";
  return out;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void apply_overrides(ExperimentConfig& cfg, const std::vector<std::string>& assignments) {
  for (const auto& a : assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::Config, "override '" + a + "' is not key=value");
    set_config_value(cfg, trim(a.substr(0, eq)), trim(a.substr(eq + 1)));
  }
}

}  // namespace rdlab
