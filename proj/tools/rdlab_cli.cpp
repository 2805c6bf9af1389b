// rdlab command-line front end. Talks to the library only through rdlab.h.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rdlab/rdlab.h"

namespace {

struct Options {
  std::string config_path;
  std::vector<std::string> sets;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
  std::string output_dir;
  std::string out_file;
  std::optional<double> t_end;
  std::optional<double> k_max;
  std::optional<int> samples;
  std::vector<double> a_range, d2_range;
  std::vector<int> resolution;
  std::string snapshot;
  std::string fill = "homogeneous";
  std::vector<std::string> snapshots;
};

int report(rdlab_status s, const std::string& context) {
  std::fprintf(stderr, "rdlab %s: %s: %s\n", context.c_str(), rdlab_status_name(s), rdlab_last_error());
  return rdlab_exit_code(s);
}

struct ConfigHandle {
  rdlab_config* ptr = nullptr;
  ~ConfigHandle() { rdlab_config_free(ptr); }
};

rdlab_status set(rdlab_config* cfg, const std::string& key, const std::string& value) {
  return rdlab_config_set(cfg, key.c_str(), value.c_str());
}

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Config file, then the output-directory environment variable, then flags.
rdlab_status resolve(const Options& o, ConfigHandle& h) {
  rdlab_status s = o.config_path.empty() ? rdlab_config_new(&h.ptr) : rdlab_config_load(o.config_path.c_str(), &h.ptr);
  if (s != RDLAB_OK) return s;
  if (const char* env = std::getenv("RDLAB_OUTPUT_DIR"); env && *env)
    if ((s = set(h.ptr, "output.dir", env)) != RDLAB_OK) return s;
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "rdlab: --set expects key=value, got '%s'\n", kv.c_str());
      return RDLAB_ERR_CONFIG;
    }
    auto trim = [](std::string x) {
      const auto b = x.find_first_not_of(" \t");
      const auto e = x.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : x.substr(b, e - b + 1);
    };
    if ((s = set(h.ptr, trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)))) != RDLAB_OK) return s;
  }
  if (o.threads && (s = set(h.ptr, "sim.threads", std::to_string(*o.threads))) != RDLAB_OK) return s;
  if (o.seed && (s = set(h.ptr, "sim.seed", std::to_string(*o.seed))) != RDLAB_OK) return s;
  if (!o.output_dir.empty() && (s = set(h.ptr, "output.dir", o.output_dir)) != RDLAB_OK) return s;
  if (o.t_end && (s = set(h.ptr, "sim.t_end", num(*o.t_end))) != RDLAB_OK) return s;
  if (o.k_max && (s = set(h.ptr, "dispersion.k_max", num(*o.k_max))) != RDLAB_OK) return s;
  if (o.samples && (s = set(h.ptr, "dispersion.samples", std::to_string(*o.samples))) != RDLAB_OK) return s;
  if (o.a_range.size() == 2) {
    if ((s = set(h.ptr, "map.a_min", num(o.a_range[0]))) != RDLAB_OK) return s;
    if ((s = set(h.ptr, "map.a_max", num(o.a_range[1]))) != RDLAB_OK) return s;
  }
  if (o.d2_range.size() == 2) {
    if ((s = set(h.ptr, "map.d2_min", num(o.d2_range[0]))) != RDLAB_OK) return s;
    if ((s = set(h.ptr, "map.d2_max", num(o.d2_range[1]))) != RDLAB_OK) return s;
  }
  if (o.resolution.size() == 2) {
    if ((s = set(h.ptr, "map.res_a", std::to_string(o.resolution[0]))) != RDLAB_OK) return s;
    if ((s = set(h.ptr, "map.res_d2", std::to_string(o.resolution[1]))) != RDLAB_OK) return s;
  }
  return RDLAB_OK;
}

int emit(const char* text, const std::string& out_file) {
  if (out_file.empty()) {
    std::fputs(text, stdout);
    return 0;
  }
  std::ofstream f(out_file, std::ios::trunc);
  f << text;
  f.flush();
  if (!f) {
    std::fprintf(stderr, "rdlab: cannot write '%s'\n", out_file.c_str());
    return rdlab_exit_code(RDLAB_ERR_IO);
  }
  return 0;
}

template <class F>
int run_text(const std::string& name, F&& call, const std::string& out_file) {
  char* text = nullptr;
  const rdlab_status s = call(&text);
  if (s != RDLAB_OK) return report(s, name);
  const int rc = emit(text, out_file);
  rdlab_string_free(text);
  return rc;
}

std::vector<const char*> c_strings(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  for (const auto& s : v) out.push_back(s.c_str());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Predator-prey reaction-diffusion analysis and simulation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", rdlab_version());
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", o.config_path, "Config file (key = value lines)")->check(CLI::ExistingFile);
    sub->add_option("--set", o.sets, "Override a config key: key=value (repeatable)");
    sub->add_option("--threads", o.threads, "Worker threads for the solver");
    sub->add_option("--seed", o.seed, "Noise seed");
    sub->add_option("--output-dir", o.output_dir, "Output directory (beats RDLAB_OUTPUT_DIR)");
  };

  auto* analyze = app.add_subcommand("analyze", "Equilibria, Hopf and Turing thresholds, band and modes");
  common(analyze);

  auto* dispersion = app.add_subcommand("dispersion", "Sampled dispersion relation as CSV");
  common(dispersion);
  dispersion->add_option("--k-max", o.k_max, "Largest wavenumber");
  dispersion->add_option("-n,--samples", o.samples, "Number of samples (>= 2)");
  dispersion->add_option("-o,--out", o.out_file, "Write CSV here instead of stdout");

  auto* map = app.add_subcommand("map", "Regime grid over (a, d2) and the Turing boundary");
  common(map);
  map->add_option("--a-range", o.a_range, "a_min a_max")->expected(2);
  map->add_option("--d2-range", o.d2_range, "d2_min d2_max")->expected(2);
  map->add_option("--resolution", o.resolution, "points along a and along d2")->expected(2);

  auto* simulate = app.add_subcommand("simulate", "Run the configured experiment");
  common(simulate);
  simulate->add_option("--t-end", o.t_end, "Final time");

  auto* resume = app.add_subcommand("resume", "Continue from a settled snapshot placed on D1");
  common(resume);
  resume->add_option("snapshot", o.snapshot, "Source snapshot")->required();
  resume->add_option("--fill", o.fill, "State of the rest of the domain")
      ->check(CLI::IsMember({"zero", "homogeneous"}));
  resume->add_option("--t-end", o.t_end, "Final time");

  auto* classify = app.add_subcommand("classify", "Re-label saved snapshots");
  classify->add_option("snapshots", o.snapshots, "Snapshots in time order")->required();

  auto* series = app.add_subcommand("series", "Region means recomputed from snapshots");
  series->add_option("snapshots", o.snapshots, "Snapshots in time order")->required();
  series->add_option("-o,--out", o.out_file, "Write CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : rdlab_exit_code(RDLAB_ERR_CONFIG);
  }

  if (*classify) {
    const auto ptrs = c_strings(o.snapshots);
    return run_text("classify", [&](char** t) { return rdlab_cmd_classify(ptrs.data(), ptrs.size(), t); }, "");
  }
  if (*series) {
    const auto ptrs = c_strings(o.snapshots);
    return run_text("series", [&](char** t) { return rdlab_cmd_series(ptrs.data(), ptrs.size(), t); }, o.out_file);
  }

  ConfigHandle cfg;
  if (const rdlab_status s = resolve(o, cfg); s != RDLAB_OK) return report(s, "config");

  if (*analyze) return run_text("analyze", [&](char** t) { return rdlab_cmd_analyze(cfg.ptr, t); }, "");
  if (*dispersion)
    return run_text("dispersion", [&](char** t) { return rdlab_cmd_dispersion(cfg.ptr, t); }, o.out_file);
  if (*map) return run_text("map", [&](char** t) { return rdlab_cmd_map(cfg.ptr, t); }, "");
  if (*simulate) return run_text("simulate", [&](char** t) { return rdlab_cmd_simulate(cfg.ptr, t); }, "");
  if (*resume)
    return run_text("resume",
                    [&](char** t) { return rdlab_cmd_resume(cfg.ptr, o.snapshot.c_str(), o.fill.c_str(), t); }, "");
  return 1;
}
