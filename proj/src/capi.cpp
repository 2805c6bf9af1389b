#include "rdlab/rdlab.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "rdlab/config.hpp"
#include "rdlab/error.hpp"
#include "rdlab/experiment.hpp"
#include "rdlab/io.hpp"

struct rdlab_config {
  rdlab::ExperimentConfig cfg;
};

struct rdlab_sim {
  rdlab::ExperimentConfig cfg;
  std::unique_ptr<rdlab::GridGeometry> g;
  std::unique_ptr<rdlab::Simulator> sim;
  rdlab::FieldState state;
};

namespace {

thread_local std::string last_error;

rdlab_status fail(rdlab_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

template <class F>
rdlab_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return RDLAB_OK;
  } catch (const rdlab::Error& e) {
    return fail(static_cast<rdlab_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(RDLAB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(RDLAB_ERR_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void need(const void* p, const char* what) {
  if (!p) throw rdlab::Error(rdlab::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

std::vector<std::string> paths(const char* const* items, size_t count) {
  if (count > 0) need(items, "snapshot list");
  std::vector<std::string> out;
  for (size_t i = 0; i < count; ++i) {
    need(items[i], "snapshot path");
    out.emplace_back(items[i]);
  }
  return out;
}

rdlab::RegionSel region_of(rdlab_region r) {
  switch (r) {
    case RDLAB_REGION_D1: return rdlab::RegionSel::D1;
    case RDLAB_REGION_D2: return rdlab::RegionSel::D2;
    case RDLAB_REGION_CORRIDOR: return rdlab::RegionSel::Corridor;
    case RDLAB_REGION_RIGHT_PATCH: return rdlab::RegionSel::RightPatch;
    case RDLAB_REGION_ALL: return rdlab::RegionSel::All;
  }
  throw rdlab::Error(rdlab::ErrorCode::InvalidArgument, "unknown region");
}

}  // namespace

extern "C" {

const char* rdlab_version(void) { return "0.1.0"; }

const char* rdlab_status_name(rdlab_status status) {
  if (status == RDLAB_ERR_INTERNAL) return "Internal";
  if (status < RDLAB_OK || status > RDLAB_ERR_CONFIG) return "Unknown";
  return rdlab::error_code_name(static_cast<rdlab::ErrorCode>(status));
}

const char* rdlab_last_error(void) { return last_error.c_str(); }

int rdlab_exit_code(rdlab_status status) {
  switch (status) {
    case RDLAB_OK: return 0;
    case RDLAB_ERR_EMPTY_RESULT:
    case RDLAB_ERR_INFEASIBLE:
    case RDLAB_ERR_NO_SIGN_CHANGE:
    case RDLAB_ERR_NO_BAND:
    case RDLAB_ERR_POLE_AT_MODE:
    case RDLAB_ERR_NEVER_ONSET: return 2;
    case RDLAB_ERR_BLOW_UP:
    case RDLAB_ERR_NUMERICAL_FAILURE: return 3;
    case RDLAB_ERR_INVALID_ARGUMENT:
    case RDLAB_ERR_DEGENERATE_DOMAIN:
    case RDLAB_ERR_DISCONNECTED_DOMAIN:
    case RDLAB_ERR_SHAPE_MISMATCH:
    case RDLAB_ERR_EMPTY_REGION:
    case RDLAB_ERR_REGION_NOT_RECTANGULAR:
    case RDLAB_ERR_IO:
    case RDLAB_ERR_CONFIG: return 4;
    default: return 1;
  }
}

void rdlab_string_free(char* s) { std::free(s); }

rdlab_status rdlab_config_new(rdlab_config** out) {
  return guarded([&] {
    need(out, "out");
    *out = new rdlab_config{};
  });
}

rdlab_status rdlab_config_parse(const char* text, rdlab_config** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = new rdlab_config{rdlab::parse_config(text)};
  });
}

rdlab_status rdlab_config_load(const char* path, rdlab_config** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new rdlab_config{rdlab::load_config(path)};
  });
}

rdlab_status rdlab_config_clone(const rdlab_config* cfg, rdlab_config** out) {
  return guarded([&] {
    need(cfg, "config");
    need(out, "out");
    *out = new rdlab_config{cfg->cfg};
  });
}

void rdlab_config_free(rdlab_config* cfg) { delete cfg; }

rdlab_status rdlab_config_set(rdlab_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    need(cfg, "config");
    need(key, "key");
    need(value, "value");
    // Applied to a copy so a rejected value leaves the config unchanged.
    rdlab::ExperimentConfig next = cfg->cfg;
    rdlab::set_config_value(next, key, value);
    cfg->cfg = std::move(next);
  });
}

rdlab_status rdlab_config_get(const rdlab_config* cfg, const char* key, char** value) {
  return guarded([&] {
    need(cfg, "config");
    need(key, "key");
    need(value, "value");
    for (const auto& [k, v] : rdlab::config_entries(cfg->cfg))
      if (k == key) {
        *value = dup_string(v);
        return;
      }
    throw rdlab::Error(rdlab::ErrorCode::Config, std::string("unknown config key '") + key + "'");
  });
}

rdlab_status rdlab_config_emit(const rdlab_config* cfg, char** text) {
  return guarded([&] {
    need(cfg, "config");
    need(text, "text");
    *text = dup_string(rdlab::emit_config(cfg->cfg));
  });
}

rdlab_status rdlab_equilibrium(const rdlab_config* cfg, double* u_star, double* v_star) {
  return guarded([&] {
    need(cfg, "config");
    need(u_star, "u_star");
    need(v_star, "v_star");
    const auto eq = rdlab::primary_equilibrium(cfg->cfg.params);
    *u_star = eq.u_star;
    *v_star = eq.v_star;
  });
}

rdlab_status rdlab_hopf_threshold_s(const rdlab_config* cfg, double* s_h) {
  return guarded([&] {
    need(cfg, "config");
    need(s_h, "s_h");
    *s_h = rdlab::hopf_threshold_s(cfg->cfg.params);
  });
}

rdlab_status rdlab_hopf_threshold_a(const rdlab_config* cfg, double a_lo, double a_hi, double* a_h) {
  return guarded([&] {
    need(cfg, "config");
    need(a_h, "a_h");
    *a_h = rdlab::hopf_threshold_a(cfg->cfg.params, a_lo, a_hi);
  });
}

rdlab_status rdlab_first_lyapunov(const rdlab_config* cfg, double* sigma) {
  return guarded([&] {
    need(cfg, "config");
    need(sigma, "sigma");
    rdlab::KineticParams p = cfg->cfg.params;
    p.s = rdlab::hopf_threshold_s(p);
    *sigma = rdlab::first_lyapunov_number(p);
  });
}

rdlab_status rdlab_unstable_band(const rdlab_config* cfg, double* k1, double* k2) {
  return guarded([&] {
    need(cfg, "config");
    need(k1, "k1");
    need(k2, "k2");
    const auto& c = cfg->cfg;
    const auto band = rdlab::unstable_band(rdlab::jacobian_at(rdlab::primary_equilibrium(c.params), c.params), c.diffusion);
    if (!band) throw rdlab::Error(rdlab::ErrorCode::NoBand, "no unstable band");
    *k1 = band->k1;
    *k2 = band->k2;
  });
}

rdlab_status rdlab_turing_boundary_d2(const rdlab_config* cfg, double* d2t) {
  return guarded([&] {
    need(cfg, "config");
    need(d2t, "d2t");
    const auto& c = cfg->cfg;
    *d2t = rdlab::turing_boundary_d2(rdlab::jacobian_at(rdlab::primary_equilibrium(c.params), c.params), c.diffusion.d1);
  });
}

rdlab_status rdlab_cmd_analyze(const rdlab_config* cfg, char** out) {
  return guarded([&] {
    need(cfg, "config");
    need(out, "out");
    *out = dup_string(rdlab::cmd_analyze(cfg->cfg));
  });
}

rdlab_status rdlab_cmd_dispersion(const rdlab_config* cfg, char** out) {
  return guarded([&] {
    need(cfg, "config");
    need(out, "out");
    *out = dup_string(rdlab::cmd_dispersion(cfg->cfg));
  });
}

rdlab_status rdlab_cmd_map(const rdlab_config* cfg, char** out) {
  return guarded([&] {
    need(cfg, "config");
    need(out, "out");
    const auto m = rdlab::cmd_map(cfg->cfg);
    const std::filesystem::path dir(cfg->cfg.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw rdlab::Error(rdlab::ErrorCode::Io, "cannot create '" + dir.string() + "'");
    rdlab::write_text((dir / "regime_map.csv").string(), m.grid_csv);
    rdlab::write_text((dir / "turing_boundary.csv").string(), m.boundary_csv);
    *out = dup_string("regime_map = " + (dir / "regime_map.csv").string() + "\nturing_boundary = " +
                      (dir / "turing_boundary.csv").string() + "\nunknown_cells = " +
                      std::to_string(m.unknown_cells) + "\n");
  });
}

rdlab_status rdlab_cmd_simulate(const rdlab_config* cfg, char** out) {
  return guarded([&] {
    need(cfg, "config");
    need(out, "out");
    *out = dup_string(rdlab::cmd_simulate(cfg->cfg).summary);
  });
}

rdlab_status rdlab_cmd_resume(const rdlab_config* cfg, const char* snapshot, const char* fill, char** out) {
  return guarded([&] {
    need(cfg, "config");
    need(snapshot, "snapshot");
    need(fill, "fill");
    need(out, "out");
    *out = dup_string(rdlab::cmd_resume(cfg->cfg, snapshot, rdlab::parse_fill(fill)).summary);
  });
}

rdlab_status rdlab_cmd_classify(const char* const* snapshots, size_t count, char** out) {
  return guarded([&] {
    need(out, "out");
    *out = dup_string(rdlab::cmd_classify(paths(snapshots, count)));
  });
}

rdlab_status rdlab_cmd_series(const char* const* snapshots, size_t count, char** out) {
  return guarded([&] {
    need(out, "out");
    *out = dup_string(rdlab::cmd_series(paths(snapshots, count)));
  });
}

rdlab_status rdlab_sim_new(const rdlab_config* cfg, rdlab_sim** out) {
  return guarded([&] {
    need(cfg, "config");
    need(out, "out");
    auto s = std::make_unique<rdlab_sim>();
    s->cfg = cfg->cfg;
    s->cfg.params.validate();
    s->cfg.diffusion.validate();
    s->g = std::make_unique<rdlab::GridGeometry>(rdlab::build_geometry(s->cfg));
    s->state = rdlab::build_initial_state(s->cfg, *s->g);
    const double dt = rdlab::effective_dt(s->cfg.sim, s->cfg.h, s->cfg.diffusion);
    s->sim = std::make_unique<rdlab::Simulator>(*s->g, s->cfg.params, s->cfg.diffusion, dt, s->cfg.sim.threads,
                                                s->cfg.sim.scheme);
    *out = s.release();
  });
}

void rdlab_sim_free(rdlab_sim* sim) { delete sim; }

rdlab_status rdlab_sim_grid(const rdlab_sim* sim, int* nx, int* ny, double* h) {
  return guarded([&] {
    need(sim, "sim");
    if (nx) *nx = sim->g->nx();
    if (ny) *ny = sim->g->ny();
    if (h) *h = sim->g->h();
  });
}

rdlab_status rdlab_sim_dt(const rdlab_sim* sim, double* dt) {
  return guarded([&] {
    need(sim, "sim");
    need(dt, "dt");
    *dt = sim->sim->dt();
  });
}

rdlab_status rdlab_sim_time(const rdlab_sim* sim, double* t) {
  return guarded([&] {
    need(sim, "sim");
    need(t, "t");
    *t = sim->state.t;
  });
}

rdlab_status rdlab_sim_advance(rdlab_sim* sim, uint64_t steps) {
  return guarded([&] {
    need(sim, "sim");
    sim->sim->advance(sim->state, steps);
  });
}

rdlab_status rdlab_sim_fields(const rdlab_sim* sim, double* u, double* v, size_t count) {
  return guarded([&] {
    need(sim, "sim");
    if (count != sim->state.u.size())
      throw rdlab::Error(rdlab::ErrorCode::ShapeMismatch, "buffer length must equal nx*ny");
    if (u) std::memcpy(u, sim->state.u.data(), count * sizeof(double));
    if (v) std::memcpy(v, sim->state.v.data(), count * sizeof(double));
  });
}

rdlab_status rdlab_sim_means(const rdlab_sim* sim, rdlab_region region, double* mean_u, double* mean_v) {
  return guarded([&] {
    need(sim, "sim");
    const auto [mu, mv] = rdlab::spatial_average(sim->state, *sim->g, region_of(region));
    if (mean_u) *mean_u = mu;
    if (mean_v) *mean_v = mv;
  });
}

}  // extern "C"
