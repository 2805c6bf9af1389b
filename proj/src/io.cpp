#include "rdlab/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "rdlab/error.hpp"

namespace rdlab {

namespace {

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path + "'");
}

void put_plane(std::ostream& out, const std::vector<double>& plane) {
  std::vector<unsigned char> buf(plane.size() * 8);
  for (std::size_t i = 0; i < plane.size(); ++i) {
    auto bits = std::bit_cast<std::uint64_t>(plane[i]);
    for (int b = 0; b < 8; ++b) buf[i * 8 + b] = static_cast<unsigned char>(bits >> (8 * b));
  }
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

std::vector<double> get_plane(std::istream& in, std::size_t n, const std::string& path) {
  std::vector<unsigned char> buf(n * 8);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (static_cast<std::size_t>(in.gcount()) != buf.size())
    throw Error(ErrorCode::Io, "snapshot '" + path + "' is truncated");
  std::vector<double> plane(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(buf[i * 8 + b]) << (8 * b);
    plane[i] = std::bit_cast<double>(bits);
  }
  return plane;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

const std::string& Snapshot::get(const std::string& key) const {
  for (const auto& [k, v] : header)
    if (k == key) return v;
  throw Error(ErrorCode::Io, "snapshot header has no '" + key + "'");
}

bool Snapshot::has(const std::string& key) const {
  for (const auto& [k, v] : header)
    if (k == key) return true;
  return false;
}

void write_snapshot(const std::string& path, const FieldState& state, const GridGeometry& g,
                    const ExperimentConfig& cfg, const HeaderEntries& extra) {
  if (state.u.size() != g.cell_count() || state.v.size() != g.cell_count())
    throw Error(ErrorCode::ShapeMismatch, "write_snapshot: state does not match the grid");
  std::ostringstream hdr;
  hdr << "rdlab-snapshot 1\n";
  hdr << "nx = " << g.nx() << "\n";
  hdr << "ny = " << g.ny() << "\n";
  hdr << "h = " << format_double(g.h()) << "\n";
  hdr << "t = " << format_double(state.t) << "\n";
  hdr << "seed = " << cfg.sim.seed << "\n";
  hdr << "generator = " << kGeneratorName << "\n";
  hdr << "domain = " << format_domain(g.spec()) << "\n";
  for (const auto& [k, v] : config_entries(cfg)) hdr << "config." << k << " = " << v << "\n";
  for (const auto& [k, v] : extra) hdr << k << " = " << v << "\n";
  hdr << "end_header\n";

  // Cells outside the mask are NaN regardless of what the state holds.
  std::vector<double> u(state.u), v(state.v);
  for (std::size_t c = 0; c < u.size(); ++c)
    if (!g.interior(c)) u[c] = v[c] = std::nan("");

  auto out = open_out(path, std::ios::out | std::ios::binary);
  const std::string h = hdr.str();
  out.write(h.data(), static_cast<std::streamsize>(h.size()));
  put_plane(out, u);
  put_plane(out, v);
  finish(out, path);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open snapshot '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || trim(line) != "rdlab-snapshot 1")
    throw Error(ErrorCode::Io, "'" + path + "' is not a snapshot file");
  Snapshot snap;
  bool ended = false;
  while (std::getline(in, line)) {
    if (line == "end_header") {
      ended = true;
      break;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::Io, "bad snapshot header line '" + line + "'");
    snap.header.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  if (!ended) throw Error(ErrorCode::Io, "snapshot '" + path + "' has no end_header");
  try {
    snap.nx = std::stoi(snap.get("nx"));
    snap.ny = std::stoi(snap.get("ny"));
    snap.h = parse_double(snap.get("h"));
    snap.state.t = parse_double(snap.get("t"));
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw Error(ErrorCode::Io, "snapshot '" + path + "' has a malformed header");
  }
  if (snap.nx <= 0 || snap.ny <= 0) throw Error(ErrorCode::Io, "snapshot '" + path + "' has no cells");
  const auto n = static_cast<std::size_t>(snap.nx) * static_cast<std::size_t>(snap.ny);
  snap.state.u = get_plane(in, n, path);
  snap.state.v = get_plane(in, n, path);
  return snap;
}

ExperimentConfig snapshot_config(const Snapshot& snap) {
  ExperimentConfig cfg;
  for (const auto& [k, v] : snap.header)
    if (k.rfind("config.", 0) == 0) set_config_value(cfg, k.substr(7), v);
  return cfg;
}

void write_mask(const std::string& path, const GridGeometry& g) {
  auto out = open_out(path, std::ios::out | std::ios::binary);
  out << "P5\n" << g.nx() << " " << g.ny() << "\n3\n";
  std::vector<unsigned char> px(g.cell_count());
  for (std::size_t c = 0; c < px.size(); ++c) {
    switch (g.label(c)) {
      case CellLabel::Outside: px[c] = 0; break;
      case CellLabel::D1: px[c] = 1; break;
      case CellLabel::Corridor: px[c] = 2; break;
      case CellLabel::RightPatch: px[c] = 3; break;
    }
  }
  out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
  finish(out, path);
}

std::string config_comment_block(const ExperimentConfig& cfg, const HeaderEntries& extra) {
  std::string out;
  for (const auto& [k, v] : config_entries(cfg)) out += "# " + k + " = " + v + "\n";
  for (const auto& [k, v] : extra) out += "# " + k + " = " + v + "\n";
  return out;
}

std::string series_csv(const TimeSeries& series, const ExperimentConfig& cfg, const HeaderEntries& extra) {
  std::string out = config_comment_block(cfg, extra);
  out += "t,mean_u_D1,mean_v_D1,mean_u_D2,mean_v_D2,mean_u_all,mean_v_all\n";
  for (const auto& r : series) {
    out += format_double(r.t) + "," + format_double(r.mean_u_d1) + "," + format_double(r.mean_v_d1) + "," +
           format_double(r.mean_u_d2) + "," + format_double(r.mean_v_d2) + "," + format_double(r.mean_u_all) + "," +
           format_double(r.mean_v_all) + "\n";
  }
  return out;
}

void write_series(const std::string& path, const TimeSeries& series, const ExperimentConfig& cfg,
                  const HeaderEntries& extra) {
  write_text(path, series_csv(series, cfg, extra));
}

TimeSeries read_series(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open series '" + path + "'");
  TimeSeries out;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line.rfind("t,", 0) != 0) throw Error(ErrorCode::Io, "series '" + path + "' has no column header");
      header = true;
      continue;
    }
    std::vector<double> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(parse_double(trim(cell)));
    if (cols.size() != 7) throw Error(ErrorCode::Io, "series '" + path + "': expected 7 columns");
    out.push_back({cols[0], cols[1], cols[2], cols[3], cols[4], cols[5], cols[6]});
  }
  return out;
}

void write_pgm(const std::string& path, const std::vector<double>& field, int nx, int ny, bool binarise,
               double threshold) {
  double lo = INFINITY, hi = -INFINITY, sum = 0.0, sq = 0.0;
  std::size_t n = 0;
  for (double x : field) {
    if (std::isnan(x)) continue;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
    sum += x;
    ++n;
  }
  const double mean = n ? sum / static_cast<double>(n) : 0.0;
  for (double x : field)
    if (!std::isnan(x)) sq += (x - mean) * (x - mean);
  const double cut = mean + threshold * (n ? std::sqrt(sq / static_cast<double>(n)) : 0.0);
  std::vector<unsigned char> px(field.size(), 0);
  for (std::size_t c = 0; c < field.size(); ++c) {
    const double x = field[c];
    if (std::isnan(x)) continue;
    if (binarise) px[c] = x > cut ? 255 : 64;
    else px[c] = hi > lo ? static_cast<unsigned char>(1 + std::lround(254.0 * (x - lo) / (hi - lo))) : 128;
  }
  auto out = open_out(path, std::ios::out | std::ios::binary);
  out << "P5\n" << nx << " " << ny << "\n255\n";
  out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
  finish(out, path);
}

void write_text(const std::string& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  finish(out, path);
}

}  // namespace rdlab
