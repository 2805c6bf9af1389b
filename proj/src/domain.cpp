#include "rdlab/domain.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <sstream>

#include "rdlab/error.hpp"

namespace rdlab {

namespace {

std::string num(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_num(const std::string& text, const std::string& what) {
  double x = 0.0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, x);
  if (res.ec != std::errc() || res.ptr != end) throw Error(ErrorCode::Config, "bad number for " + what + ": '" + text + "'");
  return x;
}

CellLabel parse_label(const std::string& text) {
  if (text == "D1") return CellLabel::D1;
  if (text == "Corridor") return CellLabel::Corridor;
  if (text == "RightPatch") return CellLabel::RightPatch;
  throw Error(ErrorCode::Config, "unknown region label '" + text + "'");
}

template <class Shape>
void check_patchwork(const Shape& s) {
  if (!(s.L2 > 0 && s.Lx1 > 0 && s.Lx2 > 0 && s.Lx3 > 0 && s.Ly > 0)) {
    throw Error(ErrorCode::DegenerateDomain, "patch and corridor lengths must be positive");
  }
  if (s.Ly > s.L2) throw Error(ErrorCode::DegenerateDomain, "corridor width Ly exceeds patch height L2");
}

std::map<std::string, double> keyed_numbers(std::istringstream& in, const std::string& kind) {
  std::map<std::string, double> kv;
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::Config, kind + " domain expects key=value, got '" + tok + "'");
    kv[tok.substr(0, eq)] = parse_num(tok.substr(eq + 1), tok.substr(0, eq));
  }
  return kv;
}

double take(std::map<std::string, double>& kv, const std::string& key, const std::string& kind) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw Error(ErrorCode::Config, kind + " domain is missing " + key);
  const double v = it->second;
  kv.erase(it);
  return v;
}

}  // namespace

const char* to_string(CellLabel label) noexcept {
  switch (label) {
    case CellLabel::D1: return "D1";
    case CellLabel::Corridor: return "Corridor";
    case CellLabel::RightPatch: return "RightPatch";
    case CellLabel::Outside: return "Outside";
  }
  return "Outside";
}

const char* to_string(RegionSel region) noexcept {
  switch (region) {
    case RegionSel::D1: return "D1";
    case RegionSel::D2: return "D2";
    case RegionSel::Corridor: return "Corridor";
    case RegionSel::RightPatch: return "RightPatch";
    case RegionSel::All: return "All";
  }
  return "All";
}

RegionSel parse_region(const std::string& text) {
  if (text == "D1") return RegionSel::D1;
  if (text == "D2") return RegionSel::D2;
  if (text == "Corridor") return RegionSel::Corridor;
  if (text == "RightPatch") return RegionSel::RightPatch;
  if (text == "All" || text == "all") return RegionSel::All;
  throw Error(ErrorCode::Config, "unknown region '" + text + "'");
}

std::vector<std::pair<Rect, CellLabel>> labelled_rects(const DomainSpec& spec) {
  struct Visitor {
    std::vector<std::pair<Rect, CellLabel>> operator()(const SquareDomain& s) const {
      return {{Rect{0.0, 0.0, s.L, s.L}, CellLabel::D1}};
    }
    std::vector<std::pair<Rect, CellLabel>> operator()(const UShapeDomain& s) const {
      check_patchwork(s);
      const double xc = s.Lx1 + s.Lx2;
      return {{Rect{0.0, 0.0, s.Lx1, s.L2}, CellLabel::D1},
              {Rect{s.Lx1, 0.0, xc, s.Ly}, CellLabel::Corridor},
              {Rect{xc, 0.0, xc + s.Lx3, s.L2}, CellLabel::RightPatch}};
    }
    std::vector<std::pair<Rect, CellLabel>> operator()(const HShapeDomain& s) const {
      check_patchwork(s);
      const double xc = s.Lx1 + s.Lx2;
      const double yc = 0.5 * (s.L2 - s.Ly);
      return {{Rect{0.0, 0.0, s.Lx1, s.L2}, CellLabel::D1},
              {Rect{s.Lx1, yc, xc, yc + s.Ly}, CellLabel::Corridor},
              {Rect{xc, 0.0, xc + s.Lx3, s.L2}, CellLabel::RightPatch}};
    }
    std::vector<std::pair<Rect, CellLabel>> operator()(const RectUnionDomain& s) const {
      if (s.rects.empty()) throw Error(ErrorCode::DegenerateDomain, "rectangle union is empty");
      if (!s.labels.empty() && s.labels.size() != s.rects.size()) {
        throw Error(ErrorCode::InvalidArgument, "rectangle labels must match rectangles one to one");
      }
      std::vector<std::pair<Rect, CellLabel>> out;
      for (std::size_t i = 0; i < s.rects.size(); ++i) {
        const CellLabel lab = !s.labels.empty() ? s.labels[i] : (i == 0 ? CellLabel::D1 : CellLabel::RightPatch);
        out.emplace_back(s.rects[i], lab);
      }
      return out;
    }
  };
  return std::visit(Visitor{}, spec);
}

std::string format_domain(const DomainSpec& spec) {
  std::ostringstream out;
  if (const auto* sq = std::get_if<SquareDomain>(&spec)) {
    out << "square L=" << num(sq->L);
  } else if (const auto* u = std::get_if<UShapeDomain>(&spec)) {
    out << "ushape L2=" << num(u->L2) << " Lx1=" << num(u->Lx1) << " Lx2=" << num(u->Lx2) << " Lx3=" << num(u->Lx3)
        << " Ly=" << num(u->Ly);
  } else if (const auto* hs = std::get_if<HShapeDomain>(&spec)) {
    out << "hshape L2=" << num(hs->L2) << " Lx1=" << num(hs->Lx1) << " Lx2=" << num(hs->Lx2) << " Lx3=" << num(hs->Lx3)
        << " Ly=" << num(hs->Ly);
  } else {
    const auto& ru = std::get<RectUnionDomain>(spec);
    out << "rects";
    for (std::size_t i = 0; i < ru.rects.size(); ++i) {
      const auto& r = ru.rects[i];
      out << ' ' << num(r.x0) << ',' << num(r.y0) << ',' << num(r.x1) << ',' << num(r.y1);
      if (!ru.labels.empty()) out << ':' << to_string(ru.labels[i]);
    }
  }
  return out.str();
}

DomainSpec parse_domain(const std::string& text) {
  std::istringstream in(text);
  std::string kind;
  if (!(in >> kind)) throw Error(ErrorCode::Config, "empty domain description");
  if (kind == "square") {
    auto kv = keyed_numbers(in, kind);
    SquareDomain sq{take(kv, "L", kind)};
    if (!kv.empty()) throw Error(ErrorCode::Config, "square domain: unexpected key " + kv.begin()->first);
    return sq;
  }
  if (kind == "ushape" || kind == "hshape") {
    auto kv = keyed_numbers(in, kind);
    const double L2 = take(kv, "L2", kind), Lx1 = take(kv, "Lx1", kind), Lx2 = take(kv, "Lx2", kind);
    const double Lx3 = take(kv, "Lx3", kind), Ly = take(kv, "Ly", kind);
    if (!kv.empty()) throw Error(ErrorCode::Config, kind + " domain: unexpected key " + kv.begin()->first);
    if (kind == "ushape") return UShapeDomain{L2, Lx1, Lx2, Lx3, Ly};
    return HShapeDomain{L2, Lx1, Lx2, Lx3, Ly};
  }
  if (kind == "rects") {
    RectUnionDomain ru;
    std::string tok;
    bool any_label = false, all_label = true;
    std::vector<CellLabel> labels;
    while (in >> tok) {
      std::string coords = tok;
      const auto colon = tok.find(':');
      if (colon != std::string::npos) {
        coords = tok.substr(0, colon);
        labels.push_back(parse_label(tok.substr(colon + 1)));
        any_label = true;
      } else {
        all_label = false;
      }
      std::array<double, 4> v{};
      std::size_t start = 0;
      for (int k = 0; k < 4; ++k) {
        const auto comma = coords.find(',', start);
        const bool last = (k == 3);
        if (last != (comma == std::string::npos)) throw Error(ErrorCode::Config, "rectangle needs x0,y0,x1,y1: '" + tok + "'");
        v[k] = parse_num(coords.substr(start, last ? std::string::npos : comma - start), "rectangle");
        start = comma + 1;
      }
      ru.rects.push_back({v[0], v[1], v[2], v[3]});
    }
    if (any_label && !all_label) throw Error(ErrorCode::Config, "label either every rectangle or none");
    if (any_label) ru.labels = std::move(labels);
    if (ru.rects.empty()) throw Error(ErrorCode::Config, "rects domain needs at least one rectangle");
    return ru;
  }
  throw Error(ErrorCode::Config, "unknown domain kind '" + kind + "'");
}

GridGeometry rasterize(const DomainSpec& spec, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorCode::InvalidArgument, "grid spacing must be positive");
  auto rects = labelled_rects(spec);

  // Snap to the h-lattice; coordinates are kept as integer multiples of h.
  struct IRect {
    long long x0, y0, x1, y1;
    CellLabel label;
  };
  std::vector<IRect> snapped;
  auto snap = [h](double x) {
    const double q = std::round(x / h);
    if (std::abs(q * h - x) > 0.5 * h) throw Error(ErrorCode::DegenerateDomain, "coordinate cannot be snapped");
    return static_cast<long long>(q);
  };
  for (const auto& [r, lab] : rects) {
    IRect s{snap(r.x0), snap(r.y0), snap(r.x1), snap(r.y1), lab};
    if (s.x1 <= s.x0 || s.y1 <= s.y0) throw Error(ErrorCode::DegenerateDomain, "rectangle collapses on the grid");
    snapped.push_back(s);
  }
  long long xmin = snapped[0].x0, ymin = snapped[0].y0, xmax = snapped[0].x1, ymax = snapped[0].y1;
  for (const auto& s : snapped) {
    xmin = std::min(xmin, s.x0);
    ymin = std::min(ymin, s.y0);
    xmax = std::max(xmax, s.x1);
    ymax = std::max(ymax, s.y1);
  }
  if ((xmax - xmin) * (ymax - ymin) > (1LL << 31) - 1) throw Error(ErrorCode::InvalidArgument, "grid too large");

  GridGeometry g;
  g.nx_ = static_cast<int>(xmax - xmin);
  g.ny_ = static_cast<int>(ymax - ymin);
  g.h_ = h;
  g.x0_ = static_cast<double>(xmin) * h;
  g.y0_ = static_cast<double>(ymin) * h;
  g.spec_ = spec;
  g.labels_.assign(g.cell_count(), CellLabel::Outside);
  // Cell (i, j) has centre (xmin + i + 1/2, ymin + j + 1/2) in lattice units, so
  // it lies inside [x0, x1) x [y0, y1) exactly when x0 <= xmin + i < x1.
  for (int j = 0; j < g.ny_; ++j) {
    for (int i = 0; i < g.nx_; ++i) {
      const long long x = xmin + i, y = ymin + j;
      for (const auto& s : snapped) {
        if (s.x0 <= x && x < s.x1 && s.y0 <= y && y < s.y1) {
          g.labels_[g.index(i, j)] = s.label;
          break;
        }
      }
    }
  }

  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    if (g.labels_[c] != CellLabel::Outside) g.interior_.push_back(static_cast<std::int32_t>(c));
  }
  g.neighbours_.reserve(g.interior_.size());
  for (const auto c : g.interior_) {
    const int i = c % g.nx_, j = c / g.nx_;
    auto pick = [&](int ii, int jj) -> std::int32_t {
      if (ii < 0 || jj < 0 || ii >= g.nx_ || jj >= g.ny_) return c;
      const auto n = static_cast<std::int32_t>(g.index(ii, jj));
      return g.labels_[n] == CellLabel::Outside ? c : n;
    };
    g.neighbours_.push_back({pick(i, j + 1), pick(i, j - 1), pick(i + 1, j), pick(i - 1, j)});
  }

  // 4-connectivity by breadth-first search over the neighbour table.
  std::vector<std::int32_t> slot(g.cell_count(), -1);
  for (std::size_t k = 0; k < g.interior_.size(); ++k) slot[g.interior_[k]] = static_cast<std::int32_t>(k);
  std::vector<char> seen(g.interior_.size(), 0);
  std::deque<std::int32_t> queue{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!queue.empty()) {
    const auto k = queue.front();
    queue.pop_front();
    for (const auto n : g.neighbours_[k]) {
      const auto kn = slot[n];
      if (!seen[kn]) {
        seen[kn] = 1;
        ++reached;
        queue.push_back(kn);
      }
    }
  }
  if (reached != g.interior_.size()) throw Error(ErrorCode::DisconnectedDomain, "habitat is not 4-connected");
  return g;
}

std::vector<std::int32_t> region_cells(const GridGeometry& g, RegionSel region) {
  std::vector<std::int32_t> out;
  for (const auto c : g.interior_cells()) {
    const auto lab = g.label(c);
    bool take_it = false;
    switch (region) {
      case RegionSel::All: take_it = true; break;
      case RegionSel::D1: take_it = lab == CellLabel::D1; break;
      case RegionSel::D2: take_it = lab == CellLabel::Corridor || lab == CellLabel::RightPatch; break;
      case RegionSel::Corridor: take_it = lab == CellLabel::Corridor; break;
      case RegionSel::RightPatch: take_it = lab == CellLabel::RightPatch; break;
    }
    if (take_it) out.push_back(c);
  }
  return out;
}

const std::vector<std::array<std::int32_t, 4>>& boundary_stencil_info(const GridGeometry& g) { return g.neighbours(); }

std::optional<CellBox> rectangular_box(const GridGeometry& g, RegionSel region) {
  const auto cells = region_cells(g, region);
  if (cells.empty()) return std::nullopt;
  CellBox box{g.nx(), g.ny(), 0, 0};
  for (const auto c : cells) {
    const int i = c % g.nx(), j = c / g.nx();
    box.i0 = std::min(box.i0, i);
    box.j0 = std::min(box.j0, j);
    box.i1 = std::max(box.i1, i + 1);
    box.j1 = std::max(box.j1, j + 1);
  }
  if (static_cast<std::size_t>(box.width()) * static_cast<std::size_t>(box.height()) != cells.size()) return std::nullopt;
  return box;
}

}  // namespace rdlab
