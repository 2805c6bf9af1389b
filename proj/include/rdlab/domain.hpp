#pragma once

// Habitat geometry: squares and unions of axis-aligned rectangles (U- and
// H-shaped patch-corridor-patch layouts), rasterised onto a cell-centred grid.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace rdlab {

struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
  bool operator==(const Rect&) const = default;
};

/// Per-cell tag. D2 is Corridor together with RightPatch.
enum class CellLabel : std::uint8_t { D1 = 0, Corridor = 1, RightPatch = 2, Outside = 3 };

enum class RegionSel { D1, D2, Corridor, RightPatch, All };

const char* to_string(CellLabel label) noexcept;
const char* to_string(RegionSel region) noexcept;
RegionSel parse_region(const std::string& text);

struct SquareDomain {
  double L = 100.0;
  bool operator==(const SquareDomain&) const = default;
};

/// Left patch [0,Lx1]x[0,L2], corridor [Lx1,Lx1+Lx2]x[0,Ly] along the bottom
/// edge, right patch [Lx1+Lx2, L1]x[0,L2] with L1 = Lx1+Lx2+Lx3.
struct UShapeDomain {
  double L2 = 200.0, Lx1 = 80.0, Lx2 = 40.0, Lx3 = 80.0, Ly = 40.0;
  bool operator==(const UShapeDomain&) const = default;
};

/// As the U-shape but with the corridor centred vertically.
struct HShapeDomain {
  double L2 = 200.0, Lx1 = 80.0, Lx2 = 40.0, Lx3 = 80.0, Ly = 40.0;
  bool operator==(const HShapeDomain&) const = default;
};

/// Explicit rectangles. Without labels the first rectangle is D1 and the rest
/// are RightPatch (so they count towards D2).
struct RectUnionDomain {
  std::vector<Rect> rects;
  std::vector<CellLabel> labels;  ///< empty, or one per rectangle
  bool operator==(const RectUnionDomain&) const = default;
};

using DomainSpec = std::variant<SquareDomain, UShapeDomain, HShapeDomain, RectUnionDomain>;

/// Rectangles and their labels, in membership-priority order.
std::vector<std::pair<Rect, CellLabel>> labelled_rects(const DomainSpec& spec);

/// Text form used in config files and file headers, e.g.
/// "ushape L2=200 Lx1=80 Lx2=40 Lx3=80 Ly=40" or "rects 0,0,40,80:D1 40,0,60,4".
std::string format_domain(const DomainSpec& spec);
DomainSpec parse_domain(const std::string& text);

enum Dir : int { North = 0, South = 1, East = 2, West = 3 };

class GridGeometry {
 public:
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double h() const { return h_; }
  double x_origin() const { return x0_; }
  double y_origin() const { return y0_; }
  std::size_t cell_count() const { return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx_ + i; }

  bool interior(std::size_t cell) const { return labels_[cell] != CellLabel::Outside; }
  CellLabel label(std::size_t cell) const { return labels_[cell]; }
  const std::vector<CellLabel>& labels() const { return labels_; }

  /// Full-grid indices of interior cells in row-major order.
  const std::vector<std::int32_t>& interior_cells() const { return interior_; }

  /// Neighbour table aligned with interior_cells(): full-grid indices of the
  /// N/S/E/W neighbours, with an outside neighbour replaced by the cell itself
  /// (mirror ghost, zero flux).
  const std::vector<std::array<std::int32_t, 4>>& neighbours() const { return neighbours_; }

  const DomainSpec& spec() const { return spec_; }

  bool operator==(const GridGeometry& o) const {
    return nx_ == o.nx_ && ny_ == o.ny_ && h_ == o.h_ && x0_ == o.x0_ && y0_ == o.y0_ && labels_ == o.labels_;
  }

 private:
  friend GridGeometry rasterize(const DomainSpec& spec, double h);

  int nx_ = 0, ny_ = 0;
  double h_ = 1.0, x0_ = 0.0, y0_ = 0.0;
  std::vector<CellLabel> labels_;
  std::vector<std::int32_t> interior_;
  std::vector<std::array<std::int32_t, 4>> neighbours_;
  DomainSpec spec_;
};

/// Snap rectangle coordinates to multiples of h and mark every cell whose
/// centre lies in the union. Throws DegenerateDomain when a rectangle
/// collapses or a preset has invalid dimensions, DisconnectedDomain when the
/// interior is not 4-connected.
GridGeometry rasterize(const DomainSpec& spec, double h);

/// Full-grid indices of the selected region, in row-major order.
std::vector<std::int32_t> region_cells(const GridGeometry& g, RegionSel region);

/// Per interior cell neighbour table (same as g.neighbours()).
const std::vector<std::array<std::int32_t, 4>>& boundary_stencil_info(const GridGeometry& g);

struct CellBox {
  int i0 = 0, j0 = 0, i1 = 0, j1 = 0;  ///< half-open [i0,i1) x [j0,j1)
  int width() const { return i1 - i0; }
  int height() const { return j1 - j0; }
};

/// Bounding box of the region when the region fills it exactly.
std::optional<CellBox> rectangular_box(const GridGeometry& g, RegionSel region);

}  // namespace rdlab
