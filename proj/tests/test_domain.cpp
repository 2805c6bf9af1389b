#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "rdlab/domain.hpp"
#include "rdlab/error.hpp"

using namespace rdlab;

namespace {

std::size_t count(const GridGeometry& g, CellLabel l) {
  return static_cast<std::size_t>(std::count(g.labels().begin(), g.labels().end(), l));
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Ok;
}

}  // namespace

TEST_CASE("square rasterises to L/h cells per side") {
  const auto g = rasterize(SquareDomain{100.0}, 1.0);
  CHECK(g.nx() == 100);
  CHECK(g.ny() == 100);
  CHECK(g.interior_cells().size() == 10000);
  CHECK(count(g, CellLabel::D1) == 10000);
  CHECK(region_cells(g, RegionSel::D2).empty());
  const auto g2 = rasterize(SquareDomain{100.0}, 0.5);
  CHECK(g2.nx() == 200);
}

TEST_CASE("U-shape cell counts per label") {
  const UShapeDomain u{80.0, 40.0, 20.0, 40.0, 4.0};
  const auto g = rasterize(u, 1.0);
  CHECK(g.nx() == 100);
  CHECK(g.ny() == 80);
  CHECK(count(g, CellLabel::D1) == 40u * 80u);
  CHECK(count(g, CellLabel::Corridor) == 20u * 4u);
  CHECK(count(g, CellLabel::RightPatch) == 40u * 80u);
  CHECK(region_cells(g, RegionSel::D2).size() == 20u * 4u + 40u * 80u);
  // Corridor hugs the bottom edge.
  CHECK(g.label(g.index(50, 0)) == CellLabel::Corridor);
  CHECK(g.label(g.index(50, 4)) == CellLabel::Outside);
}

TEST_CASE("H-shape centres the corridor") {
  const auto g = rasterize(HShapeDomain{80.0, 40.0, 20.0, 40.0, 10.0}, 1.0);
  CHECK(g.label(g.index(50, 35)) == CellLabel::Corridor);
  CHECK(g.label(g.index(50, 44)) == CellLabel::Corridor);
  CHECK(g.label(g.index(50, 34)) == CellLabel::Outside);
  CHECK(g.label(g.index(50, 45)) == CellLabel::Outside);
}

TEST_CASE("neighbour table mirrors at walls and links interior cells") {
  const auto g = rasterize(UShapeDomain{20.0, 8.0, 4.0, 8.0, 2.0}, 1.0);
  const auto& cells = g.interior_cells();
  const auto& nb = g.neighbours();
  REQUIRE(cells.size() == nb.size());
  for (std::size_t k = 0; k < cells.size(); ++k) {
    for (int d = 0; d < 4; ++d) {
      CHECK(g.interior(static_cast<std::size_t>(nb[k][d])));
    }
  }
  // Corner cell (0,0): south and west are walls.
  CHECK(nb[0][South] == cells[0]);
  CHECK(nb[0][West] == cells[0]);
  // Symmetry: if B is a (non-self) neighbour of A then A is a neighbour of B.
  std::vector<std::int32_t> pos(g.cell_count(), -1);
  for (std::size_t k = 0; k < cells.size(); ++k) pos[cells[k]] = static_cast<std::int32_t>(k);
  for (std::size_t k = 0; k < cells.size(); ++k)
    for (int d = 0; d < 4; ++d) {
      const auto other = nb[k][d];
      if (other == cells[k]) continue;
      const auto& back = nb[pos[other]];
      CHECK(std::find(back.begin(), back.end(), cells[k]) != back.end());
    }
}

TEST_CASE("domain text round-trips") {
  const std::vector<DomainSpec> specs = {
      SquareDomain{100.0}, UShapeDomain{80.0, 40.0, 20.0, 40.0, 4.0}, HShapeDomain{200.0, 80.0, 40.0, 80.0, 2.5},
      RectUnionDomain{{{0, 0, 40, 40}, {40, 0, 60, 5}, {60, 0, 100, 40}},
                      {CellLabel::D1, CellLabel::Corridor, CellLabel::RightPatch}},
      RectUnionDomain{{{0, 0, 10, 10}, {10, 0, 20, 10}}, {}}};
  for (const auto& s : specs) CHECK(parse_domain(format_domain(s)) == s);
  CHECK(code_of([] { parse_domain("circle R=3"); }) != ErrorCode::Ok);
}

TEST_CASE("degenerate and disconnected domains are rejected") {
  CHECK(code_of([] { rasterize(UShapeDomain{80.0, 40.0, 20.0, 40.0, 0.0}, 1.0); }) == ErrorCode::DegenerateDomain);
  CHECK(code_of([] { rasterize(SquareDomain{0.4}, 1.0); }) == ErrorCode::DegenerateDomain);
  CHECK(code_of([] {
          rasterize(RectUnionDomain{{{0, 0, 10, 10}, {20, 0, 30, 10}}, {}}, 1.0);
        }) == ErrorCode::DisconnectedDomain);
}

TEST_CASE("rectangular boxes") {
  const auto g = rasterize(UShapeDomain{80.0, 40.0, 20.0, 40.0, 4.0}, 1.0);
  const auto d1 = rectangular_box(g, RegionSel::D1);
  REQUIRE(d1);
  CHECK(d1->width() == 40);
  CHECK(d1->height() == 80);
  CHECK_FALSE(rectangular_box(g, RegionSel::All));
  CHECK_FALSE(rectangular_box(g, RegionSel::D2));
  const auto rp = rectangular_box(g, RegionSel::RightPatch);
  REQUIRE(rp);
  CHECK(rp->i0 == 60);
}

TEST_CASE("region names parse") {
  for (RegionSel r : {RegionSel::D1, RegionSel::D2, RegionSel::Corridor, RegionSel::RightPatch, RegionSel::All})
    CHECK(parse_region(to_string(r)) == r);
}
