#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "s25/grid.hpp"

namespace s25 {

using Coord3 = std::array<int, 3>;

/// Axis-aligned box of cells: lo .. lo + ext (exclusive), per axis.
struct Box {
    Coord3 lo{0, 0, 0};
    Coord3 ext{0, 0, 0};

    std::int64_t volume() const {
        return std::int64_t(ext[0]) * std::int64_t(ext[1]) * std::int64_t(ext[2]);
    }
    bool empty() const { return volume() == 0; }
    bool contains(int i, int j, int k) const {
        return i >= lo[0] && i < lo[0] + ext[0] && j >= lo[1] && j < lo[1] + ext[1] &&
               k >= lo[2] && k < lo[2] + ext[2];
    }
    friend bool operator==(const Box&, const Box&) = default;
};

/// Top/Bottom split z, Front/Back split y, Left/Right split x. Low-index side
/// first in each pair.
enum class RegionKind : int { Inner, Top, Bottom, Front, Back, Left, Right };
inline constexpr int kRegionCount = 7;
const char* to_string(RegionKind k);

struct Region {
    RegionKind kind = RegionKind::Inner;
    Box box;

    bool is_pml() const { return kind != RegionKind::Inner; }
};

/// Inner region plus six PML walls, in RegionKind order. Pairwise disjoint,
/// union is the whole extended domain.
std::vector<Region> decompose(Extents e, int pml_width);

/// True when (i, j, k) lies outside the inner box [w, n - w) on some axis.
inline bool in_pml(Extents e, int w, int i, int j, int k) {
    return i < w || i >= e.nx - w || j < w || j >= e.ny - w || k < w || k >= e.nz - w;
}

struct Tiling3 {
    int dx = 8, dy = 8, dz = 8;
    int operator[](int a) const { return a == 0 ? dx : a == 1 ? dy : dz; }
    friend bool operator==(const Tiling3&, const Tiling3&) = default;
};

struct Tiling2 {
    int dx = 16, dy = 16;
    friend bool operator==(const Tiling2&, const Tiling2&) = default;
};

/// Splits a region into ceil(ex/Dx)*ceil(ey/Dy)*ceil(ez/Dz) tiles, clipping
/// the last tile on each axis. Order: x fastest, then y, then z.
std::vector<Box> tile3(const Box& region, Tiling3 t);

/// As tile3, with every column spanning the full z range of the region.
std::vector<Box> tile2(const Box& region, Tiling2 t);

/// Cells a face-star stencil of radius r reads outside a tile of the given
/// dimensions, relative to the tile origin: six face slabs of thickness r.
std::vector<Coord3> halo_cells(Coord3 tile_dims, int r);

inline std::int64_t halo_cell_count(Coord3 d, int r) {
    return 2LL * r *
           (std::int64_t(d[0]) * d[1] + std::int64_t(d[0]) * d[2] + std::int64_t(d[1]) * d[2]);
}

/// Global coordinates relative to the tile origin and the matching position
/// in a tile-local scratch box that has a one-cell fringe.
struct HaloMapEntry {
    Coord3 global{};
    Coord3 local{};
    friend bool operator==(const HaloMapEntry&, const HaloMapEntry&) = default;
};

/// One-conditional eta halo fetch. Lane plane `zidx` in [0, 6) selects a
/// face: 0/1 low/high x, 2/3 low/high y, 4/5 low/high z; (xidx, yidx)
/// walk that face. zidx >= 6 yields nothing.
///
///   z      = zidx & 1
///   sz     = z * (n + 1)        (9 for n = 8)
///   gz     = z * (n + 1) - 1
///   xzswap = zidx <= 1
///   yzswap = (zidx & 2) == 2
///   si = xzswap ? sz : xidx + 1     gi = xzswap ? gz : xidx
///   sj = yzswap ? sz : yidx + 1     gj = yzswap ? gz : yidx
///   sk = xzswap ? xidx + 1 : yzswap ? yidx + 1 : sz
///   gk = xzswap ? xidx     : yzswap ? yidx     : gz
///
/// For x faces the lanes cover (k, j) = (xidx, yidx), for y faces
/// (i, k) = (xidx, yidx), for z faces (i, j) = (xidx, yidx).
std::optional<HaloMapEntry> eta_halo_map(int zidx, int xidx, int yidx, int nt);

/// Same mapping for a clipped, non-cubic tile; `n` of the swapped axis is
/// taken from `dims`. Lanes outside the face return nothing.
std::optional<HaloMapEntry> eta_halo_map(int zidx, int xidx, int yidx, Coord3 dims);

/// Three-conditional variant: one pass per axis, `side` 0 = low, 1 = high,
/// (u, v) walk the two remaining axes in increasing axis order.
HaloMapEntry eta_halo_map_3pass(int axis, int side, int u, int v, int nt);
std::optional<HaloMapEntry> eta_halo_map_3pass(int axis, int side, int u, int v, Coord3 dims);

/// Lane-balanced radius-r halo assignment for one axis: lane l in [0, 2r)
/// fetches offset -r + l on the low side (l < r) or n + l - r on the high
/// side; (a, b) walk the remaining axes in increasing axis order. Returns
/// the coordinate relative to the tile origin.
Coord3 u_halo_lane(int axis, int lane, int a, int b, Coord3 dims, int r);

}  // namespace s25
