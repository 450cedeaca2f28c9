#include "s25/decomp.hpp"

#include <algorithm>

namespace s25 {

const char* to_string(RegionKind k) {
    switch (k) {
        case RegionKind::Inner: return "inner";
        case RegionKind::Top: return "top";
        case RegionKind::Bottom: return "bottom";
        case RegionKind::Front: return "front";
        case RegionKind::Back: return "back";
        case RegionKind::Left: return "left";
        case RegionKind::Right: return "right";
    }
    return "?";
}

std::vector<Region> decompose(Extents e, int w) {
    if (w < 0) throw ConfigError("PML width must be non-negative");
    if (2 * w >= std::min({e.nx, e.ny, e.nz}))
        throw ConfigError("PML width " + std::to_string(w) +
                          " leaves no inner region (need 2w < min extent)");
    const int ix = e.nx - 2 * w, iy = e.ny - 2 * w, iz = e.nz - 2 * w;
    return {
        {RegionKind::Inner, {{w, w, w}, {ix, iy, iz}}},
        {RegionKind::Top, {{0, 0, 0}, {e.nx, e.ny, w}}},
        {RegionKind::Bottom, {{0, 0, e.nz - w}, {e.nx, e.ny, w}}},
        {RegionKind::Front, {{0, 0, w}, {e.nx, w, iz}}},
        {RegionKind::Back, {{0, e.ny - w, w}, {e.nx, w, iz}}},
        {RegionKind::Left, {{0, w, w}, {w, iy, iz}}},
        {RegionKind::Right, {{e.nx - w, w, w}, {w, iy, iz}}},
    };
}

namespace {

void check_tile(int d, const char* axis) {
    if (d < 1) throw ConfigError(std::string("tile dimension ") + axis + " must be >= 1");
}

}  // namespace

std::vector<Box> tile3(const Box& region, Tiling3 t) {
    check_tile(t.dx, "Dx");
    check_tile(t.dy, "Dy");
    check_tile(t.dz, "Dz");
    std::vector<Box> tiles;
    if (region.empty()) return tiles;
    const Coord3 d{t.dx, t.dy, t.dz};
    for (int k = 0; k < region.ext[2]; k += d[2])
        for (int j = 0; j < region.ext[1]; j += d[1])
            for (int i = 0; i < region.ext[0]; i += d[0]) {
                Box b;
                b.lo = {region.lo[0] + i, region.lo[1] + j, region.lo[2] + k};
                b.ext = {std::min(d[0], region.ext[0] - i), std::min(d[1], region.ext[1] - j),
                         std::min(d[2], region.ext[2] - k)};
                tiles.push_back(b);
            }
    return tiles;
}

std::vector<Box> tile2(const Box& region, Tiling2 t) {
    check_tile(t.dx, "Dx");
    check_tile(t.dy, "Dy");
    return tile3(region, Tiling3{t.dx, t.dy, std::max(region.ext[2], 1)});
}

std::vector<Coord3> halo_cells(Coord3 d, int r) {
    std::vector<Coord3> cells;
    if (r <= 0) return cells;
    cells.reserve(std::size_t(halo_cell_count(d, r)));
    for (int axis = 0; axis < 3; ++axis) {
        const int a1 = axis == 0 ? 1 : 0;
        const int a2 = axis == 2 ? 1 : 2;
        for (int side = 0; side < 2; ++side)
            for (int layer = 0; layer < r; ++layer) {
                const int c = side == 0 ? -r + layer : d[axis] + layer;
                for (int v = 0; v < d[a2]; ++v)
                    for (int u = 0; u < d[a1]; ++u) {
                        Coord3 p{};
                        p[axis] = c;
                        p[a1] = u;
                        p[a2] = v;
                        cells.push_back(p);
                    }
            }
    }
    return cells;
}

std::optional<HaloMapEntry> eta_halo_map(int zidx, int xidx, int yidx, Coord3 dims) {
    if (zidx >= 6 || zidx < 0) return std::nullopt;

    const bool xzswap = zidx <= 1;
    const bool yzswap = (zidx & 2) == 2;
    const int face_axis = xzswap ? 0 : yzswap ? 1 : 2;
    // Lane ranges: x faces walk (k, j), y faces (i, k), z faces (i, j).
    const int xlim = face_axis == 0 ? dims[2] : dims[0];
    const int ylim = face_axis == 1 ? dims[2] : dims[1];
    if (xidx < 0 || yidx < 0 || xidx >= xlim || yidx >= ylim) return std::nullopt;

    const int n = dims[face_axis];
    const int z = zidx & 1;
    const int sz = z * (n + 1);
    const int gz = z * (n + 1) - 1;

    HaloMapEntry e;
    e.local[0] = xzswap ? sz : xidx + 1;
    e.local[1] = yzswap ? sz : yidx + 1;
    e.local[2] = xzswap ? xidx + 1 : (yzswap ? yidx + 1 : sz);
    e.global[0] = xzswap ? gz : xidx;
    e.global[1] = yzswap ? gz : yidx;
    e.global[2] = xzswap ? xidx : (yzswap ? yidx : gz);
    return e;
}

std::optional<HaloMapEntry> eta_halo_map(int zidx, int xidx, int yidx, int nt) {
    return eta_halo_map(zidx, xidx, yidx, Coord3{nt, nt, nt});
}

std::optional<HaloMapEntry> eta_halo_map_3pass(int axis, int side, int u, int v, Coord3 dims) {
    const int a1 = axis == 0 ? 1 : 0;
    const int a2 = axis == 2 ? 1 : 2;
    if (u < 0 || v < 0 || u >= dims[a1] || v >= dims[a2]) return std::nullopt;
    HaloMapEntry e;
    e.global[axis] = side == 0 ? -1 : dims[axis];
    e.global[a1] = u;
    e.global[a2] = v;
    for (int a = 0; a < 3; ++a) e.local[a] = e.global[a] + 1;
    return e;
}

HaloMapEntry eta_halo_map_3pass(int axis, int side, int u, int v, int nt) {
    auto e = eta_halo_map_3pass(axis, side, u, v, Coord3{nt, nt, nt});
    if (!e) throw ConfigError("eta_halo_map_3pass: lane outside the tile face");
    return *e;
}

Coord3 u_halo_lane(int axis, int lane, int a, int b, Coord3 dims, int r) {
    const int a1 = axis == 0 ? 1 : 0;
    const int a2 = axis == 2 ? 1 : 2;
    Coord3 p{};
    p[axis] = lane < r ? -r + lane : dims[axis] + lane - r;
    p[a1] = a;
    p[a2] = b;
    return p;
}

}  // namespace s25
