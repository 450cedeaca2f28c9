#pragma once
// Per-tile bodies of every kernel variant, templated on the access policy
// (Plain or Counted) and on whether the tile belongs to a PML region.

#include <algorithm>
#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "s25/counters.hpp"
#include "s25/decomp.hpp"
#include "s25/kernels.hpp"
#include "s25/physics.hpp"

namespace s25 {

template <class T>
struct Scratch {
    std::vector<T> buf;
};

namespace detail {

/// Raw views of the arrays one step reads and writes.
template <class T>
struct Ctx {
    const T* uc;   // u^n
    T* out;        // u^{n-1} on entry, u^{n+1} on exit
    const T* vel;
    const T* eta;
    std::ptrdiff_t sy, sz;
    int pad;
    Weights<T> w;
    StepConstants<T> k;

    std::ptrdiff_t at(int i, int j, int kk) const {
        return std::ptrdiff_t(kk + pad) * sz + std::ptrdiff_t(j + pad) * sy + (i + pad);
    }
};

/// Reads u^{n-1} and V at `o`, applies the inner or PML update and stores
/// u^{n+1}. `u1` and `eta` are only evaluated for PML cells.
template <class P, bool Pml, class T, class U1, class Eta>
inline void finish(const Ctx<T>& c, std::ptrdiff_t o, typename P::real uc, typename P::real lap,
                   U1&& u1, Eta&& eta) {
    using R = typename P::real;
    const R up = P::load(c.out + o, Array::UPrev);
    const R v = P::load(c.vel + o, Array::Velocity);
    R r;
    if constexpr (Pml)
        r = pml_update(uc, up, v, lap, eta(), u1(), c.k);
    else
        r = inner_update(uc, up, v, lap, c.k);
    P::store(c.out + o, r, Array::UNext);
}

template <class P, class T>
inline auto global_eta(const Ctx<T>& c, std::ptrdiff_t o) {
    return [&c, o] {
        return gather_eta<typename P::real>([&](int dx, int dy, int dz) {
            return P::load(c.eta + o + dx + dy * c.sy + dz * c.sz, Array::Eta);
        });
    };
}

template <class P, class T>
inline Star<typename P::real> global_star(const Ctx<T>& c, std::ptrdiff_t o) {
    return gather_star<typename P::real>([&](int dx, int dy, int dz) {
        return P::load(c.uc + o + dx + dy * c.sy + dz * c.sz, Array::UCur);
    });
}

// --- Reference: one sweep, branch per cell ------------------------------------

template <class P, class T>
void conditional_sweep(const Ctx<T>& c, Extents e, int w) {
    for (int k = 0; k < e.nz; ++k)
        for (int j = 0; j < e.ny; ++j)
            for (int i = 0; i < e.nx; ++i) {
                const auto o = c.at(i, j, k);
                const auto s = global_star<P>(c, o);
                const auto lap = laplacian(s, c.w);
                const auto u1 = [&] { return unit_neighbours(s); };
                if (in_pml(e, w, i, j, k))
                    finish<P, true>(c, o, s.c, lap, u1, global_eta<P>(c, o));
                else
                    finish<P, false>(c, o, s.c, lap, u1, global_eta<P>(c, o));
            }
    P::cells(std::uint64_t(e.volume()));
}

// --- Global3d -------------------------------------------------------------------

template <class P, bool Pml, class T>
void global3d_tile(const Ctx<T>& c, const Box& b) {
    for (int k = b.lo[2]; k < b.lo[2] + b.ext[2]; ++k)
        for (int j = b.lo[1]; j < b.lo[1] + b.ext[1]; ++j) {
            const auto row = c.at(b.lo[0], j, k);
            for (int i = 0; i < b.ext[0]; ++i) {
                const auto o = row + i;
                const auto s = global_star<P>(c, o);
                finish<P, Pml>(c, o, s.c, laplacian(s, c.w), [&] { return unit_neighbours(s); },
                               global_eta<P>(c, o));
            }
        }
    P::cells(std::uint64_t(b.volume()));
}

// --- Cached3dU: u tile plus face halo staged in scratch ---------------------------

template <class P, bool Pml, class T>
void cached3d_tile(const Ctx<T>& c, const Box& b, Scratch<T>& s) {
    constexpr int R = kRadius;
    const Coord3 dims = b.ext;
    const std::ptrdiff_t bx = dims[0] + 2 * R, by = dims[1] + 2 * R;
    T* buf = s.buf.data();
    const auto li = [&](int i, int j, int k) {
        return (std::ptrdiff_t(k + R) * by + (j + R)) * bx + (i + R);
    };
    const auto fetch = [&](int i, int j, int k) {
        P::store(buf + li(i, j, k),
                 P::load(c.uc + c.at(b.lo[0] + i, b.lo[1] + j, b.lo[2] + k), Array::UCur),
                 Array::Scratch);
    };

    for (int k = 0; k < dims[2]; ++k)
        for (int j = 0; j < dims[1]; ++j)
            for (int i = 0; i < dims[0]; ++i) fetch(i, j, k);
    for (int axis = 0; axis < 3; ++axis) {
        const int a1 = axis == 0 ? 1 : 0;
        const int a2 = axis == 2 ? 1 : 2;
        for (int lane = 0; lane < 2 * R; ++lane)
            for (int v = 0; v < dims[a2]; ++v)
                for (int u = 0; u < dims[a1]; ++u) {
                    const Coord3 p = u_halo_lane(axis, lane, u, v, dims, R);
                    fetch(p[0], p[1], p[2]);
                }
    }

    const std::ptrdiff_t sby = bx, sbz = bx * by;
    for (int k = 0; k < dims[2]; ++k)
        for (int j = 0; j < dims[1]; ++j)
            for (int i = 0; i < dims[0]; ++i) {
                const T* q = buf + li(i, j, k);
                const auto st = gather_star<typename P::real>([&](int dx, int dy, int dz) {
                    return P::load(q + dx + dy * sby + dz * sbz, Array::Scratch);
                });
                const auto o = c.at(b.lo[0] + i, b.lo[1] + j, b.lo[2] + k);
                finish<P, Pml>(c, o, st.c, laplacian(st, c.w), [&] { return unit_neighbours(st); },
                               global_eta<P>(c, o));
            }
    P::cells(std::uint64_t(b.volume()));
}

// --- PmlEta1 / PmlEta3: eta tile plus one-cell fringe staged in scratch -----------

template <class P, bool OnePass, class T>
void pml_eta_tile(const Ctx<T>& c, const Box& b, Scratch<T>& s) {
    const Coord3 dims = b.ext;
    const std::ptrdiff_t bx = dims[0] + 2, by = dims[1] + 2;
    T* eb = s.buf.data();
    // Local coordinates of the fringe box run from 0 to n + 1.
    const auto li = [&](int li0, int lj, int lk) { return (std::ptrdiff_t(lk) * by + lj) * bx + li0; };
    const auto copy = [&](const HaloMapEntry& e) {
        const auto o = c.at(b.lo[0] + e.global[0], b.lo[1] + e.global[1], b.lo[2] + e.global[2]);
        P::store(eb + li(e.local[0], e.local[1], e.local[2]), P::load(c.eta + o, Array::Eta),
                 Array::Scratch);
    };

    for (int k = 0; k < dims[2]; ++k)
        for (int j = 0; j < dims[1]; ++j)
            for (int i = 0; i < dims[0]; ++i) copy({{i, j, k}, {i + 1, j + 1, k + 1}});

    if constexpr (OnePass) {
        const int lanes = std::max({dims[0], dims[1], dims[2]});
        for (int zidx = 0; zidx < 6; ++zidx)
            for (int y = 0; y < lanes; ++y)
                for (int x = 0; x < lanes; ++x)
                    if (const auto e = eta_halo_map(zidx, x, y, dims)) copy(*e);
    } else {
        for (int axis = 0; axis < 3; ++axis) {
            const int a1 = axis == 0 ? 1 : 0;
            const int a2 = axis == 2 ? 1 : 2;
            for (int side = 0; side < 2; ++side)
                for (int v = 0; v < dims[a2]; ++v)
                    for (int u = 0; u < dims[a1]; ++u)
                        if (const auto e = eta_halo_map_3pass(axis, side, u, v, dims)) copy(*e);
        }
    }

    for (int k = 0; k < dims[2]; ++k)
        for (int j = 0; j < dims[1]; ++j)
            for (int i = 0; i < dims[0]; ++i) {
                const auto o = c.at(b.lo[0] + i, b.lo[1] + j, b.lo[2] + k);
                const auto st = global_star<P>(c, o);
                const T* q = eb + li(i + 1, j + 1, k + 1);
                const auto eta = [&] {
                    return gather_eta<typename P::real>([&](int dx, int dy, int dz) {
                        return P::load(q + dx + dy * bx + dz * bx * by, Array::Scratch);
                    });
                };
                finish<P, true>(c, o, st.c, laplacian(st, c.w), [&] { return unit_neighbours(st); },
                                eta);
            }
    P::cells(std::uint64_t(b.volume()));
}

// --- Semi: forward/backward split of the z contributions ----------------------------
//
// Each lane holds a window w[q] = u(k + q), q = 0..R, loaded once per plane.
// Forward phase for plane k + R: center, x pairs, y pairs and the lower z
// half, parked in a ring of R + 1 partial planes. Backward phase for plane k:
// partial(k) plus the upper z half, then the time update.

template <class P, bool Pml, class T>
void semi_tile(const Ctx<T>& c, const Box& b, Scratch<T>& s) {
    using Real = typename P::real;
    constexpr int R = kRadius;
    const int z0 = b.lo[2], z1 = b.lo[2] + b.ext[2];
    const std::ptrdiff_t plane = std::ptrdiff_t(b.ext[0]) * b.ext[1];
    T* ring = s.buf.data();
    const auto part = [&](int k) { return ring + std::ptrdiff_t((k - z0) % (R + 1)) * plane; };

    // Plane k finalizes output k (backward) and opens output k + R (forward).
    // The R planes before the tile only open, the last R planes only finalize;
    // the semi-axis counters cover the planes that do both.
    for (int k = z0 - R; k < z1; ++k) {
        const bool back = k >= z0;
        const bool ahead = k + R < z1;
        const bool steady = back && ahead;
        T* fwd = ahead ? part(k + R) : nullptr;
        T* bwd = back ? part(k) : nullptr;
        for (int j = 0; j < b.ext[1]; ++j)
            for (int i = 0; i < b.ext[0]; ++i) {
                const std::ptrdiff_t lane = std::ptrdiff_t(j) * b.ext[0] + i;
                const auto o = c.at(b.lo[0] + i, b.lo[1] + j, k);
                std::array<Real, R + 1> w;
                for (int q = 0; q <= R; ++q) {
                    w[q] = P::load(c.uc + o + q * c.sz, Array::UCur);
                    if (steady) P::semi_load();
                }

                if (back) {
                    Real acc = P::load(bwd + lane, Array::Scratch);
                    for (int m = 1; m <= R; ++m) acc = acc + Real(c.w.z[m - 1]) * w[m];
                    const auto u1 = [&] {
                        return std::array<Real, 6>{P::load(c.uc + o + 1, Array::UCur),
                                                   P::load(c.uc + o - 1, Array::UCur),
                                                   P::load(c.uc + o + c.sy, Array::UCur),
                                                   P::load(c.uc + o - c.sy, Array::UCur), w[1],
                                                   P::load(c.uc + o - c.sz, Array::UCur)};
                    };
                    finish<P, Pml>(c, o, w[0], acc, u1, global_eta<P>(c, o));
                    if (steady) P::semi_store();
                }
                if (!ahead) continue;

                const auto of = o + R * c.sz;
                Real acc = Real(c.w.center) * w[R];
                for (int m = 1; m <= R; ++m)
                    acc = acc + Real(c.w.x[m - 1]) * (P::load(c.uc + of + m, Array::UCur) +
                                                      P::load(c.uc + of - m, Array::UCur));
                for (int m = 1; m <= R; ++m)
                    acc = acc + Real(c.w.y[m - 1]) * (P::load(c.uc + of + m * c.sy, Array::UCur) +
                                                      P::load(c.uc + of - m * c.sy, Array::UCur));
                for (int m = 1; m <= R; ++m) acc = acc + Real(c.w.z[m - 1]) * w[R - m];
                P::store(fwd + lane, acc, Array::Scratch);
                if (steady) P::semi_store();
            }
    }
    P::cells(std::uint64_t(b.volume()));
}

// --- Streaming along z over 2D columns ----------------------------------------------

/// Plane of a column with its x/y halo (cross shape, corners unused).
template <class T>
struct CrossPlane {
    std::ptrdiff_t px;  // ex + 2R
    std::ptrdiff_t index(int i, int j) const {
        return std::ptrdiff_t(j + kRadius) * px + (i + kRadius);
    }
};

/// Fills the cross plane for level z. `lateral` false fetches only the
/// centre footprint (planes that serve purely as z neighbours). A non-null
/// `centre` supplies the footprint from the lane window instead of u.
template <class P, class T>
void load_cross(const Ctx<T>& c, const Box& b, int z, T* dst, const CrossPlane<T>& cp,
                bool lateral = true, const T* centre = nullptr) {
    constexpr int R = kRadius;
    for (int j = -R; j < b.ext[1] + R; ++j) {
        const bool core = j >= 0 && j < b.ext[1];
        if (!core && !lateral) continue;
        const auto row = c.at(b.lo[0], b.lo[1] + j, z);
        T* d = dst + cp.index(0, j);
        const auto fetch = [&](int i) { P::store(d + i, P::load(c.uc + row + i, Array::UCur), Array::Scratch); };
        if (!core) {
            for (int i = 0; i < b.ext[0]; ++i) fetch(i);
            continue;
        }
        if (lateral) {
            for (int i = -R; i < 0; ++i) fetch(i);
            for (int i = b.ext[0]; i < b.ext[0] + R; ++i) fetch(i);
        }
        if (centre) {
            const T* src = centre + std::ptrdiff_t(j) * b.ext[0];
            for (int i = 0; i < b.ext[0]; ++i) P::store(d + i, P::load(src + i, Array::Scratch), Array::Scratch);
        } else {
            for (int i = 0; i < b.ext[0]; ++i) fetch(i);
        }
    }
}

/// Star of lane (i, j): x/y neighbours and center from the cross plane,
/// z neighbours through `zval(dz, i, j)`.
template <class P, bool Pml, class T, class Z>
inline void stream_plane(const Ctx<T>& c, const Box& b, int z, const T* cross,
                         const CrossPlane<T>& cp, Z&& zval) {
    for (int j = 0; j < b.ext[1]; ++j) {
        const auto row = c.at(b.lo[0], b.lo[1] + j, z);
        for (int i = 0; i < b.ext[0]; ++i) {
            const T* q = cross + cp.index(i, j);
            const auto st = gather_star<typename P::real>([&](int dx, int dy, int dz) {
                if (dz == 0) return P::load(q + dx + dy * cp.px, Array::Scratch);
                return zval(dz, i, j);
            });
            const auto o = row + i;
            finish<P, Pml>(c, o, st.c, laplacian(st, c.w), [&] { return unit_neighbours(st); },
                           global_eta<P>(c, o));
        }
    }
}

/// StreamPlanes: ring of 2R + 1 cross planes; plane z0 + p sits in slot
/// (p + R) mod (2R + 1).
template <class P, bool Pml, class T>
void stream_planes_column(const Ctx<T>& c, const Box& b, Scratch<T>& s) {
    constexpr int R = kRadius, N = 2 * R + 1;
    const CrossPlane<T> cp{b.ext[0] + 2 * R};
    const std::ptrdiff_t psz = cp.px * (b.ext[1] + 2 * R);
    T* ring = s.buf.data();
    const int z0 = b.lo[2];
    for (int p = -R; p < R; ++p) load_cross<P>(c, b, z0 + p, ring + (p + R) * psz, cp, p >= 0 && p < b.ext[2]);
    for (int zz = 0; zz < b.ext[2]; ++zz) {
        load_cross<P>(c, b, z0 + zz + R, ring + slot(zz, R) * psz, cp, zz + R < b.ext[2]);
        std::array<const T*, N> pl;
        for (int d = -R; d <= R; ++d) pl[d + R] = ring + ((zz + d + R) % N) * psz;
        stream_plane<P, Pml>(c, b, z0 + zz, pl[R], cp, [&](int dz, int i, int j) {
            return P::load(pl[R + dz] + cp.index(i, j), Array::Scratch);
        });
    }
    P::cells(std::uint64_t(b.volume()));
}

/// Window row layout shared by the two per-lane variants: 2R + 1 rows of
/// ex * ey values followed by one cross plane for the current z.
template <class T>
struct LaneWindow {
    T* rows;
    T* cross;
    std::ptrdiff_t plane;
    CrossPlane<T> cp;

    LaneWindow(Scratch<T>& s, const Box& b)
        : rows(s.buf.data()),
          plane(std::ptrdiff_t(b.ext[0]) * b.ext[1]),
          cp{b.ext[0] + 2 * kRadius} {
        cross = rows + (2 * kRadius + 1) * plane;
    }
    T* row(int r) const { return rows + r * plane; }
};

template <class P, class T>
void load_lanes(const Ctx<T>& c, const Box& b, int z, T* dst) {
    for (int j = 0; j < b.ext[1]; ++j) {
        const auto g = c.at(b.lo[0], b.lo[1] + j, z);
        T* d = dst + std::ptrdiff_t(j) * b.ext[0];
        for (int i = 0; i < b.ext[0]; ++i) P::store(d + i, P::load(c.uc + g + i, Array::UCur), Array::Scratch);
    }
}

/// StreamShift: every lane keeps u(z - 4) .. u(z + 4) in named rows; each z
/// step copies every row one position back and loads the new front.
template <class P, bool Pml, class T>
void stream_shift_column(const Ctx<T>& c, const Box& b, Scratch<T>& s) {
    static_assert(kRadius == 4, "named window rows assume radius 4");
    constexpr int R = kRadius;
    LaneWindow<T> lw(s, b);
    T* behind4 = lw.row(0);
    T* behind3 = lw.row(1);
    T* behind2 = lw.row(2);
    T* behind1 = lw.row(3);
    T* current = lw.row(4);
    T* front1 = lw.row(5);
    T* front2 = lw.row(6);
    T* front3 = lw.row(7);
    T* front4 = lw.row(8);
    const int z0 = b.lo[2];

    // Rows 1..2R hold the planes the first shift moves into 0..2R-1.
    for (int r = 1; r <= 2 * R; ++r) load_lanes<P>(c, b, z0 + r - 1 - R, lw.row(r));

    const auto mv = [](T* dst, const T* src, std::ptrdiff_t l) {
        P::store(dst + l, P::load(src + l, Array::Scratch), Array::Scratch);
    };
    for (int zz = 0; zz < b.ext[2]; ++zz) {
        const int z = z0 + zz;
        for (std::ptrdiff_t l = 0; l < lw.plane; ++l) {
            mv(behind4, behind3, l);
            mv(behind3, behind2, l);
            mv(behind2, behind1, l);
            mv(behind1, current, l);
            mv(current, front1, l);
            mv(front1, front2, l);
            mv(front2, front3, l);
            mv(front3, front4, l);
        }
        load_lanes<P>(c, b, z + R, front4);
        load_cross<P>(c, b, z, lw.cross, lw.cp, true, lw.row(R));
        stream_plane<P, Pml>(c, b, z, lw.cross, lw.cp, [&](int dz, int i, int j) {
            return P::load(lw.row(R + dz) + std::ptrdiff_t(j) * b.ext[0] + i, Array::Scratch);
        });
    }
    P::cells(std::uint64_t(b.volume()));
}

/// StreamFixed: window rows never move. The z loop is unrolled 2R + 1 times
/// so that each unrolled body binds offset d to row (phase + R + d) mod
/// (2R + 1) as a compile-time constant.
template <class P, bool Pml, class T>
void stream_fixed_column(const Ctx<T>& c, const Box& b, Scratch<T>& s) {
    constexpr int R = kRadius, N = 2 * R + 1;
    LaneWindow<T> lw(s, b);
    const int z0 = b.lo[2], nz = b.ext[2];
    for (int p = -R; p < R; ++p) load_lanes<P>(c, b, z0 + p, lw.row(p + R));

    const auto body = [&]<int Phase>(int zz) {
        const int z = z0 + zz;
        load_lanes<P>(c, b, z + R, lw.row(slot(Phase, R)));
        load_cross<P>(c, b, z, lw.cross, lw.cp, true, lw.row((Phase + R) % N));
        stream_plane<P, Pml>(c, b, z, lw.cross, lw.cp, [&](int dz, int i, int j) {
            // dz is a small constant after inlining gather_star's loops.
            return P::load(lw.row((Phase + R + dz + N) % N) + std::ptrdiff_t(j) * b.ext[0] + i,
                           Array::Scratch);
        });
    };
    for (int zz = 0; zz < nz; zz += N) {
        [&]<int... I>(std::integer_sequence<int, I...>) {
            (void)((zz + I < nz ? (body.template operator()<I>(zz + I), true) : false) && ...);
        }(std::make_integer_sequence<int, N>{});
    }
    P::cells(std::uint64_t(b.volume()));
}

}  // namespace detail
}  // namespace s25
