#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "s25/decomp.hpp"
#include "s25/grid.hpp"

namespace s25 {

/// Stencil radius of the 25-point operator (8th order in space).
inline constexpr int kRadius = 4;
/// Halo width of the eta damping field, read through a 7-point star.
inline constexpr int kEtaRadius = 1;

/// Weights of the 25-point Laplacian, in 1/length^2.
struct StencilCoeffs {
    double c_xyz = 0;
    std::array<double, kRadius> c_x{};  // c_x[m - 1] weights u(i +- m, j, k)
    std::array<double, kRadius> c_y{};
    std::array<double, kRadius> c_z{};
};

/// Standard 8th-order central second-derivative weights scaled by 1/h^2 on
/// every axis. Throws ConfigError for h <= 0.
StencilCoeffs make_coeffs_order8(double h);

/// Per-axis 1D weights for unit spacing: center, then offsets 1..4.
inline constexpr double kOrder8Center = -205.0 / 72.0;
inline constexpr std::array<double, kRadius> kOrder8Offsets = {8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0,
                                                               -1.0 / 560.0};

/// c_xyz + 2 * sum of all axis weights; zero for a consistent operator.
double consistency_residual(const StencilCoeffs& c);

/// Extended-domain geometry.
struct Domain {
    Extents extents{};
    int pml_width = 0;
    double h = 10.0;  // grid spacing, metres
};

struct TimeParams {
    double dt = 0;
    int steps = 0;
};

struct SourceTerm {
    Coord3 location{};
    std::vector<double> wavelet;  // one amplitude per time step
};

template <class T>
struct Medium {
    Grid3<T> velocity;  // m/s
    Grid3<T> eta;       // damping, 1/s; zero in the inner region
};

/// u^{n-1} and u^n. A step writes u^{n+1} over `prev`, then roles swap.
template <class T>
struct Wavefield {
    Grid3<T> prev;
    Grid3<T> cur;

    void rotate() { std::swap(prev, cur); }
};

template <class T>
Wavefield<T> make_wavefield(Extents e) {
    return {Grid3<T>(e, kRadius), Grid3<T>(e, kRadius)};
}

// --- per-cell arithmetic ----------------------------------------------------
//
// Every kernel variant evaluates these exact expression trees, so results
// agree bit-for-bit unless a variant deliberately regroups the sum (Semi).

/// Coefficients converted to the working precision.
template <class T>
struct Weights {
    T center{};
    std::array<T, kRadius> x{}, y{}, z{};

    explicit Weights(const StencilCoeffs& c) : center(T(c.c_xyz)) {
        for (int m = 0; m < kRadius; ++m) {
            x[m] = T(c.c_x[m]);
            y[m] = T(c.c_y[m]);
            z[m] = T(c.c_z[m]);
        }
    }
};

/// Loop-invariant factors of the time update.
template <class T>
struct StepConstants {
    T dt{};
    T dt2{};     // dt^2
    T grad_scale{};  // dt / (4 h^2): two central differences, times dt for units of 1/length^2

    StepConstants(double dt_, double h)
        : dt(T(dt_)), dt2(T(dt_ * dt_)), grad_scale(T(dt_ / (4.0 * h * h))) {}
};

/// The 25 values a cell's Laplacian reads. p[m-1] is offset +m, n[m-1] is -m.
template <class Real>
struct Star {
    Real c{};
    std::array<Real, kRadius> xp{}, xn{}, yp{}, yn{}, zp{}, zn{};
};

/// Gathers a star through `load(dx, dy, dz)`; exactly 25 calls.
template <class Real, class Load>
Star<Real> gather_star(Load&& load) {
    Star<Real> s;
    s.c = load(0, 0, 0);
    for (int m = 1; m <= kRadius; ++m) {
        s.xp[m - 1] = load(m, 0, 0);
        s.xn[m - 1] = load(-m, 0, 0);
    }
    for (int m = 1; m <= kRadius; ++m) {
        s.yp[m - 1] = load(0, m, 0);
        s.yn[m - 1] = load(0, -m, 0);
    }
    for (int m = 1; m <= kRadius; ++m) {
        s.zp[m - 1] = load(0, 0, m);
        s.zn[m - 1] = load(0, 0, -m);
    }
    return s;
}

/// center, then x, y, z for m = 1..4, each as w * (u+ + u-). 37 FLOPs.
template <class Real, class T>
Real laplacian(const Star<Real>& s, const Weights<T>& w) {
    Real acc = Real(w.center) * s.c;
    for (int m = 0; m < kRadius; ++m) acc = acc + Real(w.x[m]) * (s.xp[m] + s.xn[m]);
    for (int m = 0; m < kRadius; ++m) acc = acc + Real(w.y[m]) * (s.yp[m] + s.yn[m]);
    for (int m = 0; m < kRadius; ++m) acc = acc + Real(w.z[m]) * (s.zp[m] + s.zn[m]);
    return acc;
}

/// 2 u^n - u^{n-1} + dt^2 V^2 lap. 6 FLOPs.
template <class Real, class T>
Real inner_update(Real uc, Real up, Real v, Real lap, const StepConstants<T>& k) {
    return Real(2) * uc - up + Real(k.dt2) * (v * v) * lap;
}

/// Damped update inside the PML:
///   [2 u^n - (1 - eta dt) u^{n-1} + dt^2 V^2 (lap + dt grad eta . grad u)] / (1 + eta dt)
/// with 2-point central differences for both gradients. eta is a rate, so
/// the gradient product carries a factor dt to match the Laplacian's units;
/// without it the term outgrows the CFL bound for realistic eta_max. `eta` is the
/// 7-point star (center, +x, -x, +y, -y, +z, -z), `u1` the unit-offset u
/// neighbours in the same face order. 24 FLOPs.
template <class Real, class T>
Real pml_update(Real uc, Real up, Real v, Real lap, const std::array<Real, 7>& eta,
                const std::array<Real, 6>& u1, const StepConstants<T>& k) {
    const Real ed = eta[0] * Real(k.dt);
    const Real g = ((eta[1] - eta[2]) * (u1[0] - u1[1]) + (eta[3] - eta[4]) * (u1[2] - u1[3]) +
                    (eta[5] - eta[6]) * (u1[4] - u1[5])) *
                   Real(k.grad_scale);
    const Real rhs = Real(2) * uc - (Real(1) - ed) * up + Real(k.dt2) * (v * v) * (lap + g);
    return rhs / (Real(1) + ed);
}

/// Unit-offset u neighbours in the order pml_update expects:
/// +x, -x, +y, -y, +z, -z.
template <class Real>
std::array<Real, 6> unit_neighbours(const Star<Real>& s) {
    return {s.xp[0], s.xn[0], s.yp[0], s.yn[0], s.zp[0], s.zn[0]};
}

/// Eta star through `load(dx, dy, dz)`: center, +x, -x, +y, -y, +z, -z.
template <class Real, class Load>
std::array<Real, 7> gather_eta(Load&& load) {
    return {load(0, 0, 0),  load(1, 0, 0),  load(-1, 0, 0), load(0, 1, 0),
            load(0, -1, 0), load(0, 0, 1),  load(0, 0, -1)};
}

/// u + dt^2 V^2 w. 4 FLOPs.
template <class Real, class T>
Real source_update(Real u, Real v, Real w, const StepConstants<T>& k) {
    return u + Real(k.dt2) * (v * v) * w;
}

inline constexpr int kLaplacianFlops = 1 + 3 * 3 * kRadius;  // 37
inline constexpr int kInnerUpdateFlops = 6;
inline constexpr int kPmlUpdateFlops = 24;
inline constexpr int kSourceFlops = 4;

// --- region operations --------------------------------------------------------

/// One Laplacian evaluation at (i, j, k); requires pad >= 4.
template <class T>
T laplacian25(const Grid3<T>& u, const StencilCoeffs& c, int i, int j, int k);

/// Writes u^{n+1} into u_prev over `cells`, which must lie in the inner region.
template <class T>
void step_inner(Grid3<T>& u_prev, const Grid3<T>& u_cur, const Medium<T>& m,
                const StencilCoeffs& c, double dt, double h, const Box& cells);

/// Damped PML update over `cells`; eta is read through a 7-point star.
template <class T>
void step_pml(Grid3<T>& u_prev, const Grid3<T>& u_cur, const Medium<T>& m,
              const StencilCoeffs& c, double dt, double h, const Box& cells);

/// u(loc) += dt^2 V(loc)^2 wavelet[n].
template <class T>
void inject_source(Grid3<T>& u, const SourceTerm& src, const Medium<T>& m, double dt, int n);

/// Ricker wavelet (1 - 2 pi^2 f^2 (t - t0)^2) exp(-pi^2 f^2 (t - t0)^2) at
/// t = n dt, n in [0, steps).
std::vector<double> ricker(double f_peak, double t0, double dt, int steps);

/// 0.4 h / Vmax.
double default_dt(double h, double v_max);

/// Peak frequency giving 10 grid points per wavelength at v_min.
double default_f_peak(double h, double v_min);

/// Largest stable leapfrog dt for the operator: 2 / (v_max sqrt(lambda)),
/// where lambda = |c_xyz| + 2 sum |c_m| bounds the spectral radius of the
/// discrete Laplacian. About 0.45 h / v_max for the 8th-order weights.
double cfl_dt_limit(const StencilCoeffs& c, double v_max);

// --- media --------------------------------------------------------------------

/// Quadratic ramp eta_max (d / w)^2 where d in [1, w] is the Chebyshev
/// distance (in cells) from the cell to the inner region; zero inside.
template <class T>
Grid3<T> make_eta(const Domain& d, double eta_max);

template <class T>
Medium<T> homogeneous_medium(const Domain& d, double velocity, double eta_max);

/// Per-cell velocity drawn uniformly from [v_min, v_max] with a portable
/// splitmix64 stream, so a seed means the same medium on every platform.
template <class T>
Medium<T> random_medium(const Domain& d, double v_min, double v_max, double eta_max,
                        std::uint64_t seed);

/// Layered model: layers[i] = (first z index, velocity), ascending z.
template <class T>
Medium<T> layered_medium(const Domain& d, const std::vector<std::pair<int, double>>& layers,
                         double eta_max);

/// splitmix64 step; returns a uniform double in [0, 1).
double next_uniform(std::uint64_t& state);

// --- reference propagator -------------------------------------------------------

/// One time step as a single sweep over the extended domain, branching per
/// cell between the inner and PML updates. Writes u^{n+1} into wf.prev.
template <class T>
void reference_step(Wavefield<T>& wf, const Medium<T>& m, const StencilCoeffs& c, double dt,
                    const Domain& d);

template <class T>
struct PropagateOptions {
    int check_interval = 10;  // steps between finiteness checks; 0 disables
    /// Called after each completed step with the 1-based step number and u^n.
    std::function<void(int, const Grid3<T>&)> on_step;
};

/// Runs the time loop with reference_step and source injection after each
/// stencil update. Returns the final (prev, cur) pair. Throws
/// InstabilityError on a non-finite value.
template <class T>
Wavefield<T> reference_propagate(const Domain& d, const Medium<T>& m, const StencilCoeffs& c,
                                 const TimeParams& tp, const SourceTerm& src,
                                 const PropagateOptions<T>& opt = {});

}  // namespace s25
