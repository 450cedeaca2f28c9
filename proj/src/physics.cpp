#include "s25/physics.hpp"

#include <cmath>
#include <numbers>

namespace s25 {

StencilCoeffs make_coeffs_order8(double h) {
    if (!(h > 0)) throw ConfigError("grid spacing h must be > 0");
    const double s = 1.0 / (h * h);
    StencilCoeffs c;
    c.c_xyz = 3.0 * kOrder8Center * s;
    for (int m = 0; m < kRadius; ++m) {
        c.c_x[m] = kOrder8Offsets[m] * s;
        c.c_y[m] = kOrder8Offsets[m] * s;
        c.c_z[m] = kOrder8Offsets[m] * s;
    }
    return c;
}

double consistency_residual(const StencilCoeffs& c) {
    double sum = 0;
    for (int m = 0; m < kRadius; ++m) sum += c.c_x[m] + c.c_y[m] + c.c_z[m];
    return c.c_xyz + 2.0 * sum;
}

std::vector<double> ricker(double f_peak, double t0, double dt, int steps) {
    if (!(f_peak > 0)) throw ConfigError("Ricker peak frequency must be > 0");
    std::vector<double> w(std::size_t(std::max(steps, 0)));
    const double a = std::numbers::pi * std::numbers::pi * f_peak * f_peak;
    for (int n = 0; n < steps; ++n) {
        const double tau = n * dt - t0;
        const double x = a * tau * tau;
        w[std::size_t(n)] = (1.0 - 2.0 * x) * std::exp(-x);
    }
    return w;
}

double default_dt(double h, double v_max) { return 0.4 * h / v_max; }

double default_f_peak(double h, double v_min) { return v_min / (10.0 * h); }

double cfl_dt_limit(const StencilCoeffs& c, double v_max) {
    double lambda = std::abs(c.c_xyz);
    for (int m = 0; m < kRadius; ++m)
        lambda += 2.0 * (std::abs(c.c_x[m]) + std::abs(c.c_y[m]) + std::abs(c.c_z[m]));
    return 2.0 / (v_max * std::sqrt(lambda));
}

double next_uniform(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return double(z >> 11) * 0x1.0p-53;
}

template <class T>
T laplacian25(const Grid3<T>& u, const StencilCoeffs& c, int i, int j, int k) {
    const Weights<T> w(c);
    const T* p = &u.at(i, j, k);
    const auto sy = u.stride_y(), sz = u.stride_z();
    const auto s = gather_star<T>([&](int dx, int dy, int dz) { return p[dx + dy * sy + dz * sz]; });
    return laplacian(s, w);
}

namespace {

template <class T, bool Pml>
void update_box(Grid3<T>& u_prev, const Grid3<T>& u_cur, const Medium<T>& m,
                const StencilCoeffs& c, double dt, double h, const Box& cells) {
    const Weights<T> w(c);
    const StepConstants<T> kc(dt, h);
    const auto sy = u_cur.stride_y(), sz = u_cur.stride_z();
    for (int k = cells.lo[2]; k < cells.lo[2] + cells.ext[2]; ++k)
        for (int j = cells.lo[1]; j < cells.lo[1] + cells.ext[1]; ++j)
            for (int i = cells.lo[0]; i < cells.lo[0] + cells.ext[0]; ++i) {
                const auto o = u_cur.linear_index(i, j, k);
                const T* uc = u_cur.data() + o;
                const auto star = gather_star<T>(
                    [&](int dx, int dy, int dz) { return uc[dx + dy * sy + dz * sz]; });
                const T lap = laplacian(star, w);
                const T v = m.velocity.data()[o];
                T& out = u_prev.data()[o];
                if constexpr (Pml) {
                    const T* e = m.eta.data() + o;
                    const auto eta = gather_eta<T>(
                        [&](int dx, int dy, int dz) { return e[dx + dy * sy + dz * sz]; });
                    out = pml_update(star.c, out, v, lap, eta, unit_neighbours(star), kc);
                } else {
                    out = inner_update(star.c, out, v, lap, kc);
                }
            }
}

}  // namespace

template <class T>
void step_inner(Grid3<T>& u_prev, const Grid3<T>& u_cur, const Medium<T>& m,
                const StencilCoeffs& c, double dt, double h, const Box& cells) {
    update_box<T, false>(u_prev, u_cur, m, c, dt, h, cells);
}

template <class T>
void step_pml(Grid3<T>& u_prev, const Grid3<T>& u_cur, const Medium<T>& m,
              const StencilCoeffs& c, double dt, double h, const Box& cells) {
    update_box<T, true>(u_prev, u_cur, m, c, dt, h, cells);
}

template <class T>
void inject_source(Grid3<T>& u, const SourceTerm& src, const Medium<T>& m, double dt, int n) {
    if (n < 0 || std::size_t(n) >= src.wavelet.size())
        throw ConfigError("source wavelet has no sample for step " + std::to_string(n));
    const auto [i, j, k] = src.location;
    const StepConstants<T> kc(dt, 1.0);
    T& cell = u.at(i, j, k);
    cell = source_update(cell, m.velocity.at(i, j, k), T(src.wavelet[std::size_t(n)]), kc);
}

template <class T>
Grid3<T> make_eta(const Domain& d, double eta_max) {
    Grid3<T> eta(d.extents, kRadius);
    const int w = d.pml_width;
    if (w == 0) return eta;
    const auto dist = [w](int i, int n) { return i < w ? w - i : i >= n - w ? i - (n - w) + 1 : 0; };
    const auto& e = d.extents;
    eta.for_each_interior([&](int i, int j, int k) {
        const int dd = std::max({dist(i, e.nx), dist(j, e.ny), dist(k, e.nz)});
        if (dd == 0) return;
        const double r = double(dd) / double(w);
        eta.at(i, j, k) = T(eta_max * r * r);
    });
    return eta;
}

template <class T>
Medium<T> homogeneous_medium(const Domain& d, double velocity, double eta_max) {
    if (!(velocity > 0)) throw ConfigError("velocity must be > 0");
    Medium<T> m{Grid3<T>(d.extents, kRadius), make_eta<T>(d, eta_max)};
    m.velocity.fill_interior(T(velocity));
    return m;
}

template <class T>
Medium<T> random_medium(const Domain& d, double v_min, double v_max, double eta_max,
                        std::uint64_t seed) {
    if (!(v_min > 0) || v_max < v_min) throw ConfigError("invalid random velocity range");
    Medium<T> m{Grid3<T>(d.extents, kRadius), make_eta<T>(d, eta_max)};
    std::uint64_t state = seed;
    m.velocity.for_each_interior([&](int i, int j, int k) {
        m.velocity.at(i, j, k) = T(v_min + (v_max - v_min) * next_uniform(state));
    });
    return m;
}

template <class T>
Medium<T> layered_medium(const Domain& d, const std::vector<std::pair<int, double>>& layers,
                         double eta_max) {
    if (layers.empty() || layers.front().first != 0)
        throw ConfigError("velocity layers must start at z index 0");
    for (std::size_t l = 0; l < layers.size(); ++l) {
        if (!(layers[l].second > 0)) throw ConfigError("layer velocity must be > 0");
        if (l > 0 && layers[l].first <= layers[l - 1].first)
            throw ConfigError("velocity layers must have ascending z indices");
    }
    Medium<T> m{Grid3<T>(d.extents, kRadius), make_eta<T>(d, eta_max)};
    m.velocity.for_each_interior([&](int i, int j, int k) {
        double v = layers.front().second;
        for (const auto& [z0, vel] : layers)
            if (k >= z0) v = vel;
        m.velocity.at(i, j, k) = T(v);
    });
    return m;
}

template <class T>
void reference_step(Wavefield<T>& wf, const Medium<T>& m, const StencilCoeffs& c, double dt,
                    const Domain& d) {
    const Weights<T> w(c);
    const StepConstants<T> kc(dt, d.h);
    const auto& e = d.extents;
    const int pw = d.pml_width;
    const auto sy = wf.cur.stride_y(), sz = wf.cur.stride_z();
    for (int k = 0; k < e.nz; ++k)
        for (int j = 0; j < e.ny; ++j)
            for (int i = 0; i < e.nx; ++i) {
                const auto o = wf.cur.linear_index(i, j, k);
                const T* uc = wf.cur.data() + o;
                const auto star = gather_star<T>(
                    [&](int dx, int dy, int dz) { return uc[dx + dy * sy + dz * sz]; });
                const T lap = laplacian(star, w);
                const T v = m.velocity.data()[o];
                T& out = wf.prev.data()[o];
                if (in_pml(e, pw, i, j, k)) {
                    const T* ep = m.eta.data() + o;
                    const auto eta = gather_eta<T>(
                        [&](int dx, int dy, int dz) { return ep[dx + dy * sy + dz * sz]; });
                    out = pml_update(star.c, out, v, lap, eta, unit_neighbours(star), kc);
                } else {
                    out = inner_update(star.c, out, v, lap, kc);
                }
            }
}

template <class T>
Wavefield<T> reference_propagate(const Domain& d, const Medium<T>& m, const StencilCoeffs& c,
                                 const TimeParams& tp, const SourceTerm& src,
                                 const PropagateOptions<T>& opt) {
    decompose(d.extents, d.pml_width);  // validates the geometry
    if (tp.steps < 0) throw ConfigError("steps must be >= 0");
    if (src.wavelet.size() < std::size_t(tp.steps))
        throw ConfigError("source wavelet shorter than the number of steps");
    auto wf = make_wavefield<T>(d.extents);
    for (int n = 0; n < tp.steps; ++n) {
        reference_step(wf, m, c, tp.dt, d);
        wf.rotate();
        inject_source(wf.cur, src, m, tp.dt, n);
        const int done = n + 1;
        if (opt.check_interval > 0 && (done % opt.check_interval == 0 || done == tp.steps) &&
            !all_finite(wf.cur))
            throw InstabilityError(done);
        if (opt.on_step) opt.on_step(done, wf.cur);
    }
    return wf;
}

#define S25_INSTANTIATE(T)                                                                      \
    template T laplacian25<T>(const Grid3<T>&, const StencilCoeffs&, int, int, int);           \
    template void step_inner<T>(Grid3<T>&, const Grid3<T>&, const Medium<T>&,                   \
                                const StencilCoeffs&, double, double, const Box&);             \
    template void step_pml<T>(Grid3<T>&, const Grid3<T>&, const Medium<T>&,                     \
                              const StencilCoeffs&, double, double, const Box&);               \
    template void inject_source<T>(Grid3<T>&, const SourceTerm&, const Medium<T>&, double, int); \
    template Grid3<T> make_eta<T>(const Domain&, double);                                       \
    template Medium<T> homogeneous_medium<T>(const Domain&, double, double);                    \
    template Medium<T> random_medium<T>(const Domain&, double, double, double, std::uint64_t);  \
    template Medium<T> layered_medium<T>(const Domain&,                                         \
                                         const std::vector<std::pair<int, double>>&, double);  \
    template void reference_step<T>(Wavefield<T>&, const Medium<T>&, const StencilCoeffs&,      \
                                    double, const Domain&);                                    \
    template Wavefield<T> reference_propagate<T>(const Domain&, const Medium<T>&,               \
                                                 const StencilCoeffs&, const TimeParams&,       \
                                                 const SourceTerm&, const PropagateOptions<T>&);

S25_INSTANTIATE(float)
S25_INSTANTIATE(double)

#undef S25_INSTANTIATE

}  // namespace s25
