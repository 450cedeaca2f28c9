#include <cmath>
#include <limits>

#include "s25/errors.hpp"
#include "s25/kernels.hpp"

namespace s25 {

template <class T>
Problem<T> make_problem(const Scenario& s) {
    Problem<T> p;
    p.domain = Domain{s.extents, s.pml_width, s.h};
    decompose(s.extents, s.pml_width);
    p.medium = random_medium<T>(p.domain, s.v_min, s.v_max, s.eta_max, s.seed);
    p.coeffs = make_coeffs_order8(s.h);
    p.time = TimeParams{default_dt(s.h, s.v_max), s.steps};

    // Source position from a stream decorrelated from the velocity draws.
    std::uint64_t st = s.seed ^ 0xa5a5a5a5a5a5a5a5ULL;
    const auto pick = [&](int n) {
        const int lo = s.pml_width, span = n - 2 * s.pml_width;
        return lo + std::min(span - 1, int(next_uniform(st) * span));
    };
    p.source.location = {pick(s.extents.nx), pick(s.extents.ny), pick(s.extents.nz)};
    const double f = default_f_peak(s.h, s.v_min);
    p.source.wavelet = ricker(f, 1.0 / f, p.time.dt, s.steps);
    return p;
}

template <class T>
VerifyReport compare_fields(const Grid3<T>& a, const Grid3<T>& ref) {
    if (!(a.extents() == ref.extents())) throw ConfigError("compared grids differ in extents");
    double num = 0, den = 0, dmax = 0, rmax = 0;
    ref.for_each_interior([&](int i, int j, int k) {
        const double r = ref.at(i, j, k), d = double(a.at(i, j, k)) - r;
        num += d * d;
        den += r * r;
        dmax = std::max(dmax, std::abs(d));
        rmax = std::max(rmax, std::abs(r));
        if (std::isnan(d)) dmax = std::numeric_limits<double>::quiet_NaN();
    });
    const auto rel = [](double n, double d) {
        if (std::isnan(n)) return n;
        if (d == 0) return n == 0 ? 0.0 : std::numeric_limits<double>::infinity();
        return n / d;
    };
    return {rel(std::sqrt(num), std::sqrt(den)), rel(dmax, rmax)};
}

namespace {

template <class T>
VerifyReport verify_as(const KernelConfig& cfg, const Scenario& s, const VerifyOptions& opt) {
    const auto p = make_problem<T>(s);
    PropagateOptions<T> po;
    const auto ref = reference_propagate(p.domain, p.medium, p.coeffs, p.time, p.source, po);
    auto got = propagate(cfg, p.domain, p.medium, p.coeffs, p.time, p.source, po);
    if (opt.perturb != 0) {
        const auto [i, j, k] = p.source.location;
        got.cur.at(i, j, k) += T(opt.perturb * double(max_abs(ref.cur)));
    }
    return compare_fields(got.cur, ref.cur);
}

}  // namespace

VerifyReport verify(const KernelConfig& cfg, const Scenario& s, const VerifyOptions& opt) {
    return cfg.precision == Precision::Single ? verify_as<float>(cfg, s, opt)
                                              : verify_as<double>(cfg, s, opt);
}

double verify_tolerance(Precision p) { return p == Precision::Single ? 1e-4 : 1e-12; }

double verify_tolerance_linf(Precision p) { return p == Precision::Single ? 1e-3 : 1e-11; }

bool within_tolerance(const VerifyReport& r, Precision p) {
    return r.rel_l2 <= verify_tolerance(p) && r.rel_linf <= verify_tolerance_linf(p);
}

template Problem<float> make_problem<float>(const Scenario&);
template Problem<double> make_problem<double>(const Scenario&);
template VerifyReport compare_fields<float>(const Grid3<float>&, const Grid3<float>&);
template VerifyReport compare_fields<double>(const Grid3<double>&, const Grid3<double>&);

}  // namespace s25
