#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "s25/counters.hpp"
#include "s25/errors.hpp"
#include "s25/physics.hpp"

using namespace s25;

TEST_CASE("order-8 coefficients") {
    const double h = 5.0;
    const auto c = make_coeffs_order8(h);
    CHECK(c.c_xyz == doctest::Approx(3.0 * (-205.0 / 72.0) / 25.0));
    CHECK(c.c_x[0] == doctest::Approx(1.6 / 25.0));
    CHECK(c.c_z[3] == doctest::Approx(-1.0 / 560.0 / 25.0));
    CHECK(std::abs(consistency_residual(c)) < 1e-15);
    CHECK_THROWS_AS(make_coeffs_order8(0.0), ConfigError);
}

TEST_CASE("25-point Laplacian is exact on polynomials up to degree 9 per axis") {
    const double h = 0.5;
    const auto c = make_coeffs_order8(h);
    Grid3<double> u({13, 13, 13}, 4);
    const auto coord = [h](int i) { return (i - 6) * h; };
    u.for_each_interior([&](int i, int j, int k) {
        const double x = coord(i), y = coord(j), z = coord(k);
        u.at(i, j, k) = 0.5 * std::pow(x, 6) - 2.0 * std::pow(y, 4) + 0.25 * std::pow(z, 8) + x * y * z;
    });
    for (int k = 4; k <= 8; ++k)
        for (int j = 4; j <= 8; ++j)
            for (int i = 4; i <= 8; ++i) {
                const double x = coord(i), y = coord(j), z = coord(k);
                const double exact = 15.0 * std::pow(x, 4) - 24.0 * y * y + 14.0 * std::pow(z, 6);
                REQUIRE(laplacian25(u, c, i, j, k) == doctest::Approx(exact).epsilon(1e-10).scale(1.0));
            }
}

TEST_CASE("gather_star visits the 25 distinct offsets once") {
    std::set<std::array<int, 3>> seen;
    int calls = 0;
    gather_star<double>([&](int dx, int dy, int dz) {
        ++calls;
        seen.insert({dx, dy, dz});
        CHECK(std::abs(dx) + std::abs(dy) + std::abs(dz) <= kRadius);
        CHECK(((dx != 0) + (dy != 0) + (dz != 0)) <= 1);
        return 0.0;
    });
    CHECK(calls == 25);
    CHECK(seen.size() == 25u);
}

TEST_CASE("per-cell FLOP counts of the update expressions") {
    const Weights<double> w(make_coeffs_order8(10.0));
    const StepConstants<double> k(1e-3, 10.0);
    using R = Tally<double>;
    const auto s = gather_star<R>([](int dx, int dy, int dz) { return R(1.0 + dx + 2 * dy + 3 * dz); });

    counting::reset();
    const R lap = laplacian(s, w);
    CHECK(counting::harvest().flops == 37u);
    CHECK(kLaplacianFlops == 37);

    (void)inner_update(R(1.0), R(0.5), R(2000.0), lap, k);
    CHECK(counting::harvest().flops == 6u);

    const std::array<R, 7> eta = {R(1), R(2), R(3), R(4), R(5), R(6), R(7)};
    (void)pml_update(R(1.0), R(0.5), R(2000.0), lap, eta, unit_neighbours(s), k);
    CHECK(counting::harvest().flops == 24u);

    (void)source_update(R(1.0), R(2000.0), R(0.3), k);
    CHECK(counting::harvest().flops == 4u);
}

TEST_CASE("Tally arithmetic is bit-identical to the plain type") {
    const double a = 0.1, b = 0.7, c = 3.3;
    const Tally<double> r = (Tally<double>(a) * b + c) / Tally<double>(b) - a;
    CHECK(r.value() == (a * b + c) / b - a);
}

TEST_CASE("Ricker wavelet") {
    const double f = 15.0, t0 = 0.06, dt = 1e-3;
    const auto w = ricker(f, t0, dt, 200);
    REQUIRE(w.size() == 200u);
    const int peak = int(std::lround(t0 / dt));
    CHECK(w[std::size_t(peak)] == doctest::Approx(1.0));
    for (int d = 1; d < 60; ++d) CHECK(w[std::size_t(peak + d)] == doctest::Approx(w[std::size_t(peak - d)]).epsilon(1e-9));
    // Zero crossing at |t - t0| = 1 / (pi f sqrt 2).
    const double tz = t0 + 1.0 / (std::numbers::pi * f * std::sqrt(2.0));
    const double x = std::pow(std::numbers::pi * f * (tz - t0), 2);
    CHECK(std::abs((1 - 2 * x) * std::exp(-x)) < 1e-12);
    CHECK_THROWS_AS(ricker(0.0, 0, dt, 10), ConfigError);
}

TEST_CASE("time step defaults and the CFL bound") {
    CHECK(default_dt(10.0, 4000.0) == doctest::Approx(0.4 * 10.0 / 4000.0));
    CHECK(default_f_peak(10.0, 1500.0) == doctest::Approx(15.0));
    // Spectral radius of the 1D operator at the Nyquist mode, times three axes.
    const double nyq = 205.0 / 72.0 + 2.0 * (8.0 / 5.0 + 1.0 / 5.0 + 8.0 / 315.0 + 1.0 / 560.0);
    const double h = 10.0, v = 3000.0;
    const double expected = 2.0 * h / (v * std::sqrt(3.0 * nyq));
    CHECK(cfl_dt_limit(make_coeffs_order8(h), v) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(default_dt(h, v) < cfl_dt_limit(make_coeffs_order8(h), v));
}

TEST_CASE("eta ramp: zero inside, eta_max (d/w)^2 in the PML") {
    const Domain d{{14, 12, 16}, 3, 10.0};
    const double emax = 80.0;
    const auto eta = make_eta<double>(d, emax);
    const auto& e = d.extents;
    eta.for_each_interior([&](int i, int j, int k) {
        int dist = 0;
        const int idx[3] = {i, j, k};
        for (int a = 0; a < 3; ++a) {
            const int n = e[a];
            if (idx[a] < d.pml_width) dist = std::max(dist, d.pml_width - idx[a]);
            if (idx[a] >= n - d.pml_width) dist = std::max(dist, idx[a] - (n - d.pml_width) + 1);
        }
        const double expect = emax * double(dist * dist) / double(d.pml_width * d.pml_width);
        REQUIRE(eta.at(i, j, k) == doctest::Approx(expect));
        REQUIRE((dist == 0) == !in_pml(e, d.pml_width, i, j, k));
    });
    CHECK(eta.padding_is_zero());
    CHECK(max_abs(make_eta<double>({{8, 8, 8}, 0, 10.0}, emax)) == 0.0);
}

TEST_CASE("media") {
    const Domain d{{10, 9, 8}, 2, 10.0};
    const auto a = random_medium<double>(d, 1500, 4500, 100, 11);
    const auto b = random_medium<double>(d, 1500, 4500, 100, 11);
    const auto c = random_medium<double>(d, 1500, 4500, 100, 12);
    bool same = true, differs = false, in_range = true;
    a.velocity.for_each_interior([&](int i, int j, int k) {
        const double v = a.velocity.at(i, j, k);
        same = same && v == b.velocity.at(i, j, k);
        differs = differs || v != c.velocity.at(i, j, k);
        in_range = in_range && v >= 1500 && v < 4500;
    });
    CHECK(same);
    CHECK(differs);
    CHECK(in_range);

    const auto l = layered_medium<float>(d, {{0, 1500.0}, {4, 2500.0}}, 50);
    CHECK(l.velocity.at(3, 3, 3) == 1500.0f);
    CHECK(l.velocity.at(3, 3, 4) == 2500.0f);
    CHECK_THROWS_AS(layered_medium<float>(d, {{1, 1500.0}}, 50), ConfigError);
    CHECK_THROWS_AS(layered_medium<float>(d, {{0, 1500.0}, {0, 2000.0}}, 50), ConfigError);
    CHECK_THROWS_AS(homogeneous_medium<double>(d, -1.0, 10), ConfigError);
}

TEST_CASE("splitmix64 stream is fixed") {
    std::uint64_t s = 0;
    // First splitmix64 output for state 0 is 0xe220a8397b1dcdaf.
    const double u = next_uniform(s);
    CHECK(u == double(0xe220a8397b1dcdafULL >> 11) * 0x1.0p-53);
}

TEST_CASE("region updates reproduce the single sweep") {
    const Domain d{{18, 16, 14}, 3, 10.0};
    const auto m = random_medium<double>(d, 1500, 4500, 100, 5);
    const auto c = make_coeffs_order8(d.h);
    auto wf = make_wavefield<double>(d.extents);
    std::uint64_t st = 99;
    wf.cur.for_each_interior([&](int i, int j, int k) { wf.cur.at(i, j, k) = next_uniform(st) - 0.5; });
    wf.prev.for_each_interior([&](int i, int j, int k) { wf.prev.at(i, j, k) = next_uniform(st) - 0.5; });
    auto by_region = wf;
    const double dt = 1e-3;
    reference_step(wf, m, c, dt, d);
    for (const auto& r : decompose(d.extents, d.pml_width)) {
        if (r.is_pml())
            step_pml(by_region.prev, by_region.cur, m, c, dt, d.h, r.box);
        else
            step_inner(by_region.prev, by_region.cur, m, c, dt, d.h, r.box);
    }
    bool same = true;
    wf.prev.for_each_interior([&](int i, int j, int k) { same = same && wf.prev.at(i, j, k) == by_region.prev.at(i, j, k); });
    CHECK(same);
}

TEST_CASE("reference propagation") {
    const Domain d{{16, 16, 16}, 3, 10.0};
    const auto m = homogeneous_medium<double>(d, 2000, 100);
    const auto c = make_coeffs_order8(d.h);
    SourceTerm src{{8, 8, 8}, std::vector<double>(20, 0.0)};

    SUBCASE("zero source leaves the field at zero") {
        const auto wf = reference_propagate(d, m, c, {default_dt(d.h, 2000), 20}, src);
        CHECK(max_abs(wf.cur) == 0.0);
    }
    SUBCASE("on_step sees every step") {
        src.wavelet = ricker(20, 0.05, default_dt(d.h, 2000), 20);
        int calls = 0;
        PropagateOptions<double> opt;
        opt.on_step = [&](int n, const Grid3<double>& u) {
            CHECK(n == ++calls);
            CHECK(all_finite(u));
        };
        const auto wf = reference_propagate(d, m, c, {default_dt(d.h, 2000), 20}, src, opt);
        CHECK(calls == 20);
        CHECK(max_abs(wf.cur) > 0.0);
    }
    SUBCASE("a step far beyond the CFL bound is reported as instability") {
        src.wavelet = std::vector<double>(200, 1.0);
        try {
            reference_propagate(d, m, c, {0.05, 200}, src);
            FAIL("expected InstabilityError");
        } catch (const InstabilityError& e) {
            CHECK(e.step() % 10 == 0);
            CHECK(e.step() <= 200);
        }
    }
    SUBCASE("wavelet shorter than the run") {
        CHECK_THROWS_AS(reference_propagate(d, m, c, {1e-3, 30}, src), ConfigError);
    }
}

TEST_CASE("stability around the CFL bound") {
    const Domain d{{20, 20, 20}, 0, 10.0};
    const auto m = homogeneous_medium<double>(d, 3000, 0);
    const auto c = make_coeffs_order8(d.h);
    const double lim = cfl_dt_limit(c, 3000);
    const auto grow = [&](double dt) {
        auto wf = make_wavefield<double>(d.extents);
        std::uint64_t st = 3;
        wf.cur.for_each_interior([&](int i, int j, int k) { wf.cur.at(i, j, k) = next_uniform(st) - 0.5; });
        wf.prev = wf.cur;
        for (int n = 0; n < 400; ++n) {
            reference_step(wf, m, c, dt, d);
            wf.rotate();
        }
        return max_abs(wf.cur);
    };
    CHECK(grow(0.95 * lim) < 10.0);
    const double big = grow(1.3 * lim);
    CHECK((!std::isfinite(big) || big > 1e6));
}

TEST_CASE("damped PML update against a scalar re-evaluation") {
    const double dt = 1.3e-3, h = 7.5;
    const StepConstants<double> k(dt, h);
    std::uint64_t st = 21;
    const auto r = [&] { return next_uniform(st) - 0.5; };
    for (int n = 0; n < 50; ++n) {
        const double uc = r(), up = r(), v = 1500 + 3000 * (r() + 0.5), lap = r();
        std::array<double, 7> eta;
        for (auto& e : eta) e = 100 * (r() + 0.5);
        std::array<double, 6> u1;
        for (auto& x : u1) x = r();
        const double gx = (eta[1] - eta[2]) / (2 * h) * (u1[0] - u1[1]) / (2 * h);
        const double gy = (eta[3] - eta[4]) / (2 * h) * (u1[2] - u1[3]) / (2 * h);
        const double gz = (eta[5] - eta[6]) / (2 * h) * (u1[4] - u1[5]) / (2 * h);
        const double want = (2 * uc - (1 - eta[0] * dt) * up + dt * dt * v * v * (lap + dt * (gx + gy + gz))) /
                            (1 + eta[0] * dt);
        REQUIRE(pml_update(uc, up, v, lap, eta, u1, k) == doctest::Approx(want).epsilon(1e-13));
    }
    // Constant state with constant eta and no spatial variation stays put.
    const std::array<double, 7> flat{40, 40, 40, 40, 40, 40, 40};
    const std::array<double, 6> same{0.7, 0.7, 0.7, 0.7, 0.7, 0.7};
    CHECK(pml_update(0.7, 0.7, 2000.0, 0.0, flat, same, k) == doctest::Approx(0.7).epsilon(1e-15));
    // Zero eta reduces to the inner update.
    const std::array<double, 7> none{};
    CHECK(pml_update(0.3, 0.1, 2000.0, 0.02, none, same, k) == inner_update(0.3, 0.1, 2000.0, 0.02, k));
}

TEST_CASE("the PML absorbs: energy leaves a damped box") {
    const Domain d{{33, 33, 33}, 6, 10.0};
    const auto m = homogeneous_medium<double>(d, 2500, 100);
    const auto c = make_coeffs_order8(d.h);
    const double dt = default_dt(d.h, 2500), f = default_f_peak(d.h, 2500);
    const SourceTerm src{{16, 16, 16}, ricker(f, 1.0 / f, dt, 400)};
    double early = 0;
    PropagateOptions<double> opt;
    opt.on_step = [&](int n, const Grid3<double>& u) {
        if (n <= 100) early = std::max(early, max_abs(u));
    };
    const auto wf = reference_propagate(d, m, c, {dt, 400}, src, opt);
    CHECK(max_abs(wf.cur) < 0.1 * early);
}
