#include <doctest.h>

#include <cstring>
#include <string>

#include "s25/errors.hpp"
#include "s25/kernels.hpp"

using namespace s25;

namespace {

template <class T>
bool bitwise_equal(const Grid3<T>& a, const Grid3<T>& b) {
    bool eq = a.extents() == b.extents();
    a.for_each_interior([&](int i, int j, int k) {
        eq = eq && std::memcmp(&a.at(i, j, k), &b.at(i, j, k), sizeof(T)) == 0;
    });
    return eq;
}

std::string message_of(const std::string& variant) {
    try {
        validate(parse_variant(variant));
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

template <class T>
Wavefield<T> run_cfg(KernelConfig cfg, const Problem<T>& p) {
    return propagate<T>(cfg, p.domain, p.medium, p.coeffs, p.time, p.source);
}

Scenario small_scenario() {
    Scenario s;
    s.extents = {26, 23, 21};
    s.pml_width = 4;
    s.steps = 12;
    s.seed = 7;
    return s;
}

}  // namespace

TEST_CASE("variant names round-trip") {
    for (const char* n : {"reference", "gmem_8x8x8", "gmem_16x4x2", "smem_u", "smem_u_16x8x8",
                          "smem_eta_3", "smem_eta_1", "smem_eta_1_4x4x4", "semi", "semi_8x8x16",
                          "st_smem_16x16", "st_reg_shft_32x16", "st_reg_fixed_32x32"}) {
        CAPTURE(std::string(n));
        CHECK(variant_name(parse_variant(n)) == n);
    }
    CHECK(parse_variant("gmem").tiling3 == Tiling3{8, 8, 8});
    CHECK(variant_name(parse_variant("st_smem")) == "st_smem_16x16");
    CHECK(parse_variant("st_reg_fixed_8x4").variant == VariantId::StreamFixed);
    CHECK(parse_variant("st_reg_shft_8x4").variant == VariantId::StreamShift);
    CHECK(parse_variant("smem_eta_3").variant == VariantId::PmlEta3);
    for (const char* bad : {"", "gmem_8x8", "st_smem_8x8x8", "warp_8x8x8", "reference_8x8x8", "gmem_8x0x8",
                            "semi_axbxc", "smem_u8x8x8"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse_variant(bad), ConfigError);
    }
    for (VariantId v : kAllVariants) {
        KernelConfig c;
        c.variant = v;
        CHECK(parse_variant(variant_name(c)).variant == v);
    }
}

TEST_CASE("configuration rules name the violated constraint") {
    CHECK(message_of("smem_u_4x8x8").find("2R") != std::string::npos);
    CHECK(message_of("smem_eta_1_8x8x4").find("cubic") != std::string::npos);
    CHECK(message_of("smem_eta_3_1x1x1").find(">= 2") != std::string::npos);
    CHECK(message_of("st_smem_256x256").find("scratch") != std::string::npos);
    CHECK(message_of("gmem_8x8x8").empty());
    CHECK(message_of("smem_u").empty());
    KernelConfig c;
    c.workers = 0;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = parse_variant("smem_u");
    c.scratch_budget = scratch_bytes(c) - 1;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c.scratch_budget = scratch_bytes(c);
    CHECK_NOTHROW(validate(c));
    // Constructor checks precede any work.
    const Domain d{{24, 24, 24}, 4, 10.0};
    CHECK_THROWS_AS(Propagator<double>(parse_variant("smem_u_4x8x8"), d, make_coeffs_order8(10)), ConfigError);
}

TEST_CASE("scratch sizes") {
    auto c = parse_variant("smem_u");
    CHECK(scratch_bytes(c) == 16u * 16 * 16 * 8);
    c.precision = Precision::Single;
    CHECK(scratch_bytes(c) == 16u * 16 * 16 * 4);
    CHECK(scratch_bytes(parse_variant("smem_eta_1")) == 10u * 10 * 10 * 8);
    CHECK(scratch_bytes(parse_variant("semi")) == 5u * 8 * 8 * 8);
    CHECK(scratch_bytes(parse_variant("st_smem_16x16")) == 9u * 24 * 24 * 8);
    CHECK(scratch_bytes(parse_variant("gmem_8x8x8")) == 0u);
}

TEST_CASE("ring slot of the leading plane") {
    const int r = 4;
    for (int z = 0; z < 40; ++z) {
        // The leading plane z + R must evict the plane z - R - 1, which was stored one lap earlier.
        CHECK(slot(z, r) == (z + 2 * r) % 9);
        CHECK(slot(z + 2 * r + 1, r) == slot(z, r));
        if (z > 0) CHECK(slot(z, r) != slot(z - 1, r));
    }
    CHECK(slot(0, r) == 8);
    CHECK(slot(1, r) == 0);
}

TEST_CASE("every variant reproduces the reference bit for bit, except semi within tolerance") {
    const auto p = make_problem<double>(small_scenario());
    KernelConfig ref;
    ref.variant = VariantId::Reference;
    const auto want = run_cfg(ref, p);
    REQUIRE(max_abs(want.cur) > 0);
    for (const char* n : {"gmem_8x8x8", "gmem_5x7x3", "smem_u", "smem_u_8x16x8", "smem_eta_3", "smem_eta_1",
                          "smem_eta_1_4x4x4", "smem_eta_3_3x3x3", "st_smem_16x16", "st_smem_7x5",
                          "st_reg_shft_16x16", "st_reg_shft_9x4", "st_reg_fixed_16x16", "st_reg_fixed_3x11"}) {
        CAPTURE(std::string(n));
        const auto got = run_cfg(parse_variant(n), p);
        CHECK(bitwise_equal(got.cur, want.cur));
        CHECK(bitwise_equal(got.prev, want.prev));
    }
    for (const char* n : {"semi", "semi_5x3x7", "semi_8x8x2"}) {
        CAPTURE(std::string(n));
        const auto got = run_cfg(parse_variant(n), p);
        const auto r = compare_fields(got.cur, want.cur);
        CHECK(within_tolerance(r, Precision::Double));
    }
}

TEST_CASE("results do not depend on the number of workers") {
    const auto p = make_problem<double>(small_scenario());
    for (VariantId v : kAllVariants) {
        KernelConfig c;
        c.variant = v;
        CAPTURE(variant_name(c));
        const auto one = run_cfg(c, p);
        for (int w : {2, 3, 5}) {
            c.workers = w;
            CHECK(bitwise_equal(run_cfg(c, p).cur, one.cur));
        }
    }
}

TEST_CASE("single precision variants stay close to the single precision reference") {
    const auto p = make_problem<float>(small_scenario());
    KernelConfig ref;
    ref.variant = VariantId::Reference;
    ref.precision = Precision::Single;
    const auto want = run_cfg(ref, p);
    for (VariantId v : kAllVariants) {
        KernelConfig c;
        c.variant = v;
        c.precision = Precision::Single;
        CAPTURE(variant_name(c));
        CHECK(within_tolerance(compare_fields(run_cfg(c, p).cur, want.cur), Precision::Single));
    }
}

TEST_CASE("instrumented runs do not change the result") {
    const auto p = make_problem<double>(small_scenario());
    for (VariantId v : kAllVariants) {
        KernelConfig c;
        c.variant = v;
        CAPTURE(variant_name(c));
        const auto plain = run_cfg(c, p);
        c.instrument = true;
        CounterReport rep;
        const auto counted = propagate<double>(c, p.domain, p.medium, p.coeffs, p.time, p.source, {}, &rep);
        CHECK(bitwise_equal(plain.cur, counted.cur));
        CHECK(rep.flops > 0);
        CHECK(rep.cells == std::uint64_t(p.domain.extents.volume() * p.time.steps));
    }
}

namespace {

struct StepProbe {
    Domain d{{24, 20, 18}, 3, 10.0};
    Medium<double> m = random_medium<double>(d, 1500, 4500, 100, 3);
    StencilCoeffs c = make_coeffs_order8(10.0);

    StepCounters step(const std::string& variant, int workers = 1) {
        auto cfg = parse_variant(variant);
        cfg.instrument = true;
        cfg.workers = workers;
        auto wf = make_wavefield<double>(d.extents);
        return run_step<double>(cfg, wf, m, c, 1e-3, d);
    }
    std::int64_t cells(RegionKind k) const { return decompose(d.extents, d.pml_width)[std::size_t(k)].box.volume(); }
};

std::uint64_t u(std::int64_t v) { return std::uint64_t(v); }

}  // namespace

TEST_CASE("global-memory tiles: per-cell loads, stores and FLOPs") {
    StepProbe p;
    const auto s = p.step("gmem_8x8x8");
    const auto n_in = p.cells(RegionKind::Inner);
    CHECK(s[RegionKind::Inner].load(Array::UCur) == u(25 * n_in));
    CHECK(s[RegionKind::Inner].load(Array::UPrev) == u(n_in));
    CHECK(s[RegionKind::Inner].load(Array::Velocity) == u(n_in));
    CHECK(s[RegionKind::Inner].load(Array::Eta) == 0u);
    CHECK(s[RegionKind::Inner].store(Array::UNext) == u(n_in));
    CHECK(s[RegionKind::Inner].flops == u(43 * n_in));
    for (int r = 1; r < kRegionCount; ++r) {
        const auto k = RegionKind(r);
        const auto n = p.cells(k);
        CAPTURE(to_string(k));
        CHECK(s[k].load(Array::UCur) == u(25 * n));
        CHECK(s[k].load(Array::Eta) == u(7 * n));
        CHECK(s[k].store(Array::UNext) == u(n));
        CHECK(s[k].flops == u(61 * n));
    }
    CounterReport sum;
    for (const auto& r : s.by_region) sum += r;
    CHECK(sum == s.total);
    CHECK(p.step("gmem_8x8x8", 3).total == s.total);
}

TEST_CASE("cached u tiles read each u value once per tile plus halo") {
    StepProbe p;
    const auto cfg = parse_variant("smem_u");
    const auto s = p.step("smem_u");
    const Box inner = decompose(p.d.extents, p.d.pml_width)[0].box;
    std::uint64_t fetched = 0;
    for (const auto& t : tile3(inner, cfg.tiling3))
        fetched += u(t.volume() + halo_cell_count(t.ext, kRadius));
    const auto& r = s[RegionKind::Inner];
    CHECK(r.load(Array::UCur) == fetched);
    CHECK(r.store(Array::Scratch) == fetched);
    CHECK(r.load(Array::Scratch) == u(25 * p.cells(RegionKind::Inner)));
    CHECK(r.flops == u(43 * p.cells(RegionKind::Inner)));
}

TEST_CASE("eta-staging variants read eta once per tile plus a one-cell fringe") {
    StepProbe p;
    for (const char* n : {"smem_eta_1", "smem_eta_3", "smem_eta_1_4x4x4"}) {
        CAPTURE(std::string(n));
        const auto cfg = parse_variant(n);
        const auto s = p.step(n);
        const auto regions = decompose(p.d.extents, p.d.pml_width);
        for (int k = 1; k < kRegionCount; ++k) {
            std::uint64_t fetched = 0;
            for (const auto& t : tile3(regions[std::size_t(k)].box, cfg.tiling3))
                fetched += u(t.volume() + halo_cell_count(t.ext, 1));
            const auto& r = s.by_region[std::size_t(k)];
            CHECK(r.load(Array::Eta) == fetched);
            CHECK(r.load(Array::Scratch) == u(7 * regions[std::size_t(k)].box.volume()));
            CHECK(r.flops == u(61 * regions[std::size_t(k)].box.volume()));
        }
        CHECK(s[RegionKind::Inner].load(Array::Eta) == 0u);
    }
}

TEST_CASE("semi-stencil sweep axis: R+1 loads per 2 stores") {
    StepProbe p;
    const auto s = p.step("semi");
    CHECK(s.total.semi_axis_stores > 0);
    CHECK(s.total.semi_axis_loads * 2 == s.total.semi_axis_stores * std::uint64_t(kRadius + 1));
    CHECK(s.total.store(Array::UNext) == u(p.d.extents.volume()));
}

TEST_CASE("streaming variants read u once per column plus the z halo") {
    StepProbe p;
    const auto inner = decompose(p.d.extents, p.d.pml_width)[0].box;
    for (const char* n : {"st_smem_8x8", "st_reg_shft_8x8", "st_reg_fixed_8x8"}) {
        CAPTURE(std::string(n));
        const auto s = p.step(n);
        const auto& r = s[RegionKind::Inner];
        CHECK(r.store(Array::UNext) == u(inner.volume()));
        CHECK(r.flops == u(43 * inner.volume()));
        // Each column streams (ez + 2R) planes of its centre footprint and
        // every in-range plane's lateral halo.
        std::uint64_t expect = 0;
        for (const auto& c : tile2(inner, parse_variant(n).tiling2)) {
            const std::uint64_t face = u(std::int64_t(c.ext[0]) * c.ext[1]);
            const std::uint64_t lateral = u(2LL * kRadius * (c.ext[0] + c.ext[1]));
            expect += face * u(c.ext[2] + 2 * kRadius) + lateral * u(c.ext[2]);
        }
        CHECK(r.load(Array::UCur) == expect);
    }
}

TEST_CASE("propagator argument checks") {
    const Domain d{{20, 20, 20}, 3, 10.0};
    const auto m = homogeneous_medium<double>(d, 2000, 10);
    Propagator<double> prop(parse_variant("gmem_8x8x8"), d, make_coeffs_order8(10));
    auto wf = make_wavefield<double>(d.extents);
    CHECK_THROWS_AS(prop.run(wf, m, {1e-3, 10}, {{5, 5, 5}, std::vector<double>(5)}), ConfigError);
    CHECK_THROWS_AS(prop.run(wf, m, {1e-3, 5}, {{25, 5, 5}, std::vector<double>(5)}), ConfigError);
    CHECK_THROWS_AS(prop.run(wf, m, {1e-3, -1}, {{5, 5, 5}, {}}), ConfigError);
    auto bad = make_wavefield<double>({20, 20, 19});
    CHECK_THROWS_AS(prop.step(bad, m, 1e-3), ConfigError);
    CHECK(prop.tiles(RegionKind::Inner).size() == 2u * 2u * 2u);
}
