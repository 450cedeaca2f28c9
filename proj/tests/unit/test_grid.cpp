#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

#include "s25/errors.hpp"
#include "s25/grid.hpp"

using namespace s25;

TEST_CASE("grid allocation is zero-filled with zero padding") {
    Grid3<double> g({5, 4, 3}, 2);
    CHECK(g.padded_volume() == std::size_t(9 * 8 * 7));
    CHECK(g.padding_is_zero());
    CHECK(max_abs(g) == 0.0);
    g.fill_interior(1.5);
    CHECK(g.padding_is_zero());
    CHECK(g.at(4, 3, 2) == 1.5);
    CHECK(g.at(-1, 0, 0) == 0.0);
}

TEST_CASE("linear index follows x-fastest padded layout") {
    const int p = 3;
    Grid3<float> g({7, 5, 4}, p);
    const std::ptrdiff_t px = 7 + 2 * p, py = 5 + 2 * p;
    CHECK(g.stride_y() == px);
    CHECK(g.stride_z() == px * py);
    for (int k = -p; k < 4 + p; ++k)
        for (int j = -p; j < 5 + p; ++j)
            for (int i = -p; i < 7 + p; ++i)
                REQUIRE(g.linear_index(i, j, k) == ((k + p) * py + (j + p)) * px + (i + p));
}

TEST_CASE("invalid grids are rejected") {
    CHECK_THROWS_AS(Grid3<double>({0, 4, 4}, 1), ConfigError);
    CHECK_THROWS_AS(Grid3<double>({4, 4, 4}, -1), ConfigError);
}

TEST_CASE("max_abs and all_finite") {
    Grid3<double> g({3, 3, 3}, 1);
    g.at(1, 2, 0) = -4.0;
    CHECK(max_abs(g) == 4.0);
    CHECK(all_finite(g));
    g.at(0, 0, 2) = std::numeric_limits<double>::quiet_NaN();
    CHECK(std::isnan(max_abs(g)));
    CHECK_FALSE(all_finite(g));
    g.at(0, 0, 2) = std::numeric_limits<double>::infinity();
    CHECK_FALSE(all_finite(g));
}

TEST_CASE("precision names") {
    CHECK(parse_precision("f32") == Precision::Single);
    CHECK(parse_precision("double") == Precision::Double);
    CHECK(std::string(to_string(Precision::Single)) == "f32");
    CHECK(word_size(Precision::Double) == 8);
    CHECK_THROWS_AS(parse_precision("f16"), ConfigError);
}

template <class T>
static Grid3<T> ramp(Extents e) {
    Grid3<T> g(e, 4);
    g.for_each_interior([&](int i, int j, int k) { g.at(i, j, k) = T(i + 10 * j + 100 * k) / T(7); });
    return g;
}

TEST_CASE_TEMPLATE("snapshot round trip", T, float, double) {
    const auto g = ramp<T>({6, 5, 4});
    std::stringstream ss;
    snapshot_write(g, 42, ss);
    const std::string bytes = ss.str();
    CHECK(bytes.size() == 4 + 12 + 1 + 8 + std::size_t(6 * 5 * 4) * sizeof(T));
    CHECK(bytes.substr(0, 4) == "WVF1");
    std::uint32_t nx = 0;
    std::memcpy(&nx, bytes.data() + 4, 4);
    CHECK(nx == 6u);
    CHECK(std::uint8_t(bytes[16]) == sizeof(T));

    std::istringstream in(bytes);
    const Snapshot s = snapshot_read(in);
    CHECK(s.step == 42u);
    const auto* back = std::get_if<Grid3<T>>(&s.grid);
    REQUIRE(back != nullptr);
    CHECK(back->extents() == g.extents());
    bool same = true;
    g.for_each_interior([&](int i, int j, int k) { same = same && back->at(i, j, k) == g.at(i, j, k); });
    CHECK(same);
    CHECK(back->padding_is_zero());
}

TEST_CASE("malformed snapshots report the failing offset") {
    const auto g = ramp<double>({3, 3, 3});
    std::stringstream ss;
    snapshot_write(g, 1, ss);
    const std::string good = ss.str();

    SUBCASE("truncated payload") {
        std::istringstream in(good.substr(0, good.size() - 5));
        try {
            snapshot_read(in);
            FAIL("expected FormatError");
        } catch (const FormatError& e) {
            CHECK(e.offset() == good.size() - 5);
        }
    }
    SUBCASE("bad magic") {
        std::string bad = good;
        bad[0] = 'X';
        std::istringstream in(bad);
        try {
            snapshot_read(in);
            FAIL("expected FormatError");
        } catch (const FormatError& e) {
            CHECK(e.offset() == 0u);
        }
    }
    SUBCASE("unknown precision code") {
        std::string bad = good;
        bad[16] = 2;
        std::istringstream in(bad);
        try {
            snapshot_read(in);
            FAIL("expected FormatError");
        } catch (const FormatError& e) {
            CHECK(e.offset() == 16u);
        }
    }
    SUBCASE("zero extent") {
        std::string bad = good;
        std::memset(bad.data() + 8, 0, 4);
        std::istringstream in(bad);
        CHECK_THROWS_AS(snapshot_read(in), FormatError);
    }
}
