#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "s25/errors.hpp"

namespace s25 {

enum class Precision { Single, Double };

template <class T>
constexpr Precision precision_of() {
    static_assert(std::is_same_v<T, float> || std::is_same_v<T, double>);
    return std::is_same_v<T, float> ? Precision::Single : Precision::Double;
}

constexpr std::size_t word_size(Precision p) { return p == Precision::Single ? 4 : 8; }
const char* to_string(Precision p);
Precision parse_precision(const std::string& s);  // "f32"/"single" or "f64"/"double"

/// Cell counts of the extended domain (inner region plus PML on every face).
struct Extents {
    int nx = 1;
    int ny = 1;
    int nz = 1;

    std::int64_t volume() const {
        return std::int64_t(nx) * std::int64_t(ny) * std::int64_t(nz);
    }
    int operator[](int axis) const { return axis == 0 ? nx : axis == 1 ? ny : nz; }
    friend bool operator==(const Extents&, const Extents&) = default;
};

/// Padded scalar field, x innermost. The pad is a zero fringe that kernels
/// read unconditionally and never write.
template <class T>
class Grid3 {
public:
    using value_type = T;

    Grid3() = default;
    Grid3(Extents e, int pad) : ext_(e), pad_(pad) {
        if (e.nx < 1 || e.ny < 1 || e.nz < 1)
            throw ConfigError("grid extents must be >= 1 on every axis");
        if (pad < 0) throw ConfigError("grid pad must be non-negative");
        px_ = e.nx + 2 * pad;
        py_ = e.ny + 2 * pad;
        pz_ = e.nz + 2 * pad;
        data_.assign(std::size_t(px_) * std::size_t(py_) * std::size_t(pz_), T(0));
    }

    const Extents& extents() const { return ext_; }
    int pad() const { return pad_; }
    static constexpr Precision precision() { return precision_of<T>(); }

    std::ptrdiff_t stride_y() const { return px_; }
    std::ptrdiff_t stride_z() const { return std::ptrdiff_t(px_) * py_; }
    std::size_t padded_volume() const { return data_.size(); }

    /// Offset of cell (i, j, k); coordinates may reach `pad` cells outside
    /// the extended domain.
    std::ptrdiff_t linear_index(int i, int j, int k) const {
        assert(i >= -pad_ && i < ext_.nx + pad_);
        assert(j >= -pad_ && j < ext_.ny + pad_);
        assert(k >= -pad_ && k < ext_.nz + pad_);
        return (std::ptrdiff_t(k + pad_) * py_ + (j + pad_)) * px_ + (i + pad_);
    }

    T& at(int i, int j, int k) { return data_[std::size_t(linear_index(i, j, k))]; }
    const T& at(int i, int j, int k) const {
        return data_[std::size_t(linear_index(i, j, k))];
    }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }
    std::span<T> raw() { return data_; }
    std::span<const T> raw() const { return data_; }

    /// Sets every non-padding cell to `v`.
    void fill_interior(T v) {
        for_each_interior([&](int i, int j, int k) { at(i, j, k) = v; });
    }

    template <class F>
    void for_each_interior(F&& f) const {
        for (int k = 0; k < ext_.nz; ++k)
            for (int j = 0; j < ext_.ny; ++j)
                for (int i = 0; i < ext_.nx; ++i) f(i, j, k);
    }

    bool padding_is_zero() const {
        for (int k = -pad_; k < ext_.nz + pad_; ++k)
            for (int j = -pad_; j < ext_.ny + pad_; ++j)
                for (int i = -pad_; i < ext_.nx + pad_; ++i) {
                    const bool inside = i >= 0 && i < ext_.nx && j >= 0 && j < ext_.ny &&
                                        k >= 0 && k < ext_.nz;
                    if (!inside && at(i, j, k) != T(0)) return false;
                }
        return true;
    }

private:
    Extents ext_{};
    int pad_ = 0;
    int px_ = 0, py_ = 0, pz_ = 0;
    std::vector<T> data_;
};

template <class T>
Grid3<T> alloc(Extents e, int pad) {
    return Grid3<T>(e, pad);
}

/// Largest |value| over non-padding cells. NaN propagates.
template <class T>
T max_abs(const Grid3<T>& g) {
    T m = 0;
    const auto& e = g.extents();
    for (int k = 0; k < e.nz; ++k)
        for (int j = 0; j < e.ny; ++j) {
            const T* row = &g.at(0, j, k);
            for (int i = 0; i < e.nx; ++i) {
                const T a = std::abs(row[i]);
                if (std::isnan(a)) return a;
                if (a > m) m = a;
            }
        }
    return m;
}

template <class T>
bool all_finite(const Grid3<T>& g) {
    return std::isfinite(max_abs(g));
}

// --- snapshots ------------------------------------------------------------
//
// Little-endian layout: "WVF1", u32 nx, u32 ny, u32 nz, u8 precision code
// (4 = single, 8 = double), u64 step, then nx*ny*nz scalars, x innermost,
// padding excluded.

using AnyGrid = std::variant<Grid3<float>, Grid3<double>>;

struct Snapshot {
    AnyGrid grid;
    std::uint64_t step = 0;
};

template <class T>
void snapshot_write(const Grid3<T>& g, std::uint64_t step, std::ostream& sink);

/// Reads a snapshot, allocating the grid with `pad` cells of zero padding.
Snapshot snapshot_read(std::istream& source, int pad = 4);

}  // namespace s25
