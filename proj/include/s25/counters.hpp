#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>

namespace s25 {

/// Arrays a kernel touches. `UPrev` is read as u^{n-1}; the same buffer is
/// written as `UNext`.
enum class Array : int { UCur, UPrev, Velocity, Eta, UNext, Scratch, Count_ };

inline constexpr std::size_t kArrayCount = std::size_t(Array::Count_);
const char* to_string(Array a);

/// Access and operation counts gathered by an instrumented run. Merging is
/// plain addition, so reports can be combined in any order.
struct CounterReport {
    std::array<std::uint64_t, kArrayCount> loads{};
    std::array<std::uint64_t, kArrayCount> stores{};
    std::uint64_t flops = 0;
    std::uint64_t cells = 0;
    // Accesses along the semi-stencil sweep axis in its steady-state loop.
    std::uint64_t semi_axis_loads = 0;
    std::uint64_t semi_axis_stores = 0;

    std::uint64_t load(Array a) const { return loads[std::size_t(a)]; }
    std::uint64_t store(Array a) const { return stores[std::size_t(a)]; }

    std::uint64_t total_loads() const;
    std::uint64_t total_stores() const;
    /// Loads and stores on the global arrays (everything except scratch).
    std::uint64_t global_accesses() const;
    std::uint64_t all_accesses() const { return total_loads() + total_stores(); }

    CounterReport& operator+=(const CounterReport& o);
    friend CounterReport operator+(CounterReport a, const CounterReport& b) { return a += b; }
    friend bool operator==(const CounterReport&, const CounterReport&) = default;
};

std::string describe(const CounterReport& r);

namespace counting {

/// Per-thread sink written by instrumented kernels. Callers reset it before a
/// unit of work and harvest it afterwards.
CounterReport& sink();
inline void reset() { sink() = CounterReport{}; }
inline CounterReport harvest() {
    CounterReport r = sink();
    reset();
    return r;
}

}  // namespace counting

/// Scalar wrapper that counts every arithmetic operation into the thread's
/// sink. Values are bit-identical to the wrapped type.
template <class T>
class Tally {
public:
    Tally() = default;
    Tally(T v) : v_(v) {}  // NOLINT: constants convert implicitly
    T value() const { return v_; }

    friend Tally operator+(Tally a, Tally b) { return bump(a.v_ + b.v_); }
    friend Tally operator-(Tally a, Tally b) { return bump(a.v_ - b.v_); }
    friend Tally operator*(Tally a, Tally b) { return bump(a.v_ * b.v_); }
    friend Tally operator/(Tally a, Tally b) { return bump(a.v_ / b.v_); }

private:
    static Tally bump(T v) {
        ++counting::sink().flops;
        return Tally(v);
    }
    T v_{};
};

/// Memory-access policy for uninstrumented kernels.
template <class T>
struct Plain {
    using real = T;
    static constexpr bool counting = false;
    static real load(const T* p, Array) { return *p; }
    static void store(T* p, real v, Array) { *p = v; }
    static T raw(real v) { return v; }
    static void semi_load() {}
    static void semi_store() {}
    static void cells(std::uint64_t) {}
};

/// Memory-access policy that records each load/store and counts FLOPs
/// through Tally.
template <class T>
struct Counted {
    using real = Tally<T>;
    static constexpr bool counting = true;
    static real load(const T* p, Array a) {
        ++counting::sink().loads[std::size_t(a)];
        return real(*p);
    }
    static void store(T* p, real v, Array a) {
        ++counting::sink().stores[std::size_t(a)];
        *p = v.value();
    }
    static T raw(real v) { return v.value(); }
    static void semi_load() { ++counting::sink().semi_axis_loads; }
    static void semi_store() { ++counting::sink().semi_axis_stores; }
    static void cells(std::uint64_t n) { counting::sink().cells += n; }
};

}  // namespace s25
