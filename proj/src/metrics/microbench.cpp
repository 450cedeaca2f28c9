#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <thread>
#include <vector>

#include "s25/errors.hpp"
#include "s25/metrics.hpp"

namespace s25 {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Runs fn(worker) on `workers` threads at once and returns the results.
template <class Fn>
std::vector<double> on_workers(int workers, Fn fn) {
    std::vector<double> out(std::size_t(workers), 0.0);
    std::vector<std::thread> threads;
    for (int w = 1; w < workers; ++w) threads.emplace_back([&, w] { out[std::size_t(w)] = fn(w); });
    out[0] = fn(0);
    for (auto& t : threads) t.join();
    return out;
}

double sum(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s;
}

/// FLOP/s of Depth independent chains of 16 lanes each, x = x * a + b.
template <class T, int Depth>
double chain_rate(double seconds) {
    constexpr int kLanes = 16;
    constexpr long kInner = 2048;
    alignas(64) T x[Depth][kLanes];
    for (int d = 0; d < Depth; ++d)
        for (int l = 0; l < kLanes; ++l) x[d][l] = T(1) + T(d * kLanes + l) * T(1e-3);
    volatile T va = T(0.9999999), vb = T(1e-7);
    const T a = va, b = vb;
    long blocks = 0;
    double elapsed = 0;
    const auto t0 = Clock::now();
    do {
        for (long it = 0; it < kInner; ++it)
            for (int d = 0; d < Depth; ++d)
                for (int l = 0; l < kLanes; ++l) x[d][l] = x[d][l] * a + b;
        ++blocks;
        elapsed = since(t0);
    } while (elapsed < seconds);
    T s = 0;
    for (int d = 0; d < Depth; ++d)
        for (int l = 0; l < kLanes; ++l) s += x[d][l];
    volatile T keep = s;
    (void)keep;
    return 2.0 * Depth * kLanes * double(kInner) * double(blocks) / elapsed;
}

template <class T>
double peak_for(double duration_s, int workers) {
    const double slice = duration_s / 4.0;
    double best = 0;
    best = std::max(best, sum(on_workers(workers, [&](int) { return chain_rate<T, 2>(slice); })));
    best = std::max(best, sum(on_workers(workers, [&](int) { return chain_rate<T, 4>(slice); })));
    best = std::max(best, sum(on_workers(workers, [&](int) { return chain_rate<T, 8>(slice); })));
    best = std::max(best, sum(on_workers(workers, [&](int) { return chain_rate<T, 16>(slice); })));
    return best * 1e-9;
}

/// Bytes/s of repeated in-place a[i] *= s sweeps over `bytes` of doubles.
double sweep_rate(std::size_t bytes, double seconds) {
    const std::size_t n = std::max<std::size_t>(1, bytes / sizeof(double));
    std::vector<double> a(n, 1.0);
    volatile double vs = 1.0000001;
    const double up = vs, down = 1.0 / up;
    for (auto& v : a) v *= up;  // first touch outside the timed region
    long passes = 0;
    double elapsed = 0;
    const auto t0 = Clock::now();
    do {
        const double s = (passes & 1) ? up : down;
        for (std::size_t i = 0; i < n; ++i) a[i] *= s;
        ++passes;
        elapsed = since(t0);
    } while (elapsed < seconds);
    volatile double keep = a[n / 2];
    (void)keep;
    return 2.0 * double(n) * sizeof(double) * double(passes) / elapsed;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

double bench_peak_flops(double duration_s, int workers, Precision p) {
    if (duration_s < 0.1) throw ConfigError("peak FLOP benchmark needs a duration >= 0.1 s");
    if (workers < 1) throw ConfigError("workers must be >= 1");
    return p == Precision::Single ? peak_for<float>(duration_s, workers)
                                  : peak_for<double>(duration_s, workers);
}

std::vector<std::size_t> bandwidth_sizes(std::size_t max_bytes) {
    std::vector<std::size_t> out;
    for (std::size_t s = 4096; s <= max_bytes; s *= 2) out.push_back(s);
    return out;
}

std::vector<BandwidthSample> bench_bandwidth(const std::vector<std::size_t>& sizes, int workers,
                                             double seconds_per_size) {
    if (workers < 1) throw ConfigError("workers must be >= 1");
    if (sizes.empty()) throw ConfigError("bandwidth benchmark needs at least one size");
    const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
    if (*lo < 4096) throw ConfigError("bandwidth working sets must be >= 4 KiB");
    if (double(*hi) / double(*lo) < 1000.0)
        throw ConfigError("bandwidth working sets must span at least three decades");
    std::vector<BandwidthSample> out;
    for (const std::size_t s : sizes) {
        // The working set is split evenly across workers.
        const std::size_t per = std::max<std::size_t>(sizeof(double), s / std::size_t(workers));
        std::vector<double> trials;
        for (int t = 0; t < 3; ++t)
            trials.push_back(sum(on_workers(workers, [&](int) { return sweep_rate(per, seconds_per_size / 3); })));
        out.push_back({s, median(trials)});
    }
    return out;
}

std::vector<BandwidthLevel> detect_plateaus(const std::vector<BandwidthSample>& samples) {
    if (samples.empty()) throw ConfigError("no bandwidth samples");
    std::map<int, std::vector<double>> by_decade;
    for (const auto& s : samples) by_decade[int(std::floor(std::log10(double(s.bytes))))].push_back(s.bytes_per_s);
    std::vector<double> med;
    for (auto& [d, rates] : by_decade) med.push_back(median(rates));
    const std::size_t mem = med.size() - 1;
    std::size_t near = std::size_t(std::max_element(med.begin(), med.begin() + std::ptrdiff_t(std::max<std::size_t>(mem, 1))) - med.begin());
    if (near > mem) near = mem;
    const std::size_t mid = (near + mem) / 2;
    std::vector<BandwidthLevel> out{{"L-near", med[near]}, {"L-mid", med[mid]}, {"MEM", med[mem]}};
    for (std::size_t i = 1; i < out.size(); ++i)
        out[i].bytes_per_s = std::min(out[i].bytes_per_s, out[i - 1].bytes_per_s);
    return out;
}

MachineProfile characterize(double duration_s, int workers, std::size_t max_bytes) {
    MachineProfile m;
    m.peak_gflops_f32 = bench_peak_flops(duration_s, workers, Precision::Single);
    m.peak_gflops_f64 = bench_peak_flops(duration_s, workers, Precision::Double);
    m.levels = detect_plateaus(bench_bandwidth(bandwidth_sizes(max_bytes), workers));
    m.validate();
    return m;
}

}  // namespace s25
