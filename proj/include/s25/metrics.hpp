#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "s25/counters.hpp"
#include "s25/grid.hpp"
#include "s25/kernels.hpp"

namespace s25 {

// --- analytic FLOP model ------------------------------------------------------

/// FLOPs one cell costs per step, derived from the update expressions.
struct CellFlops {
    std::uint64_t inner = 0;
    std::uint64_t pml = 0;
};

/// Laplacian + update. The semi-stencil splits the z pairs into separate
/// multiply-adds: forward 1 + 6R + 2R, backward 2R.
CellFlops cell_flops(VariantId v);

/// Forward-phase FLOPs of one semi-stencil cell (center, x/y pairs, lower z).
inline constexpr std::uint64_t kSemiForwardFlops = 1 + 6 * kRadius + 2 * kRadius;  // 33
inline constexpr std::uint64_t kSemiBackwardFlops = 2 * kRadius;                   // 8

/// FLOPs of one stencil step over the extended domain (no source term).
std::uint64_t flop_model_step(const KernelConfig& cfg, const Domain& d);

/// Total FLOPs of `steps` steps including the source injection.
std::uint64_t flop_model(const KernelConfig& cfg, const Domain& d, int steps);

// --- arithmetic intensity and roofline --------------------------------------------

/// flops / bytes. Throws std::domain_error when bytes == 0.
double arithmetic_intensity(double flops, double bytes);

/// Bytes implied by a counter report at a precision.
struct Traffic {
    std::uint64_t flops = 0;
    std::uint64_t bytes_global = 0;  // all arrays except scratch
    std::uint64_t bytes_all = 0;     // including scratch

    /// Intensity against traffic that leaves the worker (memory level).
    double ai_mem() const { return arithmetic_intensity(double(flops), double(bytes_global)); }
    /// Intensity against every access the kernel issues (nearest level).
    double ai_near() const { return arithmetic_intensity(double(flops), double(bytes_all)); }
};

Traffic measure(const CounterReport& r, Precision p);

struct BandwidthLevel {
    std::string label;   // L-near, L-mid or MEM
    double bytes_per_s;  // > 0
};

struct MachineProfile {
    double peak_gflops_f32 = 0;
    double peak_gflops_f64 = 0;
    std::vector<BandwidthLevel> levels;  // nearest cache first

    double peak_gflops(Precision p) const {
        return p == Precision::Single ? peak_gflops_f32 : peak_gflops_f64;
    }
    const BandwidthLevel* level(const std::string& label) const;
    /// Throws ConfigError unless peaks and bandwidths are positive and
    /// bandwidths are non-increasing toward memory.
    void validate() const;
};

struct Ceiling {
    std::string label;
    double attainable_gflops = 0;
    bool memory_bound = false;
};

/// min(peak, ai * bw) in GFLOP/s.
Ceiling attainable(double ai, double peak_gflops, const BandwidthLevel& bw);

/// One ceiling per bandwidth level of the profile.
std::vector<Ceiling> roofline_attainable(double ai, const MachineProfile& m, Precision p);

/// 100 * achieved / attainable.
double achieved_pct(double achieved_gflops, double attainable_gflops);

struct RooflinePoint {
    std::string label;
    double ai = 0;
    double gflops = 0;
    std::vector<Ceiling> ceilings;
    std::vector<double> achieved_pct;  // per ceiling
};

RooflinePoint roofline_point(const std::string& label, double ai, double gflops,
                             const MachineProfile& m, Precision p);

// --- profile file -----------------------------------------------------------------

/// key=value lines: peak_gflops_f32, peak_gflops_f64 and bw_<label> in bytes/s.
void write_profile(std::ostream& os, const MachineProfile& m);
/// Throws FormatError on malformed lines, ConfigError on invalid content.
MachineProfile read_profile(std::istream& is);

// --- micro-benchmarks ---------------------------------------------------------------

/// Sustained multiply-add rate of unrolled independent chains on in-cache
/// data, best over chain depths {2, 4, 8, 16}, summed over `workers`
/// concurrent threads. GFLOP/s. Throws ConfigError for duration < 0.1 s.
double bench_peak_flops(double duration_s, int workers, Precision p);

struct BandwidthSample {
    std::size_t bytes = 0;
    double bytes_per_s = 0;
};

/// Powers of two from 4 KiB to `max_bytes`.
std::vector<std::size_t> bandwidth_sizes(std::size_t max_bytes = std::size_t(256) << 20);

/// Read-multiply-write sweep rate per working-set size; traffic counts one
/// read and one write per element. Throws ConfigError for sizes below
/// 4 KiB or a size list spanning less than three decades.
std::vector<BandwidthSample> bench_bandwidth(const std::vector<std::size_t>& sizes, int workers,
                                             double seconds_per_size = 0.05);

/// Levels from samples: per-decade median rates; L-near is the fastest
/// decade, MEM the largest-size decade, L-mid the decade halfway between
/// them. A running minimum makes the levels non-increasing.
std::vector<BandwidthLevel> detect_plateaus(const std::vector<BandwidthSample>& samples);

/// Full characterization as written by the `machine` command.
MachineProfile characterize(double duration_s, int workers, std::size_t max_bytes);

}  // namespace s25
