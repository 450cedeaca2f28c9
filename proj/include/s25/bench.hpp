#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "s25/kernels.hpp"
#include "s25/metrics.hpp"

namespace s25 {

struct BenchPlan {
    Scenario scenario{{256, 256, 256}, 16, 100};
    std::vector<KernelConfig> variants;  // workers and precision come from the plan
    int repeats = 5;
    int warmup = 1;
    int workers = 1;
    Precision precision = Precision::Double;
    bool verify_first = false;
    Scenario verify_scenario{{48, 48, 48}, 4, 50};
};

struct BenchRecord {
    std::string variant;
    std::optional<int> dx, dy, dz;  // unset where the variant has no such tile axis
    Precision precision = Precision::Double;
    int workers = 1;
    std::vector<double> times;  // timed repeats, seconds
    double mean_s = 0;
    double stddev_s = 0;  // sample standard deviation; 0 for a single repeat
    std::uint64_t flops = 0;
    double gflops = 0;    // flops / mean_s / 1e9
    double ai_mem = 0;
    double ai_near = 0;
    std::optional<double> pct_mem, pct_near;  // set when a profile was supplied
};

struct BenchHooks {
    /// Called before every execution with the variant name, the run index
    /// counted from 0 across warmup and repeats, and whether it is a warmup.
    std::function<void(const std::string&, int, bool)> on_run;
};

/// Warmup runs are discarded, repeats are timed around the full propagation
/// (allocation and medium setup excluded). Every variant is validated
/// before any is run. Throws VerificationError naming the first variant
/// that misses tolerance when plan.verify_first is set.
std::vector<BenchRecord> run_bench(const BenchPlan& plan, const MachineProfile* profile = nullptr,
                                   const BenchHooks& hooks = {});

struct Ranked {
    std::string variant;
    double mean_s = 0;
    double speedup = 0;  // baseline mean / variant mean
};

/// Records sorted by speedup, fastest first. Throws ConfigError when the
/// baseline is missing.
std::vector<Ranked> compare(const std::vector<BenchRecord>& records, const std::string& baseline);

inline constexpr std::array<const char*, 13> kResultsColumns = {
    "variant", "Dx",     "Dy",     "Dz",   "precision", "workers",  "mean_s",
    "stddev_s", "gflops", "ai_mem", "pct_mem", "ai_near", "pct_near"};

void write_results_csv(std::ostream& os, const std::vector<BenchRecord>& records);

/// Parses a results CSV written by write_results_csv. Throws FormatError.
std::vector<BenchRecord> read_results_csv(std::istream& is);

}  // namespace s25
