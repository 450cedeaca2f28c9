#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "s25/bench.hpp"
#include "s25/kernels.hpp"
#include "s25/metrics.hpp"

namespace s25 {

/// Process exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitUnstable = 2, kExitVerify = 3 };

/// Everything a config file can set. Unset optionals mean "derive".
struct Config {
    // [geometry]
    Domain domain{{64, 64, 64}, 8, 10.0};
    // [medium]
    std::string model = "homogeneous";  // homogeneous | layered | random
    double velocity = 2000.0;
    std::vector<std::pair<int, double>> layers;
    double v_min = 1500.0, v_max = 4500.0;
    double eta_max = 100.0;
    std::uint64_t seed = 1;
    // [time]
    std::optional<double> dt;
    int steps = 100;
    // [source]
    std::optional<Coord3> source;
    std::optional<double> f_peak, t0;
    double amplitude = 1.0;
    // [kernel]
    KernelConfig kernel{};
    // [output]
    int snapshot_interval = 0;  // 0: initial and final snapshots only
    std::string out_dir = "out";
    // [bench]
    int repeats = 5;
    int warmup = 1;
    std::vector<std::string> bench_variants;
    bool verify_first = false;
    std::string baseline;

    /// Largest velocity the medium can hold; drives the default dt.
    double max_velocity() const;
    double min_velocity() const;
};

/// Parses INI text. Unknown sections or keys are errors; all violations are
/// collected and reported together, each prefixed with section.key.
Config parse_config(const std::string& text);
Config load_config(const std::string& path);

/// Cross-field checks (geometry, CFL, tile rules, source placement).
/// Throws ConfigError listing every violation.
void validate_config(const Config& c);

/// "0:1500,32:2500" -> {(0, 1500), (32, 2500)}.
std::vector<std::pair<int, double>> parse_layers(const std::string& s);

template <class T>
Problem<T> build_problem(const Config& c);

/// Default variant list of the verification suite: one per VariantId.
std::vector<std::string> default_variant_list();

/// Roofline chart: log-log axes, one ceiling polyline per bandwidth level,
/// the compute roof, and one labeled point per record annotated with its
/// percentage of the memory-level ceiling.
std::string roofline_svg(const std::vector<BenchRecord>& records, const MachineProfile& m);

/// Entry point of the `s25` tool; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace s25
