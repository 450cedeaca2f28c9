#include <algorithm>
#include <stdexcept>

#include "s25/errors.hpp"
#include "s25/metrics.hpp"

namespace s25 {

double arithmetic_intensity(double flops, double bytes) {
    if (!(bytes > 0)) throw std::domain_error("arithmetic intensity undefined for zero bytes");
    return flops / bytes;
}

Traffic measure(const CounterReport& r, Precision p) {
    const std::uint64_t w = word_size(p);
    return {r.flops, r.global_accesses() * w, r.all_accesses() * w};
}

const BandwidthLevel* MachineProfile::level(const std::string& label) const {
    for (const auto& l : levels)
        if (l.label == label) return &l;
    return nullptr;
}

void MachineProfile::validate() const {
    if (!(peak_gflops_f32 > 0) || !(peak_gflops_f64 > 0))
        throw ConfigError("machine profile: peak GFLOP/s must be > 0 for both precisions");
    if (levels.empty()) throw ConfigError("machine profile: no bandwidth levels");
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (!(levels[i].bytes_per_s > 0))
            throw ConfigError("machine profile: bandwidth " + levels[i].label + " must be > 0");
        if (i > 0 && levels[i].bytes_per_s > levels[i - 1].bytes_per_s)
            throw ConfigError("machine profile: bandwidth must not increase from " +
                              levels[i - 1].label + " to " + levels[i].label);
    }
}

Ceiling attainable(double ai, double peak_gflops, const BandwidthLevel& bw) {
    const double mem = ai * bw.bytes_per_s * 1e-9;
    return {bw.label, std::min(peak_gflops, mem), mem < peak_gflops};
}

std::vector<Ceiling> roofline_attainable(double ai, const MachineProfile& m, Precision p) {
    std::vector<Ceiling> out;
    for (const auto& l : m.levels) out.push_back(attainable(ai, m.peak_gflops(p), l));
    return out;
}

double achieved_pct(double achieved_gflops, double attainable_gflops) {
    if (!(attainable_gflops > 0)) throw std::domain_error("attainable performance must be > 0");
    return 100.0 * achieved_gflops / attainable_gflops;
}

RooflinePoint roofline_point(const std::string& label, double ai, double gflops,
                             const MachineProfile& m, Precision p) {
    RooflinePoint pt{label, ai, gflops, roofline_attainable(ai, m, p), {}};
    for (const auto& c : pt.ceilings) pt.achieved_pct.push_back(achieved_pct(gflops, c.attainable_gflops));
    return pt;
}

}  // namespace s25
