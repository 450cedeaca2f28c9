#include "s25/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "s25/errors.hpp"

namespace s25 {

namespace {

void set_dims(BenchRecord& r, const KernelConfig& c) {
    if (uses_tiling3(c.variant)) {
        r.dx = c.tiling3.dx;
        r.dy = c.tiling3.dy;
        r.dz = c.tiling3.dz;
    } else if (uses_tiling2(c.variant)) {
        r.dx = c.tiling2.dx;
        r.dy = c.tiling2.dy;
    }
}

void summarize(BenchRecord& r) {
    const double n = double(r.times.size());
    double s = 0;
    for (double t : r.times) s += t;
    r.mean_s = s / n;
    double ss = 0;
    for (double t : r.times) ss += (t - r.mean_s) * (t - r.mean_s);
    r.stddev_s = r.times.size() > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
}

template <class T>
BenchRecord bench_one(const BenchPlan& plan, const KernelConfig& cfg, const Problem<T>& p,
                      const MachineProfile* profile, const BenchHooks& hooks) {
    BenchRecord rec;
    rec.variant = variant_name(cfg);
    set_dims(rec, cfg);
    rec.precision = cfg.precision;
    rec.workers = cfg.workers;

    Propagator<T> prop(cfg, p.domain, p.coeffs);
    auto wf = make_wavefield<T>(p.domain.extents);
    const int total = plan.warmup + plan.repeats;
    for (int run = 0; run < total; ++run) {
        const bool warm = run < plan.warmup;
        std::fill(wf.prev.raw().begin(), wf.prev.raw().end(), T(0));
        std::fill(wf.cur.raw().begin(), wf.cur.raw().end(), T(0));
        if (hooks.on_run) hooks.on_run(rec.variant, run, warm);
        const auto t0 = std::chrono::steady_clock::now();
        prop.run(wf, p.medium, p.time, p.source);
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!warm) rec.times.push_back(dt);
    }
    summarize(rec);

    // Access structure does not depend on values, so one instrumented step
    // on a fresh wavefield gives the per-step traffic.
    KernelConfig ic = cfg;
    ic.instrument = true;
    Propagator<T> counted(ic, p.domain, p.coeffs);
    auto cwf = make_wavefield<T>(p.domain.extents);
    StepCounters sc;
    counted.step(cwf, p.medium, p.time.dt, &sc);
    const Traffic tr = measure(sc.total, cfg.precision);
    rec.ai_mem = tr.ai_mem();
    rec.ai_near = tr.ai_near();

    rec.flops = flop_model(cfg, p.domain, p.time.steps);
    rec.gflops = double(rec.flops) / rec.mean_s * 1e-9;
    if (profile && !profile->levels.empty()) {
        const double peak = profile->peak_gflops(cfg.precision);
        const auto& near = profile->levels.front();
        const BandwidthLevel* mem = profile->level("MEM");
        if (!mem) mem = &profile->levels.back();
        rec.pct_mem = achieved_pct(rec.gflops, attainable(rec.ai_mem, peak, *mem).attainable_gflops);
        rec.pct_near = achieved_pct(rec.gflops, attainable(rec.ai_near, peak, near).attainable_gflops);
    }
    return rec;
}

template <class T>
std::vector<BenchRecord> run_bench_as(const BenchPlan& plan, const std::vector<KernelConfig>& cfgs,
                                      const MachineProfile* profile, const BenchHooks& hooks) {
    const auto p = make_problem<T>(plan.scenario);
    std::vector<BenchRecord> out;
    for (const auto& c : cfgs) out.push_back(bench_one<T>(plan, c, p, profile, hooks));
    return out;
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

std::vector<BenchRecord> run_bench(const BenchPlan& plan, const MachineProfile* profile,
                                   const BenchHooks& hooks) {
    if (plan.repeats < 1) throw ConfigError("bench: repeats must be >= 1");
    if (plan.warmup < 0) throw ConfigError("bench: warmup must be >= 0");
    if (plan.scenario.steps < 1) throw ConfigError("bench: steps must be >= 1");
    if (plan.variants.empty()) throw ConfigError("bench: no variants given");
    if (profile) profile->validate();
    decompose(plan.scenario.extents, plan.scenario.pml_width);

    std::vector<KernelConfig> cfgs;
    for (auto c : plan.variants) {
        c.workers = plan.workers;
        c.precision = plan.precision;
        c.instrument = false;
        validate(c);
        cfgs.push_back(c);
    }
    if (plan.verify_first) {
        for (const auto& c : cfgs) {
            const auto r = verify(c, plan.verify_scenario);
            if (!within_tolerance(r, c.precision))
                throw VerificationError("bench: variant " + variant_name(c) +
                                        " failed verification (rel_L2 " + num(r.rel_l2) +
                                        ", rel_Linf " + num(r.rel_linf) + ")");
        }
    }
    return plan.precision == Precision::Single ? run_bench_as<float>(plan, cfgs, profile, hooks)
                                               : run_bench_as<double>(plan, cfgs, profile, hooks);
}

std::vector<Ranked> compare(const std::vector<BenchRecord>& records, const std::string& baseline) {
    const auto it = std::find_if(records.begin(), records.end(),
                                 [&](const BenchRecord& r) { return r.variant == baseline; });
    if (it == records.end()) throw ConfigError("compare: baseline '" + baseline + "' not in results");
    std::vector<Ranked> out;
    for (const auto& r : records) out.push_back({r.variant, r.mean_s, it->mean_s / r.mean_s});
    std::stable_sort(out.begin(), out.end(),
                     [](const Ranked& a, const Ranked& b) { return a.speedup > b.speedup; });
    return out;
}

void write_results_csv(std::ostream& os, const std::vector<BenchRecord>& records) {
    for (std::size_t i = 0; i < kResultsColumns.size(); ++i)
        os << (i ? "," : "") << kResultsColumns[i];
    os << '\n';
    const auto opt_i = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); };
    const auto opt_d = [](const std::optional<double>& v) { return v ? num(*v) : std::string(); };
    for (const auto& r : records) {
        os << r.variant << ',' << opt_i(r.dx) << ',' << opt_i(r.dy) << ',' << opt_i(r.dz) << ','
           << to_string(r.precision) << ',' << r.workers << ',' << num(r.mean_s) << ','
           << num(r.stddev_s) << ',' << num(r.gflops) << ',' << num(r.ai_mem) << ','
           << opt_d(r.pct_mem) << ',' << num(r.ai_near) << ',' << opt_d(r.pct_near) << '\n';
    }
}

std::vector<BenchRecord> read_results_csv(std::istream& is) {
    std::string line;
    std::size_t offset = 0;
    if (!std::getline(is, line)) throw FormatError("results CSV is empty", 0);
    offset += line.size() + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split(line);
    if (header.size() != kResultsColumns.size() ||
        !std::equal(header.begin(), header.end(), kResultsColumns.begin()))
        throw FormatError("results CSV header does not match the expected columns", 0);

    std::vector<BenchRecord> out;
    while (std::getline(is, line)) {
        const std::size_t here = offset;
        offset += line.size() + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != kResultsColumns.size())
            throw FormatError("results CSV row has " + std::to_string(f.size()) + " fields", here);
        const auto to_d = [&](const std::string& s) {
            char* end = nullptr;
            const double v = std::strtod(s.c_str(), &end);
            if (s.empty() || *end != '\0') throw FormatError("results CSV: bad number '" + s + "'", here);
            return v;
        };
        const auto opt_i = [&](const std::string& s) -> std::optional<int> {
            if (s.empty()) return std::nullopt;
            return int(to_d(s));
        };
        const auto opt_d = [&](const std::string& s) -> std::optional<double> {
            if (s.empty()) return std::nullopt;
            return to_d(s);
        };
        BenchRecord r;
        r.variant = f[0];
        r.dx = opt_i(f[1]);
        r.dy = opt_i(f[2]);
        r.dz = opt_i(f[3]);
        try {
            r.precision = parse_precision(f[4]);
        } catch (const ConfigError&) {
            throw FormatError("results CSV: bad precision '" + f[4] + "'", here);
        }
        r.workers = int(to_d(f[5]));
        r.mean_s = to_d(f[6]);
        r.stddev_s = to_d(f[7]);
        r.gflops = to_d(f[8]);
        r.ai_mem = to_d(f[9]);
        r.pct_mem = opt_d(f[10]);
        r.ai_near = to_d(f[11]);
        r.pct_near = opt_d(f[12]);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace s25
