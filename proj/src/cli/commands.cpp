#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "s25/cli.hpp"
#include "s25/errors.hpp"

namespace s25 {

namespace fs = std::filesystem;

namespace {

struct Globals {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<std::string> precision;
    std::string csv;
    std::optional<std::string> out;
};

Config resolve_config(const Globals& g) {
    Config c = g.config.empty() ? Config{} : load_config(g.config);
    if (g.seed) c.seed = *g.seed;
    if (g.workers) c.kernel.workers = *g.workers;
    if (g.precision) c.kernel.precision = parse_precision(*g.precision);
    if (g.out) c.out_dir = *g.out;
    validate_config(c);
    return c;
}

std::string snapshot_path(const std::string& dir, int step) {
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%06d.wvf", step);
    return (fs::path(dir) / name).string();
}

template <class T>
void write_snapshot(const std::string& dir, const Grid3<T>& g, int step) {
    std::ofstream f(snapshot_path(dir, step), std::ios::binary);
    if (!f) throw ConfigError("cannot write snapshot into '" + dir + "'");
    snapshot_write(g, std::uint64_t(step), f);
    if (!f) throw ConfigError("failed writing snapshot into '" + dir + "'");
}

/// Writes `text` to `path`, or to stdout for "-".
void emit(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    if (const auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    f << text;
}

std::string fmtd(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// --- run ----------------------------------------------------------------------

template <class T>
int run_as(const Config& c) {
    const auto p = build_problem<T>(c);
    fs::create_directories(c.out_dir);
    Propagator<T> prop(c.kernel, p.domain, p.coeffs);
    auto wf = make_wavefield<T>(p.domain.extents);
    int written = 0;
    write_snapshot(c.out_dir, wf.cur, 0);
    ++written;
    PropagateOptions<T> opt;
    opt.on_step = [&](int n, const Grid3<T>& u) {
        if (c.snapshot_interval > 0 && n % c.snapshot_interval == 0 && n != c.steps) {
            write_snapshot(c.out_dir, u, n);
            ++written;
        }
    };
    prop.run(wf, p.medium, p.time, p.source, opt);
    if (c.steps > 0) {
        write_snapshot(c.out_dir, wf.cur, c.steps);
        ++written;
    }
    std::cout << variant_name(c.kernel) << " (" << to_string(c.kernel.precision) << ", "
              << c.kernel.workers << " worker(s)): " << c.steps << " steps, dt " << fmtd("%.6g", p.time.dt)
              << " s, max|u| " << fmtd("%.6g", double(max_abs(wf.cur))) << ", " << written
              << " snapshot(s) in " << c.out_dir << '\n';
    return kExitOk;
}

int cmd_run(const Globals& g) {
    const Config c = resolve_config(g);
    return c.kernel.precision == Precision::Single ? run_as<float>(c) : run_as<double>(c);
}

// --- verify -----------------------------------------------------------------------

struct VerifyArgs {
    std::vector<std::string> variants;
    std::string inject_fault;
};

int cmd_verify(const Globals& g, const VerifyArgs& a) {
    const Config c = resolve_config(g);
    Scenario s;
    s.seed = c.seed;
    if (!g.config.empty()) {
        s.extents = c.domain.extents;
        s.pml_width = c.domain.pml_width;
        s.h = c.domain.h;
        s.steps = c.steps;
        if (c.model == "random") {
            s.v_min = c.v_min;
            s.v_max = c.v_max;
        }
        s.eta_max = c.eta_max;
    }
    const auto names = a.variants.empty() ? default_variant_list() : a.variants;
    std::vector<KernelConfig> cfgs;
    for (const auto& n : names) {
        auto k = parse_variant(n);
        k.workers = c.kernel.workers;
        k.precision = c.kernel.precision;
        validate(k);
        cfgs.push_back(k);
    }
    const Precision prec = c.kernel.precision;
    std::printf("%-22s %-4s %12s %12s  %s\n", "variant", "prec", "rel_L2", "rel_Linf", "status");
    bool all_ok = true;
    for (const auto& k : cfgs) {
        VerifyOptions vo;
        if (!a.inject_fault.empty() && variant_name(k) == variant_name(parse_variant(a.inject_fault)))
            vo.perturb = 1e-3;
        const auto r = verify(k, s, vo);
        const bool ok = within_tolerance(r, prec);
        all_ok = all_ok && ok;
        std::printf("%-22s %-4s %12.3e %12.3e  %s\n", variant_name(k).c_str(), to_string(prec),
                    r.rel_l2, r.rel_linf, ok ? "PASS" : "FAIL");
    }
    std::printf("tolerance: rel_L2 <= %.0e, rel_Linf <= %.0e (%s)\n", verify_tolerance(prec),
                verify_tolerance_linf(prec), to_string(prec));
    return all_ok ? kExitOk : kExitVerify;
}

// --- bench ------------------------------------------------------------------------

struct BenchArgs {
    std::vector<std::string> variants;
    std::optional<int> repeats, warmup, size, pml, steps;
    std::string profile, baseline;
    bool verify_first = false;
};

int cmd_bench(const Globals& g, const BenchArgs& a) {
    const Config c = resolve_config(g);
    BenchPlan plan;
    if (!g.config.empty()) plan.scenario = {c.domain.extents, c.domain.pml_width, c.steps, c.seed, c.domain.h};
    plan.scenario.seed = c.seed;
    if (a.size) plan.scenario.extents = {*a.size, *a.size, *a.size};
    if (a.pml) plan.scenario.pml_width = *a.pml;
    if (a.steps) plan.scenario.steps = *a.steps;
    plan.repeats = a.repeats.value_or(c.repeats);
    plan.warmup = a.warmup.value_or(c.warmup);
    plan.workers = c.kernel.workers;
    plan.precision = c.kernel.precision;
    plan.verify_first = a.verify_first || c.verify_first;
    auto names = !a.variants.empty() ? a.variants : c.bench_variants;
    if (names.empty()) names = default_variant_list();
    for (const auto& n : names) plan.variants.push_back(parse_variant(n));

    std::optional<MachineProfile> prof;
    if (!a.profile.empty()) {
        std::ifstream f(a.profile);
        if (!f) throw ConfigError("cannot open machine profile '" + a.profile + "'");
        prof = read_profile(f);
    }
    const auto& e = plan.scenario.extents;
    std::fprintf(stderr, "bench: %dx%dx%d, w=%d, %d steps, %d warmup + %d repeats, %d worker(s), %s\n",
                 e.nx, e.ny, e.nz, plan.scenario.pml_width, plan.scenario.steps, plan.warmup,
                 plan.repeats, plan.workers, to_string(plan.precision));
    BenchHooks hooks;
    hooks.on_run = [](const std::string& v, int run, bool warm) {
        std::fprintf(stderr, "  %s %s %d\n", v.c_str(), warm ? "warmup" : "repeat", run);
    };
    const auto recs = run_bench(plan, prof ? &*prof : nullptr, hooks);

    std::ostringstream csv;
    write_results_csv(csv, recs);
    const std::string path = g.csv.empty() ? (fs::path(c.out_dir) / "results.csv").string() : g.csv;
    emit(path, csv.str());

    if (path != "-") {
        std::printf("%-22s %12s %12s %10s %8s %8s\n", "variant", "mean_s", "stddev_s", "GFLOP/s",
                    "ai_mem", "ai_near");
        for (const auto& r : recs)
            std::printf("%-22s %12.6f %12.6f %10.3f %8.3f %8.3f\n", r.variant.c_str(), r.mean_s,
                        r.stddev_s, r.gflops, r.ai_mem, r.ai_near);
        const std::string base = !a.baseline.empty() ? a.baseline
                                 : !c.baseline.empty() ? c.baseline
                                                       : recs.front().variant;
        std::printf("\nspeedup vs %s:\n", base.c_str());
        for (const auto& rk : compare(recs, base))
            std::printf("  %-22s %8.3fx\n", rk.variant.c_str(), rk.speedup);
        std::printf("results: %s\n", path.c_str());
    }
    return kExitOk;
}

// --- machine ---------------------------------------------------------------------

int cmd_machine(const Globals& g, double duration, int max_mib, const std::string& profile) {
    const Config c = resolve_config(g);
    const auto m = characterize(duration, c.kernel.workers, std::size_t(max_mib) << 20);
    std::ostringstream os;
    write_profile(os, m);
    const std::string path = profile.empty() ? (fs::path(c.out_dir) / "machine.profile").string() : profile;
    emit(path, os.str());
    if (path != "-") {
        std::cout << os.str();
        std::cout << "profile: " << path << '\n';
    }
    return kExitOk;
}

// --- roofline --------------------------------------------------------------------

int cmd_roofline(const Globals& g, const std::string& profile, const std::string& svg) {
    if (profile.empty()) throw ConfigError("roofline: --profile PATH is required");
    if (g.csv.empty()) throw ConfigError("roofline: --csv PATH (results CSV) is required");
    std::ifstream pf(profile);
    if (!pf) throw ConfigError("roofline: cannot open machine profile '" + profile + "'");
    const auto m = read_profile(pf);
    std::ifstream cf(g.csv);
    if (!cf) throw ConfigError("roofline: cannot open results CSV '" + g.csv + "'");
    const auto recs = read_results_csv(cf);
    if (recs.empty()) throw ConfigError("roofline: results CSV '" + g.csv + "' has no records");
    const std::string text = roofline_svg(recs, m);
    const std::string out = svg.empty() ? (fs::path(g.out.value_or("out")) / "roofline.svg").string() : svg;
    emit(out, text);
    if (out != "-") std::cout << "roofline: " << out << '\n';
    return kExitOk;
}

// --- decomp ----------------------------------------------------------------------

struct DecompArgs {
    std::optional<int> nx, ny, nz, pml;
};

int cmd_decomp(const Globals& g, const DecompArgs& a) {
    Config c = g.config.empty() ? Config{} : load_config(g.config);
    if (a.nx) c.domain.extents.nx = *a.nx;
    if (a.ny) c.domain.extents.ny = *a.ny;
    if (a.nz) c.domain.extents.nz = *a.nz;
    if (a.pml) c.domain.pml_width = *a.pml;
    const auto regions = decompose(c.domain.extents, c.domain.pml_width);
    std::ostringstream os;
    const bool csv = !g.csv.empty();
    if (csv) {
        os << "region,lo_x,lo_y,lo_z,ext_x,ext_y,ext_z,volume\n";
        for (const auto& r : regions)
            os << to_string(r.kind) << ',' << r.box.lo[0] << ',' << r.box.lo[1] << ',' << r.box.lo[2]
               << ',' << r.box.ext[0] << ',' << r.box.ext[1] << ',' << r.box.ext[2] << ','
               << r.box.volume() << '\n';
        emit(g.csv, os.str());
        return kExitOk;
    }
    std::int64_t total = 0;
    char line[160];
    std::snprintf(line, sizeof line, "%-7s %16s %16s %12s\n", "region", "lo", "extent", "volume");
    os << line;
    for (const auto& r : regions) {
        const auto tri = [](const Coord3& v) {
            return std::to_string(v[0]) + "," + std::to_string(v[1]) + "," + std::to_string(v[2]);
        };
        std::snprintf(line, sizeof line, "%-7s %16s %16s %12lld\n", to_string(r.kind), tri(r.box.lo).c_str(),
                      tri(r.box.ext).c_str(), static_cast<long long>(r.box.volume()));
        os << line;
        total += r.box.volume();
    }
    std::snprintf(line, sizeof line, "%-7s %16s %16s %12lld\n", "total", "", "", static_cast<long long>(total));
    os << line;
    std::cout << os.str();
    return kExitOk;
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"25-point acoustic wave propagator: kernels, verification, benchmarks, roofline"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config, "INI configuration file");
    app.add_option("--seed", g.seed, "seed for random media and scenario choices");
    app.add_option("--workers", g.workers, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--precision", g.precision, "f32 or f64")->check(CLI::IsMember({"f32", "f64"}));
    app.add_option("--csv", g.csv, "CSV path (output for bench/decomp, input for roofline; - is stdout)");
    app.add_option("--out", g.out, "output directory");

    auto* run = app.add_subcommand("run", "propagate and write snapshots");
    auto* ver = app.add_subcommand("verify", "compare every kernel variant with the reference");
    VerifyArgs va;
    ver->add_option("--variants", va.variants, "variant identifiers (default: one per kernel)")->delimiter(',');
    ver->add_option("--inject-fault", va.inject_fault)->group("");

    auto* ben = app.add_subcommand("bench", "time kernel variants and write the results CSV");
    BenchArgs ba;
    ben->add_option("--variants", ba.variants, "variant identifiers")->delimiter(',');
    ben->add_option("--repeats", ba.repeats, "timed repeats per variant")->check(CLI::PositiveNumber);
    ben->add_option("--warmup", ba.warmup, "discarded warmup runs")->check(CLI::NonNegativeNumber);
    ben->add_option("--size", ba.size, "cubic grid edge (overrides the config)")->check(CLI::PositiveNumber);
    ben->add_option("--pml", ba.pml, "PML width")->check(CLI::NonNegativeNumber);
    ben->add_option("--steps", ba.steps, "time steps")->check(CLI::PositiveNumber);
    ben->add_option("--profile", ba.profile, "machine profile for roofline fields");
    ben->add_option("--baseline", ba.baseline, "variant used as the speedup baseline");
    ben->add_flag("--verify-first", ba.verify_first, "verify every variant before timing");

    auto* mac = app.add_subcommand("machine", "measure peak FLOP/s and bandwidth levels");
    double duration = 1.0;
    int max_mib = 256;
    std::string mac_profile;
    mac->add_option("--duration", duration, "seconds per peak-FLOP measurement")->check(CLI::Range(0.1, 3600.0));
    mac->add_option("--max-mib", max_mib, "largest bandwidth working set in MiB")->check(CLI::Range(4, 65536));
    mac->add_option("--profile", mac_profile, "output profile path");

    auto* roof = app.add_subcommand("roofline", "plot results against a machine profile (SVG)");
    std::string roof_profile, roof_svg;
    roof->add_option("--profile", roof_profile, "machine profile");
    roof->add_option("--svg", roof_svg, "output SVG path");

    auto* dec = app.add_subcommand("decomp", "print the inner/PML region table");
    DecompArgs da;
    dec->add_option("--nx", da.nx)->check(CLI::PositiveNumber);
    dec->add_option("--ny", da.ny)->check(CLI::PositiveNumber);
    dec->add_option("--nz", da.nz)->check(CLI::PositiveNumber);
    dec->add_option("--pml", da.pml)->check(CLI::NonNegativeNumber);

    for (auto* sc : {run, ver, ben, mac, roof, dec}) sc->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*run) return cmd_run(g);
        if (*ver) return cmd_verify(g, va);
        if (*ben) return cmd_bench(g, ba);
        if (*mac) return cmd_machine(g, duration, max_mib, mac_profile);
        if (*roof) return cmd_roofline(g, roof_profile, roof_svg);
        if (*dec) return cmd_decomp(g, da);
    } catch (const InstabilityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUnstable;
    } catch (const VerificationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitVerify;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace s25
