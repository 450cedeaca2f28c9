#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "s25/cli.hpp"
#include "s25/errors.hpp"

namespace s25 {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s = {
        {"geometry", {"nx", "ny", "nz", "pml_width", "spacing"}},
        {"medium", {"model", "velocity", "layers", "v_min", "v_max", "eta_max", "seed"}},
        {"time", {"dt", "steps"}},
        {"source", {"x", "y", "z", "f_peak", "t0", "amplitude"}},
        {"kernel", {"variant", "tile", "workers", "precision"}},
        {"output", {"snapshot_interval", "dir"}},
        {"bench", {"repeats", "warmup", "variants", "verify_first", "baseline"}},
    };
    return s;
}

/// Collects "section.key: message" entries while reading values.
class Reader {
public:
    explicit Reader(const pt::ptree& t) : tree_(t) {}

    std::optional<std::string> raw(const std::string& path) const {
        if (auto v = tree_.get_optional<std::string>(path)) return *v;
        return std::nullopt;
    }

    template <class T>
    void get(const std::string& path, T& out) {
        const auto s = raw(path);
        if (!s) return;
        std::istringstream is(*s);
        T v{};
        if (!(is >> v) || !(is >> std::ws).eof()) {
            fail(path, "cannot parse '" + *s + "'");
            return;
        }
        out = v;
    }

    void get_bool(const std::string& path, bool& out) {
        const auto s = raw(path);
        if (!s) return;
        if (*s == "true" || *s == "1" || *s == "yes") out = true;
        else if (*s == "false" || *s == "0" || *s == "no") out = false;
        else fail(path, "expected true or false, got '" + *s + "'");
    }

    void fail(const std::string& path, const std::string& msg) { errors.push_back(path + ": " + msg); }

    std::vector<std::string> errors;

private:
    const pt::ptree& tree_;
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, ',')) {
        cur.erase(0, cur.find_first_not_of(" \t"));
        cur.erase(cur.find_last_not_of(" \t") + 1);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

[[noreturn]] void report(const std::vector<std::string>& errors) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
}

}  // namespace

double Config::max_velocity() const {
    if (model == "random") return v_max;
    if (model == "layered" && !layers.empty()) {
        double m = 0;
        for (const auto& l : layers) m = std::max(m, l.second);
        return m;
    }
    return velocity;
}

double Config::min_velocity() const {
    if (model == "random") return v_min;
    if (model == "layered" && !layers.empty()) {
        double m = layers.front().second;
        for (const auto& l : layers) m = std::min(m, l.second);
        return m;
    }
    return velocity;
}

std::vector<std::pair<int, double>> parse_layers(const std::string& s) {
    std::vector<std::pair<int, double>> out;
    for (const auto& item : split_list(s)) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw ConfigError("layer '" + item + "' is not of the form z:velocity");
        try {
            std::size_t a = 0, b = 0;
            const int z = std::stoi(item.substr(0, colon), &a);
            const double v = std::stod(item.substr(colon + 1), &b);
            if (a != colon || b != item.size() - colon - 1) throw std::invalid_argument("trailing");
            out.emplace_back(z, v);
        } catch (const std::logic_error&) {
            throw ConfigError("layer '" + item + "' is not of the form z:velocity");
        }
    }
    if (out.empty()) throw ConfigError("layer table is empty");
    return out;
}

Config parse_config(const std::string& text) {
    pt::ptree tree;
    try {
        std::istringstream is(text);
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("config: " + e.message() + " (line " + std::to_string(e.line()) + ")");
    }

    Reader r(tree);
    for (const auto& [section, body] : tree) {
        const auto it = schema().find(section);
        if (it == schema().end()) {
            r.fail(section, body.empty() ? "top-level keys are not allowed" : "unknown section");
            continue;
        }
        for (const auto& [key, v] : body)
            if (!it->second.count(key)) r.fail(section + "." + key, "unknown key");
    }

    Config c;
    r.get("geometry.nx", c.domain.extents.nx);
    r.get("geometry.ny", c.domain.extents.ny);
    r.get("geometry.nz", c.domain.extents.nz);
    r.get("geometry.pml_width", c.domain.pml_width);
    r.get("geometry.spacing", c.domain.h);

    r.get("medium.model", c.model);
    r.get("medium.velocity", c.velocity);
    if (const auto s = r.raw("medium.layers")) {
        try {
            c.layers = parse_layers(*s);
        } catch (const ConfigError& e) {
            r.fail("medium.layers", e.what());
        }
    }
    r.get("medium.v_min", c.v_min);
    r.get("medium.v_max", c.v_max);
    r.get("medium.eta_max", c.eta_max);
    r.get("medium.seed", c.seed);

    if (const auto s = r.raw("time.dt"); s && *s != "auto") {
        double dt = 0;
        r.get("time.dt", dt);
        c.dt = dt;
    }
    r.get("time.steps", c.steps);

    const bool any_loc = r.raw("source.x") || r.raw("source.y") || r.raw("source.z");
    if (any_loc) {
        Coord3 loc{c.domain.extents.nx / 2, c.domain.extents.ny / 2, c.domain.extents.nz / 2};
        r.get("source.x", loc[0]);
        r.get("source.y", loc[1]);
        r.get("source.z", loc[2]);
        c.source = loc;
    }
    if (const auto s = r.raw("source.f_peak"); s && *s != "auto") {
        double f = 0;
        r.get("source.f_peak", f);
        c.f_peak = f;
    }
    if (const auto s = r.raw("source.t0"); s && *s != "auto") {
        double t = 0;
        r.get("source.t0", t);
        c.t0 = t;
    }
    r.get("source.amplitude", c.amplitude);

    if (const auto s = r.raw("kernel.variant")) {
        try {
            c.kernel = parse_variant(*s);
        } catch (const ConfigError& e) {
            r.fail("kernel.variant", e.what());
        }
    }
    if (const auto s = r.raw("kernel.tile")) {
        try {
            const auto k = parse_variant(variant_stem(c.kernel.variant) + "_" + *s);
            c.kernel.tiling3 = k.tiling3;
            c.kernel.tiling2 = k.tiling2;
        } catch (const ConfigError& e) {
            r.fail("kernel.tile", e.what());
        }
    }
    r.get("kernel.workers", c.kernel.workers);
    if (const auto s = r.raw("kernel.precision")) {
        try {
            c.kernel.precision = parse_precision(*s);
        } catch (const ConfigError& e) {
            r.fail("kernel.precision", e.what());
        }
    }

    r.get("output.snapshot_interval", c.snapshot_interval);
    r.get("output.dir", c.out_dir);

    r.get("bench.repeats", c.repeats);
    r.get("bench.warmup", c.warmup);
    if (const auto s = r.raw("bench.variants")) c.bench_variants = split_list(*s);
    r.get_bool("bench.verify_first", c.verify_first);
    r.get("bench.baseline", c.baseline);

    if (!r.errors.empty()) report(r.errors);
    validate_config(c);
    return c;
}

Config load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

void validate_config(const Config& c) {
    std::vector<std::string> errs;
    const auto& e = c.domain.extents;
    bool geometry_ok = true;
    try {
        decompose(e, c.domain.pml_width);
    } catch (const ConfigError& ex) {
        errs.push_back(std::string("geometry: ") + ex.what());
        geometry_ok = false;
    }
    if (!(c.domain.h > 0)) {
        errs.push_back("geometry.spacing: must be > 0");
        geometry_ok = false;
    }

    if (c.model == "homogeneous") {
        if (!(c.velocity > 0)) errs.push_back("medium.velocity: must be > 0");
    } else if (c.model == "layered") {
        if (c.layers.empty()) errs.push_back("medium.layers: required for the layered model");
        else if (c.layers.front().first != 0) errs.push_back("medium.layers: first layer must start at z = 0");
        for (std::size_t i = 0; i < c.layers.size(); ++i) {
            if (!(c.layers[i].second > 0)) errs.push_back("medium.layers: velocities must be > 0");
            if (i > 0 && c.layers[i].first <= c.layers[i - 1].first)
                errs.push_back("medium.layers: z indices must ascend");
        }
    } else if (c.model == "random") {
        if (!(c.v_min > 0) || c.v_max < c.v_min)
            errs.push_back("medium.v_min/v_max: need 0 < v_min <= v_max");
    } else {
        errs.push_back("medium.model: expected homogeneous, layered or random, got '" + c.model + "'");
    }
    if (c.eta_max < 0) errs.push_back("medium.eta_max: must be >= 0");

    if (c.steps < 0) errs.push_back("time.steps: must be >= 0");
    if (c.dt) {
        if (!(*c.dt > 0)) {
            errs.push_back("time.dt: must be > 0 or auto");
        } else if (c.domain.h > 0 && c.max_velocity() > 0) {
            const double lim = cfl_dt_limit(make_coeffs_order8(c.domain.h), c.max_velocity());
            if (*c.dt > lim)
                errs.push_back("time.dt: " + std::to_string(*c.dt) + " s exceeds the CFL limit " +
                               std::to_string(lim) + " s for Vmax " +
                               std::to_string(c.max_velocity()) + " m/s");
        }
    }

    if (c.source && geometry_ok) {
        const auto& s = *c.source;
        const int w = c.domain.pml_width;
        bool inside = true;
        for (int a = 0; a < 3; ++a) inside = inside && s[a] >= 0 && s[a] < e[a];
        if (!inside)
            errs.push_back("source: location lies outside the domain");
        else if (in_pml(e, w, s[0], s[1], s[2]))
            errs.push_back("source: location lies inside the PML; it must be in the inner region");
    }
    if (c.f_peak && !(*c.f_peak > 0)) errs.push_back("source.f_peak: must be > 0");

    try {
        validate(c.kernel);
    } catch (const ConfigError& ex) {
        errs.push_back(std::string("kernel: ") + ex.what());
    }

    if (c.snapshot_interval < 0) errs.push_back("output.snapshot_interval: must be >= 0");
    if (c.repeats < 1) errs.push_back("bench.repeats: must be >= 1");
    if (c.warmup < 0) errs.push_back("bench.warmup: must be >= 0");
    for (const auto& v : c.bench_variants) {
        try {
            auto k = parse_variant(v);
            k.precision = c.kernel.precision;
            validate(k);
        } catch (const ConfigError& ex) {
            errs.push_back(std::string("bench.variants: ") + ex.what());
        }
    }
    if (!errs.empty()) report(errs);
}

template <class T>
Problem<T> build_problem(const Config& c) {
    validate_config(c);
    Problem<T> p;
    p.domain = c.domain;
    if (c.model == "random")
        p.medium = random_medium<T>(c.domain, c.v_min, c.v_max, c.eta_max, c.seed);
    else if (c.model == "layered")
        p.medium = layered_medium<T>(c.domain, c.layers, c.eta_max);
    else
        p.medium = homogeneous_medium<T>(c.domain, c.velocity, c.eta_max);
    p.coeffs = make_coeffs_order8(c.domain.h);
    p.time = {c.dt ? *c.dt : default_dt(c.domain.h, c.max_velocity()), c.steps};
    const auto& e = c.domain.extents;
    p.source.location = c.source ? *c.source : Coord3{e.nx / 2, e.ny / 2, e.nz / 2};
    const double f = c.f_peak ? *c.f_peak : default_f_peak(c.domain.h, c.min_velocity());
    p.source.wavelet = ricker(f, c.t0 ? *c.t0 : 1.0 / f, p.time.dt, c.steps);
    for (auto& w : p.source.wavelet) w *= c.amplitude;
    return p;
}

template Problem<float> build_problem<float>(const Config&);
template Problem<double> build_problem<double>(const Config&);

std::vector<std::string> default_variant_list() {
    return {"reference",     "gmem_8x8x8",    "smem_u",        "smem_eta_3",
            "smem_eta_1",    "semi",          "st_smem_16x16", "st_reg_shft_16x16",
            "st_reg_fixed_16x16"};
}

}  // namespace s25
