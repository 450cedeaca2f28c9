#include <algorithm>
#include <charconv>
#include <string_view>
#include <vector>

#include "s25/errors.hpp"
#include "s25/kernels.hpp"

namespace s25 {

const char* to_string(VariantId v) {
    switch (v) {
        case VariantId::Reference: return "Reference";
        case VariantId::Global3d: return "Global3d";
        case VariantId::Cached3dU: return "Cached3dU";
        case VariantId::PmlEta3: return "PmlEta3";
        case VariantId::PmlEta1: return "PmlEta1";
        case VariantId::Semi: return "Semi";
        case VariantId::StreamPlanes: return "StreamPlanes";
        case VariantId::StreamShift: return "StreamShift";
        case VariantId::StreamFixed: return "StreamFixed";
    }
    return "?";
}

bool uses_tiling3(VariantId v) {
    return v == VariantId::Global3d || v == VariantId::Cached3dU || v == VariantId::PmlEta3 ||
           v == VariantId::PmlEta1 || v == VariantId::Semi;
}

bool uses_tiling2(VariantId v) {
    return v == VariantId::StreamPlanes || v == VariantId::StreamShift ||
           v == VariantId::StreamFixed;
}

namespace {

struct Prefix {
    std::string_view text;
    VariantId id;
};

// Longest prefixes first so "smem_eta_1" is not taken for "smem_u".
constexpr Prefix kPrefixes[] = {
    {"st_reg_fixed", VariantId::StreamFixed},
    {"st_reg_shft", VariantId::StreamShift},
    {"st_smem", VariantId::StreamPlanes},
    {"smem_eta_1", VariantId::PmlEta1},
    {"smem_eta_3", VariantId::PmlEta3},
    {"smem_u", VariantId::Cached3dU},
    {"gmem", VariantId::Global3d},
    {"semi", VariantId::Semi},
    {"reference", VariantId::Reference},
};

std::vector<int> parse_dims(std::string_view s, const std::string& whole) {
    std::vector<int> out;
    while (true) {
        const auto x = s.find('x');
        const auto part = s.substr(0, x);
        int v = 0;
        const auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (ec != std::errc{} || p != part.data() + part.size() || v < 1)
            throw ConfigError("bad tile dimensions in variant '" + whole + "'");
        out.push_back(v);
        if (x == std::string_view::npos) break;
        s.remove_prefix(x + 1);
    }
    return out;
}

std::string dims3(const Tiling3& t) {
    return std::to_string(t.dx) + "x" + std::to_string(t.dy) + "x" + std::to_string(t.dz);
}

}  // namespace

std::string variant_stem(VariantId v) {
    for (const auto& p : kPrefixes)
        if (p.id == v) return std::string(p.text);
    return "?";
}

KernelConfig parse_variant(const std::string& name) {
    KernelConfig cfg;
    for (const auto& p : kPrefixes) {
        const std::string_view n(name);
        if (!n.starts_with(p.text)) continue;
        std::string_view rest = n.substr(p.text.size());
        cfg.variant = p.id;
        if (rest.empty()) return cfg;
        if (rest.front() != '_' || p.id == VariantId::Reference)
            throw ConfigError("unknown kernel variant '" + name + "'");
        rest.remove_prefix(1);
        const auto d = parse_dims(rest, name);
        if (uses_tiling3(p.id)) {
            if (d.size() != 3)
                throw ConfigError("variant '" + name + "' needs three tile dimensions, e.g. _8x8x8");
            cfg.tiling3 = {d[0], d[1], d[2]};
        } else {
            if (d.size() != 2)
                throw ConfigError("variant '" + name + "' needs two tile dimensions, e.g. _16x16");
            cfg.tiling2 = {d[0], d[1]};
        }
        return cfg;
    }
    throw ConfigError("unknown kernel variant '" + name + "'");
}

std::string variant_name(const KernelConfig& cfg) {
    const Tiling3 def3{};
    const auto opt3 = [&](const char* base) {
        return cfg.tiling3 == def3 ? std::string(base) : std::string(base) + "_" + dims3(cfg.tiling3);
    };
    const auto d2 = "_" + std::to_string(cfg.tiling2.dx) + "x" + std::to_string(cfg.tiling2.dy);
    switch (cfg.variant) {
        case VariantId::Reference: return "reference";
        case VariantId::Global3d: return "gmem_" + dims3(cfg.tiling3);
        case VariantId::Cached3dU: return opt3("smem_u");
        case VariantId::PmlEta3: return opt3("smem_eta_3");
        case VariantId::PmlEta1: return opt3("smem_eta_1");
        case VariantId::Semi: return opt3("semi");
        case VariantId::StreamPlanes: return "st_smem" + d2;
        case VariantId::StreamShift: return "st_reg_shft" + d2;
        case VariantId::StreamFixed: return "st_reg_fixed" + d2;
    }
    return "?";
}

std::size_t scratch_bytes(const KernelConfig& cfg) {
    constexpr std::size_t R = kRadius;
    const std::size_t w = word_size(cfg.precision);
    const std::size_t x3 = std::size_t(cfg.tiling3.dx), y3 = std::size_t(cfg.tiling3.dy),
                      z3 = std::size_t(cfg.tiling3.dz);
    const std::size_t x2 = std::size_t(cfg.tiling2.dx), y2 = std::size_t(cfg.tiling2.dy);
    const std::size_t cross = (x2 + 2 * R) * (y2 + 2 * R);
    switch (cfg.variant) {
        case VariantId::Reference:
        case VariantId::Global3d: return 0;
        case VariantId::Cached3dU: return (x3 + 2 * R) * (y3 + 2 * R) * (z3 + 2 * R) * w;
        case VariantId::PmlEta3:
        case VariantId::PmlEta1: return (x3 + 2) * (y3 + 2) * (z3 + 2) * w;
        case VariantId::Semi: return (R + 1) * x3 * y3 * w;
        case VariantId::StreamPlanes: return (2 * R + 1) * cross * w;
        case VariantId::StreamShift:
        case VariantId::StreamFixed: return ((2 * R + 1) * x2 * y2 + cross) * w;
    }
    return 0;
}

void validate(const KernelConfig& cfg) {
    if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
    const auto& t = cfg.tiling3;
    if (uses_tiling3(cfg.variant) && (t.dx < 1 || t.dy < 1 || t.dz < 1))
        throw ConfigError("tile dimensions must be >= 1");
    if (uses_tiling2(cfg.variant) && (cfg.tiling2.dx < 1 || cfg.tiling2.dy < 1))
        throw ConfigError("column dimensions must be >= 1");
    if (cfg.variant == VariantId::Cached3dU &&
        (t.dx < 2 * kRadius || t.dy < 2 * kRadius || t.dz < 2 * kRadius))
        throw ConfigError(variant_name(cfg) +
                          ": lane-balanced halo fetch needs tile dimension >= 2R = " +
                          std::to_string(2 * kRadius) + " on every axis");
    if ((cfg.variant == VariantId::PmlEta1 || cfg.variant == VariantId::PmlEta3) &&
        !(t.dx == t.dy && t.dy == t.dz))
        throw ConfigError(variant_name(cfg) + ": eta halo fetch needs a cubic tile nt x nt x nt");
    if ((cfg.variant == VariantId::PmlEta1 || cfg.variant == VariantId::PmlEta3) &&
        t.dx < 2 * kEtaRadius)
        throw ConfigError(variant_name(cfg) + ": eta tile edge must be >= 2");
    const auto need = scratch_bytes(cfg);
    if (need > cfg.scratch_budget)
        throw ConfigError(variant_name(cfg) + ": needs " + std::to_string(need) +
                          " scratch bytes per worker, budget is " +
                          std::to_string(cfg.scratch_budget));
}

}  // namespace s25
