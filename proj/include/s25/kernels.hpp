#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "s25/counters.hpp"
#include "s25/decomp.hpp"
#include "s25/physics.hpp"
#include "s25/worker_pool.hpp"

namespace s25 {

/// Kernel code shapes. All produce the same u^{n+1}; they differ in
/// traversal, scratch usage and load/store structure.
enum class VariantId {
    Reference,     // single sweep, per-cell inner/PML branch
    Global3d,      // gmem_DxDyDz: 3D tiles, neighbours read straight from the grid
    Cached3dU,     // smem_u: 3D tiles, u tile + radius-4 halo staged in scratch
    PmlEta3,       // smem_eta_3: PML tiles stage eta (3-pass halo fetch)
    PmlEta1,       // smem_eta_1: PML tiles stage eta (one-conditional halo fetch)
    Semi,          // semi: z contributions split into forward/backward phases
    StreamPlanes,  // st_smem_DxDy: ring of 2R+1 planes
    StreamShift,   // st_reg_shft_DxDy: per-lane z window shifted every step
    StreamFixed,   // st_reg_fixed_DxDy: per-lane z window with rotated slot bindings
};

inline constexpr std::array<VariantId, 9> kAllVariants = {
    VariantId::Reference, VariantId::Global3d,     VariantId::Cached3dU,
    VariantId::PmlEta3,   VariantId::PmlEta1,      VariantId::Semi,
    VariantId::StreamPlanes, VariantId::StreamShift, VariantId::StreamFixed};

const char* to_string(VariantId v);
bool uses_tiling3(VariantId v);
bool uses_tiling2(VariantId v);

inline constexpr std::size_t kDefaultScratchBudget = 512 * 1024;

struct KernelConfig {
    VariantId variant = VariantId::Global3d;
    Tiling3 tiling3{8, 8, 8};
    Tiling2 tiling2{16, 16};
    int workers = 1;
    Precision precision = Precision::Double;
    bool instrument = false;
    std::size_t scratch_budget = kDefaultScratchBudget;  // bytes per worker
};

/// Parses identifiers such as "gmem_8x8x8", "smem_u", "smem_eta_1",
/// "semi_8x8x16", "st_smem_16x16", "st_reg_shft_32x16",
/// "st_reg_fixed_32x32" or "reference". Precision and workers keep their
/// defaults.
KernelConfig parse_variant(const std::string& name);

/// Identifier prefix without tile dimensions ("gmem", "st_reg_fixed", ...).
std::string variant_stem(VariantId v);

/// Canonical identifier for a configuration (inverse of parse_variant).
std::string variant_name(const KernelConfig& cfg);

/// Scratch bytes one worker needs for this configuration.
std::size_t scratch_bytes(const KernelConfig& cfg);

/// Throws ConfigError naming the violated rule.
void validate(const KernelConfig& cfg);

/// Ring slot receiving the leading plane at stream step z: (z + 2R) mod (2R + 1).
constexpr int slot(int z, int r) { return (z + 2 * r) % (2 * r + 1); }

/// Counters of one instrumented step, per region (RegionKind order) and in
/// total. The Reference variant sweeps the domain in one pass and reports
/// only the total.
struct StepCounters {
    std::array<CounterReport, kRegionCount> by_region{};
    CounterReport total{};

    CounterReport& operator[](RegionKind k) { return by_region[std::size_t(k)]; }
    const CounterReport& operator[](RegionKind k) const { return by_region[std::size_t(k)]; }
};

template <class T>
struct Scratch;

/// Executes time steps for one kernel configuration on one domain. Tiles and
/// per-worker scratch are prepared once; configuration errors surface in the
/// constructor, before any wavefield is touched.
template <class T>
class Propagator {
public:
    Propagator(const KernelConfig& cfg, const Domain& d, const StencilCoeffs& c);
    ~Propagator();
    Propagator(Propagator&&) noexcept;
    Propagator& operator=(Propagator&&) noexcept;

    /// Writes u^{n+1} into wf.prev. Counters are filled when the
    /// configuration is instrumented and `counters` is non-null.
    void step(Wavefield<T>& wf, const Medium<T>& m, double dt, StepCounters* counters = nullptr);

    /// Full time loop: step, rotate, inject the source, periodic finiteness
    /// check. `wf` holds the initial state and receives the final one.
    void run(Wavefield<T>& wf, const Medium<T>& m, const TimeParams& tp, const SourceTerm& src,
             const PropagateOptions<T>& opt = {}, CounterReport* counters = nullptr);

    const KernelConfig& config() const { return cfg_; }
    const Domain& domain() const { return domain_; }
    const std::vector<Region>& regions() const { return regions_; }
    const std::vector<Box>& tiles(RegionKind k) const { return tiles_[std::size_t(k)]; }

private:
    template <class P>
    void dispatch(Wavefield<T>& wf, const Medium<T>& m, double dt, StepCounters* counters);

    KernelConfig cfg_;
    Domain domain_;
    StencilCoeffs coeffs_;
    std::vector<Region> regions_;
    std::array<std::vector<Box>, kRegionCount> tiles_;
    std::unique_ptr<WorkerPool> pool_;
    std::vector<std::unique_ptr<Scratch<T>>> scratch_;
};

/// One time step with a temporary Propagator.
template <class T>
StepCounters run_step(const KernelConfig& cfg, Wavefield<T>& wf, const Medium<T>& m,
                      const StencilCoeffs& c, double dt, const Domain& d);

/// Allocates a zero wavefield and runs `tp.steps` steps.
template <class T>
Wavefield<T> propagate(const KernelConfig& cfg, const Domain& d, const Medium<T>& m,
                       const StencilCoeffs& c, const TimeParams& tp, const SourceTerm& src,
                       const PropagateOptions<T>& opt = {}, CounterReport* counters = nullptr);

// --- verification -----------------------------------------------------------

/// Random-medium verification scenario: per-cell V in [v_min, v_max], Ricker
/// source at a seed-chosen inner cell, default dt and peak frequency.
struct Scenario {
    Extents extents{48, 48, 48};
    int pml_width = 4;
    int steps = 50;
    std::uint64_t seed = 1;
    double h = 10.0;
    double v_min = 1500.0;
    double v_max = 4500.0;
    double eta_max = 100.0;
};

template <class T>
struct Problem {
    Domain domain;
    Medium<T> medium;
    StencilCoeffs coeffs;
    TimeParams time;
    SourceTerm source;
};

template <class T>
Problem<T> make_problem(const Scenario& s);

struct VerifyReport {
    double rel_l2 = 0;
    double rel_linf = 0;
};

struct VerifyOptions {
    /// Added to the source cell of the variant's result before comparison,
    /// scaled by max|u| of the reference; a negative control for the
    /// verification path itself.
    double perturb = 0;
};

/// Relative L2 and Linf distance of `a` from `ref` over non-padding cells.
template <class T>
VerifyReport compare_fields(const Grid3<T>& a, const Grid3<T>& ref);

/// Propagates the scenario with the Reference oracle and with `cfg`, in the
/// configuration's precision, and compares the final wavefields.
VerifyReport verify(const KernelConfig& cfg, const Scenario& s, const VerifyOptions& opt = {});

/// Tolerance on rel_L2 used by the verification suite for a precision.
double verify_tolerance(Precision p);
/// Tolerance on rel_Linf.
double verify_tolerance_linf(Precision p);
/// Both norms within their tolerances (NaN fails).
bool within_tolerance(const VerifyReport& r, Precision p);

}  // namespace s25
