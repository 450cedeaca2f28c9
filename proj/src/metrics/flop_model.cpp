#include "s25/metrics.hpp"

namespace s25 {

CellFlops cell_flops(VariantId v) {
    const std::uint64_t lap =
        v == VariantId::Semi ? kSemiForwardFlops + kSemiBackwardFlops : std::uint64_t(kLaplacianFlops);
    return {lap + kInnerUpdateFlops, lap + kPmlUpdateFlops};
}

std::uint64_t flop_model_step(const KernelConfig& cfg, const Domain& d) {
    const CellFlops cf = cell_flops(cfg.variant);
    std::uint64_t total = 0;
    for (const auto& r : decompose(d.extents, d.pml_width)) {
        if (r.box.empty()) continue;
        total += std::uint64_t(r.box.volume()) * (r.is_pml() ? cf.pml : cf.inner);
    }
    return total;
}

std::uint64_t flop_model(const KernelConfig& cfg, const Domain& d, int steps) {
    if (steps <= 0) return 0;
    return std::uint64_t(steps) * (flop_model_step(cfg, d) + kSourceFlops);
}

}  // namespace s25
