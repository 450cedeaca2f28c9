#include <string>

#include "s25/errors.hpp"
#include "s25/kernels.hpp"
#include "tile_kernels.hpp"

namespace s25 {

template <class T>
Propagator<T>::Propagator(const KernelConfig& cfg, const Domain& d, const StencilCoeffs& c)
    : cfg_(cfg), domain_(d), coeffs_(c) {
    cfg_.precision = precision_of<T>();
    validate(cfg_);
    regions_ = decompose(d.extents, d.pml_width);
    for (const auto& r : regions_) {
        auto& list = tiles_[std::size_t(r.kind)];
        if (r.box.empty()) continue;
        if (uses_tiling3(cfg_.variant))
            list = tile3(r.box, cfg_.tiling3);
        else if (uses_tiling2(cfg_.variant))
            list = tile2(r.box, cfg_.tiling2);
    }
    pool_ = std::make_unique<WorkerPool>(cfg_.workers);
    const std::size_t words = scratch_bytes(cfg_) / sizeof(T);
    for (int w = 0; w < cfg_.workers; ++w) {
        auto s = std::make_unique<Scratch<T>>();
        s->buf.assign(words, T(0));
        scratch_.push_back(std::move(s));
    }
}

template <class T>
Propagator<T>::~Propagator() = default;
template <class T>
Propagator<T>::Propagator(Propagator&&) noexcept = default;
template <class T>
Propagator<T>& Propagator<T>::operator=(Propagator&&) noexcept = default;

namespace {

template <class P, class T>
void run_tile(VariantId v, bool pml, const detail::Ctx<T>& c, const Box& b, Scratch<T>& s) {
    using namespace detail;
    switch (v) {
        case VariantId::Global3d:
            pml ? global3d_tile<P, true>(c, b) : global3d_tile<P, false>(c, b);
            return;
        case VariantId::Cached3dU:
            pml ? cached3d_tile<P, true>(c, b, s) : cached3d_tile<P, false>(c, b, s);
            return;
        case VariantId::PmlEta1:
            pml ? pml_eta_tile<P, true>(c, b, s) : global3d_tile<P, false>(c, b);
            return;
        case VariantId::PmlEta3:
            pml ? pml_eta_tile<P, false>(c, b, s) : global3d_tile<P, false>(c, b);
            return;
        case VariantId::Semi:
            pml ? semi_tile<P, true>(c, b, s) : semi_tile<P, false>(c, b, s);
            return;
        case VariantId::StreamPlanes:
            pml ? stream_planes_column<P, true>(c, b, s) : stream_planes_column<P, false>(c, b, s);
            return;
        case VariantId::StreamShift:
            pml ? stream_shift_column<P, true>(c, b, s) : stream_shift_column<P, false>(c, b, s);
            return;
        case VariantId::StreamFixed:
            pml ? stream_fixed_column<P, true>(c, b, s) : stream_fixed_column<P, false>(c, b, s);
            return;
        case VariantId::Reference: break;
    }
}

template <class T>
void check_shapes(const Domain& d, const Wavefield<T>& wf, const Medium<T>& m) {
    const auto ok = [&](const Grid3<T>& g) {
        return g.extents() == d.extents && g.pad() >= kRadius;
    };
    if (!ok(wf.prev) || !ok(wf.cur) || !ok(m.velocity) || !ok(m.eta) ||
        wf.prev.pad() != wf.cur.pad() || m.velocity.pad() != wf.cur.pad() ||
        m.eta.pad() != wf.cur.pad())
        throw ConfigError("wavefield and medium grids must match the domain extents and padding");
}

}  // namespace

template <class T>
template <class P>
void Propagator<T>::dispatch(Wavefield<T>& wf, const Medium<T>& m, double dt,
                             StepCounters* counters) {
    const detail::Ctx<T> c{wf.cur.data(),        wf.prev.data(),      m.velocity.data(),
                           m.eta.data(),         wf.cur.stride_y(),   wf.cur.stride_z(),
                           wf.cur.pad(),         Weights<T>(coeffs_), StepConstants<T>(dt, domain_.h)};
    if (counters) *counters = StepCounters{};

    if (cfg_.variant == VariantId::Reference) {
        if constexpr (P::counting) counting::reset();
        detail::conditional_sweep<P>(c, domain_.extents, domain_.pml_width);
        if constexpr (P::counting)
            if (counters) counters->total = counting::harvest();
        return;
    }

    for (const auto& r : regions_) {
        const auto& tiles = tiles_[std::size_t(r.kind)];
        if (tiles.empty()) continue;
        const bool pml = r.is_pml();
        if constexpr (P::counting) {
            std::vector<CounterReport> per_worker(std::size_t(cfg_.workers));
            pool_->parallel_for(tiles.size(), [&](std::size_t t, int w) {
                counting::reset();
                run_tile<P>(cfg_.variant, pml, c, tiles[t], *scratch_[std::size_t(w)]);
                per_worker[std::size_t(w)] += counting::harvest();
            });
            if (counters) {
                for (const auto& rep : per_worker) (*counters)[r.kind] += rep;
                counters->total += (*counters)[r.kind];
            }
        } else {
            pool_->parallel_for(tiles.size(), [&](std::size_t t, int w) {
                run_tile<P>(cfg_.variant, pml, c, tiles[t], *scratch_[std::size_t(w)]);
            });
        }
    }
}

template <class T>
void Propagator<T>::step(Wavefield<T>& wf, const Medium<T>& m, double dt, StepCounters* counters) {
    check_shapes(domain_, wf, m);
    if (cfg_.instrument && counters)
        dispatch<Counted<T>>(wf, m, dt, counters);
    else
        dispatch<Plain<T>>(wf, m, dt, nullptr);
}

template <class T>
void Propagator<T>::run(Wavefield<T>& wf, const Medium<T>& m, const TimeParams& tp,
                        const SourceTerm& src, const PropagateOptions<T>& opt,
                        CounterReport* counters) {
    if (tp.steps < 0) throw ConfigError("steps must be >= 0");
    if (src.wavelet.size() < std::size_t(tp.steps))
        throw ConfigError("source wavelet shorter than the number of steps");
    const auto [si, sj, sk] = src.location;
    if (si < 0 || sj < 0 || sk < 0 || si >= domain_.extents.nx || sj >= domain_.extents.ny ||
        sk >= domain_.extents.nz)
        throw ConfigError("source location lies outside the domain");
    const bool count = cfg_.instrument && counters;
    StepCounters sc;
    const StepConstants<T> kc(tp.dt, 1.0);
    for (int n = 0; n < tp.steps; ++n) {
        step(wf, m, tp.dt, count ? &sc : nullptr);
        wf.rotate();
        if (count) {
            *counters += sc.total;
            using P = Counted<T>;
            counting::reset();
            T* cell = &wf.cur.at(si, sj, sk);
            const auto r = source_update(P::load(cell, Array::UCur),
                                         P::load(&m.velocity.at(si, sj, sk), Array::Velocity),
                                         typename P::real(T(src.wavelet[std::size_t(n)])), kc);
            P::store(cell, r, Array::UNext);
            *counters += counting::harvest();
        } else {
            inject_source(wf.cur, src, m, tp.dt, n);
        }
        const int done = n + 1;
        if (opt.check_interval > 0 && (done % opt.check_interval == 0 || done == tp.steps) &&
            !all_finite(wf.cur))
            throw InstabilityError(done);
        if (opt.on_step) opt.on_step(done, wf.cur);
    }
}

template <class T>
StepCounters run_step(const KernelConfig& cfg, Wavefield<T>& wf, const Medium<T>& m,
                      const StencilCoeffs& c, double dt, const Domain& d) {
    Propagator<T> p(cfg, d, c);
    StepCounters sc;
    p.step(wf, m, dt, &sc);
    return sc;
}

template <class T>
Wavefield<T> propagate(const KernelConfig& cfg, const Domain& d, const Medium<T>& m,
                       const StencilCoeffs& c, const TimeParams& tp, const SourceTerm& src,
                       const PropagateOptions<T>& opt, CounterReport* counters) {
    Propagator<T> p(cfg, d, c);
    auto wf = make_wavefield<T>(d.extents);
    p.run(wf, m, tp, src, opt, counters);
    return wf;
}

template class Propagator<float>;
template class Propagator<double>;
template StepCounters run_step<float>(const KernelConfig&, Wavefield<float>&, const Medium<float>&,
                                      const StencilCoeffs&, double, const Domain&);
template StepCounters run_step<double>(const KernelConfig&, Wavefield<double>&,
                                       const Medium<double>&, const StencilCoeffs&, double,
                                       const Domain&);
template Wavefield<float> propagate<float>(const KernelConfig&, const Domain&, const Medium<float>&,
                                          const StencilCoeffs&, const TimeParams&,
                                          const SourceTerm&, const PropagateOptions<float>&,
                                          CounterReport*);
template Wavefield<double> propagate<double>(const KernelConfig&, const Domain&,
                                            const Medium<double>&, const StencilCoeffs&,
                                            const TimeParams&, const SourceTerm&,
                                            const PropagateOptions<double>&, CounterReport*);

}  // namespace s25
