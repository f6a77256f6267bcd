#include "fraclab/process_sampler.hpp"

namespace fraclab {

namespace {

std::variant<paths::FbmSampler, paths::RlSampler> make_base(const ProcessSpec& spec,
                                                            const TimeGrid& grid) {
    if (spec.base == BaseKind::rl)
        return std::variant<paths::FbmSampler, paths::RlSampler>(
            std::in_place_type<paths::RlSampler>, spec.lambda, grid,
            paths::RlMethod::kernel_convolution);
    return std::variant<paths::FbmSampler, paths::RlSampler>(
        std::in_place_type<paths::FbmSampler>, spec.hurst, grid, paths::FbmMethod::circulant);
}

}  // namespace

ProcessSampler::ProcessSampler(ProcessSpec spec, TimeGrid grid)
    : spec_(std::move(spec)), base_(make_base(spec_, grid)) {
    spec_.validate();
}

const TimeGrid& ProcessSampler::grid() const {
    return std::visit([](const auto& s) -> const TimeGrid& { return s.grid(); }, base_);
}

GridPath ProcessSampler::sample(SeedSpec seed, std::uint64_t path_index) const {
    GridPath p = std::visit([&](const auto& s) { return s.sample(seed, path_index); }, base_);
    if (spec_.base == BaseKind::fbm_frac && spec_.gamma > 0)
        p = ops::riemann_liouville(p, spec_.gamma);
    if (!spec_.weights.empty()) p = ops::compose_weighted(p, spec_.weights);
    return p;
}

}  // namespace fraclab
