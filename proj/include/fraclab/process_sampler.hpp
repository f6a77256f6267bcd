#pragma once

#include <variant>

#include "fraclab/operators.hpp"
#include "fraclab/paths.hpp"
#include "fraclab/process.hpp"

namespace fraclab {

// Samples J_{m,alpha}(base) trajectories: base path via the fast exact
// sampler for its branch, fractional integration and the weighted chain via
// the operator module.  Thread-safe; path k is reproducible per SeedSpec.
class ProcessSampler {
public:
    ProcessSampler(ProcessSpec spec, TimeGrid grid);

    GridPath sample(SeedSpec seed, std::uint64_t path_index) const;

    const ProcessSpec& spec() const { return spec_; }
    const TimeGrid& grid() const;

private:
    ProcessSpec spec_;
    std::variant<paths::FbmSampler, paths::RlSampler> base_;
};

}  // namespace fraclab
