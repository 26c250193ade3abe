#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace alh {

// Error taxonomy. Each type corresponds to one failure mode of the operation
// contracts; the CLI maps them onto exit codes.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct degenerate_metric_error : error { using error::error; };
struct boundary_stencil_error : error { using error::error; };
struct dimension_error : error { using error::error; };
struct positivity_violation_error : error { using error::error; };
struct flow_degeneracy_error : error { using error::error; };
struct instability_error : error { using error::error; };
struct stiffness_error : error { using error::error; };
struct configuration_error : error { using error::error; };
struct resolution_error : error { using error::error; };
struct fit_domain_error : error { using error::error; };
struct degenerate_data_error : error { using error::error; };
struct unsupported_case_error : error { using error::error; };
struct not_einstein_error : error { using error::error; };
struct certification_error : error { using error::error; };
struct precondition_error : error { using error::error; };
struct numeric_abort_error : error { using error::error; };

// Any rescaled state norm beyond this aborts an integration: past it the run
// signals a hypothesis violation rather than roundoff.
inline constexpr double kStateCap = 1e12;

// Values below this floor are treated as identically zero when fitting decay
// rates (sentinel instead of a fit).
inline constexpr double kZeroFloor = 1e-300;

// Run fn(i) for i in [0, count) on up to `jobs` threads. Work is split into
// contiguous blocks, so writes to per-index slots never race and the output
// layout does not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn&& fn) {
    if (jobs <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(jobs, count));
    const std::size_t chunk = (count + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace alh
