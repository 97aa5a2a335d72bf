#include <cstdio>

#include "membrane/boundary.hpp"
#include "membrane/cones.hpp"
#include "membrane/solver.hpp"

using namespace membrane;

int main() {
    const Grid g = Grid::make_1d(-1, 1, 256);
    const ConeSpec spec = ConeSpec::triple_critical();
    const BoundaryData bdata{ConeTrace{spec, 0, 0}};
    SolveConfig cfg;
    const SolveResult res = solve(g, spec.membranes(), bdata, std::nullopt, cfg);
    std::printf("converged=%d iters=%d trace=%zu levels=%zu total=%.10f tau=%g delta_min=%g\n",
                int(res.converged), res.iterations, res.trace.size(),
                res.phase_starts.size(), res.report.total, res.tau, res.delta_min);
    for (std::size_t l = 0; l < res.phase_starts.size(); ++l) {
        const std::size_t lo = res.phase_starts[l];
        const std::size_t hi = l + 1 < res.phase_starts.size() ? res.phase_starts[l + 1] : res.trace.size();
        std::printf("level %zu: iters=%zu first=%.8f last=%.8f\n", l, hi - lo,
                    lo < hi ? res.trace[lo] : -1.0, lo < hi ? res.trace[hi - 1] : -1.0);
    }
    return 0;
}
