#include "distopt/dfd.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace distopt {

bool dfd2_decide(const DfdInstance& inst, SqDist sq_delta) {
    const std::size_t m = inst.m();
    const std::size_t n = inst.n();
    if (!inst.within(0, 0, sq_delta) || !inst.within(m - 1, n - 1, sq_delta)) return false;
    // col_any[j]: some cell above in column j is reachable.
    std::vector<char> col_any(n, 0);
    bool last = false;
    for (std::size_t i = 0; i < m; ++i) {
        bool row_any = false;
        for (std::size_t j = 0; j < n; ++j) {
            const bool reach = inst.within(i, j, sq_delta) &&
                               ((i == 0 && j == 0) || row_any || col_any[j]);
            if (reach) {
                row_any = true;
                col_any[j] = 1;
            }
            last = reach;
        }
    }
    return last;
}

bool dfd1_decide(const DfdInstance& inst, SqDist sq_delta) {
    const std::size_t m = inst.m();
    const std::size_t n = inst.n();
    if (!inst.within(0, 0, sq_delta) || !inst.within(m - 1, n - 1, sq_delta)) return false;
    // i is the least A-index occupied while the B-frog sits at b_{j-1}.
    std::size_t i = 0;
    for (std::size_t j = 1; j < n; ++j) {
        if (inst.within(i, j, sq_delta)) continue;
        std::size_t k = i + 1;
        while (k < m && !(inst.within(k, j - 1, sq_delta) && inst.within(k, j, sq_delta))) ++k;
        if (k == m) return false;
        i = k;
    }
    return true;
}

double dfd1_L(std::size_t m, std::size_t n) {
    const double s = static_cast<double>(m + n);
    const double L = std::pow(s, 0.4) * std::pow(guarded_log2(s), 1.8);
    return std::clamp(L, 1.0, std::max(1.0, static_cast<double>(m) * static_cast<double>(n)));
}

SqDist dfd2(const DfdInstance& inst, Rng& rng, const FrameworkConfig& cfg, RunStats* stats) {
    return optimize_deterministic(
        inst.a_seq, inst.b_seq, [&](SqDist v) { return dfd2_decide(inst, v); }, rng, cfg, stats);
}

SqDist dfd1(const DfdInstance& inst, Rng& rng, const FrameworkConfig& cfg, RunStats* stats) {
    return optimize_randomized(
        inst.a_seq, inst.b_seq, dfd1_L(inst.m(), inst.n()),
        [&](SqDist v) { return dfd1_decide(inst, v); }, rng, cfg, stats);
}

}  // namespace distopt
