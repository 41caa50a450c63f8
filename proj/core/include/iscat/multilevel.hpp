#ifndef ISCAT_MULTILEVEL_HPP
#define ISCAT_MULTILEVEL_HPP

#include <optional>
#include <vector>

#include "iscat/newton.hpp"

namespace iscat {

/// Contiguous partition of the frequency indices {0..N} into sub-intervals,
/// low to high. level_ends[m] is the last frequency index of level m; the
/// final entry must equal N. Level m spans [level_ends[m-1], level_ends[m]]
/// (sharing its first index with the previous level's end, whose shape seeds
/// it). Per-level regularization parameters must be nonincreasing when given
/// explicitly; otherwise they come from the singular-value schedule.
struct LevelPartition {
    std::vector<int> level_ends;
    std::vector<double> alphas;    // empty: derive via sigma_hat/alpha_schedule
    std::vector<int> newton_iters; // one per level

    LevelPartition(std::vector<int> ends, std::vector<double> alphas_,
                   std::vector<int> iters);

    std::size_t level_count() const { return level_ends.size(); }

    /// Two levels, a short strongly-regularized low-frequency level (first
    /// quarter of the grid) then the rest; J = 5 then 4, explicit alphas.
    static LevelPartition two_level_default(int num_steps, double alpha_first,
                                            double alpha_rest);
};

/// Running minimum sigma_hat_1 = sigma_tilde_1,
/// sigma_hat_{m+1} = min(sigma_hat_m, sigma_tilde_{m+1}).
std::vector<double> sigma_hat(const std::vector<double>& sigma_tilde);

/// alpha_m = epsilon sigma_hat_m^2 / (3 - epsilon), nonincreasing by the
/// running minimum. Requires 0 < epsilon < 3 and nonincreasing sigma_hat.
std::vector<double> alpha_schedule(const std::vector<double>& sigma_hat_values,
                                   double epsilon);

struct MultilevelOptions {
    double epsilon = 0.5;  // used only when the partition has no explicit alphas
};

/// Algorithm: per level run the frequency recursion on the sub-interval with
/// (alpha_m, J_m), seeding each level with the previous level's final shape.
ReconstructionResult multilevel_reconstruct(const TrigShape& r0, const FrequencyGrid& grid,
                                            const std::vector<FarFieldPattern>& dataset,
                                            const Vec2& theta, const LevelPartition& partition,
                                            const NewtonConfig& base_cfg,
                                            const MultilevelOptions& opts = {});

} // namespace iscat

#endif // ISCAT_MULTILEVEL_HPP
