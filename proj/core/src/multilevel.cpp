#include "iscat/multilevel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "iscat/errors.hpp"

namespace iscat {

LevelPartition::LevelPartition(std::vector<int> ends, std::vector<double> alphas_,
                               std::vector<int> iters)
    : level_ends(std::move(ends)), alphas(std::move(alphas_)),
      newton_iters(std::move(iters)) {
    if (level_ends.empty()) throw DomainError("LevelPartition: no levels");
    for (std::size_t m = 0; m < level_ends.size(); ++m) {
        if (level_ends[m] < 1) throw DomainError("LevelPartition: level end must be >= 1");
        if (m > 0 && level_ends[m] <= level_ends[m - 1]) {
            throw DomainError("LevelPartition: level ends must increase");
        }
    }
    if (newton_iters.size() != level_ends.size()) {
        throw DimensionMismatch("LevelPartition: one iteration count per level required");
    }
    for (int j : newton_iters) {
        if (j < 1) throw DomainError("LevelPartition: newton iterations must be >= 1");
    }
    if (!alphas.empty()) {
        if (alphas.size() != level_ends.size()) {
            throw DimensionMismatch("LevelPartition: one alpha per level required");
        }
        for (std::size_t m = 0; m < alphas.size(); ++m) {
            if (!(alphas[m] > 0.0)) throw DomainError("LevelPartition: alpha must be > 0");
            if (m > 0 && alphas[m] > alphas[m - 1] + 1e-15) {
                throw DomainError("LevelPartition: alphas must be nonincreasing");
            }
        }
    }
}

LevelPartition LevelPartition::two_level_default(int num_steps, double alpha_first,
                                                 double alpha_rest) {
    // The strongly regularized first level only needs to cover the lowest
    // frequencies, where a rough starting shape does its damage.
    const int cut = std::max(1, num_steps / 4);
    return LevelPartition({cut, num_steps}, {alpha_first, alpha_rest}, {5, 4});
}

std::vector<double> sigma_hat(const std::vector<double>& sigma_tilde) {
    if (sigma_tilde.empty()) throw DomainError("sigma_hat: empty input");
    std::vector<double> out(sigma_tilde.size());
    double running = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < sigma_tilde.size(); ++m) {
        if (!(sigma_tilde[m] > 0.0)) throw DomainError("sigma_hat: values must be > 0");
        running = std::min(running, sigma_tilde[m]);
        out[m] = running;
    }
    return out;
}

std::vector<double> alpha_schedule(const std::vector<double>& sigma_hat_values,
                                   double epsilon) {
    if (!(epsilon > 0.0) || !(epsilon < 3.0)) {
        throw DomainError("alpha_schedule: epsilon must lie in (0, 3)");
    }
    std::vector<double> out(sigma_hat_values.size());
    double running = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < sigma_hat_values.size(); ++m) {
        if (!(sigma_hat_values[m] > 0.0)) {
            throw DomainError("alpha_schedule: sigma values must be > 0");
        }
        if (m > 0 && sigma_hat_values[m] > sigma_hat_values[m - 1] + 1e-15) {
            throw DomainError("alpha_schedule: sigma_hat must be nonincreasing");
        }
        const double a = epsilon * sigma_hat_values[m] * sigma_hat_values[m] / (3.0 - epsilon);
        running = std::min(running, a);
        out[m] = running;
    }
    return out;
}

ReconstructionResult multilevel_reconstruct(const TrigShape& r0, const FrequencyGrid& grid,
                                            const std::vector<FarFieldPattern>& dataset,
                                            const Vec2& theta, const LevelPartition& partition,
                                            const NewtonConfig& base_cfg,
                                            const MultilevelOptions& opts) {
    if (partition.level_ends.back() != grid.num_steps) {
        throw DimensionMismatch("multilevel_reconstruct: partition must cover the grid");
    }
    if (static_cast<int>(dataset.size()) != grid.point_count()) {
        throw DimensionMismatch("multilevel_reconstruct: one pattern per grid point required");
    }

    ReconstructionResult result{r0, {}};
    TrigShape current = r0;
    double sigma_running = std::numeric_limits<double>::infinity();
    double alpha_prev = std::numeric_limits<double>::infinity();

    int start = 0;
    for (std::size_t m = 0; m < partition.level_count(); ++m) {
        const int end = partition.level_ends[m];
        const FrequencyGrid sub_grid(grid.wavenumber(start), grid.wavenumber(end),
                                     end - start);
        std::vector<FarFieldPattern> sub_data(dataset.begin() + start,
                                              dataset.begin() + end + 1);
        std::vector<int> sub_degrees(base_cfg.schedule.degrees().begin() + start,
                                     base_cfg.schedule.degrees().begin() + end + 1);

        double alpha_m;
        if (!partition.alphas.empty()) {
            alpha_m = partition.alphas[m];
        } else {
            // sigma_tilde_m from the Jacobian at the level's first target
            // frequency, at the current iterate
            const int probe = start + 1;
            const JacobianMatrix jac = assemble_jacobian(
                current, IncidentWave(grid.wavenumber(probe), theta),
                dataset[probe].obs_dirs, base_cfg.schedule.degree(probe), base_cfg.n_quad);
            sigma_running = std::min(sigma_running, smallest_singular_value(jac));
            alpha_m = std::min(alpha_prev, opts.epsilon * sigma_running * sigma_running /
                                               (3.0 - opts.epsilon));
        }
        alpha_prev = alpha_m;

        NewtonConfig cfg(alpha_m, partition.newton_iters[m],
                         SubspaceSchedule(std::move(sub_degrees)), base_cfg.n_quad);
        try {
            ReconstructionResult level =
                recursive_reconstruct(current, sub_grid, sub_data, theta, cfg);
            // re-index trace rows to the global frequency indices
            for (TraceRow& row : level.trace.rows) row.freq_index += start;
            for (ShapeRecord& rec : level.trace.shapes) rec.freq_index += start;
            result.trace.append(level.trace);
            current = level.shape;
        } catch (PositivityLoss& loss) {
            for (TraceRow& row : loss.partial_trace.rows) row.freq_index += start;
            ReconstructionTrace partial = result.trace;
            partial.append(loss.partial_trace);
            throw PositivityLoss(loss.what(), loss.last_iterate, std::move(partial));
        }
        start = end;
    }
    result.shape = current;
    return result;
}

} // namespace iscat
