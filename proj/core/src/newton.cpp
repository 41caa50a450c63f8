#include "iscat/newton.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "iscat/errors.hpp"

namespace iscat {

namespace {

double pattern_k_mismatch(double a, double b) { return std::abs(a - b); }

} // namespace

FrequencyGrid::FrequencyGrid(double kl, double kh, int n)
    : k_low(kl), k_high(kh), num_steps(n) {
    if (!(kl > 0.0) || !(kh > kl)) {
        throw DomainError("FrequencyGrid: need 0 < k_low < k_high");
    }
    if (n < 1) throw DomainError("FrequencyGrid: need at least one step");
}

double FrequencyGrid::wavenumber(int n) const {
    if (n < 0 || n > num_steps) throw DomainError("FrequencyGrid: index out of range");
    return k_low + n * (k_high - k_low) / num_steps;
}

NewtonConfig::NewtonConfig(double alpha_, int iters, SubspaceSchedule sched, int n_quad_)
    : alpha(alpha_), newton_iters(iters), schedule(std::move(sched)), n_quad(n_quad_) {
    if (!(alpha > 0.0)) throw DomainError("NewtonConfig: alpha must be > 0");
    if (iters < 1) throw DomainError("NewtonConfig: newton_iters must be >= 1");
}

void ReconstructionTrace::append(const ReconstructionTrace& other) {
    rows.insert(rows.end(), other.rows.begin(), other.rows.end());
    shapes.insert(shapes.end(), other.shapes.begin(), other.shapes.end());
}

TrigCoefficients tikhonov_step(const JacobianMatrix& jac, const Eigen::VectorXd& residual,
                               double alpha) {
    if (!(alpha > 0.0)) throw DomainError("tikhonov_step: alpha must be > 0");
    if (residual.size() != jac.matrix.rows()) {
        throw DimensionMismatch("tikhonov_step: residual length must match Jacobian rows");
    }
    const int dim = static_cast<int>(jac.matrix.cols());
    Eigen::MatrixXd normal = jac.matrix.transpose() * jac.matrix;
    normal += alpha * Eigen::MatrixXd::Identity(dim, dim);
    const Eigen::LLT<Eigen::MatrixXd> llt(normal);
    if (llt.info() != Eigen::Success) {
        throw NotSpd("tikhonov_step: normal equations not positive definite");
    }
    const Eigen::VectorXd rhs = -(jac.matrix.transpose() * residual);
    return from_orthonormal(llt.solve(rhs));
}

NewtonResult newton_at_frequency(const TrigShape& r_in, double k, const FarFieldPattern& data,
                                 const Vec2& theta, int degree, const NewtonConfig& cfg,
                                 int freq_index) {
    if (pattern_k_mismatch(data.k, k) > 1e-12 * std::max(1.0, k)) {
        throw DomainError("newton_at_frequency: data wavenumber mismatch");
    }
    if (degree < 0) throw DomainError("newton_at_frequency: degree must be >= 0");

    TrigShape current = r_in;
    NewtonResult result{current, {}};

    for (int j = 0; j < cfg.newton_iters; ++j) {
        const HelmholtzSolver solver(current, k, cfg.n_quad);
        const Eigen::VectorXcd density = solver.scattering_density(theta);
        const std::vector<Complex> ff = solver.far_field(density, data.obs_dirs);
        const Eigen::VectorXd residual = weighted_residual(ff, data.values);
        const JacobianMatrix jac =
            assemble_jacobian(solver, theta, density, data.obs_dirs, degree);
        const double sigma = smallest_singular_value(jac);

        const TrigCoefficients raw_step = tikhonov_step(jac, residual, cfg.alpha);
        const TrigCoefficients step = project(raw_step, degree);

        result.rows.push_back(TraceRow{freq_index, k, j, residual.norm(),
                                       l2_norm(step), sigma});

        const TrigCoefficients updated = current.radial() + step;
        if (!radial_positive(updated)) {
            ReconstructionTrace partial;
            partial.rows = result.rows;
            throw PositivityLoss("newton_at_frequency: iterate lost positivity at k=" +
                                     std::to_string(k),
                                 current, std::move(partial));
        }
        current = TrigShape(current.center(), updated);
    }
    result.shape = current;
    return result;
}

ReconstructionResult recursive_reconstruct(const TrigShape& r0, const FrequencyGrid& grid,
                                           const std::vector<FarFieldPattern>& dataset,
                                           const Vec2& theta, const NewtonConfig& cfg) {
    if (static_cast<int>(dataset.size()) != grid.point_count()) {
        throw DimensionMismatch("recursive_reconstruct: one pattern per grid point required");
    }
    if (cfg.schedule.size() != static_cast<std::size_t>(grid.point_count())) {
        throw DimensionMismatch("recursive_reconstruct: schedule size must match grid");
    }
    if (r0.degree() > cfg.schedule.degree(0)) {
        throw DomainError("recursive_reconstruct: r0 degree exceeds M_0");
    }

    ReconstructionResult result{r0, {}};
    TrigShape current = r0;
    for (int n = 0; n < grid.num_steps; ++n) {
        const double k_next = grid.wavenumber(n + 1);
        const int degree = cfg.schedule.degree(static_cast<std::size_t>(n) + 1);
        try {
            NewtonResult step = newton_at_frequency(current, k_next, dataset[n + 1], theta,
                                                    degree, cfg, n + 1);
            current = step.shape;
            result.trace.rows.insert(result.trace.rows.end(), step.rows.begin(),
                                     step.rows.end());
            result.trace.shapes.push_back(ShapeRecord{n + 1, k_next, current});
        } catch (PositivityLoss& loss) {
            ReconstructionTrace partial = result.trace;
            partial.rows.insert(partial.rows.end(), loss.partial_trace.rows.begin(),
                                loss.partial_trace.rows.end());
            throw PositivityLoss(loss.what(), loss.last_iterate, std::move(partial));
        }
    }
    result.shape = current;
    return result;
}

namespace {

// Nelder-Mead on (cx, cy, R); returns best parameters and objective value.
struct SimplexResult {
    Eigen::Vector3d best;
    double value;
};

SimplexResult nelder_mead_circle(const std::function<double(const Eigen::Vector3d&)>& f,
                                 const Eigen::Vector3d& start, double scale, int max_iters) {
    constexpr int dim = 3;
    std::array<Eigen::Vector3d, dim + 1> pts;
    std::array<double, dim + 1> vals;
    pts[0] = start;
    for (int i = 1; i <= dim; ++i) {
        pts[i] = start;
        pts[i](i - 1) += scale;
    }
    for (int i = 0; i <= dim; ++i) vals[i] = f(pts[i]);

    auto order = [&] {
        for (int i = 0; i <= dim; ++i) {
            for (int j = i + 1; j <= dim; ++j) {
                if (vals[j] < vals[i]) {
                    std::swap(vals[i], vals[j]);
                    std::swap(pts[i], pts[j]);
                }
            }
        }
    };
    order();

    for (int iter = 0; iter < max_iters; ++iter) {
        if (std::abs(vals[dim] - vals[0]) < 1e-12 * (std::abs(vals[0]) + 1e-30)) break;
        const Eigen::Vector3d centroid = (pts[0] + pts[1] + pts[2]) / 3.0;
        const Eigen::Vector3d reflected = centroid + (centroid - pts[dim]);
        const double fr = f(reflected);
        if (fr < vals[0]) {
            const Eigen::Vector3d expanded = centroid + 2.0 * (centroid - pts[dim]);
            const double fe = f(expanded);
            if (fe < fr) {
                pts[dim] = expanded;
                vals[dim] = fe;
            } else {
                pts[dim] = reflected;
                vals[dim] = fr;
            }
        } else if (fr < vals[dim - 1]) {
            pts[dim] = reflected;
            vals[dim] = fr;
        } else {
            const Eigen::Vector3d contracted = centroid + 0.5 * (pts[dim] - centroid);
            const double fc = f(contracted);
            if (fc < vals[dim]) {
                pts[dim] = contracted;
                vals[dim] = fc;
            } else {
                for (int i = 1; i <= dim; ++i) {
                    pts[i] = pts[0] + 0.5 * (pts[i] - pts[0]);
                    vals[i] = f(pts[i]);
                }
            }
        }
        order();
    }
    return {pts[0], vals[0]};
}

} // namespace

TrigShape initial_guess(const FarFieldPattern& data, const Vec2& theta,
                        const SearchBox& box, const NewtonConfig& cfg,
                        const InitOptions& opts) {
    const double k = data.k;
    const double diag = std::hypot(box.x_max - box.x_min, box.y_max - box.y_min);
    const double r_min = 0.02 * diag;
    const double r_start = 0.25 * diag;
    const int n_quad_fit = std::min(cfg.n_quad, std::max(16, opts.n_quad_fit));

    double data_norm = 0.0;
    for (const Complex& v : data.values) data_norm += std::norm(v);
    data_norm = std::sqrt(data_norm / static_cast<double>(data.values.size()));

    const auto objective = [&](const Eigen::Vector3d& p) -> double {
        if (p(2) < r_min) return 1e30;
        try {
            const TrigShape circle = TrigShape::circle(p(2), {p(0), p(1)});
            const FarFieldPattern ff =
                solve_scattering(circle, IncidentWave(k, theta), data.obs_dirs, n_quad_fit);
            return weighted_residual(ff.values, data.values).squaredNorm();
        } catch (const Error&) {
            return 1e30;
        }
    };

    // stage 1: simplex restarts on the 3x3 grid of box points
    Eigen::Vector3d best;
    double best_val = std::numeric_limits<double>::infinity();
    for (int ix = 0; ix < 3; ++ix) {
        for (int iy = 0; iy < 3; ++iy) {
            const double cx = box.x_min + 0.5 * ix * (box.x_max - box.x_min);
            const double cy = box.y_min + 0.5 * iy * (box.y_max - box.y_min);
            const SimplexResult r = nelder_mead_circle(
                objective, Eigen::Vector3d(cx, cy, r_start), 0.2 * diag,
                opts.simplex_max_iters);
            if (r.value < best_val) {
                best_val = r.value;
                best = r.best;
            }
        }
    }

    if (std::sqrt(best_val) > 0.9 * data_norm) {
        throw InitFailure("initial_guess: circle fit residual exceeds 0.9 of data norm");
    }

    // stage 2: fix the center, refine (a0, beta_1, gamma_1) by the regularized
    // Gauss-Newton step
    TrigShape shape(Vec2{best(0), best(1)},
                    TrigCoefficients(best(2), {0.0}, {0.0}));
    for (int it = 0; it < opts.refine_iters; ++it) {
        const HelmholtzSolver solver(shape, k, n_quad_fit);
        const Eigen::VectorXcd density = solver.scattering_density(theta);
        const Eigen::VectorXd residual =
            weighted_residual(solver.far_field(density, data.obs_dirs), data.values);
        const JacobianMatrix jac =
            assemble_jacobian(solver, theta, density, data.obs_dirs, 1);
        const TrigCoefficients step = tikhonov_step(jac, residual, cfg.alpha);
        const TrigCoefficients updated = shape.radial() + step;
        if (!radial_positive(updated)) break;
        shape = TrigShape(shape.center(), updated);
        if (l2_norm(step) < opts.refine_step_tol) break;
    }
    return shape;
}

SubspaceSchedule default_schedule(const FrequencyGrid& grid, double mean_radius, int cap) {
    if (!(mean_radius > 0.0)) throw DomainError("default_schedule: mean radius must be > 0");
    std::vector<int> degrees(static_cast<std::size_t>(grid.point_count()));
    for (int n = 0; n <= grid.num_steps; ++n) {
        const int m = static_cast<int>(std::lround(grid.wavenumber(n) * mean_radius));
        degrees[static_cast<std::size_t>(n)] = std::min(cap, std::max(1, m));
    }
    return SubspaceSchedule(std::move(degrees));
}

} // namespace iscat
