#ifndef ISCAT_NEWTON_HPP
#define ISCAT_NEWTON_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "iscat/forward.hpp"
#include "iscat/geometry.hpp"
#include "iscat/jacobian.hpp"

namespace iscat {

/// Uniform wavenumber grid k_n = k_low + n (k_high - k_low)/N, n = 0..N.
struct FrequencyGrid {
    double k_low;
    double k_high;
    int num_steps;  // N; the grid has N+1 points

    FrequencyGrid(double kl, double kh, int n);
    double wavenumber(int n) const;
    double step() const { return (k_high - k_low) / num_steps; }
    int point_count() const { return num_steps + 1; }
};

struct NewtonConfig {
    double alpha = 1e-2;   // Tikhonov regularization parameter
    int newton_iters = 4;  // J, inner iterations per frequency
    SubspaceSchedule schedule;
    int n_quad = 128;

    NewtonConfig(double alpha_, int iters, SubspaceSchedule sched, int n_quad_ = 128);
};

/// One record per executed inner iteration.
struct TraceRow {
    int freq_index;       // n
    double k;             // k_n
    int iter;             // j
    double residual_norm; // ||F_delta(r^j, k)||_2 before the step
    double step_norm;     // ||Delta r^j||_X
    double sigma_min;     // smallest singular value of the Jacobian used
};

struct ShapeRecord {
    int freq_index;
    double k;
    TrigShape shape;
};

struct ReconstructionTrace {
    std::vector<TraceRow> rows;
    std::vector<ShapeRecord> shapes;  // reconstruction after each frequency

    void append(const ReconstructionTrace& other);
};

/// Diverged iterate: the radial function lost positivity. Carries the last
/// positive iterate and the partial trace for diagnosis.
class PositivityLoss : public Error {
public:
    PositivityLoss(std::string msg, TrigShape last, ReconstructionTrace trace)
        : Error(std::move(msg)), last_iterate(std::move(last)), partial_trace(std::move(trace)) {}

    TrigShape last_iterate;
    ReconstructionTrace partial_trace;
};

class InitFailure : public Error {
public:
    explicit InitFailure(const std::string& msg) : Error(msg) {}
};

/// Solves (alpha I + J^T J) dc = -J^T residual by Cholesky; the unique
/// minimizer of the Tikhonov-regularized linearized least squares problem.
TrigCoefficients tikhonov_step(const JacobianMatrix& jac, const Eigen::VectorXd& residual,
                               double alpha);

struct NewtonResult {
    TrigShape shape;
    std::vector<TraceRow> rows;
};

/// J regularized Newton iterations at one wavenumber in the degree-M space:
/// r^{j+1} = r^j + P_M dr^j. Throws PositivityLoss if an iterate leaves the
/// admissible set.
NewtonResult newton_at_frequency(const TrigShape& r_in, double k, const FarFieldPattern& data,
                                 const Vec2& theta, int degree, const NewtonConfig& cfg,
                                 int freq_index = 0);

/// Frequency recursion: r_{n+1} = J Newton iterations at k_{n+1} started
/// from r_n in the subspace of degree M_{n+1}.
struct ReconstructionResult {
    TrigShape shape;
    ReconstructionTrace trace;
};

ReconstructionResult recursive_reconstruct(const TrigShape& r0, const FrequencyGrid& grid,
                                           const std::vector<FarFieldPattern>& dataset,
                                           const Vec2& theta, const NewtonConfig& cfg);

/// Rectangular region scanned for the circle fit of the initial guess.
struct SearchBox {
    double x_min = -3.0, x_max = 3.0;
    double y_min = -3.0, y_max = 3.0;
};

struct InitOptions {
    int refine_iters = 10;       // Gauss-Newton refinements of (a0, b1, g1)
    double refine_step_tol = 1e-6;
    int simplex_max_iters = 160;
    // quadrature for the circle-fit solves; low-frequency circles need far
    // fewer nodes than the main reconstruction
    int n_quad_fit = 64;
};

/// Lowest-frequency initialization: derivative-free circle fit (center +
/// radius) restarted on a 3x3 grid of box points, then Tikhonov-regularized
/// Gauss-Newton refinement of the three degree-1 coefficients with the
/// center fixed. Throws InitFailure when the data shows no obstacle
/// sensitivity.
TrigShape initial_guess(const FarFieldPattern& data, const Vec2& theta,
                        const SearchBox& box, const NewtonConfig& cfg,
                        const InitOptions& opts = {});

/// Default subspace schedule M_n = min(cap, max(1, round(k_n * mean_radius))).
SubspaceSchedule default_schedule(const FrequencyGrid& grid, double mean_radius,
                                  int cap = 12);

} // namespace iscat

#endif // ISCAT_NEWTON_HPP
