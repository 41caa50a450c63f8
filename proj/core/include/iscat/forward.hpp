#ifndef ISCAT_FORWARD_HPP
#define ISCAT_FORWARD_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "iscat/geometry.hpp"

namespace iscat {

using Complex = std::complex<double>;

/// Incident plane wave u^i(x) = exp(i k x.theta).
struct IncidentWave {
    double k;
    Vec2 theta;

    IncidentWave(double k_, Vec2 theta_);
};

/// Far-field samples u_inf(x_hat) at one wavenumber.
struct FarFieldPattern {
    double k;
    std::vector<Vec2> obs_dirs;
    std::vector<Complex> values;

    FarFieldPattern(double k_, std::vector<Vec2> dirs, std::vector<Complex> vals);
};

/// P directions (cos(2 pi p / P), sin(2 pi p / P)), p = 0..P-1.
std::vector<Vec2> uniform_directions(int count);

/// Quadrature-ready boundary tables at the nodes t_i = pi i / n,
/// i = 0..2n-1 (n_quad = 2n).
struct DiscretizedBoundary {
    int n_quad;
    std::vector<double> nodes;
    std::vector<Vec2> points;
    std::vector<Vec2> derivatives;         // x'(t_i)
    std::vector<Vec2> second_derivatives;  // x''(t_i)
    std::vector<double> speeds;            // |x'(t_i)|
    std::vector<Vec2> normals;             // unit outward
};

/// Requires n_quad even and >= max(16, 8*degree + 16) (anti-aliasing);
/// throws QuadratureTooCoarse otherwise.
DiscretizedBoundary discretize(const TrigShape& shape, int n_quad);

/// Nystrom solver for the exterior sound-soft problem via the combined-field
/// equation (I/2 + K - i eta S) phi = f with coupling eta = k. Holds the LU
/// factorization so many right-hand sides (Jacobian columns) reuse it.
class HelmholtzSolver {
public:
    HelmholtzSolver(const TrigShape& shape, double k, int n_quad);

    double wavenumber() const { return k_; }
    const DiscretizedBoundary& boundary() const { return boundary_; }

    /// Density phi solving the combined-field equation with Dirichlet trace
    /// `data` at the nodes (for scattering, data = -u^i on the boundary).
    Eigen::VectorXcd solve_dirichlet(const Eigen::VectorXcd& data) const;

    /// Density for the scattering problem with incident direction theta.
    Eigen::VectorXcd scattering_density(const Vec2& theta) const;

    /// Far field of the combined-field potential with density phi:
    ///   u_inf(x_hat) = e^{-i pi/4}/sqrt(8 pi k)
    ///                  * int [k nu(y).x_hat + eta] e^{-i k x_hat.y} phi(y) ds(y).
    std::vector<Complex> far_field(const Eigen::VectorXcd& density,
                                   const std::vector<Vec2>& obs_dirs) const;

    /// Normal derivative of the total field on the boundary, from the
    /// scattering density via the jump relations (one dense matrix apply);
    /// the hypersingular part is regularized through Maue's identity.
    Eigen::VectorXcd total_field_normal_derivative(const Vec2& theta,
                                                   const Eigen::VectorXcd& density) const;

private:
    double k_;
    double eta_;
    DiscretizedBoundary boundary_;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
    double matrix_scale_ = 0.0;
    // Maue-identity building blocks, assembled on first use
    mutable Eigen::MatrixXcd sl_plain_;  // single layer without speed factor
    mutable Eigen::MatrixXcd sl_nunu_;   // nu(x).nu(y)-weighted single layer
    mutable Eigen::MatrixXcd kprime_;    // normal derivative of the single layer
    mutable Eigen::MatrixXcd diff_;      // spectral differentiation
    mutable bool neumann_ready_ = false;

    void build_neumann_operator() const;
};

/// One-shot forward solve: far field of the sound-soft obstacle.
FarFieldPattern solve_scattering(const TrigShape& shape, const IncidentWave& wave,
                                 const std::vector<Vec2>& obs_dirs, int n_quad);

/// Mie-series far field of a sound-soft disk; independent of the Nystrom
/// path. Series truncated when terms fall below 1e-14 relative.
FarFieldPattern disk_oracle(double radius, Vec2 center, const IncidentWave& wave,
                            const std::vector<Vec2>& obs_dirs);

/// |int_{S^1} |u_inf|^2 ds + sqrt(8 pi / k) Re(e^{i pi/4} u_inf(theta))|.
/// Requires a uniform direction grid; u_inf(theta) is trigonometrically
/// interpolated when theta is not a grid direction.
double optical_theorem_defect(const FarFieldPattern& pattern, const IncidentWave& wave);

/// Relative L2 distance between two patterns on the same directions.
double relative_l2_distance(const FarFieldPattern& a, const FarFieldPattern& b);

namespace detail {
/// Kress product-quadrature weights R_{|i-j|} for the 2 pi-periodic
/// logarithmic kernel ln(4 sin^2((t-tau)/2)) on 2n nodes.
Eigen::MatrixXd kress_log_weights(int n);
/// Spectral differentiation matrix on the 2n-point periodic grid.
Eigen::MatrixXd trig_diff_matrix(int n);
} // namespace detail

} // namespace iscat

#endif // ISCAT_FORWARD_HPP
