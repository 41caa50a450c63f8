#ifndef ISCAT_JACOBIAN_HPP
#define ISCAT_JACOBIAN_HPP

#include <Eigen/Dense>

#include "iscat/forward.hpp"
#include "iscat/geometry.hpp"

namespace iscat {

/// Shape derivative of the far-field map restricted to the trig subspace of
/// degree M, as a real (2P) x (2M+1) matrix between the discrete
/// inner-product spaces: rows are far-field samples stacked (Re block, then
/// Im block) with the direction-averaged weights sqrt(1/P); columns
/// correspond to the orthonormalized basis
/// {1/sqrt(2 pi), cos(mt)/sqrt(pi), sin(mt)/sqrt(pi)} ordered
/// (1, cos t, sin t, ..., cos Mt, sin Mt).
struct JacobianMatrix {
    double k;
    int degree;
    Eigen::MatrixXd matrix;

    int observation_count() const { return static_cast<int>(matrix.rows()) / 2; }
};

/// Coefficient vector in the orthonormalized trig basis; l2_norm(c) equals
/// the Euclidean norm of the returned vector.
Eigen::VectorXd to_orthonormal(const TrigCoefficients& c, int degree);
TrigCoefficients from_orthonormal(const Eigen::VectorXd& v);

/// Far-field samples stacked (Re, Im) with sqrt(1/P) row weights, so the
/// Euclidean norm is the direction-averaged L2(S^1) norm.
Eigen::VectorXd weighted_stack(const std::vector<Complex>& values);

/// Residual F(shape,k) - data in stacked weighted form.
Eigen::VectorXd weighted_residual(const std::vector<Complex>& computed,
                                  const std::vector<Complex>& data);

/// Assembles the domain-derivative Jacobian: for each basis function a, the
/// column is the far field of the radiating solution with boundary values
/// -(h.nu) du/dnu, h(t) = a(t)(cos t, sin t), du/dnu the total-field normal
/// derivative. All columns reuse one LU factorization.
JacobianMatrix assemble_jacobian(const TrigShape& shape, const IncidentWave& wave,
                                 const std::vector<Vec2>& obs_dirs, int degree,
                                 int n_quad);

/// Same, reusing an existing solver and its scattering density.
JacobianMatrix assemble_jacobian(const HelmholtzSolver& solver, const Vec2& theta,
                                 const Eigen::VectorXcd& density,
                                 const std::vector<Vec2>& obs_dirs, int degree);

/// Smallest singular value via full SVD. Throws RankDeficient when
/// sigma_min < 1e-14 sigma_max.
double smallest_singular_value(const JacobianMatrix& jac);

/// J^T applied to a stacked weighted residual, mapped back to trig
/// coefficients (the adjoint between the discrete inner-product spaces).
TrigCoefficients adjoint_apply(const JacobianMatrix& jac, const Eigen::VectorXd& residual);

} // namespace iscat

#endif // ISCAT_JACOBIAN_HPP
