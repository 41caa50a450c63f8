#include "iscat/jacobian.hpp"

#include <cmath>
#include <numbers>

#include "iscat/errors.hpp"

namespace iscat {

namespace {
constexpr double kPi = std::numbers::pi;
const double kNormConst = std::sqrt(2.0 * kPi);  // norm of the constant basis
const double kNormTrig = std::sqrt(kPi);         // norm of cos(mt), sin(mt)
} // namespace

Eigen::VectorXd to_orthonormal(const TrigCoefficients& c, int degree) {
    if (degree < c.degree()) {
        throw DimensionMismatch("to_orthonormal: target degree too small");
    }
    Eigen::VectorXd v = Eigen::VectorXd::Zero(2 * degree + 1);
    v(0) = c.a0() * kNormConst;
    for (int m = 1; m <= c.degree(); ++m) {
        v(2 * m - 1) = c.cos_coeff(m) * kNormTrig;
        v(2 * m) = c.sin_coeff(m) * kNormTrig;
    }
    return v;
}

TrigCoefficients from_orthonormal(const Eigen::VectorXd& v) {
    if (v.size() % 2 != 1) {
        throw DimensionMismatch("from_orthonormal: length must be 2M+1");
    }
    const int degree = static_cast<int>(v.size() / 2);
    std::vector<double> cc(static_cast<std::size_t>(degree)), ss(static_cast<std::size_t>(degree));
    for (int m = 1; m <= degree; ++m) {
        cc[m - 1] = v(2 * m - 1) / kNormTrig;
        ss[m - 1] = v(2 * m) / kNormTrig;
    }
    return TrigCoefficients(v(0) / kNormConst, std::move(cc), std::move(ss));
}

Eigen::VectorXd weighted_stack(const std::vector<Complex>& values) {
    const int p = static_cast<int>(values.size());
    if (p == 0) throw DimensionMismatch("weighted_stack: empty pattern");
    // direction-averaged norm: weight 1/P per sample. The regularization
    // parameter values quoted in the literature reproduce the reported
    // reconstructions under this scaling; see also NewtonConfig::alpha.
    const double w = std::sqrt(1.0 / p);
    Eigen::VectorXd out(2 * p);
    for (int i = 0; i < p; ++i) {
        out(i) = w * values[i].real();
        out(p + i) = w * values[i].imag();
    }
    return out;
}

Eigen::VectorXd weighted_residual(const std::vector<Complex>& computed,
                                  const std::vector<Complex>& data) {
    if (computed.size() != data.size()) {
        throw DimensionMismatch("weighted_residual: pattern sizes differ");
    }
    std::vector<Complex> diff(computed.size());
    for (std::size_t i = 0; i < computed.size(); ++i) diff[i] = computed[i] - data[i];
    return weighted_stack(diff);
}

JacobianMatrix assemble_jacobian(const HelmholtzSolver& solver, const Vec2& theta,
                                 const Eigen::VectorXcd& density,
                                 const std::vector<Vec2>& obs_dirs, int degree) {
    if (degree < 0) throw DomainError("assemble_jacobian: degree must be >= 0");
    const auto& b = solver.boundary();
    const int p = static_cast<int>(obs_dirs.size());
    const double row_w = std::sqrt(1.0 / p);

    const Eigen::VectorXcd dudn = solver.total_field_normal_derivative(theta, density);

    // radial direction projected on the normal, times du/dnu, at the nodes
    Eigen::VectorXcd base(b.n_quad);
    for (int i = 0; i < b.n_quad; ++i) {
        const double t = b.nodes[i];
        const Vec2 radial{std::cos(t), std::sin(t)};
        base(i) = -radial.dot(b.normals[i]) * dudn(i);
    }

    JacobianMatrix jac;
    jac.k = solver.wavenumber();
    jac.degree = degree;
    jac.matrix.resize(2 * p, 2 * degree + 1);

    for (int col = 0; col < 2 * degree + 1; ++col) {
        Eigen::VectorXcd data(b.n_quad);
        double norm;
        if (col == 0) {
            norm = kNormConst;
            data = base;
        } else {
            norm = kNormTrig;
            const int m = (col + 1) / 2;
            const bool is_cos = (col % 2 == 1);
            for (int i = 0; i < b.n_quad; ++i) {
                const double a = is_cos ? std::cos(m * b.nodes[i]) : std::sin(m * b.nodes[i]);
                data(i) = a * base(i);
            }
        }
        const Eigen::VectorXcd phi = solver.solve_dirichlet(data);
        const std::vector<Complex> ff = solver.far_field(phi, obs_dirs);
        for (int q = 0; q < p; ++q) {
            jac.matrix(q, col) = row_w * ff[q].real() / norm;
            jac.matrix(p + q, col) = row_w * ff[q].imag() / norm;
        }
    }
    return jac;
}

JacobianMatrix assemble_jacobian(const TrigShape& shape, const IncidentWave& wave,
                                 const std::vector<Vec2>& obs_dirs, int degree,
                                 int n_quad) {
    const HelmholtzSolver solver(shape, wave.k, n_quad);
    const Eigen::VectorXcd density = solver.scattering_density(wave.theta);
    return assemble_jacobian(solver, wave.theta, density, obs_dirs, degree);
}

double smallest_singular_value(const JacobianMatrix& jac) {
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac.matrix);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    const double smax = sv(0);
    if (smin < 1e-14 * smax) {
        throw RankDeficient("smallest_singular_value: matrix numerically rank deficient");
    }
    return smin;
}

TrigCoefficients adjoint_apply(const JacobianMatrix& jac, const Eigen::VectorXd& residual) {
    if (residual.size() != jac.matrix.rows()) {
        throw DimensionMismatch("adjoint_apply: residual length must be 2P");
    }
    return from_orthonormal(jac.matrix.transpose() * residual);
}

} // namespace iscat
