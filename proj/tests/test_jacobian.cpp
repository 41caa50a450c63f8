#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "iscat/errors.hpp"
#include "iscat/jacobian.hpp"

using namespace iscat;

namespace {

const Vec2 kTheta{-0.5, std::sqrt(3.0) / 2.0};

// Central finite differences of the weighted stacked far field with respect
// to the orthonormal basis coefficients; the independent oracle for the
// domain-derivative assembly.
Eigen::MatrixXd fd_jacobian(const TrigShape& shape, const IncidentWave& wave,
                            const std::vector<Vec2>& dirs, int degree, int n_quad,
                            double eps) {
    const int p = static_cast<int>(dirs.size());
    Eigen::MatrixXd out(2 * p, 2 * degree + 1);
    for (int col = 0; col < 2 * degree + 1; ++col) {
        Eigen::VectorXd basis = Eigen::VectorXd::Zero(2 * degree + 1);
        basis(col) = eps;
        const TrigCoefficients delta = from_orthonormal(basis);
        const TrigShape plus(shape.center(), shape.radial() + delta);
        const TrigShape minus(shape.center(), shape.radial() - delta);
        const auto fp = weighted_stack(solve_scattering(plus, wave, dirs, n_quad).values);
        const auto fm = weighted_stack(solve_scattering(minus, wave, dirs, n_quad).values);
        out.col(col) = (fp - fm) / (2.0 * eps);
    }
    return out;
}

} // namespace

TEST_CASE("jacobian matches finite differences (constant-mode column, circle)") {
    const auto circle = TrigShape::circle(2.0);
    const IncidentWave wave(1.0, kTheta);
    const auto dirs = uniform_directions(16);
    const auto jac = assemble_jacobian(circle, wave, dirs, 0, 128);
    const auto fd = fd_jacobian(circle, wave, dirs, 0, 128, 1e-5);
    CHECK((jac.matrix - fd).norm() / fd.norm() < 1e-4);
}

TEST_CASE("jacobian matches finite differences (full matrices)") {
    const auto dirs = uniform_directions(16);
    const auto flower = TrigShape::flower(2.0, 0.3, 4);
    const auto circle = TrigShape::circle(2.0);
    for (const auto& shape : {flower, circle}) {
        for (double k : {0.5, 4.0}) {
            const IncidentWave wave(k, kTheta);
            const auto jac = assemble_jacobian(shape, wave, dirs, 6, 128);
            const auto fd = fd_jacobian(shape, wave, dirs, 6, 128, 1e-5);
            CHECK((jac.matrix - fd).norm() / fd.norm() < 1e-4);
        }
    }
    // k = 8 is covered (with M in {3,6,12}) by the acceptance suite
}

TEST_CASE("jacobian is the matrix of a linear map") {
    const auto flower = TrigShape::flower(2.0, 0.3, 4);
    const IncidentWave wave(2.0, kTheta);
    const auto dirs = uniform_directions(16);
    const auto jac = assemble_jacobian(flower, wave, dirs, 4, 128);
    Eigen::VectorXd a = Eigen::VectorXd::Random(jac.matrix.cols());
    CHECK(((jac.matrix * (3.5 * a)) - 3.5 * (jac.matrix * a)).norm() == 0.0);
}

TEST_CASE("smallest singular value: embedded diagonal and homogeneity") {
    JacobianMatrix diag;
    diag.k = 1.0;
    diag.degree = 1;
    diag.matrix = Eigen::MatrixXd::Zero(6, 3);
    diag.matrix(0, 0) = 3.0;
    diag.matrix(1, 1) = 2.0;
    diag.matrix(2, 2) = 0.5;
    CHECK(smallest_singular_value(diag) == doctest::Approx(0.5).epsilon(1e-14));

    JacobianMatrix scaled = diag;
    scaled.matrix *= 4.0;
    CHECK(smallest_singular_value(scaled) == doctest::Approx(2.0).epsilon(1e-13));

    JacobianMatrix deficient = diag;
    deficient.matrix(2, 2) = 0.0;
    CHECK_THROWS_AS(smallest_singular_value(deficient), RankDeficient);
}

TEST_CASE("sigma_min of the verified flower jacobian (regression baseline)") {
    const auto flower = TrigShape::flower(2.0, 0.3, 4);
    const IncidentWave wave(1.0, kTheta);
    const auto jac = assemble_jacobian(flower, wave, uniform_directions(16), 3, 128);
    // frozen after the finite-difference-verified first build
    CHECK(smallest_singular_value(jac) == doctest::Approx(0.0406234750).epsilon(1e-5));
}

TEST_CASE("injectivity proxy: sigma_min > 0 whenever 2M+1 <= 2P") {
    const auto flower = TrigShape::flower(2.0, 0.3, 4);
    const auto dirs = uniform_directions(16);
    for (double k : {0.5, 2.0, 8.0}) {
        for (int degree : {1, 6, 12}) {
            const auto jac = assemble_jacobian(flower, IncidentWave(k, kTheta), dirs,
                                               degree, 128);
            CHECK(smallest_singular_value(jac) > 0.0);
        }
    }
}

TEST_CASE("adjoint identity <J a, b> = <a, J^T b>") {
    const auto flower = TrigShape::flower(2.0, 0.3, 4);
    const auto jac =
        assemble_jacobian(flower, IncidentWave(3.0, kTheta), uniform_directions(16), 5, 128);
    std::mt19937_64 rng(11);
    std::normal_distribution<double> dist;
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::VectorXd a(jac.matrix.cols()), b(jac.matrix.rows());
        for (int i = 0; i < a.size(); ++i) a(i) = dist(rng);
        for (int i = 0; i < b.size(); ++i) b(i) = dist(rng);
        const double lhs = (jac.matrix * a).dot(b);
        const TrigCoefficients jtb = adjoint_apply(jac, b);
        const double rhs = a.dot(to_orthonormal(jtb, jac.degree));
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(std::abs(lhs), 1.0));
    }
}

TEST_CASE("adjoint maps zero to zero and 1x1 to scalar multiplication") {
    const auto circle = TrigShape::circle(2.0);
    const auto jac =
        assemble_jacobian(circle, IncidentWave(1.0, kTheta), uniform_directions(16), 2, 128);
    const TrigCoefficients zero =
        adjoint_apply(jac, Eigen::VectorXd::Zero(jac.matrix.rows()));
    CHECK(l2_norm(zero) == 0.0);

    JacobianMatrix one;
    one.k = 1.0;
    one.degree = 0;
    one.matrix = Eigen::MatrixXd::Constant(1, 1, 2.5);
    Eigen::VectorXd r(1);
    r << 3.0;
    CHECK(to_orthonormal(adjoint_apply(one, r), 0)(0) == doctest::Approx(7.5));

    CHECK_THROWS_AS(adjoint_apply(jac, Eigen::VectorXd::Zero(5)), DimensionMismatch);
}

TEST_CASE("orthonormal coefficient round trip preserves the norm") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> dist;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> c(6), s(6);
        for (auto& v : c) v = dist(rng);
        for (auto& v : s) v = dist(rng);
        const TrigCoefficients coeffs(dist(rng), c, s);
        const Eigen::VectorXd v = to_orthonormal(coeffs, 6);
        CHECK(v.norm() == doctest::Approx(l2_norm(coeffs)).epsilon(1e-14));
        const TrigCoefficients back = from_orthonormal(v);
        CHECK(l2_norm(back - coeffs) < 1e-14);
    }
}
