#include "iscat/forward.hpp"

#include <cmath>
#include <numbers>

#include "iscat/errors.hpp"
#include "iscat/specfun.hpp"

namespace iscat {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
const Complex kImag(0.0, 1.0);

void check_unit(const Vec2& v, const char* what) {
    if (std::abs(v.norm() - 1.0) > 1e-12) {
        throw DomainError(std::string(what) + " must be a unit vector");
    }
}

// Diagonal of the smooth part of the single-layer kernel, without the
// speed factor: i/4 - gamma/(2 pi) - ln(k |x'| / 2)/(2 pi).
Complex single_layer_diag(double k, double speed) {
    return Complex(-kEulerGamma / (2.0 * kPi) -
                       std::log(0.5 * k * speed) / (2.0 * kPi),
                   0.25);
}

} // namespace

IncidentWave::IncidentWave(double k_, Vec2 theta_) : k(k_), theta(theta_) {
    if (!(k > 0.0)) throw DomainError("IncidentWave: wavenumber must be > 0");
    check_unit(theta, "IncidentWave: theta");
}

FarFieldPattern::FarFieldPattern(double k_, std::vector<Vec2> dirs,
                                 std::vector<Complex> vals)
    : k(k_), obs_dirs(std::move(dirs)), values(std::move(vals)) {
    if (!(k > 0.0)) throw DomainError("FarFieldPattern: wavenumber must be > 0");
    if (obs_dirs.size() != values.size()) {
        throw DimensionMismatch("FarFieldPattern: directions/values size mismatch");
    }
    for (const auto& d : obs_dirs) check_unit(d, "FarFieldPattern: obs_dir");
}

std::vector<Vec2> uniform_directions(int count) {
    if (count < 1) throw DomainError("uniform_directions: count must be >= 1");
    std::vector<Vec2> dirs(static_cast<std::size_t>(count));
    for (int p = 0; p < count; ++p) {
        const double phi = 2.0 * kPi * p / count;
        dirs[p] = {std::cos(phi), std::sin(phi)};
    }
    return dirs;
}

DiscretizedBoundary discretize(const TrigShape& shape, int n_quad) {
    const int required = std::max(16, 8 * shape.degree() + 16);
    if (n_quad % 2 != 0 || n_quad < required) {
        throw QuadratureTooCoarse("discretize: n_quad must be even and >= " +
                                  std::to_string(required));
    }
    DiscretizedBoundary b;
    b.n_quad = n_quad;
    b.nodes.resize(n_quad);
    b.points.resize(n_quad);
    b.derivatives.resize(n_quad);
    b.second_derivatives.resize(n_quad);
    b.speeds.resize(n_quad);
    b.normals.resize(n_quad);
    for (int i = 0; i < n_quad; ++i) {
        const double t = 2.0 * kPi * i / n_quad;
        const BoundaryPoint p = eval_boundary(shape, t);
        b.nodes[i] = t;
        b.points[i] = p.point;
        b.derivatives[i] = p.tangent;
        b.speeds[i] = p.speed;
        b.normals[i] = p.normal;
        const double r = shape.radial().evaluate(t);
        const double dr = shape.radial().derivative(t);
        const double ddr = shape.radial().second_derivative(t);
        const double ct = std::cos(t), st = std::sin(t);
        // x'' = (r'' - r)(cos,sin) + 2 r'(-sin,cos)
        b.second_derivatives[i] = {(ddr - r) * ct - 2.0 * dr * st,
                                   (ddr - r) * st + 2.0 * dr * ct};
    }
    return b;
}

namespace detail {

Eigen::MatrixXd kress_log_weights(int n) {
    // R_j = -(2 pi / n) sum_{m=1}^{n-1} cos(m j pi / n)/m - (-1)^j pi / n^2
    const int size = 2 * n;
    std::vector<double> r(static_cast<std::size_t>(size));
    for (int j = 0; j < size; ++j) {
        double s = 0.0;
        for (int m = 1; m < n; ++m) {
            s += std::cos(m * j * kPi / n) / m;
        }
        const double parity = (j % 2 == 0) ? 1.0 : -1.0;
        r[j] = -(2.0 * kPi / n) * s - parity * kPi / (n * n);
    }
    Eigen::MatrixXd w(size, size);
    for (int i = 0; i < size; ++i) {
        for (int j = 0; j < size; ++j) {
            w(i, j) = r[static_cast<std::size_t>(std::abs(i - j))];
        }
    }
    return w;
}

Eigen::MatrixXd trig_diff_matrix(int n) {
    const int size = 2 * n;
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(size, size);
    for (int i = 0; i < size; ++i) {
        for (int j = 0; j < size; ++j) {
            if (i == j) continue;
            const int diff = i - j;
            const double sign = (diff % 2 == 0) ? 1.0 : -1.0;
            d(i, j) = 0.5 * sign / std::tan(0.5 * kPi * diff / n);
        }
    }
    return d;
}

} // namespace detail

namespace {

double log_sin_factor(double ti, double tj) {
    const double s = std::sin(0.5 * (ti - tj));
    return std::log(4.0 * s * s);
}

Eigen::MatrixXcd assemble_combined(const DiscretizedBoundary& b, double k,
                                   double eta) {
    const int size = b.n_quad;
    const int n = size / 2;
    const Eigen::MatrixXd logw = detail::kress_log_weights(n);
    const double trapz = kPi / n;

    Eigen::MatrixXcd a(size, size);
    for (int i = 0; i < size; ++i) {
        for (int j = 0; j < size; ++j) {
            Complex value;
            if (i == j) {
                // L1 vanishes on the diagonal; the curvature term is the
                // double-layer limit, the log constant the single-layer one.
                const Vec2 d1 = b.derivatives[i];
                const Vec2 d2 = b.second_derivatives[i];
                const double sp = b.speeds[i];
                const double curv = (d2.x * d1.y - d2.y * d1.x) / (4.0 * kPi * sp * sp);
                const Complex m1(-sp / (4.0 * kPi), 0.0);
                const Complex m2 = single_layer_diag(k, sp) * sp;
                a(i, j) = 0.5 + trapz * (curv - kImag * eta * m2) +
                          logw(i, j) * (-kImag * eta * m1);
            } else {
                const Vec2 diff = b.points[i] - b.points[j];
                const double r = diff.norm();
                const double z = k * r;
                const auto c = specfun::cyl01(z);
                const double lg = log_sin_factor(b.nodes[i], b.nodes[j]);
                // double layer: (ik/4) H1(kr) (x_i - x_j).(y',-x')_j / r
                const double q = diff.x * b.derivatives[j].y - diff.y * b.derivatives[j].x;
                const Complex h1(c.j1, c.y1);
                const Complex dl = 0.25 * kImag * k * h1 * q / r;
                const double dl1 = -(0.25 / kPi) * k * c.j1 * q / r;
                const Complex dl2 = dl - dl1 * lg;
                // single layer: (i/4) H0(kr) |x'_j|
                const Complex h0(c.j0, c.y0);
                const Complex sl = 0.25 * kImag * h0 * b.speeds[j];
                const double sl1 = -(0.25 / kPi) * c.j0 * b.speeds[j];
                const Complex sl2 = sl - sl1 * lg;
                a(i, j) = logw(i, j) * (dl1 - kImag * eta * sl1) +
                          trapz * (dl2 - kImag * eta * sl2);
            }
        }
    }
    return a;
}

} // namespace

HelmholtzSolver::HelmholtzSolver(const TrigShape& shape, double k, int n_quad)
    : k_(k), eta_(k), boundary_(discretize(shape, n_quad)) {
    if (!(k > 0.0)) throw DomainError("HelmholtzSolver: wavenumber must be > 0");
    Eigen::MatrixXcd a = assemble_combined(boundary_, k_, eta_);
    matrix_scale_ = a.cwiseAbs().maxCoeff();
    lu_.compute(a);
    const double pivot_min = lu_.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (pivot_min < 1e-14 * matrix_scale_) {
        throw SingularSystem("HelmholtzSolver: LU pivot below 1e-14 of matrix norm");
    }
}

Eigen::VectorXcd HelmholtzSolver::solve_dirichlet(const Eigen::VectorXcd& data) const {
    if (data.size() != boundary_.n_quad) {
        throw DimensionMismatch("solve_dirichlet: data size must equal n_quad");
    }
    return lu_.solve(data);
}

Eigen::VectorXcd HelmholtzSolver::scattering_density(const Vec2& theta) const {
    check_unit(theta, "scattering_density: theta");
    Eigen::VectorXcd rhs(boundary_.n_quad);
    for (int i = 0; i < boundary_.n_quad; ++i) {
        rhs(i) = -std::exp(kImag * (k_ * boundary_.points[i].dot(theta)));
    }
    return lu_.solve(rhs);
}

std::vector<Complex> HelmholtzSolver::far_field(const Eigen::VectorXcd& density,
                                                const std::vector<Vec2>& obs_dirs) const {
    if (density.size() != boundary_.n_quad) {
        throw DimensionMismatch("far_field: density size must equal n_quad");
    }
    const double trapz = 2.0 * kPi / boundary_.n_quad;
    const Complex scale =
        std::polar(1.0, -0.25 * kPi) / std::sqrt(8.0 * kPi * k_) * trapz;
    std::vector<Complex> out(obs_dirs.size());
    for (std::size_t p = 0; p < obs_dirs.size(); ++p) {
        const Vec2& d = obs_dirs[p];
        Complex acc(0.0, 0.0);
        for (int j = 0; j < boundary_.n_quad; ++j) {
            const double phase = -k_ * d.dot(boundary_.points[j]);
            const double amp = k_ * boundary_.normals[j].dot(d) + eta_;
            acc += amp * std::polar(1.0, phase) * density(j) * boundary_.speeds[j];
        }
        out[p] = scale * acc;
    }
    return out;
}

void HelmholtzSolver::build_neumann_operator() const {
    const int size = boundary_.n_quad;
    const int n = size / 2;
    const Eigen::MatrixXd logw = detail::kress_log_weights(n);
    const Eigen::MatrixXd diff = detail::trig_diff_matrix(n);
    const double trapz = kPi / n;

    // Single layer without the speed factor (acts on psi'(tau) d tau) and
    // the nu.nu-weighted single layer of Maue's identity.
    Eigen::MatrixXcd sl_plain(size, size);
    Eigen::MatrixXcd sl_nunu(size, size);
    Eigen::MatrixXcd kprime(size, size);
    for (int i = 0; i < size; ++i) {
        for (int j = 0; j < size; ++j) {
            if (i == j) {
                const double sp = boundary_.speeds[i];
                const Complex m2 = single_layer_diag(k_, sp);
                sl_plain(i, j) = logw(i, j) * Complex(-1.0 / (4.0 * kPi), 0.0) +
                                 trapz * m2;
                sl_nunu(i, j) = logw(i, j) * Complex(-sp / (4.0 * kPi), 0.0) +
                                trapz * (m2 * sp);
                const Vec2 d1 = boundary_.derivatives[i];
                const Vec2 d2 = boundary_.second_derivatives[i];
                const double curv = (d2.x * d1.y - d2.y * d1.x) / (4.0 * kPi * sp * sp);
                kprime(i, j) = trapz * curv;
            } else {
                const Vec2 diffv = boundary_.points[i] - boundary_.points[j];
                const double r = diffv.norm();
                const auto c = specfun::cyl01(k_ * r);
                const double lg = log_sin_factor(boundary_.nodes[i], boundary_.nodes[j]);
                const Complex h0(c.j0, c.y0);
                const Complex h1(c.j1, c.y1);

                const Complex sp0 = 0.25 * kImag * h0;
                const double sp0_1 = -(0.25 / kPi) * c.j0;
                sl_plain(i, j) = logw(i, j) * sp0_1 + trapz * (sp0 - sp0_1 * lg);

                const double nn = boundary_.normals[i].dot(boundary_.normals[j]) *
                                  boundary_.speeds[j];
                sl_nunu(i, j) = logw(i, j) * (sp0_1 * nn) + trapz * (sp0 - sp0_1 * lg) * nn;

                // K' kernel: -(ik/4) H1(kr) (x_i - x_j).nu_i / r * |x'_j|
                const double e = diffv.dot(boundary_.normals[i]) / r * boundary_.speeds[j];
                const Complex kp = -0.25 * kImag * k_ * h1 * e;
                const double kp1 = (0.25 / kPi) * k_ * c.j1 * e;
                kprime(i, j) = logw(i, j) * kp1 + trapz * (kp - kp1 * lg);
            }
        }
    }

    sl_plain_ = std::move(sl_plain);
    sl_nunu_ = std::move(sl_nunu);
    kprime_ = std::move(kprime);
    diff_ = diff.cast<Complex>();
    neumann_ready_ = true;
}

Eigen::VectorXcd HelmholtzSolver::total_field_normal_derivative(
    const Vec2& theta, const Eigen::VectorXcd& density) const {
    if (density.size() != boundary_.n_quad) {
        throw DimensionMismatch("normal derivative: density size must equal n_quad");
    }
    check_unit(theta, "normal derivative: theta");
    if (!neumann_ready_) build_neumann_operator();

    // Maue: T phi = diag(1/|x'|) D SL_plain D phi + k^2 SL_nunu phi, then
    // d(u^s)/dnu (exterior) = T phi - i eta (K' - I/2) phi.
    Eigen::VectorXcd dudn = diff_ * (sl_plain_ * (diff_ * density)).eval();
    for (int i = 0; i < boundary_.n_quad; ++i) dudn(i) /= boundary_.speeds[i];
    dudn += (k_ * k_) * (sl_nunu_ * density);
    dudn -= kImag * eta_ * (kprime_ * density - 0.5 * density);

    for (int i = 0; i < boundary_.n_quad; ++i) {
        const double tn = theta.dot(boundary_.normals[i]);
        dudn(i) += kImag * k_ * tn *
                   std::exp(kImag * (k_ * boundary_.points[i].dot(theta)));
    }
    return dudn;
}

FarFieldPattern solve_scattering(const TrigShape& shape, const IncidentWave& wave,
                                 const std::vector<Vec2>& obs_dirs, int n_quad) {
    const HelmholtzSolver solver(shape, wave.k, n_quad);
    const Eigen::VectorXcd density = solver.scattering_density(wave.theta);
    return FarFieldPattern(wave.k, obs_dirs, solver.far_field(density, obs_dirs));
}

FarFieldPattern disk_oracle(double radius, Vec2 center, const IncidentWave& wave,
                            const std::vector<Vec2>& obs_dirs) {
    if (!(radius > 0.0)) throw DomainError("disk_oracle: radius must be > 0");
    const double z = wave.k * radius;
    const int n_max = static_cast<int>(std::ceil(z)) + 40;
    const auto j = specfun::bessel_j_sequence(n_max, z);

    // ratio_n = J_n(kR)/H_n^(1)(kR), truncated at 1e-14 relative
    std::vector<Complex> ratio;
    ratio.reserve(static_cast<std::size_t>(n_max) + 1);
    double y_prev = specfun::bessel_y(0, z);
    double y_curr = specfun::bessel_y(1, z);
    double peak = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        double yn;
        if (n == 0) {
            yn = y_prev;
        } else if (n == 1) {
            yn = y_curr;
        } else {
            yn = (2.0 * (n - 1) / z) * y_curr - y_prev;
            y_prev = y_curr;
            y_curr = yn;
        }
        const Complex r = Complex(j[n], 0.0) / Complex(j[n], yn);
        ratio.push_back(r);
        peak = std::max(peak, std::abs(r));
        if (n > z && std::abs(r) < 1e-14 * peak) break;
    }

    const double phi_theta = std::atan2(wave.theta.y, wave.theta.x);
    const Complex scale = -std::polar(1.0, -0.25 * kPi) *
                          std::sqrt(2.0 / (kPi * wave.k));
    std::vector<Complex> values(obs_dirs.size());
    for (std::size_t p = 0; p < obs_dirs.size(); ++p) {
        const double phi = std::atan2(obs_dirs[p].y, obs_dirs[p].x) - phi_theta;
        Complex sum = ratio[0];
        for (std::size_t n = 1; n < ratio.size(); ++n) {
            sum += 2.0 * ratio[n] * std::cos(static_cast<double>(n) * phi);
        }
        // off-origin center: phase shift by e^{i k (theta - x_hat).c}
        const Complex shift =
            std::polar(1.0, wave.k * (wave.theta - obs_dirs[p]).dot(center));
        values[p] = scale * sum * shift;
    }
    return FarFieldPattern(wave.k, obs_dirs, std::move(values));
}

double optical_theorem_defect(const FarFieldPattern& pattern, const IncidentWave& wave) {
    const int p_count = static_cast<int>(pattern.obs_dirs.size());
    if (p_count < 2) throw DomainError("optical_theorem_defect: need >= 2 directions");
    // verify the grid is uniform
    const double phi0 = std::atan2(pattern.obs_dirs[0].y, pattern.obs_dirs[0].x);
    for (int p = 0; p < p_count; ++p) {
        const double expected = phi0 + 2.0 * kPi * p / p_count;
        const Vec2 d{std::cos(expected), std::sin(expected)};
        if ((d - pattern.obs_dirs[p]).norm() > 1e-9) {
            throw DomainError("optical_theorem_defect: directions must form a uniform grid");
        }
    }

    const double w = 2.0 * kPi / p_count;
    double integral = 0.0;
    for (const Complex& v : pattern.values) integral += std::norm(v);
    integral *= w;

    // u_inf at the forward direction by trigonometric interpolation
    const double phi_theta = std::atan2(wave.theta.y, wave.theta.x);
    Complex forward(0.0, 0.0);
    const int half = p_count / 2;
    for (int m = -half; m < p_count - half; ++m) {
        Complex coeff(0.0, 0.0);
        for (int p = 0; p < p_count; ++p) {
            const double phi = phi0 + 2.0 * kPi * p / p_count;
            coeff += pattern.values[p] * std::polar(1.0, -m * phi);
        }
        coeff /= static_cast<double>(p_count);
        forward += coeff * std::polar(1.0, m * phi_theta);
    }

    const double ext = std::sqrt(8.0 * kPi / pattern.k) *
                       (std::polar(1.0, 0.25 * kPi) * forward).real();
    return std::abs(integral + ext);
}

double relative_l2_distance(const FarFieldPattern& a, const FarFieldPattern& b) {
    if (a.values.size() != b.values.size()) {
        throw DimensionMismatch("relative_l2_distance: size mismatch");
    }
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        num += std::norm(a.values[i] - b.values[i]);
        den += std::norm(b.values[i]);
    }
    if (den == 0.0) return std::sqrt(num);
    return std::sqrt(num / den);
}

} // namespace iscat
