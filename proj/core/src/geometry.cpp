#include "iscat/geometry.hpp"

#include <algorithm>
#include <numbers>

namespace iscat {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw DomainError(std::string("non-finite ") + what);
    }
}
} // namespace

TrigCoefficients::TrigCoefficients(double a0, std::vector<double> cos_coeffs,
                                   std::vector<double> sin_coeffs)
    : a0_(a0), cos_(std::move(cos_coeffs)), sin_(std::move(sin_coeffs)) {
    if (cos_.size() != sin_.size()) {
        // Pad the shorter list so both carry modes 1..M.
        const std::size_t m = std::max(cos_.size(), sin_.size());
        cos_.resize(m, 0.0);
        sin_.resize(m, 0.0);
    }
    require_finite(a0_, "constant mode");
    for (double c : cos_) require_finite(c, "cosine coefficient");
    for (double s : sin_) require_finite(s, "sine coefficient");
}

TrigCoefficients TrigCoefficients::constant(double a0) {
    return TrigCoefficients(a0, {}, {});
}

double TrigCoefficients::cos_coeff(int m) const {
    if (m < 1 || m > degree()) return 0.0;
    return cos_[static_cast<std::size_t>(m - 1)];
}

double TrigCoefficients::sin_coeff(int m) const {
    if (m < 1 || m > degree()) return 0.0;
    return sin_[static_cast<std::size_t>(m - 1)];
}

double TrigCoefficients::evaluate(double t) const {
    double r = a0_;
    for (int m = 1; m <= degree(); ++m) {
        r += cos_[m - 1] * std::cos(m * t) + sin_[m - 1] * std::sin(m * t);
    }
    return r;
}

double TrigCoefficients::derivative(double t) const {
    double r = 0.0;
    for (int m = 1; m <= degree(); ++m) {
        r += m * (-cos_[m - 1] * std::sin(m * t) + sin_[m - 1] * std::cos(m * t));
    }
    return r;
}

double TrigCoefficients::second_derivative(double t) const {
    double r = 0.0;
    for (int m = 1; m <= degree(); ++m) {
        const double m2 = static_cast<double>(m) * m;
        r -= m2 * (cos_[m - 1] * std::cos(m * t) + sin_[m - 1] * std::sin(m * t));
    }
    return r;
}

TrigCoefficients& TrigCoefficients::operator+=(const TrigCoefficients& o) {
    if (o.degree() > degree()) {
        cos_.resize(o.cos_.size(), 0.0);
        sin_.resize(o.sin_.size(), 0.0);
    }
    a0_ += o.a0_;
    for (std::size_t m = 0; m < o.cos_.size(); ++m) {
        cos_[m] += o.cos_[m];
        sin_[m] += o.sin_[m];
    }
    return *this;
}

TrigCoefficients TrigCoefficients::operator+(const TrigCoefficients& o) const {
    TrigCoefficients r = *this;
    r += o;
    return r;
}

TrigCoefficients TrigCoefficients::operator-(const TrigCoefficients& o) const {
    return *this + o * -1.0;
}

TrigCoefficients TrigCoefficients::operator*(double s) const {
    TrigCoefficients r = *this;
    r.a0_ *= s;
    for (auto& c : r.cos_) c *= s;
    for (auto& c : r.sin_) c *= s;
    return r;
}

TrigCoefficients project(const TrigCoefficients& coeffs, int m_target) {
    if (m_target < 0) throw DomainError("project: target degree must be >= 0");
    const int m = std::min(m_target, coeffs.degree());
    std::vector<double> c(static_cast<std::size_t>(m)), s(static_cast<std::size_t>(m));
    for (int j = 1; j <= m; ++j) {
        c[j - 1] = coeffs.cos_coeff(j);
        s[j - 1] = coeffs.sin_coeff(j);
    }
    return TrigCoefficients(coeffs.a0(), std::move(c), std::move(s));
}

double l2_norm(const TrigCoefficients& coeffs) {
    double sq = kTwoPi * coeffs.a0() * coeffs.a0();
    for (int m = 1; m <= coeffs.degree(); ++m) {
        sq += std::numbers::pi * (coeffs.cos_coeff(m) * coeffs.cos_coeff(m) +
                                  coeffs.sin_coeff(m) * coeffs.sin_coeff(m));
    }
    return std::sqrt(sq);
}

bool radial_positive(const TrigCoefficients& coeffs) {
    const int n = std::max(16, 8 * coeffs.degree() + 16);
    for (int i = 0; i < n; ++i) {
        if (coeffs.evaluate(kTwoPi * i / n) <= 0.0) return false;
    }
    return true;
}

TrigShape::TrigShape(Vec2 center, TrigCoefficients radial)
    : center_(center), radial_(std::move(radial)) {
    require_finite(center_.x, "center");
    require_finite(center_.y, "center");
    if (!radial_positive(radial_)) {
        throw DomainError("TrigShape: radial function must be positive");
    }
}

TrigShape TrigShape::flower(double c1, double c2, int c3, Vec2 center) {
    if (c3 < 1) throw DomainError("flower: mode index must be >= 1");
    std::vector<double> cos_coeffs(static_cast<std::size_t>(c3), 0.0);
    cos_coeffs.back() = c1 * c2;
    return TrigShape(center, TrigCoefficients(c1, std::move(cos_coeffs), {}));
}

TrigShape TrigShape::circle(double radius, Vec2 center) {
    return TrigShape(center, TrigCoefficients::constant(radius));
}

double eval_radius(const TrigShape& shape, double t) {
    return shape.radial().evaluate(t);
}

BoundaryPoint eval_boundary(const TrigShape& shape, double t) {
    const double r = shape.radial().evaluate(t);
    const double dr = shape.radial().derivative(t);
    const double ct = std::cos(t);
    const double st = std::sin(t);

    BoundaryPoint b;
    b.point = shape.center() + Vec2{r * ct, r * st};
    // x'(t) = r'(cos,sin) + r(-sin,cos)
    b.tangent = {dr * ct - r * st, dr * st + r * ct};
    b.speed = b.tangent.norm();
    if (b.speed < 1e-12) {
        throw DegenerateBoundary("eval_boundary: |x'(t)| below 1e-12");
    }
    // counterclockwise parameterization: outward normal = (y', -x')/|x'|
    b.normal = {b.tangent.y / b.speed, -b.tangent.x / b.speed};
    return b;
}

SubspaceSchedule::SubspaceSchedule(std::vector<int> degrees)
    : degrees_(std::move(degrees)) {
    if (degrees_.empty()) throw DomainError("SubspaceSchedule: empty");
    for (std::size_t i = 0; i < degrees_.size(); ++i) {
        if (degrees_[i] < 0) throw DomainError("SubspaceSchedule: negative degree");
        if (i > 0 && degrees_[i] < degrees_[i - 1]) {
            throw DomainError("SubspaceSchedule: degrees must be nondecreasing");
        }
    }
}

int SubspaceSchedule::degree(std::size_t n) const {
    if (n >= degrees_.size()) {
        throw DimensionMismatch("SubspaceSchedule: index out of range");
    }
    return degrees_[n];
}

} // namespace iscat
