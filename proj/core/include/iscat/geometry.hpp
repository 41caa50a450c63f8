#ifndef ISCAT_GEOMETRY_HPP
#define ISCAT_GEOMETRY_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "iscat/errors.hpp"

namespace iscat {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

/// Truncated real Fourier series
///   r(t) = a0 + sum_{m=1}^{M} (cos_coeff(m) cos(mt) + sin_coeff(m) sin(mt))
/// in the unnormalized basis {1, cos mt, sin mt}.
class TrigCoefficients {
public:
    TrigCoefficients() = default;
    TrigCoefficients(double a0, std::vector<double> cos_coeffs,
                     std::vector<double> sin_coeffs);

    /// Constant radius (degree 0).
    static TrigCoefficients constant(double a0);

    int degree() const { return static_cast<int>(cos_.size()); }
    double a0() const { return a0_; }
    /// m in 1..degree(); 0 returned for m > degree().
    double cos_coeff(int m) const;
    double sin_coeff(int m) const;

    double evaluate(double t) const;
    double derivative(double t) const;
    double second_derivative(double t) const;

    TrigCoefficients& operator+=(const TrigCoefficients& o);
    TrigCoefficients operator+(const TrigCoefficients& o) const;
    TrigCoefficients operator-(const TrigCoefficients& o) const;
    TrigCoefficients operator*(double s) const;

    bool operator==(const TrigCoefficients& o) const = default;

private:
    double a0_ = 0.0;
    std::vector<double> cos_;
    std::vector<double> sin_;
};

/// Orthogonal projection of X = L2[0,2pi] onto the span of
/// {1, cos t, sin t, ..., cos(M t), sin(M t)}: coefficient truncation.
TrigCoefficients project(const TrigCoefficients& coeffs, int m_target);

/// L2[0,2pi] norm by Parseval: sqrt(2 pi a0^2 + pi sum (beta_m^2 + gamma_m^2)).
double l2_norm(const TrigCoefficients& coeffs);

/// Star-shaped boundary x(t) = center + r(t) (cos t, sin t).
/// Construction validates r > 0 on a uniform grid of max(16, 8M+16) samples.
class TrigShape {
public:
    TrigShape(Vec2 center, TrigCoefficients radial);

    const Vec2& center() const { return center_; }
    const TrigCoefficients& radial() const { return radial_; }
    int degree() const { return radial_.degree(); }

    /// r = c1 (1 + c2 cos(c3 t)): constant mode c1 plus one cosine mode c1*c2
    /// at index c3.
    static TrigShape flower(double c1, double c2, int c3, Vec2 center = {0, 0});
    static TrigShape circle(double radius, Vec2 center = {0, 0});

private:
    Vec2 center_;
    TrigCoefficients radial_;
};

double eval_radius(const TrigShape& shape, double t);

struct BoundaryPoint {
    Vec2 point;
    Vec2 tangent;  // x'(t), not normalized
    Vec2 normal;   // unit outward normal
    double speed;  // |x'(t)|
};

/// Point, analytic tangent, unit outward normal and speed at parameter t.
/// Throws DegenerateBoundary if |x'(t)| < 1e-12.
BoundaryPoint eval_boundary(const TrigShape& shape, double t);

/// Whether r(t) > 0 on the standard validation grid (used by Newton updates
/// to detect divergence before constructing a TrigShape).
bool radial_positive(const TrigCoefficients& coeffs);

/// Nondecreasing trig-space degrees M_0 <= M_1 <= ... <= M_N, one per
/// frequency-grid index.
class SubspaceSchedule {
public:
    explicit SubspaceSchedule(std::vector<int> degrees);

    int degree(std::size_t n) const;
    std::size_t size() const { return degrees_.size(); }
    const std::vector<int>& degrees() const { return degrees_; }

private:
    std::vector<int> degrees_;
};

} // namespace iscat

#endif // ISCAT_GEOMETRY_HPP
