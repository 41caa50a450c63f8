#include "iscat/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "iscat/errors.hpp"

namespace iscat::specfun {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
constexpr double kSeriesSwitch = 2.0;  // ascending series below, Miller above
constexpr double kRescale = 1e250;     // Miller overflow guard

void check_domain(int n, double x) {
    if (n < 0) throw DomainError("bessel: order must be >= 0");
    if (!(x > 0.0)) throw DomainError("bessel: argument must be > 0");
}

// J_n by the ascending power series; adequate for x < ~8, used below 2.
double bessel_j_series(int n, double x) {
    // (x/2)^n / n!
    double lead = 1.0;
    for (int m = 1; m <= n; ++m) lead *= (0.5 * x) / m;
    if (lead == 0.0) return 0.0;  // below double range
    const double q = -0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int m = 1; m < 200; ++m) {
        term *= q / (static_cast<double>(m) * (n + m));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return lead * sum;
}

std::vector<double> bessel_j_sequence_series(int n_max, double x) {
    std::vector<double> j(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) j[n] = bessel_j_series(n, x);
    return j;
}

// Downward recurrence with normalization J_0 + 2 sum J_{2m} = 1.
std::vector<double> bessel_j_sequence_miller(int n_max, double x) {
    const int start = std::max(n_max, static_cast<int>(std::ceil(x))) + 40;
    std::vector<double> j(static_cast<std::size_t>(n_max) + 1, 0.0);

    double fp = 0.0;    // f_{m+1}
    double fc = 1e-30;  // f_m
    double norm = 0.0;
    for (int m = start; m >= 0; --m) {
        const double fm = (2.0 * (m + 1) / x) * fc - fp;
        fp = fc;
        fc = fm;
        if (m <= n_max) j[m] = fm;
        if (m % 2 == 0) norm += (m == 0) ? fm : 2.0 * fm;
        if (std::abs(fc) > kRescale) {
            fp /= kRescale;
            fc /= kRescale;
            norm /= kRescale;
            for (auto& v : j) v /= kRescale;
        }
    }
    for (auto& v : j) v /= norm;
    return j;
}

struct Y01 {
    double y0, y1;
};

// Y_0 from the Neumann series
//   Y_0 = (2/pi)(ln(x/2)+gamma) J_0 + (4/pi) sum_{k>=1} (-1)^{k+1} J_{2k}/k
// and Y_1 = -Y_0' with the series differentiated termwise,
// J_{2k}' = (J_{2k-1} - J_{2k+1})/2. Needs J up to where J_{2k} is
// negligible; cancellation-free for the argument range used here.
Y01 bessel_y01(double x, const std::vector<double>& j) {
    const double lg = std::log(0.5 * x) + kEulerGamma;
    const double two_over_pi = 2.0 / std::numbers::pi;

    double s0 = 0.0;  // sum (-1)^{k+1} J_{2k}/k
    double s1 = 0.0;  // sum (-1)^{k+1} (J_{2k-1} - J_{2k+1})/(2k)
    double sign = 1.0;
    const int k_max = (static_cast<int>(j.size()) - 2) / 2;
    for (int k = 1; k <= k_max; ++k) {
        s0 += sign * j[2 * k] / k;
        s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / (2.0 * k);
        sign = -sign;
    }
    Y01 y;
    y.y0 = two_over_pi * lg * j[0] + 2.0 * two_over_pi * s0;
    // Y_1 = -(2/pi)[J_0/x - lg*J_1] - (4/pi) * s1' with s1' = d/dx of s0
    y.y1 = -two_over_pi * (j[0] / x) + two_over_pi * lg * j[1] -
           2.0 * two_over_pi * s1;
    return y;
}

int order_span_for_y(double x) { return static_cast<int>(std::ceil(x)) + 40; }

// Allocation-free Miller pass accumulating the normalization sum and the two
// Neumann-series sums on the fly; returns {J0, J1, S0, S1} where
//   S0 = sum_{k>=1} (-1)^{k+1} J_{2k}/k
//   S1 = sum_{k>=1} (-1)^{k+1} (J_{2k-1} - J_{2k+1})/(2k)
// (the odd order 2j+1 contributes with weight (-1)^j (1/(2j+2) + [j>0]/(2j))).
struct MillerSums {
    double j0, j1, s0, s1;
};

MillerSums miller_sums(double x) {
    const int start = static_cast<int>(std::ceil(x)) + 40;
    double fp = 0.0;
    double fc = 1e-30;
    double norm = 0.0, j0 = 0.0, j1 = 0.0, s0 = 0.0, s1 = 0.0;
    for (int m = start; m >= 0; --m) {
        const double fm = (2.0 * (m + 1) / x) * fc - fp;
        fp = fc;
        fc = fm;
        if (m == 0) {
            j0 = fm;
            norm += fm;
        } else if (m == 1) {
            j1 = fm;
            s1 += 0.5 * fm;
        } else if (m % 2 == 0) {
            norm += 2.0 * fm;
            const int k = m / 2;
            s0 += ((k % 2 == 1) ? 1.0 : -1.0) * fm / k;
        } else {
            const int j = (m - 1) / 2;  // j >= 1 here
            const double w = 1.0 / (2.0 * j + 2.0) + 1.0 / (2.0 * j);
            s1 += ((j % 2 == 0) ? 1.0 : -1.0) * w * fm;
        }
        if (std::abs(fc) > kRescale) {
            fp /= kRescale;
            fc /= kRescale;
            norm /= kRescale;
            j0 /= kRescale;
            j1 /= kRescale;
            s0 /= kRescale;
            s1 /= kRescale;
        }
    }
    return {j0 / norm, j1 / norm, s0 / norm, s1 / norm};
}

} // namespace

std::vector<double> bessel_j_sequence(int n_max, double x) {
    check_domain(n_max, x);
    if (x < kSeriesSwitch) return bessel_j_sequence_series(n_max, x);
    return bessel_j_sequence_miller(n_max, x);
}

double bessel_j(int n, double x) {
    check_domain(n, x);
    if (x < kSeriesSwitch) return bessel_j_series(n, x);
    return bessel_j_sequence_miller(n, x)[static_cast<std::size_t>(n)];
}

double bessel_y(int n, double x) {
    check_domain(n, x);
    const auto j = bessel_j_sequence(std::max(n, order_span_for_y(x)), x);
    const Y01 y01 = bessel_y01(x, j);
    if (n == 0) return y01.y0;
    if (n == 1) return y01.y1;
    double ym = y01.y0;
    double yc = y01.y1;
    for (int m = 1; m < n; ++m) {
        const double yn = (2.0 * m / x) * yc - ym;
        ym = yc;
        yc = yn;
    }
    return yc;
}

std::complex<double> hankel1(int n, double x) {
    check_domain(n, x);
    const auto j = bessel_j_sequence(std::max(n, order_span_for_y(x)), x);
    const Y01 y01 = bessel_y01(x, j);
    double ym = y01.y0;
    double yc = y01.y1;
    for (int m = 1; m < n; ++m) {
        const double yn = (2.0 * m / x) * yc - ym;
        ym = yc;
        yc = yn;
    }
    const double y = (n == 0) ? y01.y0 : yc;
    return {j[static_cast<std::size_t>(n)], y};
}

CylValues01 cyl01(double x) {
    if (!(x > 0.0)) throw DomainError("cyl01: argument must be > 0");
    const double lg = std::log(0.5 * x) + kEulerGamma;
    const double two_over_pi = 2.0 / std::numbers::pi;
    if (x < kSeriesSwitch) {
        const double j0 = bessel_j_series(0, x);
        const double j1 = bessel_j_series(1, x);
        // low-order Neumann sums converge in a handful of terms here
        double s0 = 0.0, s1 = 0.5 * j1;
        for (int m = 2; m <= 24; ++m) {
            const double jm = bessel_j_series(m, x);
            if (m % 2 == 0) {
                const int k = m / 2;
                s0 += ((k % 2 == 1) ? 1.0 : -1.0) * jm / k;
            } else {
                const int j = (m - 1) / 2;
                const double w = 1.0 / (2.0 * j + 2.0) + 1.0 / (2.0 * j);
                s1 += ((j % 2 == 0) ? 1.0 : -1.0) * w * jm;
            }
            if (std::abs(jm) < 1e-20 && m > 6) break;
        }
        const double y0 = two_over_pi * lg * j0 + 2.0 * two_over_pi * s0;
        const double y1 = -two_over_pi * (j0 / x) + two_over_pi * lg * j1 -
                          2.0 * two_over_pi * s1;
        return {j0, j1, y0, y1};
    }
    const MillerSums m = miller_sums(x);
    const double y0 = two_over_pi * lg * m.j0 + 2.0 * two_over_pi * m.s0;
    const double y1 = -two_over_pi * (m.j0 / x) + two_over_pi * lg * m.j1 -
                      2.0 * two_over_pi * m.s1;
    return {m.j0, m.j1, y0, y1};
}

} // namespace iscat::specfun
