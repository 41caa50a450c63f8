#ifndef ISCAT_SPECFUN_HPP
#define ISCAT_SPECFUN_HPP

#include <complex>
#include <vector>

namespace iscat::specfun {

/// J_n(x) for integer n >= 0 and x > 0, relative accuracy ~1e-12.
/// Ascending series for x < 2, downward (Miller) recurrence with
/// normalization otherwise. Values below the double range flush to zero.
/// Throws DomainError for x <= 0 or n < 0.
double bessel_j(int n, double x);

/// Y_n(x) for integer n >= 0 and x > 0, relative accuracy ~1e-10.
/// Y_0 from the Neumann series in J_{2k}, Y_1 = -Y_0' termwise, higher
/// orders by upward recurrence (stable for Y). Intended for moderate
/// orders, n <= ceil(x) + 40.
double bessel_y(int n, double x);

/// H_n^{(1)}(x) = J_n(x) + i Y_n(x).
std::complex<double> hankel1(int n, double x);

/// J_0..J_{n_max} in one pass. Shared by the kernel assembly and the disk
/// oracle, which need many orders at the same argument.
std::vector<double> bessel_j_sequence(int n_max, double x);

/// {J_0, J_1, Y_0, Y_1} at once; the Helmholtz kernels need all four per
/// point pair.
struct CylValues01 {
    double j0, j1, y0, y1;
};
CylValues01 cyl01(double x);

} // namespace iscat::specfun

#endif // ISCAT_SPECFUN_HPP
