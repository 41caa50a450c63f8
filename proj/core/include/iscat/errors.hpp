#ifndef ISCAT_ERRORS_HPP
#define ISCAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace iscat {

// Base class for all toolkit failures so callers can catch broadly.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid argument outside the mathematical domain of an operation
// (nonpositive Bessel argument, epsilon outside (0,3), ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// |x'(t)| collapsed below tolerance; the parameterization is unusable.
class DegenerateBoundary : public Error {
public:
    explicit DegenerateBoundary(const std::string& msg) : Error(msg) {}
};

// Quadrature rule too coarse for the requested shape degree.
class QuadratureTooCoarse : public Error {
public:
    explicit QuadratureTooCoarse(const std::string& msg) : Error(msg) {}
};

// LU pivot collapsed; combined-field systems should never trigger this.
class SingularSystem : public Error {
public:
    explicit SingularSystem(const std::string& msg) : Error(msg) {}
};

class RankDeficient : public Error {
public:
    explicit RankDeficient(const std::string& msg) : Error(msg) {}
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

// Regularized normal equations failed the Cholesky factorization.
// Cannot happen for alpha > 0 with finite entries; treated as internal failure.
class NotSpd : public Error {
public:
    explicit NotSpd(const std::string& msg) : Error(msg) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

} // namespace iscat

#endif // ISCAT_ERRORS_HPP
