#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace fraccal {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidGeometry : public Error {
public:
    using Error::Error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

class IndexMismatch : public Error {
public:
    using Error::Error;
};

class EigendecompositionFailure : public Error {
public:
    using Error::Error;
};

class NumericalFailure : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

class SingularWeight : public Error {
public:
    using Error::Error;
};

/// Interior problem is (numerically) singular: 0 is an exterior Dirichlet eigenvalue.
class IllPosed : public Error {
public:
    IllPosed(const std::string& what, double sigma_min)
        : Error(what + " (sigma_min = " + format_sigma(sigma_min) + ")"), sigma_min_(sigma_min) {}

    double sigma_min() const noexcept { return sigma_min_; }

private:
    static std::string format_sigma(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3e", v);
        return buf;
    }

    double sigma_min_;
};

/// An iterate of a nonlinear reconstruction stayed ill-posed after step halving.
class IllPosedAtIterate : public IllPosed {
public:
    IllPosedAtIterate(const std::string& what, double sigma_min, int iteration)
        : IllPosed(what + " at iteration " + std::to_string(iteration), sigma_min), iteration_(iteration) {}

    int iteration() const noexcept { return iteration_; }

private:
    int iteration_;
};

} // namespace fraccal
