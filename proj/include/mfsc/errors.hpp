#ifndef MFSC_ERRORS_HPP
#define MFSC_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mfsc {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonPositiveDefinite : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    NoConvergence(const std::string& what, std::size_t iterations)
        : Error(what), iterations(iterations) {}
    std::size_t iterations;
};

class SingularPivot : public Error {
public:
    using Error::Error;
};

class DimMismatch : public Error {
public:
    using Error::Error;
};

class OutOfRange : public Error {
public:
    using Error::Error;
};

class InvalidMesh : public Error {
public:
    using Error::Error;
};

class NewtonDivergence : public Error {
public:
    NewtonDivergence(const std::string& what, std::size_t step)
        : Error(what), step(step) {}
    std::size_t step;
};

class BadCount : public Error {
public:
    using Error::Error;
};

class RankDeficient : public Error {
public:
    using Error::Error;
};

class MeshMismatch : public Error {
public:
    using Error::Error;
};

class GridMismatch : public Error {
public:
    using Error::Error;
};

// Thrown when two eigenvalues are too close to differentiate the eigenpair.
class NearDegenerateEigenvalue : public Error {
public:
    NearDegenerateEigenvalue(const std::string& what, std::size_t mode, std::size_t other)
        : Error(what), mode(mode), other(other) {}
    std::size_t mode;
    std::size_t other;
};

class DegenerateBasis : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace mfsc

#endif
