#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace expander {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

constexpr double kPi = 3.14159265358979323846;

enum class ErrorKind {
    InvalidParameter,
    SymmetryMismatch,
    TopologyError,
    ParseError,
    IntegrationFailure,
    OutOfRange,
    GeometryError,
    RejectedBoundary,
    MeshQuality,
    WeldError,
    NotConverged,
    MeshDegeneration,
    NumericalError,
    ClassificationUnavailable,
    Inconclusive,
    FlowError,
    HomotopyError,
    ReconstructionError,
    DegreeUnresolved,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

// expander weight e^{|p|^2/4}
inline double weight(const Vec3& p) { return std::exp(0.25 * p.squaredNorm()); }

}  // namespace expander
