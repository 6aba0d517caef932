#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sphconf
{

/** @brief Failure categories raised by the library */
enum class ErrorKind {
    // surface
    NonManifold,
    WrongEuler,
    OrientationMismatch,
    UnflippableEdge,
    // trig / metric
    DegenerateTriangle,
    NotInImage,
    // delaunay
    NonConvexQuad,
    DiagonalOutOfRange,
    IterationCap,
    // conformal
    LengthOutOfRange,
    OutsideChart,
    NearFlatEdge,
    // solver
    OutOfRange,
    GaussBonnetExcess,
    TriangleLikeViolation,
    SingularJacobian,
    LineSearchStall,
    MaxIterations,
    // io
    ParseError,
};

inline std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
        case ErrorKind::NonManifold: return "NonManifold";
        case ErrorKind::WrongEuler: return "WrongEuler";
        case ErrorKind::OrientationMismatch: return "OrientationMismatch";
        case ErrorKind::UnflippableEdge: return "UnflippableEdge";
        case ErrorKind::DegenerateTriangle: return "DegenerateTriangle";
        case ErrorKind::NotInImage: return "NotInImage";
        case ErrorKind::NonConvexQuad: return "NonConvexQuad";
        case ErrorKind::DiagonalOutOfRange: return "DiagonalOutOfRange";
        case ErrorKind::IterationCap: return "IterationCap";
        case ErrorKind::LengthOutOfRange: return "LengthOutOfRange";
        case ErrorKind::OutsideChart: return "OutsideChart";
        case ErrorKind::NearFlatEdge: return "NearFlatEdge";
        case ErrorKind::OutOfRange: return "OutOfRange";
        case ErrorKind::GaussBonnetExcess: return "GaussBonnetExcess";
        case ErrorKind::TriangleLikeViolation: return "TriangleLikeViolation";
        case ErrorKind::SingularJacobian: return "SingularJacobian";
        case ErrorKind::LineSearchStall: return "LineSearchStall";
        case ErrorKind::MaxIterations: return "MaxIterations";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

/**
 * @brief Exception carrying an ErrorKind and, where meaningful, the id of the
 * offending element (vertex, edge or triangle; -1 when not applicable).
 */
class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string& msg, int element = -1)
        : std::runtime_error(std::string(to_string(kind)) + ": " + msg),
          kind_{kind},
          element_{element}
    {
    }

    ErrorKind kind() const noexcept { return kind_; }
    int element() const noexcept { return element_; }

private:
    ErrorKind kind_;
    int element_;
};

/** @brief True for errors caused by bad input rather than numerical trouble */
inline bool is_validation_error(ErrorKind kind)
{
    switch (kind) {
        case ErrorKind::NonManifold:
        case ErrorKind::WrongEuler:
        case ErrorKind::OrientationMismatch:
        case ErrorKind::UnflippableEdge:
        case ErrorKind::DegenerateTriangle:
        case ErrorKind::NotInImage:
        case ErrorKind::OutOfRange:
        case ErrorKind::GaussBonnetExcess:
        case ErrorKind::TriangleLikeViolation:
        case ErrorKind::ParseError:
            return true;
        default:
            return false;
    }
}

}  // namespace sphconf
