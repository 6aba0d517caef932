#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sphconf/errors.hpp"

namespace sphconf
{

inline constexpr double kPi = std::numbers::pi;

namespace detail
{
// arccos arguments this close outside [-1, 1] are rounding noise
inline constexpr double kAcosSlack = 1e-9;
// past this |cos| the half-angle form is used
inline constexpr double kHalfAngleSwitch = 0.999;

inline std::string triple(double a, double b, double c)
{
    return "(" + std::to_string(a) + ", " + std::to_string(b) + ", " + std::to_string(c) + ")";
}

inline void check_cosine(double cos_angle, double a, double b, double c)
{
    if (!std::isfinite(cos_angle) || std::abs(cos_angle) > 1.0 + kAcosSlack) {
        throw Error(ErrorKind::DegenerateTriangle,
                    "angle cosine " + std::to_string(cos_angle) + " for sides " + triple(a, b, c));
    }
}
}  // namespace detail

/**
 * @brief Membership of side lengths in the open polytope of convex spherical
 * triangles: sides in (0, pi), strict triangle inequalities, perimeter < 2pi.
 * Every inequality must hold with at least @p margin to spare.
 */
inline bool spherical_triangle_valid(double a, double b, double c, double margin = 0.0)
{
    return a > margin && b > margin && c > margin && a < kPi - margin && b < kPi - margin &&
           c < kPi - margin && b + c - a > margin && a + c - b > margin && a + b - c > margin &&
           a + b + c < 2.0 * kPi - margin;
}

inline bool euclidean_triangle_valid(double a, double b, double c, double margin = 0.0)
{
    return a > margin && b > margin && c > margin && b + c - a > margin &&
           a + c - b > margin && a + b - c > margin;
}

/** @brief Angle opposite side a of a spherical triangle on the unit sphere */
inline double spherical_angle(double a, double b, double c)
{
    if (!spherical_triangle_valid(a, b, c)) {
        throw Error(ErrorKind::DegenerateTriangle,
                    "sides " + detail::triple(a, b, c) + " are not a convex spherical triangle");
    }
    const double cos_angle = (std::cos(a) - std::cos(b) * std::cos(c)) / (std::sin(b) * std::sin(c));
    detail::check_cosine(cos_angle, a, b, c);
    if (std::abs(cos_angle) > detail::kHalfAngleSwitch) {
        // tan^2(A/2) = sin(s-b) sin(s-c) / (sin s sin(s-a))
        const double s = 0.5 * (a + b + c);
        const double num = std::sin(s - b) * std::sin(s - c);
        const double den = std::sin(s) * std::sin(s - a);
        return 2.0 * std::atan2(std::sqrt(std::max(num, 0.0)), std::sqrt(std::max(den, 0.0)));
    }
    return std::acos(std::clamp(cos_angle, -1.0, 1.0));
}

/** @brief Angle opposite side a of a Euclidean triangle */
inline double euclidean_angle(double a, double b, double c)
{
    if (!euclidean_triangle_valid(a, b, c)) {
        throw Error(ErrorKind::DegenerateTriangle,
                    "sides " + detail::triple(a, b, c) + " violate the triangle inequality");
    }
    const double cos_angle = (b * b + c * c - a * a) / (2.0 * b * c);
    detail::check_cosine(cos_angle, a, b, c);
    if (std::abs(cos_angle) > detail::kHalfAngleSwitch) {
        // tan^2(A/2) = (s-b)(s-c) / (s (s-a))
        const double s = 0.5 * (a + b + c);
        const double num = (s - b) * (s - c);
        const double den = s * (s - a);
        return 2.0 * std::atan2(std::sqrt(std::max(num, 0.0)), std::sqrt(std::max(den, 0.0)));
    }
    return std::acos(std::clamp(cos_angle, -1.0, 1.0));
}

/// Unit-sphere geometry.
struct Spherical {
    static constexpr const char* name = "spherical";
    static double angle(double a, double b, double c) { return spherical_angle(a, b, c); }
    static bool valid(double a, double b, double c, double margin = 0.0)
    {
        return spherical_triangle_valid(a, b, c, margin);
    }
};

/// Flat geometry.
struct Euclidean {
    static constexpr const char* name = "euclidean";
    static double angle(double a, double b, double c) { return euclidean_angle(a, b, c); }
    static bool valid(double a, double b, double c, double margin = 0.0)
    {
        return euclidean_triangle_valid(a, b, c, margin);
    }
};

/**
 * @brief A hyperbolic triangle with one finite vertex B and two decorated
 * ideal vertices A1, A2.
 *
 * u1, u2 are signed distances from B to the horocycles at A1, A2; a12 is the
 * signed distance between the horocycles; l12 is the angle at B; rho12 and
 * rho21 are the horocyclic arcs at A1 and A2 cut out by the triangle; b12,
 * b21 split A1A2 at the foot of the perpendicular from B, whose length is u12.
 */
struct SemiIdealTriangleData {
    double u1 = 0, u2 = 0;
    double a12 = 0;
    double l12 = 0;
    double rho12 = 0, rho21 = 0;
    double b12 = 0, b21 = 0;
    double u12 = 0;
};

/** @brief Solve a decorated semi-ideal triangle from its angle at B */
inline SemiIdealTriangleData semi_ideal_from_link(double l12, double u1, double u2)
{
    if (!(l12 > 0.0 && l12 < kPi)) {
        throw Error(ErrorKind::DegenerateTriangle, "link angle must lie in (0, pi)");
    }
    SemiIdealTriangleData d;
    d.u1 = u1;
    d.u2 = u2;
    d.l12 = l12;
    const double half_versine = 0.5 * (1.0 - std::cos(l12));  // sin^2(l/2)
    d.a12 = u1 + u2 + std::log(half_versine);
    d.rho12 = std::sqrt(std::exp(u2 - u1 - d.a12) - std::exp(-2.0 * u1));
    d.rho21 = std::sqrt(std::exp(u1 - u2 - d.a12) - std::exp(-2.0 * u2));
    // exp(u1 + u2 - a12) = cosh^2(u12)
    const double cosh_u12 = std::sqrt(1.0 / half_versine);
    d.u12 = std::acosh(cosh_u12);
    d.b12 = u1 - std::log(cosh_u12);
    d.b21 = u2 - std::log(cosh_u12);
    return d;
}

/** @brief Largest relative residual of the two semi-ideal sine-law identities */
inline double sine_law_check(const SemiIdealTriangleData& d)
{
    const double lhs = 0.5 * std::sin(d.l12) * std::exp(-d.a12);
    const double r1 = std::abs(lhs - d.rho12 * std::exp(-d.u2)) / std::abs(lhs);
    const double r2 = std::abs(lhs - d.rho21 * std::exp(-d.u1)) / std::abs(lhs);
    return std::max(r1, r2);
}

/**
 * @brief Horocyclic arc of a decorated ideal triangle at the vertex opposite
 * the side of decorated length @p a_opp.
 */
inline double ideal_h_length(double a_opp, double a_1, double a_2)
{
    return std::exp(0.5 * (a_opp - a_1 - a_2));
}

}  // namespace sphconf
