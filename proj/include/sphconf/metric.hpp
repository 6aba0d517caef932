#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <type_traits>
#include <vector>

#include "sphconf/surface.hpp"
#include "sphconf/trig.hpp"

namespace sphconf
{

/// Default slack required inside the open validity polytopes.
inline constexpr double kValidityMargin = 1e-12;

/**
 * @brief Edge lengths on a triangulated sphere, indexed by edge id.
 *
 * Spherical lengths are arcs on the unit sphere in (0, pi); Euclidean lengths
 * are positive reals. Derived quantities (angles, curvature) are always
 * recomputed from the lengths.
 */
template <class Geometry>
struct ConeMetric {
    using geometry = Geometry;

    TriangulatedSurface surface;
    std::vector<double> lengths;
};

using SphericalConeMetric = ConeMetric<Spherical>;
using EuclideanConeMetric = ConeMetric<Euclidean>;

/** @brief Side lengths of triangle t; entry k is opposite corner k */
template <class G>
std::array<double, 3> triangle_sides(const ConeMetric<G>& m, TriangleId t)
{
    const auto& s = m.surface;
    return {m.lengths[s.edge(3 * t)], m.lengths[s.edge(3 * t + 1)], m.lengths[s.edge(3 * t + 2)]};
}

/** @brief Throw DegenerateTriangle naming the first triangle outside the validity polytope */
template <class G>
void validate_metric(const ConeMetric<G>& m, double margin = kValidityMargin)
{
    if (static_cast<int>(m.lengths.size()) != m.surface.edge_count()) {
        throw Error(ErrorKind::DegenerateTriangle,
                    "expected " + std::to_string(m.surface.edge_count()) + " lengths, got " +
                        std::to_string(m.lengths.size()));
    }
    for (TriangleId t = 0; t < m.surface.triangle_count(); ++t) {
        const auto [a, b, c] = triangle_sides(m, t);
        if (!G::valid(a, b, c, margin)) {
            throw Error(ErrorKind::DegenerateTriangle,
                        std::string(G::name) + " triangle " + std::to_string(t) + " with sides " +
                            detail::triple(a, b, c) + " is outside the validity polytope",
                        t);
        }
    }
}

template <class G>
bool is_valid_metric(const ConeMetric<G>& m, double margin = kValidityMargin)
{
    try {
        validate_metric(m, margin);
        return true;
    } catch (const Error&) {
        return false;
    }
}

/** @brief Angle at corner c of its triangle */
template <class G>
double corner_angle(const ConeMetric<G>& m, CornerId c)
{
    const auto& s = m.surface;
    try {
        return G::angle(m.lengths[s.edge(c)], m.lengths[s.edge(TriangulatedSurface::next(c))],
                        m.lengths[s.edge(TriangulatedSurface::prev(c))]);
    } catch (const Error& err) {
        const auto t = TriangulatedSurface::triangle(c);
        throw Error(ErrorKind::DegenerateTriangle,
                    "triangle " + std::to_string(t) + ": " + err.what(), t);
    }
}

/** @brief Interior angle of every corner, indexed by corner id */
template <class G>
std::vector<double> corner_angles(const ConeMetric<G>& m)
{
    std::vector<double> out(m.surface.corner_count());
    for (CornerId c = 0; c < m.surface.corner_count(); ++c) {
        out[c] = corner_angle(m, c);
    }
    return out;
}

/** @brief Total angle around each vertex */
template <class G>
std::vector<double> cone_angles(const ConeMetric<G>& m)
{
    std::vector<double> omega(m.surface.vertex_count(), 0.0);
    const auto angles = corner_angles(m);
    for (CornerId c = 0; c < m.surface.corner_count(); ++c) {
        omega[m.surface.vertex(c)] += angles[c];
    }
    return omega;
}

/** @brief 2pi minus the cone angle at each vertex */
template <class G>
std::vector<double> vertex_curvature(const ConeMetric<G>& m)
{
    auto k = cone_angles(m);
    for (auto& x : k) {
        x = 2.0 * kPi - x;
    }
    return k;
}

/** @brief Area of triangle t (spherical excess, or Heron's formula) */
template <class G>
double triangle_area(const ConeMetric<G>& m, TriangleId t)
{
    if constexpr (std::is_same_v<G, Spherical>) {
        return corner_angle(m, 3 * t) + corner_angle(m, 3 * t + 1) + corner_angle(m, 3 * t + 2) -
               kPi;
    } else {
        auto s = triangle_sides(m, t);
        std::sort(s.begin(), s.end());
        const double c = s[0], b = s[1], a = s[2];
        // Kahan's ordering for Heron
        const double p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
        return 0.25 * std::sqrt(std::max(p, 0.0));
    }
}

/** @brief Spherical edge arcs replaced by unit-sphere chords 2 sin(l / 2) */
inline EuclideanConeMetric chord_map(const SphericalConeMetric& m)
{
    EuclideanConeMetric out{m.surface, m.lengths};
    for (auto& l : out.lengths) {
        l = 2.0 * std::sin(0.5 * l);
    }
    return out;
}

struct CircumradiusReport {
    std::vector<double> radii;              ///< per triangle
    std::vector<TriangleId> outside_unit;   ///< triangles with R >= 1
};

/** @brief Circumradius abc / (4 area) of every triangle, flagging R >= 1 */
inline CircumradiusReport circumradius_check(const EuclideanConeMetric& m)
{
    CircumradiusReport r;
    r.radii.resize(m.surface.triangle_count());
    for (TriangleId t = 0; t < m.surface.triangle_count(); ++t) {
        const auto [a, b, c] = triangle_sides(m, t);
        const double area = triangle_area(m, t);
        r.radii[t] = area > 0.0 ? a * b * c / (4.0 * area) : std::numeric_limits<double>::infinity();
        if (r.radii[t] >= 1.0 - kValidityMargin) {
            r.outside_unit.push_back(t);
        }
    }
    return r;
}

/** @brief Inverse of chord_map; requires chords < 2 and circumradii < 1 */
inline SphericalConeMetric inverse_chord_map(const EuclideanConeMetric& m)
{
    for (EdgeId e = 0; e < m.surface.edge_count(); ++e) {
        if (!(m.lengths[e] > 0.0 && m.lengths[e] < 2.0)) {
            throw Error(ErrorKind::NotInImage,
                        "chord of edge " + std::to_string(e) + " is " +
                            std::to_string(m.lengths[e]) + ", not in (0, 2)",
                        e);
        }
    }
    validate_metric(m);
    const auto radii = circumradius_check(m);
    if (!radii.outside_unit.empty()) {
        const auto t = radii.outside_unit.front();
        throw Error(ErrorKind::NotInImage,
                    "triangle " + std::to_string(t) + " has circumradius " +
                        std::to_string(radii.radii[t]) + " >= 1",
                    t);
    }
    SphericalConeMetric out{m.surface, m.lengths};
    for (auto& l : out.lengths) {
        l = 2.0 * std::asin(0.5 * l);
    }
    return out;
}

struct GaussBonnetReport {
    double total_curvature = 0;
    double total_area = 0;
    double residual = 0;  ///< total curvature (+ area when spherical) - 4pi
};

/**
 * @brief Curvature bookkeeping against 2pi chi = 4pi. On the unit sphere the
 * area term enters; for flat metrics only the curvature sum is compared.
 */
template <class G>
GaussBonnetReport gauss_bonnet(const ConeMetric<G>& m)
{
    GaussBonnetReport r;
    const auto k = vertex_curvature(m);
    r.total_curvature = std::accumulate(k.begin(), k.end(), 0.0);
    for (TriangleId t = 0; t < m.surface.triangle_count(); ++t) {
        r.total_area += triangle_area(m, t);
    }
    if constexpr (std::is_same_v<G, Spherical>) {
        r.residual = r.total_curvature + r.total_area - 4.0 * kPi;
    } else {
        r.residual = r.total_curvature - 4.0 * kPi;
    }
    return r;
}

/**
 * @brief Equilateral spherical metric whose triangles have inner angle beta:
 * cos l = cos(beta) / (1 - cos(beta)).
 */
inline double equilateral_arc_for_angle(double beta)
{
    const double cb = std::cos(beta);
    return std::acos(cb / (1.0 - cb));
}

inline SphericalConeMetric equilateral_metric(TriangulatedSurface surface, double arc)
{
    const auto E = surface.edge_count();
    return {std::move(surface), std::vector<double>(E, arc)};
}

}  // namespace sphconf
