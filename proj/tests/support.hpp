#pragma once

// Independent oracles and generators shared by the test programs.

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "sphconf/sphconf.hpp"

namespace testing
{

using namespace sphconf;
using Vec3 = Eigen::Vector3d;

inline Vec3 vec(const std::array<double, 3>& p)
{
    return Vec3(p[0], p[1], p[2]).normalized();
}

inline double arc(const Vec3& a, const Vec3& b)
{
    // atan2 form is accurate for all separations
    return std::atan2(a.cross(b).norm(), a.dot(b));
}

/** Metric induced on a triangulation by vertex positions on the unit sphere */
inline SphericalConeMetric embedded_metric(const TriangulatedSurface& s, const std::vector<Vec3>& p)
{
    SphericalConeMetric m{s, std::vector<double>(s.edge_count())};
    for (EdgeId e = 0; e < s.edge_count(); ++e) {
        const auto [v, w] = s.endpoints(e);
        m.lengths[e] = arc(p[v], p[w]);
    }
    return m;
}

inline std::vector<Vec3> positions(const std::vector<std::array<double, 3>>& raw)
{
    std::vector<Vec3> out;
    for (const auto& q : raw) {
        out.push_back(vec(q));
    }
    return out;
}

/** Tangent angle at a between the great arcs towards b and c */
inline double tangent_angle(const Vec3& a, const Vec3& b, const Vec3& c)
{
    const Vec3 tb = (b - a.dot(b) * a).normalized();
    const Vec3 tc = (c - a.dot(c) * a).normalized();
    return std::atan2(tb.cross(tc).norm(), tb.dot(tc));
}

/**
 * True when d lies strictly inside the spherical cap circumscribed about the
 * triangle (a, b, c), all points on the unit sphere.
 */
inline bool in_circumcap(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d)
{
    Vec3 n = (b - a).cross(c - a).normalized();
    if (n.dot(a) < 0) {
        n = -n;
    }
    return n.dot(d) > n.dot(a) + 1e-12;
}

/** Unordered endpoint pair of an edge */
inline std::pair<VertexId, VertexId> ends_key(const TriangulatedSurface& s, EdgeId e)
{
    const auto [v, w] = s.endpoints(e);
    return {std::min(v, w), std::max(v, w)};
}

inline Vec3 random_unit(std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    return Vec3(g(rng), g(rng), g(rng)).normalized();
}

/** Platonic combinatorics with an equilateral metric of inner angle beta */
inline SphericalConeMetric equilateral(const TriangulatedSurface& s, double beta)
{
    return equilateral_metric(s, equilateral_arc_for_angle(beta));
}

/**
 * Random valid spherical metric: edge lengths of @p base perturbed by a
 * relative amount up to @p rel, then @p flips random isometric flips.
 */
inline SphericalConeMetric random_metric(const SphericalConeMetric& base, double rel, int flips,
                                         std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        SphericalConeMetric m = base;
        for (auto& l : m.lengths) {
            l *= 1.0 + rel * U(rng);
        }
        if (!is_valid_metric(m, 1e-6)) {
            continue;
        }
        std::uniform_int_distribution<EdgeId> pick(0, m.surface.edge_count() - 1);
        for (int k = 0, tries = 0; k < flips && tries < 50 * flips; ++tries) {
            const EdgeId e = pick(rng);
            if (!m.surface.is_flippable(e)) {
                continue;
            }
            try {
                const double d = flip_length(m, e);
                SphericalConeMetric trial = m;
                trial.surface.flip(e);
                trial.lengths[e] = d;
                if (is_valid_metric(trial, 1e-6)) {
                    m = std::move(trial);
                    ++k;
                }
            } catch (const Error&) {
            }
        }
        return m;
    }
    throw std::runtime_error("random_metric: no valid sample");
}

/** Gauss-Bonnet residual scaled by vertex count */
inline double gauss_bonnet_defect(const SphericalConeMetric& m)
{
    return std::abs(gauss_bonnet(m).residual) / m.surface.vertex_count();
}

/** Central differences of a vector function */
inline Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double h)
{
    const Eigen::VectorXd f0 = f(x);
    Eigen::MatrixXd J(f0.size(), x.size());
    for (int j = 0; j < x.size(); ++j) {
        Eigen::VectorXd xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        J.col(j) = (f(xp) - f(xm)) / (2.0 * h);
    }
    return J;
}

/**
 * Componentwise relative error with a floor on the denominator, so that
 * entries that vanish structurally are compared in absolute terms.
 */
inline double componentwise_rel_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                      double floor)
{
    double worst = 0.0;
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            const double den = std::max({std::abs(a(i, j)), std::abs(b(i, j)), floor});
            worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / den);
        }
    }
    return worst;
}

inline std::vector<double> random_u(int V, double radius, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> U(-radius, radius);
    std::vector<double> u(V);
    for (auto& x : u) {
        x = U(rng);
    }
    return u;
}

/**
 * Random cone polygon built from apex angles summing to @p omega and random
 * radii, so the boundary lengths follow from the law of cosines.
 */
inline ConePolygon random_polygon(int n, double omega, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> R(0.5, 1.5), W(0.2, 1.0);
    std::vector<double> apex(n);
    double total = 0;
    for (auto& w : apex) {
        w = W(rng);
        total += w;
    }
    ConePolygon p;
    for (int i = 0; i < n; ++i) {
        p.rho.push_back(R(rng));
    }
    for (int i = 0; i < n; ++i) {
        const int j = (i + 1) % n;
        const double w = apex[i] * omega / total;
        p.lam.push_back(std::sqrt(p.rho[i] * p.rho[i] + p.rho[j] * p.rho[j] -
                                  2 * p.rho[i] * p.rho[j] * std::cos(w)));
    }
    return p;
}

/** Equilateral octahedron with inner angle 2pi/5: every curvature 2pi/5 */
inline ConformalChart cone_octahedron_chart()
{
    return chart_from_metric(equilateral(fixtures::octahedron(), 2.0 * kPi / 5.0));
}

/**
 * Charts for property tests: Platonic equilateral families and randomized
 * metrics, each paired with a random admissible u.
 */
struct ChartSample {
    ConformalChart chart;
    std::vector<double> u;
    CurvatureEvaluation eval;
};

inline std::optional<ChartSample> sample_chart(int index, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> U(0.0, 1.0);
    SphericalConeMetric base;
    switch (index % 4) {
        case 0: base = equilateral(fixtures::octahedron(), (1.9 + 0.8 * U(rng)) * kPi / 5.0); break;
        case 1: base = equilateral(fixtures::icosahedron(), (2.2 + 1.6 * U(rng)) * kPi / 5.0); break;
        case 2:
            base = random_metric(equilateral(fixtures::octahedron(), 2.3 * kPi / 5.0), 0.1, 3, rng);
            break;
        default:
            base = random_metric(equilateral(fixtures::icosahedron(), 2.6 * kPi / 5.0), 0.08, 6, rng);
            break;
    }
    ChartSample s{chart_from_metric(base), {}, {}};
    s.u = random_u(s.chart.vertex_count(), 0.25, rng);
    try {
        s.eval = kappa_of_u(s.chart, s.u);
    } catch (const Error&) {
        return std::nullopt;
    }
    return s;
}

}  // namespace testing
