#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sphconf/delaunay.hpp"
#include "sphconf/metric.hpp"

namespace sphconf
{

/**
 * @brief Chart of a discrete conformal class.
 *
 * Penner coordinates are stored per edge of @c surface, which is Delaunay at
 * @c base_u. Lengths at any u follow from cos l = 1 - 2 exp(a_e - u_v - u_w),
 * so u is absolute: a chart rebased at another point carries the same class
 * with the same u values.
 */
struct ConformalChart {
    TriangulatedSurface surface;
    std::vector<double> penner;
    std::vector<double> base_u;

    int vertex_count() const { return surface.vertex_count(); }
};

/// Result of evaluating the curvature map at one point.
struct CurvatureEvaluation {
    std::vector<double> u;
    TriangulatedSurface triangulation;  ///< Delaunay at u
    std::vector<double> penner;         ///< Penner coordinates on triangulation
    std::vector<double> lengths;
    std::vector<double> kappa;
    FlipReport flip_report;

    SphericalConeMetric metric() const { return {triangulation, lengths}; }
};

/** @brief Arc l with sin(l/2) = exp(reduced/2), reduced = a_e - u_v - u_w */
inline double arc_from_reduced(double reduced, EdgeId e)
{
    const double cos_l = 1.0 - 2.0 * std::exp(reduced);
    if (!(cos_l > -1.0 && cos_l < 1.0)) {
        throw Error(ErrorKind::LengthOutOfRange,
                    "edge " + std::to_string(e) + " has cos l = " + std::to_string(cos_l) +
                        " outside (-1, 1)",
                    e);
    }
    return std::acos(cos_l);
}

/** @brief Edge arcs of @p surface with Penner coordinates @p penner at @p u */
inline std::vector<double> lengths_at(const TriangulatedSurface& surface,
                                      std::span<const double> penner, std::span<const double> u)
{
    std::vector<double> out(surface.edge_count());
    for (EdgeId e = 0; e < surface.edge_count(); ++e) {
        const auto [v, w] = surface.endpoints(e);
        out[e] = arc_from_reduced(penner[e] - u[v] - u[w], e);
    }
    return out;
}

inline std::vector<double> lengths_at(const ConformalChart& chart, std::span<const double> u)
{
    return lengths_at(chart.surface, chart.penner, u);
}

/** @brief Chart centred at a spherical metric, made Delaunay first */
inline ConformalChart chart_from_metric(const SphericalConeMetric& metric)
{
    auto [delaunay, report] = make_delaunay(metric);
    ConformalChart chart;
    chart.penner.resize(delaunay.lengths.size());
    for (std::size_t e = 0; e < delaunay.lengths.size(); ++e) {
        chart.penner[e] = 2.0 * std::log(std::sin(0.5 * delaunay.lengths[e]));
    }
    chart.surface = std::move(delaunay.surface);
    chart.base_u.assign(chart.surface.vertex_count(), 0.0);
    return chart;
}

/** @brief Spherical metric of the chart at its base point */
inline SphericalConeMetric base_metric(const ConformalChart& chart)
{
    return {chart.surface, lengths_at(chart, chart.base_u)};
}

/**
 * @brief Penner coordinate of the flipped diagonal of edge e (Ptolemy relation).
 *
 * With lambda = exp(a/2) and the quad (x, p, q) | (y, q, p):
 * lambda_xy lambda_pq = lambda_xp lambda_yq + lambda_xq lambda_yp.
 */
inline double ptolemy_flip(const TriangulatedSurface& s, std::span<const double> penner, EdgeId e)
{
    using S = TriangulatedSurface;
    const auto [c0, c1] = s.edge_corners(e);
    const double a_xq = penner[s.edge(S::next(c0))];
    const double a_xp = penner[s.edge(S::prev(c0))];
    const double a_yp = penner[s.edge(S::next(c1))];
    const double a_yq = penner[s.edge(S::prev(c1))];
    const double t1 = 0.5 * (a_xp + a_yq);
    const double t2 = 0.5 * (a_xq + a_yp);
    const double hi = std::max(t1, t2);
    const double lse = hi + std::log(std::exp(t1 - hi) + std::exp(t2 - hi));
    return 2.0 * lse - penner[e];
}

struct KappaOptions {
    double margin = kValidityMargin;  ///< triangle validity margin at every accepted point
    double min_step = 1e-6;           ///< smallest path fraction before giving up
};

namespace detail
{
struct ChartState {
    TriangulatedSurface surface;
    std::vector<double> penner;
};

/**
 * Restore the Delaunay property at u by Ptolemy flips on the state's
 * triangulation, then require valid spherical triangles.
 */
inline FlipReport settle(ChartState& state, std::span<const double> u, double margin,
                         std::vector<double>& lengths)
{
    auto initial = lengths_at(state.surface, state.penner, u);
    SphericalConeMetric m{std::move(state.surface), std::move(initial)};
    auto restore = [&] { state.surface = std::move(m.surface); };
    FlipReport report;
    try {
        report = flip_until_delaunay(
            m.surface, [&](EdgeId e) { return !is_delaunay_edge(m, e); },
            [&](EdgeId e) {
                const double a = ptolemy_flip(m.surface, state.penner, e);
                m.surface.flip(e);
                state.penner[e] = a;
                const auto [v, w] = m.surface.endpoints(e);
                m.lengths[e] = arc_from_reduced(a - u[v] - u[w], e);
            },
            flip_cap(m.surface, kFlipCapFactor));
        if (report.iterations_capped) {
            throw Error(ErrorKind::IterationCap, "flip cap reached while restoring Delaunay");
        }
        validate_metric(m, margin);
    } catch (...) {
        restore();
        throw;
    }
    restore();
    lengths = std::move(m.lengths);
    return report;
}
}  // namespace detail

/**
 * @brief Curvature of the conformally equivalent metric at u.
 *
 * The triangulation is carried along the straight path from the chart's base
 * point to u, flipping to stay Delaunay; the step is halved whenever a
 * trial point leaves the valid region and the path is abandoned with
 * OutsideChart once the step drops below opts.min_step.
 */
inline CurvatureEvaluation kappa_of_u(const ConformalChart& chart, std::span<const double> u,
                                      const KappaOptions& opts = {})
{
    const int V = chart.vertex_count();
    if (static_cast<int>(u.size()) != V) {
        throw Error(ErrorKind::OutOfRange, "u has " + std::to_string(u.size()) +
                                               " entries, expected " + std::to_string(V));
    }
    detail::ChartState state{chart.surface, chart.penner};
    FlipReport report;
    std::vector<double> lengths;
    std::vector<double> trial_u(V);
    double t = 0.0, dt = 1.0;
    std::string last_error;
    while (t < 1.0) {
        const double s = t + dt >= 1.0 ? 1.0 : t + dt;
        for (int v = 0; v < V; ++v) {
            trial_u[v] = s == 1.0 ? u[v] : chart.base_u[v] + s * (u[v] - chart.base_u[v]);
        }
        detail::ChartState trial = state;
        try {
            report.append(detail::settle(trial, trial_u, opts.margin, lengths));
        } catch (const Error& err) {
            last_error = err.what();
            dt *= 0.5;
            if (dt < opts.min_step) {
                throw Error(ErrorKind::OutsideChart,
                            "path from the chart base point leaves the valid region at fraction " +
                                std::to_string(t) + " (" + last_error + ")");
            }
            continue;
        }
        state = std::move(trial);
        t = s;
        dt = std::min(2.0 * dt, 1.0);
    }
    CurvatureEvaluation out;
    out.u.assign(u.begin(), u.end());
    out.triangulation = std::move(state.surface);
    out.penner = std::move(state.penner);
    out.lengths = std::move(lengths);
    out.kappa = vertex_curvature(out.metric());
    out.flip_report = std::move(report);
    return out;
}

/** @brief Chart centred at an evaluated point (same class, same absolute u) */
inline ConformalChart rebase(const CurvatureEvaluation& eval)
{
    return {eval.triangulation, eval.penner, eval.u};
}

/// Dihedral angles (alpha+, alpha-) per edge of the Delaunay triangulation at u.
struct DihedralAngles {
    TriangulatedSurface triangulation;
    std::vector<std::array<double, 2>> alpha;
    LinkGeometry link;
};

inline DihedralAngles delaunay_dihedral_angles(const CurvatureEvaluation& eval)
{
    DihedralAngles out{eval.triangulation, {}, link_geometry(eval.triangulation, eval.penner, eval.u)};
    out.alpha.resize(eval.triangulation.edge_count());
    for (EdgeId e = 0; e < eval.triangulation.edge_count(); ++e) {
        out.alpha[e] = out.link.edge_angles(eval.triangulation, e);
    }
    return out;
}

inline DihedralAngles delaunay_dihedral_angles(const ConformalChart& chart,
                                               std::span<const double> u)
{
    return delaunay_dihedral_angles(kappa_of_u(chart, u));
}

struct JacobianOptions {
    /// dihedral angles closer than this to 0 or pi raise NearFlatEdge
    double flat_angle_tol = 1e-7;
};

/**
 * @brief Closed-form Jacobian d kappa / d u at an evaluated point.
 *
 * Every oriented edge v->w and each of its two tetrahedra contribute
 * t = cot(alpha) / (rho_{v->w} exp(u_v) sin l) to J(v, w) and -t cos l to
 * J(v, v), with alpha read off the link at v. A loop at v contributes both
 * terms to the diagonal, once per direction.
 */
inline Eigen::MatrixXd jacobian(const CurvatureEvaluation& eval, const JacobianOptions& opts = {})
{
    using S = TriangulatedSurface;
    const auto& s = eval.triangulation;
    const auto link = link_geometry(s, eval.penner, eval.u);
    const int V = s.vertex_count();
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(V, V);
    auto add = [&](VertexId v, VertexId w, EdgeId e, double alpha) {
        if (alpha < opts.flat_angle_tol || alpha > kPi - opts.flat_angle_tol) {
            throw Error(ErrorKind::NearFlatEdge,
                        "dihedral angle " + std::to_string(alpha) + " at edge " + std::to_string(e),
                        e);
        }
        const double l = eval.lengths[e];
        // rho_{v->w} exp(u_v) from the sine law, in the reduced combination
        const double rho_scaled =
            0.5 * std::sin(l) * std::exp(eval.u[v] + eval.u[w] - eval.penner[e]);
        const double t = 1.0 / std::tan(alpha) / (rho_scaled * std::sin(l));
        J(v, w) += t;
        J(v, v) -= t * std::cos(l);
    };
    for (CornerId c = 0; c < s.corner_count(); ++c) {
        const VertexId v = s.vertex(c);
        add(v, s.vertex(S::next(c)), s.edge(S::prev(c)), link.dihedral[S::prev(c)]);
        add(v, s.vertex(S::prev(c)), s.edge(S::next(c)), link.dihedral_from_prev[S::next(c)]);
    }
    return J;
}

inline Eigen::MatrixXd jacobian(const ConformalChart& chart, std::span<const double> u,
                                const JacobianOptions& opts = {})
{
    return jacobian(kappa_of_u(chart, u), opts);
}

/** @brief Central finite differences of kappa_of_u with step h */
inline Eigen::MatrixXd jacobian_fd(const ConformalChart& chart, std::span<const double> u,
                                   double h = 1e-5)
{
    const int V = chart.vertex_count();
    // evaluate from a chart at u so that the two probes share a short path
    const auto centre = rebase(kappa_of_u(chart, u));
    Eigen::MatrixXd J(V, V);
    std::vector<double> up(u.begin(), u.end()), um(u.begin(), u.end());
    for (int w = 0; w < V; ++w) {
        up[w] = u[w] + h;
        um[w] = u[w] - h;
        const auto kp = kappa_of_u(centre, up).kappa;
        const auto km = kappa_of_u(centre, um).kappa;
        for (int v = 0; v < V; ++v) {
            J(v, w) = (kp[v] - km[v]) / (2.0 * h);
        }
        up[w] = um[w] = u[w];
    }
    return J;
}

/// Max of |J - J^T| over max |J|, both entrywise.
inline double symmetry_residual(const Eigen::MatrixXd& J)
{
    const double scale = std::max(J.cwiseAbs().maxCoeff(), 1e-300);
    return (J - J.transpose()).cwiseAbs().maxCoeff() / scale;
}

namespace detail
{
// 16-point Gauss-Legendre nodes and weights on [-1, 1]; symmetric pairs.
inline constexpr std::array<double, 8> kGaussNodes16{
    0.0950125098376374401853193, 0.2816035507792589132304605, 0.4580167776572273863424194,
    0.6178762444026437484466718, 0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542};
inline constexpr std::array<double, 8> kGaussWeights16{
    0.1894506104550684962853967, 0.1826034150449235888667637, 0.1691565193950025381893121,
    0.1495959888165767320815017, 0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806};

// kappa on a fixed triangulation, no flips
inline std::vector<double> kappa_fixed(const ChartState& st, std::span<const double> u)
{
    return vertex_curvature(SphericalConeMetric{st.surface, lengths_at(st.surface, st.penner, u)});
}

inline bool stays_delaunay(const ChartState& st, std::span<const double> u)
{
    try {
        SphericalConeMetric m{st.surface, lengths_at(st.surface, st.penner, u)};
        validate_metric(m);
        return is_delaunay(m);
    } catch (const Error&) {
        return false;
    }
}
}  // namespace detail

/**
 * @brief Line integral of kappa . du along the segment from u_from to u_to.
 *
 * The segment is cut into @p steps panels, each further split where the
 * Delaunay triangulation changes, and every piece gets 16-point
 * Gauss-Legendre on a fixed triangulation, where kappa is smooth.
 */
inline double functional_H_delta(const ConformalChart& chart, std::span<const double> u_from,
                                 std::span<const double> u_to, int steps = 4)
{
    const int V = chart.vertex_count();
    std::vector<double> du(V);
    for (int v = 0; v < V; ++v) {
        du[v] = u_to[v] - u_from[v];
    }
    if (std::all_of(du.begin(), du.end(), [](double x) { return x == 0.0; })) {
        return 0.0;
    }
    auto point = [&](double t) {
        std::vector<double> p(V);
        for (int v = 0; v < V; ++v) {
            p[v] = u_from[v] + t * du[v];
        }
        return p;
    };
    auto integrate_fixed = [&](const detail::ChartState& st, double t0, double t1) {
        const double half = 0.5 * (t1 - t0), mid = 0.5 * (t0 + t1);
        double sum = 0.0;
        for (int k = 0; k < 8; ++k) {
            for (double sign : {-1.0, 1.0}) {
                const auto kap = detail::kappa_fixed(st, point(mid + sign * half * detail::kGaussNodes16[k]));
                double dot = 0.0;
                for (int v = 0; v < V; ++v) {
                    dot += kap[v] * du[v];
                }
                sum += detail::kGaussWeights16[k] * dot;
            }
        }
        return half * sum;
    };
    auto state_at = [&](const ConformalChart& from, double t) {
        auto ev = kappa_of_u(from, point(t));
        return std::pair(rebase(ev), detail::ChartState{ev.triangulation, ev.penner});
    };

    auto [anchor, state] = state_at(chart, 0.0);
    double total = 0.0;
    double t = 0.0;
    double good = 0.0;  // a point where state is known to be Delaunay
    for (int panel = 1; panel <= steps; ++panel) {
        const double t_end = static_cast<double>(panel) / steps;
        while (t < t_end) {
            if (detail::stays_delaunay(state, point(t_end))) {
                total += integrate_fixed(state, t, t_end);
                t = good = t_end;
                break;
            }
            // locate where the current triangulation stops being Delaunay
            double lo = std::max(good, t), hi = t_end;
            while (hi - lo > 1e-14) {
                const double m = 0.5 * (lo + hi);
                (detail::stays_delaunay(state, point(m)) ? lo : hi) = m;
            }
            total += integrate_fixed(state, t, lo);
            t = lo;
            std::tie(anchor, state) = state_at(anchor, hi);
            good = hi;
        }
    }
    return total;
}

}  // namespace sphconf
