#pragma once

#include <cmath>
#include <deque>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "sphconf/metric.hpp"

namespace sphconf
{

/// Edges whose opposite angles sum to within this of pi count as Delaunay.
inline constexpr double kDelaunayTolerance = 1e-10;
/// Flip cap is kFlipCapFactor * |E|^2.
inline constexpr int kFlipCapFactor = 10;

struct FlipReport {
    int flips_performed = 0;
    std::vector<EdgeId> flipped_edge_ids;
    bool iterations_capped = false;

    void record(EdgeId e)
    {
        ++flips_performed;
        flipped_edge_ids.push_back(e);
    }
    void append(const FlipReport& other)
    {
        flips_performed += other.flips_performed;
        flipped_edge_ids.insert(flipped_edge_ids.end(), other.flipped_edge_ids.begin(),
                                other.flipped_edge_ids.end());
        iterations_capped = iterations_capped || other.iterations_capped;
    }
};

/**
 * @brief Sum of the two angles opposite edge e.
 *
 * For spherical metrics the angles are taken in the chord metric, where the
 * planar inscribed-angle criterion is equivalent to the spherical one.
 */
template <class G>
double opposite_angle_sum(const ConeMetric<G>& m, EdgeId e)
{
    const auto [c0, c1] = m.surface.edge_corners(e);
    if constexpr (std::is_same_v<G, Spherical>) {
        const auto& s = m.surface;
        auto chord = [&](CornerId c) { return 2.0 * std::sin(0.5 * m.lengths[s.edge(c)]); };
        auto angle = [&](CornerId c) {
            try {
                return euclidean_angle(chord(c), chord(TriangulatedSurface::next(c)),
                                       chord(TriangulatedSurface::prev(c)));
            } catch (const Error& err) {
                const auto t = TriangulatedSurface::triangle(c);
                throw Error(ErrorKind::DegenerateTriangle,
                            "triangle " + std::to_string(t) + ": " + err.what(), t);
            }
        };
        return angle(c0) + angle(c1);
    } else {
        return corner_angle(m, c0) + corner_angle(m, c1);
    }
}

/** @brief Intrinsic Delaunay test for one edge; an edge with one triangle on both sides passes */
template <class G>
bool is_delaunay_edge(const ConeMetric<G>& m, EdgeId e, double tol = kDelaunayTolerance)
{
    if (!m.surface.is_flippable(e)) {
        return true;
    }
    return opposite_angle_sum(m, e) <= kPi + tol;
}

template <class G>
int count_delaunay_edges(const ConeMetric<G>& m, double tol = kDelaunayTolerance)
{
    int n = 0;
    for (EdgeId e = 0; e < m.surface.edge_count(); ++e) {
        n += is_delaunay_edge(m, e, tol) ? 1 : 0;
    }
    return n;
}

template <class G>
bool is_delaunay(const ConeMetric<G>& m, double tol = kDelaunayTolerance)
{
    return count_delaunay_edges(m, tol) == m.surface.edge_count();
}

/**
 * @brief Length of the other diagonal of the quadrilateral around e.
 *
 * The two triangles are developed into the model space and the new diagonal
 * is measured through the flank vertex p at the tail of e:
 * spherical  cos d = cos a cos b + sin a sin b cos(theta),
 * flat       d^2   = a^2 + b^2 - 2 a b cos(theta),
 * where a, b are the quad sides at p and theta the total angle there.
 * The range of d is checked before convexity of the quad.
 */
template <class G>
double flip_length(const ConeMetric<G>& m, EdgeId e, bool require_convex = true)
{
    const auto& s = m.surface;
    if (!s.is_flippable(e)) {
        throw Error(ErrorKind::UnflippableEdge,
                    "edge " + std::to_string(e) + " has the same triangle on both sides", e);
    }
    using S = TriangulatedSurface;
    const auto [c0, c1] = s.edge_corners(e);
    const CornerId n0 = S::next(c0), p0 = S::prev(c0);
    const CornerId n1 = S::next(c1), p1 = S::prev(c1);
    const double angle_p = corner_angle(m, n0) + corner_angle(m, p1);
    const double angle_q = corner_angle(m, p0) + corner_angle(m, n1);
    const double a = m.lengths[s.edge(p0)];  // p-x
    const double b = m.lengths[s.edge(n1)];  // p-y

    double d = 0.0;
    if constexpr (std::is_same_v<G, Spherical>) {
        const double cos_d =
            std::cos(a) * std::cos(b) + std::sin(a) * std::sin(b) * std::cos(angle_p);
        if (!(cos_d > -1.0 && cos_d < 1.0)) {
            throw Error(ErrorKind::DiagonalOutOfRange,
                        "flipped diagonal of edge " + std::to_string(e) + " has cosine " +
                            std::to_string(cos_d),
                        e);
        }
        d = std::acos(cos_d);
    } else {
        const double d2 = a * a + b * b - 2.0 * a * b * std::cos(angle_p);
        if (!(d2 > 0.0)) {
            throw Error(ErrorKind::DiagonalOutOfRange,
                        "flipped diagonal of edge " + std::to_string(e) + " vanishes", e);
        }
        d = std::sqrt(d2);
    }
    if (require_convex && !(angle_p < kPi && angle_q < kPi)) {
        throw Error(ErrorKind::NonConvexQuad,
                    "quadrilateral around edge " + std::to_string(e) + " has angles " +
                        std::to_string(angle_p) + ", " + std::to_string(angle_q) +
                        " at the ends of the edge",
                    e);
    }
    return d;
}

inline double spherical_flip_length(const SphericalConeMetric& m, EdgeId e,
                                    bool require_convex = true)
{
    return flip_length(m, e, require_convex);
}

namespace detail
{
/**
 * FIFO flip loop. needs_flip(e) decides, do_flip(e) performs the flip
 * (including surface.flip). After a flip the four quad edges are re-queued.
 * Returns with iterations_capped set when the cap is reached.
 */
template <class NeedsFlip, class DoFlip>
FlipReport flip_until_delaunay(const TriangulatedSurface& surface, NeedsFlip&& needs_flip,
                               DoFlip&& do_flip, long cap)
{
    FlipReport report;
    const int E = surface.edge_count();
    std::deque<EdgeId> queue;
    std::vector<char> queued(E, 1);
    for (EdgeId e = 0; e < E; ++e) {
        queue.push_back(e);
    }
    while (!queue.empty()) {
        const EdgeId e = queue.front();
        queue.pop_front();
        queued[e] = 0;
        if (!surface.is_flippable(e) || !needs_flip(e)) {
            continue;
        }
        if (report.flips_performed >= cap) {
            report.iterations_capped = true;
            return report;
        }
        do_flip(e);
        report.record(e);
        const auto [c0, c1] = surface.edge_corners(e);
        for (CornerId c : {TriangulatedSurface::next(c0), TriangulatedSurface::prev(c0),
                           TriangulatedSurface::next(c1), TriangulatedSurface::prev(c1)}) {
            const EdgeId f = surface.edge(c);
            if (!queued[f]) {
                queued[f] = 1;
                queue.push_back(f);
            }
        }
    }
    return report;
}

inline long flip_cap(const TriangulatedSurface& s, int factor)
{
    const long E = s.edge_count();
    return static_cast<long>(factor) * E * E;
}
}  // namespace detail

struct MakeDelaunayOptions {
    double tolerance = kDelaunayTolerance;
    int cap_factor = kFlipCapFactor;
    bool throw_on_cap = true;
};

/**
 * @brief Flip non-Delaunay edges until every edge passes the Delaunay test.
 *
 * Flips are isometric: the new diagonal is measured in the developed
 * quadrilateral, so cone angles and area are unchanged.
 */
template <class G>
std::pair<ConeMetric<G>, FlipReport> make_delaunay(ConeMetric<G> m,
                                                   const MakeDelaunayOptions& opts = {})
{
    validate_metric(m);
    auto report = detail::flip_until_delaunay(
        m.surface, [&](EdgeId e) { return !is_delaunay_edge(m, e, opts.tolerance); },
        [&](EdgeId e) {
            const double d = flip_length(m, e);
            m.surface.flip(e);
            m.lengths[e] = d;
        },
        detail::flip_cap(m.surface, opts.cap_factor));
    if (report.iterations_capped && opts.throw_on_cap) {
        throw Error(ErrorKind::IterationCap,
                    "flip cap of " + std::to_string(detail::flip_cap(m.surface, opts.cap_factor)) +
                        " reached");
    }
    return {std::move(m), std::move(report)};
}

/**
 * @brief Geometry of the horospherical links of the ideal cone-polyhedron
 * built from Penner coordinates @p penner and conformal factors @p u.
 *
 * dihedral[c] is the dihedral angle, inside the tetrahedron over triangle(c),
 * at the ideal edge opposite corner c, read off the link at vertex(next(c)).
 * dihedral_from_prev[c] is the same angle read off the link at vertex(prev(c)).
 * link_angle[c] is the link angle at the interior edge through vertex(c); it
 * equals the spherical corner angle.
 */
struct LinkGeometry {
    std::vector<double> dihedral;
    std::vector<double> dihedral_from_prev;
    std::vector<double> link_angle;

    /// (alpha+, alpha-) of edge e: the dihedral angles of its two tetrahedra
    std::array<double, 2> edge_angles(const TriangulatedSurface& s, EdgeId e) const
    {
        const auto [c0, c1] = s.edge_corners(e);
        return {dihedral[c0], dihedral[c1]};
    }
};

/**
 * @brief Link triangles of every semi-ideal tetrahedron.
 *
 * Lengths are scaled by exp(u_v) at the link of v so that only the
 * combinations a_e - u_v - u_w enter: the horocyclic arc lambda_v comes from
 * ideal_h_length of the reduced lengths, and rho_{v->w} = sin(l)/2 *
 * exp(-(a - u_v - u_w)) from the semi-ideal sine law.
 */
inline LinkGeometry link_geometry(const TriangulatedSurface& s, std::span<const double> penner,
                                  std::span<const double> u)
{
    using S = TriangulatedSurface;
    const int E = s.edge_count();
    std::vector<double> reduced(E), rho_scaled(E);
    for (EdgeId e = 0; e < E; ++e) {
        const auto [v, w] = s.endpoints(e);
        reduced[e] = penner[e] - u[v] - u[w];
        const double cos_l = 1.0 - 2.0 * std::exp(reduced[e]);
        if (!(cos_l > -1.0 && cos_l < 1.0)) {
            throw Error(ErrorKind::LengthOutOfRange,
                        "edge " + std::to_string(e) + " leaves (0, pi)", e);
        }
        const double l = std::acos(cos_l);
        rho_scaled[e] = 0.5 * std::sin(l) * std::exp(-reduced[e]);
    }
    LinkGeometry g;
    const int C = s.corner_count();
    g.dihedral.resize(C);
    g.dihedral_from_prev.resize(C);
    g.link_angle.resize(C);
    for (CornerId c = 0; c < C; ++c) {
        // link at v = vertex(c); edges v-n, v-p and the opposite n-p
        const EdgeId e_vn = s.edge(S::prev(c));
        const EdgeId e_vp = s.edge(S::next(c));
        const EdgeId e_np = s.edge(c);
        const double lambda = ideal_h_length(reduced[e_np], reduced[e_vn], reduced[e_vp]);
        const double rho_n = rho_scaled[e_vn];
        const double rho_p = rho_scaled[e_vp];
        try {
            g.link_angle[c] = euclidean_angle(lambda, rho_n, rho_p);
            // angle at the ideal edge v-n is opposite rho_p
            g.dihedral[S::prev(c)] = euclidean_angle(rho_p, lambda, rho_n);
            g.dihedral_from_prev[S::next(c)] = euclidean_angle(rho_n, lambda, rho_p);
        } catch (const Error& err) {
            const auto t = S::triangle(c);
            throw Error(ErrorKind::DegenerateTriangle,
                        "link triangle in tetrahedron " + std::to_string(t) + ": " + err.what(), t);
        }
    }
    return g;
}

}  // namespace sphconf
