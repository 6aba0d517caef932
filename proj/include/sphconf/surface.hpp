#pragma once

#include <algorithm>
#include <array>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "sphconf/errors.hpp"

namespace sphconf
{

using VertexId = int;
using EdgeId = int;
using CornerId = int;
using TriangleId = int;

/** @brief One triangle of the input: corner k sits at vertices[k], opposite edges[k] */
struct TriangleSpec {
    std::array<VertexId, 3> vertices;
    std::array<EdgeId, 3> edges;

    bool operator==(const TriangleSpec&) const = default;
};

/** @brief An oriented edge leaving a vertex, as seen from one of its corners */
struct StarEntry {
    CornerId corner;  ///< corner at the source vertex
    EdgeId edge;      ///< outgoing edge
    VertexId target;  ///< endpoint reached along the edge
};

/**
 * @brief Closed oriented triangulated 2-sphere stored as a corner table.
 *
 * Loops and multiple edges are allowed. Corner c belongs to triangle c / 3,
 * stores its vertex and the edge opposite to it; the paired corner across
 * that edge is kept through a per-edge pair of corners. The edge opposite
 * corner c runs from vertex(next(c)) to vertex(prev(c)) inside its triangle.
 *
 * Edge ids are stable under flip(): the flipped edge keeps its id while its
 * endpoints change.
 */
class TriangulatedSurface
{
public:
    TriangulatedSurface() = default;

    /**
     * @brief Build and validate a surface.
     *
     * Edge ids must be 0..E-1, each referenced by exactly two corners, and the
     * two triangles sharing an edge must traverse it in opposite directions.
     */
    static TriangulatedSurface build(int vertex_count, std::span<const TriangleSpec> triangles)
    {
        TriangulatedSurface s;
        s.vertex_count_ = vertex_count;
        if (vertex_count < 3) {
            throw Error(ErrorKind::NonManifold, "a sphere needs at least 3 vertices");
        }
        const int corners = static_cast<int>(triangles.size()) * 3;
        s.vertex_.resize(corners);
        s.edge_.resize(corners);
        int max_edge = -1;
        for (std::size_t t = 0; t < triangles.size(); ++t) {
            for (int k = 0; k < 3; ++k) {
                const auto v = triangles[t].vertices[k];
                const auto e = triangles[t].edges[k];
                if (v < 0 || v >= vertex_count) {
                    throw Error(ErrorKind::NonManifold,
                                "triangle " + std::to_string(t) + " references vertex " +
                                    std::to_string(v) + " out of range",
                                static_cast<int>(t));
                }
                if (e < 0) {
                    throw Error(ErrorKind::NonManifold,
                                "triangle " + std::to_string(t) + " has negative edge id",
                                static_cast<int>(t));
                }
                s.vertex_[3 * t + k] = v;
                s.edge_[3 * t + k] = e;
                max_edge = std::max(max_edge, e);
            }
        }
        s.edge_corners_.assign(max_edge + 1, {-1, -1});
        for (CornerId c = 0; c < corners; ++c) {
            auto& slot = s.edge_corners_[s.edge_[c]];
            if (slot[0] < 0) {
                slot[0] = c;
            } else if (slot[1] < 0) {
                slot[1] = c;
            } else {
                throw Error(ErrorKind::NonManifold,
                            "edge " + std::to_string(s.edge_[c]) + " used more than twice",
                            s.edge_[c]);
            }
        }
        for (EdgeId e = 0; e <= max_edge; ++e) {
            if (s.edge_corners_[e][1] < 0) {
                throw Error(ErrorKind::NonManifold,
                            "edge " + std::to_string(e) + " used " +
                                std::to_string(s.edge_corners_[e][0] < 0 ? 0 : 1) +
                                " time(s), expected 2",
                            e);
            }
        }
        s.validate();
        return s;
    }

    int vertex_count() const noexcept { return vertex_count_; }
    int edge_count() const noexcept { return static_cast<int>(edge_corners_.size()); }
    int triangle_count() const noexcept { return static_cast<int>(vertex_.size()) / 3; }
    int corner_count() const noexcept { return static_cast<int>(vertex_.size()); }

    VertexId vertex(CornerId c) const { return vertex_[c]; }
    EdgeId edge(CornerId c) const { return edge_[c]; }
    static TriangleId triangle(CornerId c) noexcept { return c / 3; }
    static CornerId next(CornerId c) noexcept { return 3 * (c / 3) + (c + 1) % 3; }
    static CornerId prev(CornerId c) noexcept { return 3 * (c / 3) + (c + 2) % 3; }
    static CornerId corner(TriangleId t, int k) noexcept { return 3 * t + k; }

    /** @brief The corner across the opposite edge */
    CornerId twin(CornerId c) const
    {
        const auto& pair = edge_corners_[edge_[c]];
        return pair[0] == c ? pair[1] : pair[0];
    }

    /** @brief The two corners opposite edge e */
    const std::array<CornerId, 2>& edge_corners(EdgeId e) const { return edge_corners_[e]; }

    /** @brief Endpoints of e, oriented as traversed by its first corner's triangle */
    std::array<VertexId, 2> endpoints(EdgeId e) const
    {
        const auto c = edge_corners_[e][0];
        return {vertex_[next(c)], vertex_[prev(c)]};
    }

    bool is_loop(EdgeId e) const
    {
        const auto ends = endpoints(e);
        return ends[0] == ends[1];
    }

    /** @brief An edge is flippable when its two sides are distinct triangles */
    bool is_flippable(EdgeId e) const
    {
        const auto& pair = edge_corners_[e];
        return triangle(pair[0]) != triangle(pair[1]);
    }

    /**
     * @brief Diagonal flip of edge e in place.
     *
     * With triangles (x, p, q) and (y, q, p) on the two sides of e = pq the
     * result is (x, p, y) and (y, q, x), with e now joining x and y.
     */
    void flip(EdgeId e)
    {
        if (e < 0 || e >= edge_count()) {
            throw Error(ErrorKind::UnflippableEdge, "edge id out of range", e);
        }
        if (!is_flippable(e)) {
            throw Error(ErrorKind::UnflippableEdge,
                        "edge " + std::to_string(e) + " has the same triangle on both sides", e);
        }
        const CornerId c0 = edge_corners_[e][0];
        const CornerId c1 = edge_corners_[e][1];
        const CornerId n0 = next(c0), p0 = prev(c0);
        const CornerId n1 = next(c1), p1 = prev(c1);

        const VertexId x = vertex_[c0], p = vertex_[n0], q = vertex_[p0];
        const VertexId y = vertex_[c1];
        const EdgeId e_xq = edge_[n0], e_xp = edge_[p0];
        const EdgeId e_yp = edge_[n1], e_yq = edge_[p1];

        const TriangleId t0 = triangle(c0), t1 = triangle(c1);
        const CornerId b0 = 3 * t0, b1 = 3 * t1;

        // (x, p, y) with opposite edges (py, xy, xp)
        vertex_[b0] = x, vertex_[b0 + 1] = p, vertex_[b0 + 2] = y;
        edge_[b0] = e_yp, edge_[b0 + 1] = e, edge_[b0 + 2] = e_xp;
        // (y, q, x) with opposite edges (qx, xy, yq)
        vertex_[b1] = y, vertex_[b1 + 1] = q, vertex_[b1 + 2] = x;
        edge_[b1] = e_xq, edge_[b1 + 1] = e, edge_[b1 + 2] = e_yq;

        for (EdgeId f : {e, e_xq, e_xp, e_yp, e_yq}) {
            auto& pair = edge_corners_[f];
            std::array<CornerId, 2> kept{-1, -1};
            int n = 0;
            for (auto c : pair) {
                if (triangle(c) != t0 && triangle(c) != t1) {
                    kept[n++] = c;
                }
            }
            pair = kept;
        }
        for (CornerId c : {b0, b0 + 1, b0 + 2, b1, b1 + 1, b1 + 2}) {
            auto& pair = edge_corners_[edge_[c]];
            if (pair[0] < 0) {
                pair[0] = c;
            } else if (pair[0] != c && pair[1] < 0) {
                pair[1] = c;
            }
        }
    }

    /**
     * @brief Oriented edges leaving v in cyclic order. A loop at v appears
     * twice, once for each of its directions.
     */
    std::vector<StarEntry> star(VertexId v) const
    {
        std::vector<StarEntry> out;
        const CornerId start = any_corner(v);
        if (start < 0) {
            return out;
        }
        CornerId c = start;
        do {
            out.push_back({c, edge_[prev(c)], vertex_[next(c)]});
            c = next(twin(next(c)));
        } while (c != start && out.size() <= vertex_.size());
        return out;
    }

    /** @brief Corners incident to v, in the same cyclic order as star() */
    std::vector<CornerId> corners_around(VertexId v) const
    {
        std::vector<CornerId> out;
        for (const auto& s : star(v)) {
            out.push_back(s.corner);
        }
        return out;
    }

    /** @brief Triangles as (vertex, edge) triples, suitable for build() */
    std::vector<TriangleSpec> triangles() const
    {
        std::vector<TriangleSpec> out(triangle_count());
        for (TriangleId t = 0; t < triangle_count(); ++t) {
            for (int k = 0; k < 3; ++k) {
                out[t].vertices[k] = vertex_[3 * t + k];
                out[t].edges[k] = edge_[3 * t + k];
            }
        }
        return out;
    }

    /**
     * @brief Check every structural invariant, throwing on the first failure.
     *
     * Pairing is a fixed-point-free involution, opposite traversal of shared
     * edges, chi = 2, connectedness and a single corner cycle per vertex.
     */
    void validate() const
    {
        const int V = vertex_count_, E = edge_count(), T = triangle_count();
        if (V < 3) {
            throw Error(ErrorKind::NonManifold, "a sphere needs at least 3 vertices");
        }
        if (3 * T != 2 * E) {
            throw Error(ErrorKind::NonManifold, "corner count does not match 2 * edge count");
        }
        for (EdgeId e = 0; e < E; ++e) {
            const auto [a, b] = edge_corners_[e];
            if (a < 0 || b < 0 || a == b || edge_[a] != e || edge_[b] != e) {
                throw Error(ErrorKind::NonManifold,
                            "edge " + std::to_string(e) + " is not shared by exactly two corners",
                            e);
            }
            // opposite traversal: a runs next(a)->prev(a), b must run prev(a)->next(a)
            const bool ends_ab = vertex_[next(a)] == vertex_[prev(b)] &&
                                 vertex_[prev(a)] == vertex_[next(b)];
            if (!ends_ab) {
                const bool same_dir = vertex_[next(a)] == vertex_[next(b)] &&
                                      vertex_[prev(a)] == vertex_[prev(b)];
                if (same_dir) {
                    throw Error(ErrorKind::OrientationMismatch,
                                "triangles " + std::to_string(triangle(a)) + " and " +
                                    std::to_string(triangle(b)) +
                                    " traverse edge " + std::to_string(e) +
                                    " in the same direction",
                                e);
                }
                throw Error(ErrorKind::NonManifold,
                            "the two triangles on edge " + std::to_string(e) +
                                " disagree on its endpoints",
                            e);
            }
        }
        const int chi = V - E + T;
        if (chi != 2) {
            throw Error(ErrorKind::WrongEuler,
                        "Euler characteristic is " + std::to_string(chi) + ", expected 2");
        }
        // one corner cycle per vertex
        std::vector<int> cycles(V, 0);
        std::vector<char> seen(corner_count(), 0);
        for (CornerId s = 0; s < corner_count(); ++s) {
            if (seen[s]) {
                continue;
            }
            ++cycles[vertex_[s]];
            CornerId c = s;
            do {
                seen[c] = 1;
                c = next(twin(next(c)));
            } while (c != s);
        }
        for (VertexId v = 0; v < V; ++v) {
            if (cycles[v] != 1) {
                throw Error(ErrorKind::NonManifold,
                            "vertex " + std::to_string(v) + " has " + std::to_string(cycles[v]) +
                                " corner cycles, expected 1",
                            v);
            }
        }
        // connectedness over triangles
        std::vector<char> reached(T, 0);
        std::vector<TriangleId> stack{0};
        reached[0] = 1;
        int count = 1;
        while (!stack.empty()) {
            const auto t = stack.back();
            stack.pop_back();
            for (int k = 0; k < 3; ++k) {
                const auto u = triangle(twin(3 * t + k));
                if (!reached[u]) {
                    reached[u] = 1;
                    ++count;
                    stack.push_back(u);
                }
            }
        }
        if (count != T) {
            throw Error(ErrorKind::NonManifold, "surface is not connected");
        }
    }

    /**
     * @brief Same triangles up to cyclic rotation inside each triangle and
     * reordering of triangles.
     */
    bool isomorphic_to(const TriangulatedSurface& other) const
    {
        if (vertex_count_ != other.vertex_count_ || edge_count() != other.edge_count() ||
            triangle_count() != other.triangle_count()) {
            return false;
        }
        auto canonical = [](const TriangulatedSurface& s) {
            auto tris = s.triangles();
            for (auto& t : tris) {
                int best = 0;
                for (int k = 1; k < 3; ++k) {
                    if (std::pair(t.vertices[k], t.edges[k]) <
                        std::pair(t.vertices[best], t.edges[best])) {
                        best = k;
                    }
                }
                std::rotate(t.vertices.begin(), t.vertices.begin() + best, t.vertices.end());
                std::rotate(t.edges.begin(), t.edges.begin() + best, t.edges.end());
            }
            std::sort(tris.begin(), tris.end(), [](const auto& a, const auto& b) {
                return std::pair(a.vertices, a.edges) < std::pair(b.vertices, b.edges);
            });
            return tris;
        };
        return canonical(*this) == canonical(other);
    }

    bool operator==(const TriangulatedSurface&) const = default;

private:
    CornerId any_corner(VertexId v) const
    {
        const auto it = std::find(vertex_.begin(), vertex_.end(), v);
        return it == vertex_.end() ? -1 : static_cast<CornerId>(it - vertex_.begin());
    }

    int vertex_count_ = 0;
    std::vector<VertexId> vertex_;
    std::vector<EdgeId> edge_;
    std::vector<std::array<CornerId, 2>> edge_corners_;
};

/** @brief Copying flip, for callers that keep the original */
inline TriangulatedSurface flip(TriangulatedSurface surface, EdgeId e)
{
    surface.flip(e);
    return surface;
}

/**
 * @brief Build a surface from vertex triples only, numbering edges by first
 * appearance of each unordered vertex pair. Only valid for simplicial input.
 */
inline TriangulatedSurface from_vertex_triangles(int vertex_count,
                                                 std::span<const std::array<VertexId, 3>> tris)
{
    std::vector<std::pair<VertexId, VertexId>> keys;
    std::vector<TriangleSpec> specs;
    for (const auto& t : tris) {
        TriangleSpec s{t, {}};
        for (int k = 0; k < 3; ++k) {
            auto a = t[(k + 1) % 3], b = t[(k + 2) % 3];
            if (a > b) {
                std::swap(a, b);
            }
            const auto key = std::pair(a, b);
            auto it = std::find(keys.begin(), keys.end(), key);
            if (it == keys.end()) {
                keys.push_back(key);
                it = keys.end() - 1;
            }
            s.edges[k] = static_cast<EdgeId>(it - keys.begin());
        }
        specs.push_back(s);
    }
    return TriangulatedSurface::build(vertex_count, specs);
}

}  // namespace sphconf
