#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "sphconf/surface.hpp"

// Platonic combinatorics with outward (counter-clockwise) orientation.
namespace sphconf::fixtures
{

inline TriangulatedSurface tetrahedron()
{
    static constexpr std::array<std::array<VertexId, 3>, 4> tris{{
        {0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2},
    }};
    return from_vertex_triangles(4, tris);
}

/// Vertices 0..5 are +x, -x, +y, -y, +z, -z; vertex v and v ^ 1 are antipodal.
inline TriangulatedSurface octahedron()
{
    static constexpr std::array<std::array<VertexId, 3>, 8> tris{{
        {0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
        {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5},
    }};
    return from_vertex_triangles(6, tris);
}

inline std::vector<std::array<double, 3>> octahedron_positions()
{
    return {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
}

inline TriangulatedSurface icosahedron()
{
    static constexpr std::array<std::array<VertexId, 3>, 20> tris{{
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
    }};
    return from_vertex_triangles(12, tris);
}

/// Unit-sphere positions matching icosahedron()'s vertex numbering.
inline std::vector<std::array<double, 3>> icosahedron_positions()
{
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<std::array<double, 3>> p{
        {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
        {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
        {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1},
    };
    const double r = std::sqrt(1.0 + phi * phi);
    for (auto& q : p) {
        for (auto& x : q) {
            x /= r;
        }
    }
    return p;
}

/// Two triangles glued along all three edges: 3 vertices, 3 edges.
inline TriangulatedSurface double_triangle()
{
    const std::array<TriangleSpec, 2> tris{{
        {{0, 1, 2}, {0, 1, 2}},
        {{0, 2, 1}, {0, 2, 1}},
    }};
    return TriangulatedSurface::build(3, tris);
}

}  // namespace sphconf::fixtures
