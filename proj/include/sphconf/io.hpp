#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "sphconf/delaunay.hpp"
#include "sphconf/metric.hpp"
#include "sphconf/solver.hpp"

namespace sphconf::io
{

using json = nlohmann::json;

/// A parsed mesh file: either geometry.
using AnyMetric = std::variant<SphericalConeMetric, EuclideanConeMetric>;

namespace detail
{
[[noreturn]] inline void parse_fail(const std::string& where, const std::string& what)
{
    throw Error(ErrorKind::ParseError, where + ": " + what);
}

inline const json& field(const json& obj, const std::string& where, const char* key)
{
    if (!obj.is_object() || !obj.contains(key)) {
        parse_fail(where, std::string("missing field '") + key + "'");
    }
    return obj.at(key);
}

template <std::size_t N>
std::array<int, N> int_array(const json& j, const std::string& where)
{
    if (!j.is_array() || j.size() != N) {
        parse_fail(where, "expected an array of " + std::to_string(N) + " integers");
    }
    std::array<int, N> out{};
    for (std::size_t k = 0; k < N; ++k) {
        if (!j[k].is_number_integer()) {
            parse_fail(where + "[" + std::to_string(k) + "]", "expected an integer");
        }
        out[k] = j[k].get<int>();
    }
    return out;
}

inline std::vector<double> real_array(const json& j, const std::string& where)
{
    if (!j.is_array()) {
        parse_fail(where, "expected an array of numbers");
    }
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t k = 0; k < j.size(); ++k) {
        if (!j[k].is_number()) {
            parse_fail(where + "[" + std::to_string(k) + "]", "expected a number");
        }
        out.push_back(j[k].get<double>());
    }
    return out;
}

inline json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        parse_fail(path, "cannot open file");
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        parse_fail(path, e.what());
    }
}
}  // namespace detail

/**
 * @brief Parse a mesh document.
 *
 * Fields: geometry ("spherical" | "euclidean"), vertex_count, triangles
 * (objects with "vertices" and "edges", corner k opposite edge k), lengths
 * indexed by edge id. An "edges" list with endpoint pairs is optional and
 * checked against the triangles when present.
 */
inline AnyMetric mesh_from_json(const json& doc)
{
    const std::string geometry = [&] {
        const auto& g = detail::field(doc, "mesh", "geometry");
        if (!g.is_string()) {
            detail::parse_fail("geometry", "expected a string");
        }
        return g.get<std::string>();
    }();
    if (geometry != Spherical::name && geometry != Euclidean::name) {
        detail::parse_fail("geometry", "unknown geometry '" + geometry + "'");
    }
    const auto& vc = detail::field(doc, "mesh", "vertex_count");
    if (!vc.is_number_integer()) {
        detail::parse_fail("vertex_count", "expected an integer");
    }
    const auto& tris = detail::field(doc, "mesh", "triangles");
    if (!tris.is_array()) {
        detail::parse_fail("triangles", "expected an array");
    }
    std::vector<TriangleSpec> specs;
    for (std::size_t t = 0; t < tris.size(); ++t) {
        const std::string where = "triangles[" + std::to_string(t) + "]";
        specs.push_back({detail::int_array<3>(detail::field(tris[t], where, "vertices"),
                                              where + ".vertices"),
                         detail::int_array<3>(detail::field(tris[t], where, "edges"),
                                              where + ".edges")});
    }
    auto surface = TriangulatedSurface::build(vc.get<int>(), specs);
    auto lengths = detail::real_array(detail::field(doc, "mesh", "lengths"), "lengths");
    if (static_cast<int>(lengths.size()) != surface.edge_count()) {
        detail::parse_fail("lengths", "expected " + std::to_string(surface.edge_count()) +
                                          " entries, got " + std::to_string(lengths.size()));
    }
    if (doc.contains("edges")) {
        const auto& edges = doc["edges"];
        if (!edges.is_array()) {
            detail::parse_fail("edges", "expected an array");
        }
        for (std::size_t k = 0; k < edges.size(); ++k) {
            const std::string where = "edges[" + std::to_string(k) + "]";
            const auto& id = detail::field(edges[k], where, "id");
            if (!id.is_number_integer() || id.get<int>() < 0 ||
                id.get<int>() >= surface.edge_count()) {
                detail::parse_fail(where + ".id", "not an edge id of the triangulation");
            }
            if (edges[k].contains("endpoints")) {
                auto ends = detail::int_array<2>(edges[k]["endpoints"], where + ".endpoints");
                auto actual = surface.endpoints(id.get<int>());
                std::sort(ends.begin(), ends.end());
                std::sort(actual.begin(), actual.end());
                if (ends[0] != actual[0] || ends[1] != actual[1]) {
                    detail::parse_fail(where + ".endpoints",
                                       "do not match the triangles using edge " +
                                           std::to_string(id.get<int>()));
                }
            }
        }
    }
    if (geometry == Spherical::name) {
        return SphericalConeMetric{std::move(surface), std::move(lengths)};
    }
    return EuclideanConeMetric{std::move(surface), std::move(lengths)};
}

inline AnyMetric read_mesh(const std::string& path)
{
    return mesh_from_json(detail::read_json_file(path));
}

template <class G>
json mesh_to_json(const ConeMetric<G>& m)
{
    json doc;
    doc["geometry"] = G::name;
    doc["vertex_count"] = m.surface.vertex_count();
    json edges = json::array();
    for (EdgeId e = 0; e < m.surface.edge_count(); ++e) {
        const auto ends = m.surface.endpoints(e);
        edges.push_back({{"id", e}, {"endpoints", {ends[0], ends[1]}}});
    }
    doc["edges"] = std::move(edges);
    json tris = json::array();
    for (const auto& t : m.surface.triangles()) {
        tris.push_back({{"vertices", t.vertices}, {"edges", t.edges}});
    }
    doc["triangles"] = std::move(tris);
    doc["lengths"] = m.lengths;
    return doc;
}

/** @brief Target curvature file: a JSON array of reals */
inline std::vector<double> read_target(const std::string& path)
{
    return detail::real_array(detail::read_json_file(path), path);
}

inline json to_json(const FlipReport& r)
{
    return {{"flips_performed", r.flips_performed},
            {"flipped_edge_ids", r.flipped_edge_ids},
            {"iterations_capped", r.iterations_capped}};
}

inline json to_json(const SolveReport& r)
{
    json trace = json::array();
    for (const auto& t : r.trace) {
        trace.push_back({{"residual", t.residual}, {"step", t.step}, {"damping", t.damping}});
    }
    json out{{"u_solution", r.u_solution},
             {"iterations", r.iterations},
             {"final_residual", r.final_residual},
             {"flips_total", r.flips_total},
             {"converged", r.converged},
             {"in_convex_region", r.in_convex_region()},
             {"trace", std::move(trace)}};
    if (r.failure) {
        out["failure"] = to_string(*r.failure);
        out["message"] = r.message;
    }
    return out;
}

inline void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorKind::ParseError, path + ": cannot open for writing");
    }
    out << text;
}

}  // namespace sphconf::io
