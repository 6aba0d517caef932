#include <catch_amalgamated.hpp>

#include <numeric>
#include <random>

#include "support.hpp"

using namespace sphconf;
using Catch::Matchers::WithinAbs;

namespace
{
ErrorKind target_error(const std::vector<double>& k)
{
    try {
        validate_target(k);
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("target accepted");
    return ErrorKind::OutOfRange;
}

bool in_open_range(const std::vector<double>& k)
{
    return std::all_of(k.begin(), k.end(), [](double x) { return x > 0 && x < 2 * kPi; });
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b)
{
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

/** Edge lengths keyed by unordered endpoint pairs, for comparing metrics across relabeled edges */
std::vector<std::pair<std::pair<int, int>, double>> keyed_lengths(const CurvatureEvaluation& ev)
{
    std::vector<std::pair<std::pair<int, int>, double>> out;
    for (EdgeId e = 0; e < ev.triangulation.edge_count(); ++e) {
        out.push_back({testing::ends_key(ev.triangulation, e), ev.lengths[e]});
    }
    std::sort(out.begin(), out.end());
    return out;
}
}  // namespace

TEST_CASE("target validation examples")
{
    const auto ok = validate_target(std::vector<double>(12, kPi / 5));
    CHECK(ok.kappa_star.size() == 12);
    CHECK(target_error(std::vector<double>(4, kPi)) == ErrorKind::GaussBonnetExcess);
    try {
        validate_target(std::vector<double>{1.5 * kPi, 0.25 * kPi, 0.25 * kPi});
        FAIL("accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::TriangleLikeViolation);
        CHECK(e.element() == 0);
    }
    CHECK(target_error({0.0, 1.0, 1.0, 1.0}) == ErrorKind::OutOfRange);
    CHECK(target_error({-0.1, 1.0, 1.0, 1.0}) == ErrorKind::OutOfRange);
    CHECK(target_error({2 * kPi, 1.0, 1.0, 1.0}) == ErrorKind::OutOfRange);
    CHECK(target_error({1.0, 1.0}) == ErrorKind::OutOfRange);
    // range failures are reported before the sum conditions
    CHECK(target_error({7.0, 7.0, 7.0}) == ErrorKind::OutOfRange);
    // equality in the triangle-like condition is rejected
    CHECK(target_error({2.0, 1.0, 1.0}) == ErrorKind::TriangleLikeViolation);
}

TEST_CASE("euclidean limit curvature examples")
{
    const auto oct = chart_from_metric(
        testing::embedded_metric(fixtures::octahedron(), testing::positions(fixtures::octahedron_positions())));
    const auto d_oct = euclidean_limit_curvature(oct);
    for (double d : d_oct) {
        CHECK_THAT(d, WithinAbs(2 * kPi / 3, 1e-13));
    }
    const auto ico = chart_from_metric(
        testing::embedded_metric(fixtures::icosahedron(), testing::positions(fixtures::icosahedron_positions())));
    const auto d_ico = euclidean_limit_curvature(ico);
    for (double d : d_ico) {
        CHECK_THAT(d, WithinAbs(kPi / 3, 1e-13));
    }
    std::mt19937_64 rng(103);
    for (int k = 0; k < 20; ++k) {
        const auto chart = chart_from_metric(
            testing::random_metric(testing::equilateral(fixtures::icosahedron(), 0.5 * kPi), 0.1, 5, rng));
        const auto d = euclidean_limit_curvature(chart);
        CHECK_THAT(std::accumulate(d.begin(), d.end(), 0.0), WithinAbs(4 * kPi, 1e-11));
    }
}

TEST_CASE("round trip from forward evaluations")
{
    const auto chart = testing::cone_octahedron_chart();
    std::mt19937_64 rng(107);
    int solved = 0;
    double worst = 0;
    while (solved < 20) {
        const auto u_star = testing::random_u(6, 0.2, rng);
        CurvatureEvaluation forward;
        try {
            forward = kappa_of_u(chart, u_star);
        } catch (const Error&) {
            continue;
        }
        if (!in_open_range(forward.kappa)) {
            continue;
        }
        const auto report = solve(chart, validate_target(forward.kappa));
        ++solved;
        CHECK(report.converged);
        CHECK(report.final_residual <= 1e-10);
        worst = std::max(worst, max_diff(report.u_solution, u_star));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("a target equal to the base curvature is a fixed point")
{
    const auto chart = testing::cone_octahedron_chart();
    const auto k0 = kappa_of_u(chart, std::vector<double>(6, 0.0)).kappa;
    REQUIRE(in_open_range(k0));
    const auto report = solve(chart, validate_target(k0));
    CHECK(report.converged);
    CHECK(report.iterations <= 1);
    CHECK(max_diff(report.u_solution, std::vector<double>(6, 0.0)) < 1e-12);
}

TEST_CASE("icosahedral symmetry of the solution")
{
    // equilateral class, asymmetric start; the unique solution with constant curvature is equilateral
    std::mt19937_64 rng(109);
    const auto chart = chart_from_metric(testing::equilateral(fixtures::icosahedron(), 1.9 * kPi / 5));
    SolveOptions opts;
    opts.initial_u = testing::random_u(12, 0.05, rng);
    const auto report = solve(chart, validate_target(std::vector<double>(12, kPi / 5)), opts);
    REQUIRE(report.converged);
    const auto& l = report.solution.lengths;
    const auto [lo, hi] = std::minmax_element(l.begin(), l.end());
    CHECK(*hi - *lo < 1e-9);
    CHECK_THAT(*lo, WithinAbs(equilateral_arc_for_angle(1.8 * kPi / 5), 1e-9));
}

TEST_CASE("solutions satisfy the post-solve invariants and are unique")
{
    std::mt19937_64 rng(113);
    int targets = 0;
    for (int k = 0; targets < 6 && k < 100; ++k) {
        const auto sample = testing::sample_chart(k, rng);
        if (!sample || !in_open_range(sample->eval.kappa)) {
            continue;
        }
        const auto& chart = sample->chart;
        const int V = chart.vertex_count();
        std::vector<double> kstar;
        try {
            kstar = validate_target(sample->eval.kappa).kappa_star;
        } catch (const Error&) {
            continue;
        }
        ++targets;
        std::vector<std::pair<std::pair<int, int>, double>> reference;
        int successes = 0;
        for (int trial = 0; trial < 10; ++trial) {
            SolveOptions opts;
            opts.initial_u = testing::random_u(V, 0.1, rng);
            opts.throw_on_failure = false;
            const auto report = solve(chart, {kstar}, opts);
            if (!report.converged) {
                CHECK(report.failure.has_value());
                continue;
            }
            ++successes;
            const auto m = report.solution.metric();
            CHECK_NOTHROW(validate_target(report.solution.kappa));
            CHECK(report.in_convex_region());
            CHECK(std::abs(gauss_bonnet(m).residual) < 1e-9);
            CHECK(is_delaunay(m));
            CHECK(report.final_residual <= 1e-10);
            for (std::size_t i = 1; i < report.trace.size(); ++i) {
                CHECK(report.trace[i].residual < report.trace[i - 1].residual);
            }
            for (const auto& t : report.trace) {
                CHECK(t.damping > 0);
                CHECK(t.damping <= 1);
            }
            const auto lengths = keyed_lengths(report.solution);
            if (reference.empty()) {
                reference = lengths;
                continue;
            }
            // the Delaunay triangulation of the unique solution has the same edge keys
            REQUIRE(lengths.size() == reference.size());
            for (std::size_t i = 0; i < lengths.size(); ++i) {
                CHECK(lengths[i].first == reference[i].first);
                CHECK_THAT(lengths[i].second, WithinAbs(reference[i].second, 1e-7));
            }
        }
        CHECK(successes >= 5);
    }
    CHECK(targets >= 4);
}

TEST_CASE("Newton directions are descent directions")
{
    const auto chart = testing::cone_octahedron_chart();
    std::mt19937_64 rng(127);
    for (int k = 0; k < 10; ++k) {
        const auto u = testing::random_u(6, 0.15, rng);
        CurvatureEvaluation ev;
        try {
            ev = kappa_of_u(chart, u);
        } catch (const Error&) {
            continue;
        }
        const auto kstar = kappa_of_u(chart, std::vector<double>(6, 0.0)).kappa;
        Eigen::VectorXd r(6);
        for (int v = 0; v < 6; ++v) {
            r[v] = ev.kappa[v] - kstar[v];
        }
        const auto J = jacobian(ev);
        const Eigen::MatrixXd sym = 0.5 * (J + J.transpose());
        const Eigen::VectorXd s = -sym.ldlt().solve(r);
        // d/dt 1/2 |r(u + t s)|^2 at t = 0
        CHECK((J.transpose() * r).dot(s) < 0);
    }
}

TEST_CASE("solver failures")
{
    SECTION("singular Jacobian at the round octahedron")
    {
        const auto chart = chart_from_metric(testing::embedded_metric(
            fixtures::octahedron(), testing::positions(fixtures::octahedron_positions())));
        const CurvatureTarget target{std::vector<double>(6, 0.5)};
        try {
            solve(chart, target);
            FAIL("solved");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::SingularJacobian);
        }
        SolveOptions opts;
        opts.throw_on_failure = false;
        const auto report = solve(chart, target, opts);
        CHECK(!report.converged);
        CHECK(report.failure == ErrorKind::SingularJacobian);
        CHECK(!report.message.empty());
    }
    SECTION("iteration limit")
    {
        const auto chart = testing::cone_octahedron_chart();
        SolveOptions opts;
        opts.max_iter = 1;
        opts.tol = 1e-14;
        const auto target = validate_target(std::vector<double>{0.9, 1.1, 1.0, 1.3, 0.8, 1.2});
        try {
            solve(chart, target, opts);
            FAIL("converged");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::MaxIterations);
        }
    }
    SECTION("target of the wrong size")
    {
        const auto chart = testing::cone_octahedron_chart();
        CHECK_THROWS_AS(solve(chart, {std::vector<double>(5, 1.0)}), Error);
    }
}
