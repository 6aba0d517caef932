#include <catch_amalgamated.hpp>

#include <random>

#include "support.hpp"

using namespace sphconf;
using Catch::Approx;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("spherical angle examples")
{
    CHECK_THAT(spherical_angle(kPi / 2, kPi / 2, kPi / 2), WithinAbs(kPi / 2, 1e-14));

    // regular tetrahedron inscribed in the unit sphere, angle measured in the tangent plane
    const auto p = testing::positions({{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}});
    const double x = testing::arc(p[0], p[1]);
    CHECK_THAT(std::cos(x), WithinAbs(-1.0 / 3.0, 1e-14));
    const double measured = testing::tangent_angle(p[0], p[1], p[2]);
    CHECK_THAT(spherical_angle(x, x, x), WithinAbs(measured, 1e-12));
    CHECK_THAT(spherical_angle(x, x, x), WithinAbs(2 * kPi / 3, 1e-12));

    // equality in the triangle inequality is outside the open polytope
    try {
        spherical_angle(kPi / 2, kPi / 4, kPi / 4);
        FAIL("degenerate triangle accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DegenerateTriangle);
    }
    CHECK_THROWS_AS(spherical_angle(2.5, 2.5, 1.4), Error);  // perimeter > 2pi
}

TEST_CASE("spherical angle matches embedded triangles")
{
    std::mt19937_64 rng(3);
    for (int k = 0; k < 500; ++k) {
        const auto a = testing::random_unit(rng), b = testing::random_unit(rng),
                   c = testing::random_unit(rng);
        const double ab = testing::arc(a, b), bc = testing::arc(b, c), ca = testing::arc(c, a);
        if (!spherical_triangle_valid(bc, ca, ab, 1e-3)) {
            continue;
        }
        CHECK_THAT(spherical_angle(bc, ca, ab), WithinAbs(testing::tangent_angle(a, b, c), 1e-9));
    }
}

TEST_CASE("spherical angle symmetry, monotonicity and excess")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.05, kPi - 0.05);
    int sampled = 0;
    while (sampled < 300) {
        const double a = U(rng), b = U(rng), c = U(rng);
        if (!spherical_triangle_valid(a, b, c, 1e-2)) {
            continue;
        }
        ++sampled;
        CHECK_THAT(spherical_angle(a, b, c), WithinAbs(spherical_angle(a, c, b), 1e-13));
        const double sum = spherical_angle(a, b, c) + spherical_angle(b, c, a) + spherical_angle(c, a, b);
        CHECK(sum > kPi);
        if (spherical_triangle_valid(a + 1e-3, b, c, 1e-2)) {
            CHECK(spherical_angle(a + 1e-3, b, c) > spherical_angle(a, b, c));
        }
    }
}

TEST_CASE("half-angle branch agrees with arccos near 0 and pi")
{
    // thin triangles, compared with the embedded tangent angle
    const testing::Vec3 a(1, 0, 0);
    for (double eps : {1e-2, 1e-4, 1e-6}) {
        const testing::Vec3 b = testing::Vec3(std::cos(0.3), std::sin(0.3), 0).normalized();
        const testing::Vec3 c = testing::Vec3(std::cos(0.6), std::sin(0.6), eps).normalized();
        const double ab = testing::arc(a, b), bc = testing::arc(b, c), ca = testing::arc(c, a);
        // rounding in the side lengths alone moves this angle by ~1e-10
        CHECK_THAT(spherical_angle(bc, ca, ab), WithinAbs(testing::tangent_angle(a, b, c), 1e-9));
        CHECK_THAT(spherical_angle(ca, ab, bc), WithinAbs(testing::tangent_angle(b, c, a), 1e-8));
    }
}

TEST_CASE("euclidean angle examples")
{
    CHECK_THAT(euclidean_angle(1, 1, 1), WithinAbs(kPi / 3, 1e-15));
    CHECK_THAT(euclidean_angle(std::sqrt(2.0), 1, 1), WithinAbs(kPi / 2, 1e-15));
    // planar embedding: B = (0,0), C = (2,0) (side a = BC = 2), A with |AB| = 1.0, |AC| = 1.1
    const double x = (1.0 + 4.0 - 1.21) / 4.0;
    const double y = std::sqrt(1.0 - x * x);
    const Eigen::Vector2d A(x, y), B(0, 0), C(2, 0);
    const double measured = std::acos((B - A).normalized().dot((C - A).normalized()));
    CHECK_THAT(euclidean_angle(2.0, 1.1, 1.0), WithinAbs(measured, 1e-13));
    CHECK_THROWS_AS(euclidean_angle(2.0, 1.0, 1.0), Error);
}

TEST_CASE("semi-ideal triangle examples")
{
    const auto d = semi_ideal_from_link(kPi / 2, 0, 0);
    CHECK_THAT(d.a12, WithinAbs(-std::log(2.0), 1e-15));
    CHECK_THAT(d.rho12, WithinAbs(1.0, 1e-14));
    CHECK_THAT(d.rho21, WithinAbs(1.0, 1e-14));
    // cosine law at u = 0: rho^2 = exp(-a) - 1
    CHECK_THAT(d.rho12 * d.rho12, WithinAbs(std::exp(-d.a12) - 1.0, 1e-14));
    CHECK(sine_law_check(d) < 1e-12);

    for (double l : {0.3, 1.2, 2.9}) {
        const auto base = semi_ideal_from_link(l, 0.2, -0.4);
        const auto shifted = semi_ideal_from_link(l, 0.2 + 0.7, -0.4 + 0.7);
        CHECK_THAT(shifted.a12 - base.a12, WithinAbs(1.4, 1e-13));
        // recover cos l from the first cosine law
        const double cos_l = (std::exp(shifted.u1 + shifted.u2) - 2 * std::exp(shifted.a12)) /
                             std::exp(shifted.u1 + shifted.u2);
        CHECK_THAT(cos_l, WithinAbs(std::cos(l), 1e-13));
    }
    const auto near_pi = semi_ideal_from_link(kPi - 1e-7, 0.3, 0.5);
    CHECK_THAT(near_pi.a12, WithinAbs(0.8, 1e-12));
}

TEST_CASE("semi-ideal triangle identities on random data")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> L(0.01, kPi - 0.01), U(-2.0, 2.0);
    for (int k = 0; k < 1000; ++k) {
        const auto d = semi_ideal_from_link(L(rng), U(rng), U(rng));
        CHECK(sine_law_check(d) < 1e-10);
        CHECK(d.rho12 > 0);
        CHECK(d.rho21 > 0);
        CHECK_THAT(d.b12 + d.b21, WithinAbs(d.a12, 1e-10 * (1 + std::abs(d.a12))));
        CHECK_THAT(std::exp(d.u1), WithinRel(std::exp(d.b12) * std::cosh(d.u12), 1e-10));
        CHECK_THAT(d.rho12 * d.rho12,
                   WithinRel(std::exp(-2 * d.b12) - std::exp(-2 * d.u1), 1e-9));
        CHECK_THAT(d.rho21 * d.rho21,
                   WithinRel(std::exp(-2 * d.b21) - std::exp(-2 * d.u2), 1e-9));
        // third cosine law
        CHECK_THAT(std::cos(d.l12), WithinAbs(1 - 2 * std::exp(d.a12 - d.u1 - d.u2), 1e-12));
    }
}

TEST_CASE("horocyclic arc examples")
{
    CHECK(ideal_h_length(0, 0, 0) == 1.0);
    CHECK_THAT(ideal_h_length(2 * std::log(0.37), 0, 0), WithinRel(0.37, 1e-15));
}

TEST_CASE("horospherical link triangles close up")
{
    // random semi-ideal tetrahedra: spherical triangle (l12, l13, l23) at the finite vertex,
    // distances u_i to the horospheres
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> L(0.1, 2.5), U(-1.0, 1.0);
    int done = 0;
    while (done < 300) {
        const double l12 = L(rng), l13 = L(rng), l23 = L(rng);
        if (!spherical_triangle_valid(l12, l13, l23, 1e-3)) {
            continue;
        }
        ++done;
        const double u1 = U(rng), u2 = U(rng), u3 = U(rng);
        const auto d12 = semi_ideal_from_link(l12, u1, u2);
        const auto d13 = semi_ideal_from_link(l13, u1, u3);
        const auto d23 = semi_ideal_from_link(l23, u2, u3);
        const double lambda1 = ideal_h_length(d23.a12, d12.a12, d13.a12);
        const double rho12 = d12.rho12, rho13 = d13.rho12;
        const double omega = euclidean_angle(lambda1, rho12, rho13);
        const double total = omega + euclidean_angle(rho12, lambda1, rho13) +
                             euclidean_angle(rho13, lambda1, rho12);
        CHECK_THAT(total, WithinAbs(kPi, 1e-10));
        // the link angle at the edge to the finite vertex is the spherical corner angle
        CHECK_THAT(omega, WithinAbs(spherical_angle(l23, l12, l13), 1e-9));
    }
}
