#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nonlocal/domain.hpp"

using namespace nonlocal;

TEST_CASE("boundary distance on the canonical variants") {
    CHECK(Domain::ball(Point::d1(0.0), 1.0).delta(Point::d1(0.0)) == 1.0);
    CHECK(Domain::half_line(+1).delta(-4.0) == 4.0);
    CHECK(Domain::interval(-1.0, 1.0).delta(0.25) == 0.75);

    // exterior points measure distance to the boundary as well
    CHECK(Domain::interval(-1.0, 1.0).delta(3.0) == 2.0);
    CHECK(Domain::ball(Point::d2(0.0, 0.0), 1.0).delta(Point::d2(2.0, 0.0)) == 1.0);
}

TEST_CASE("contains and delta are consistent") {
    const auto domains = {Domain::interval(-1.0, 1.0), Domain::half_line(+1),
                          Domain::interval_union({{-2.0, -1.0}, {1.0, 2.0}})};
    for (const auto& d : domains) {
        for (double x = -3.0; x <= 3.0; x += 0.137) {
            if (d.contains(x)) CHECK(d.delta(x) > 0.0);
            CHECK(d.delta(x) >= 0.0);
        }
    }
}

TEST_CASE("interaction distance r(z,w)") {
    const auto ball = Domain::interval(-1.0, 1.0);  // 1D ball of radius 1
    CHECK(ball.r_interaction(-2.0, 3.0) == Catch::Approx(8.0));
    CHECK(ball.r_interaction(-2.0, 3.0) == ball.r_interaction(3.0, -2.0));

    const auto hl = Domain::half_line(+1);
    CHECK(hl.r_interaction(-1.0, -1.0) == Catch::Approx(2.0));

    // lower bounds
    for (double z = -2.5; z < 2.5; z += 0.61) {
        for (double w = -2.5; w < 2.5; w += 0.43) {
            const double r = ball.r_interaction(z, w);
            CHECK(r >= std::abs(z - w) - 1e-15);
            CHECK(r >= ball.delta(z) + ball.delta(w) - 1e-15);
        }
    }
}

TEST_CASE("delta is 1-Lipschitz on convex variants") {
    const auto dom = Domain::ball(Point::d2(0.0, 0.0), 1.5);
    std::uint64_t s = 7;
    auto u = [&] { return 6.0 * detail::u01(detail::splitmix64(s)) - 3.0; };
    for (int i = 0; i < 200; ++i) {
        const Point a = Point::d2(u(), u());
        const Point b = Point::d2(u(), u());
        CHECK(std::abs(dom.delta(a) - dom.delta(b)) <= dist(a, b) + 1e-12);
    }
}

TEST_CASE("inscribed radius equals delta for convex variants") {
    const auto iv = Domain::interval(-1.0, 1.0);
    CHECK(iv.inscribed_radius(Point::d1(0.4)) == Catch::Approx(iv.delta(0.4)));
    const auto un = Domain::interval_union({{-2.0, -1.0}, {1.0, 2.0}});
    CHECK(un.inscribed_radius(Point::d1(1.25)) == Catch::Approx(0.25));
    CHECK(un.inscribed_radius(Point::d1(0.0)) == 0.0);  // not inside
}

TEST_CASE("diameter is finite exactly for bounded variants") {
    CHECK(Domain::interval(-1.0, 1.0).diameter() == Catch::Approx(2.0));
    CHECK(Domain::ball(Point::d3(0, 0, 0), 2.0).diameter() == Catch::Approx(4.0));
    CHECK(!Domain::half_line(+1).bounded());
    CHECK(!Domain::half_space(3).bounded());
}

TEST_CASE("dimension mismatch is rejected") {
    CHECK_THROWS_AS(Domain::ball(Point::d2(0, 0), 1.0).delta(Point::d1(0.0)),
                    std::invalid_argument);
}

TEST_CASE("domain spec strings parse and round-trip") {
    for (const std::string s : {"interval:-1,1", "halfline", "halfline:neg",
                                "halfspace:d=3", "ball:d=2,r=1",
                                "intervalunion:-2,-1;1,2"}) {
        const Domain d = parse_domain(s);
        const Domain again = parse_domain(d.to_spec_string());
        CHECK(again.kind() == d.kind());
        CHECK(again.dim() == d.dim());
    }
    CHECK(parse_domain("ball:d=2,r=1").dim() == 2);
    CHECK(parse_domain("interval:-1,1").delta(0.25) == 0.75);
    CHECK_THROWS_AS(parse_domain("cube:1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_domain("ball:d=2,q=1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_domain("interval:1"), std::invalid_argument);
}

TEST_CASE("volume density condition reports") {
    // half-space: complement is a half-space, c = |B_1|/2 for every r
    const auto hs = check_vdc(Domain::half_space(2), {0.5, 1.0, 2.0}, 1, 40000);
    CHECK(hs.c == Catch::Approx(0.5 * unit_ball_volume(2)).epsilon(0.02));

    // interval: complement contains a full ray, c = 1 for r below the gap
    const auto iv = check_vdc(Domain::interval(-1.0, 1.0), {0.25, 0.5, 1.0}, 2, 40000);
    CHECK(iv.c == Catch::Approx(1.0).epsilon(0.02));

    // planar ball: at small r the complement is at least half-plane-like
    // minus curvature, giving roughly |B_1|/2 >= |B_1|/4
    const auto ball =
        check_vdc(Domain::ball(Point::d2(0, 0), 1.0), {0.05, 0.2, 0.5}, 8, 40000);
    CHECK(ball.c >= 0.25 * unit_ball_volume(2));

    const auto degenerate = check_vdc(Domain::half_space(2), {}, 0, 10);
    CHECK(degenerate.degenerate);
}

TEST_CASE("vdc check is deterministic for a fixed seed") {
    const auto a = check_vdc(Domain::ball(Point::d2(0, 0), 1.0), {0.3}, 4, 20000, 99);
    const auto b = check_vdc(Domain::ball(Point::d2(0, 0), 1.0), {0.3}, 4, 20000, 99);
    CHECK(a.c == b.c);
}

TEST_CASE("exterior data: closed form and tabulated with tail rules") {
    const auto g = ExteriorData::closed_form([](double z) { return std::exp(z); });
    CHECK(g(-1.0) == Catch::Approx(std::exp(-1.0)));

    const auto tab = ExteriorData::tabulated({1.0, 2.0, 4.0}, {1.0, 3.0, 3.0},
                                             TailRule::reject);
    CHECK(tab(1.5) == Catch::Approx(2.0));
    CHECK(tab(4.0) == Catch::Approx(3.0));
    CHECK_THROWS_AS(tab(5.0), std::out_of_range);

    const auto z0 = ExteriorData::tabulated({1.0, 2.0}, {1.0, 1.0}, TailRule::zero);
    CHECK(z0(10.0) == 0.0);

    const auto hold = ExteriorData::tabulated({1.0, 2.0}, {1.0, 3.0}, TailRule::hold);
    CHECK(hold(10.0) == 3.0);

    const auto pw = ExteriorData::tabulated({1.0, 2.0}, {1.0, 4.0},
                                            TailRule::power_law, 2.0);
    CHECK(pw(4.0) == Catch::Approx(1.0));  // 4 * (4/2)^{-2}

    CHECK_THROWS_AS(ExteriorData::tabulated({1.0}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(ExteriorData::tabulated({1.0, 1.0}, {1.0, 2.0}),
                    std::invalid_argument);
}
