#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nonlocal/quadrature.hpp"

using namespace nonlocal;

TEST_CASE("inverse square root endpoint singularity") {
    QuadratureSpec spec;
    spec.singularities = {0.0};
    auto v = integrate([](double s) { return 1.0 / std::sqrt(s); }, 0.0, 1.0, spec);
    REQUIRE(v.converged);
    CHECK(std::abs(v.value - 2.0) < 1e-8);
}

TEST_CASE("power-law tail over the exterior of an interval") {
    QuadratureSpec spec;
    // int_{|z|>1} |z|^{-2} dz = 2
    auto right = integrate_to_inf([](double z) { return 1.0 / (z * z); }, 1.0, spec);
    auto left =
        integrate_from_neg_inf([](double z) { return 1.0 / (z * z); }, -1.0, spec);
    REQUIRE(right.converged);
    REQUIRE(left.converged);
    CHECK(std::abs(right.value + left.value - 2.0) < 1e-8);
    CHECK(right.truncation_residual_estimate < 1e-8);
}

TEST_CASE("interior singularity is split automatically") {
    QuadratureSpec spec;
    spec.singularities = {0.5};
    // int_0^1 |x-1/2|^{-1/2} dx = 2 sqrt(2)
    auto v = integrate([](double x) { return 1.0 / std::sqrt(std::abs(x - 0.5)); },
                       0.0, 1.0, spec);
    REQUIRE(v.converged);
    CHECK(std::abs(v.value - 2.0 * std::sqrt(2.0)) < 1e-8);
}

TEST_CASE("exponential tails terminate early") {
    QuadratureSpec spec;
    auto v = integrate_to_inf([](double x) { return std::exp(-x); }, 0.0, spec);
    REQUIRE(v.converged);
    CHECK(std::abs(v.value - 1.0) < 1e-9);
}

TEST_CASE("halving tolerances never increases the closed-form discrepancy") {
    auto f = [](double s) { return std::pow(s, -0.25) * std::cos(s); };
    // reference computed at very tight tolerance
    QuadratureSpec tight;
    tight.abs_tol = 1e-14;
    tight.rel_tol = 1e-13;
    tight.singularities = {0.0};
    const double ref = integrate(f, 0.0, 3.0, tight).value;

    QuadratureSpec spec;
    spec.abs_tol = 1e-4;
    spec.rel_tol = 1e-4;
    spec.singularities = {0.0};
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 8; ++k) {
        const double err = std::abs(integrate(f, 0.0, 3.0, spec).value - ref);
        CHECK(err <= prev + 1e-15);
        prev = err;
        spec = spec.tightened(0.5);
    }
}

TEST_CASE("results are reproducible for a fixed spec") {
    QuadratureSpec spec;
    spec.singularities = {0.0};
    auto f = [](double s) { return std::log(s) * std::sin(3.0 * s); };
    const double a = integrate(f, 0.0, 2.0, spec).value;
    const double b = integrate(f, 0.0, 2.0, spec).value;
    CHECK(a == b);
}

TEST_CASE("NaN off the singular set is flagged") {
    QuadratureSpec spec;
    auto v = integrate([](double x) { return x < 0.5 ? 1.0 : std::nan(""); }, 0.0,
                       1.0, spec);
    CHECK_FALSE(v.converged);
    CHECK(v.failure == QuadFailure::nan_integrand);
}

TEST_CASE("non-convergence returns a flagged partial value") {
    QuadratureSpec spec;
    spec.max_subdivisions = 4;
    spec.abs_tol = 1e-15;
    spec.rel_tol = 1e-15;
    auto v = integrate([](double x) { return std::cos(200.0 * x * x); }, 0.0, 10.0,
                       spec);
    CHECK_FALSE(v.converged);
    CHECK(v.failure == QuadFailure::max_subdivisions);
    CHECK(std::isfinite(v.value));
}

TEST_CASE("divergent tails are reported") {
    QuadratureSpec spec;
    spec.max_tail_blocks = 16;
    auto v = integrate_to_inf([](double x) { return 1.0 / (1.0 + x); }, 0.0, spec);
    CHECK_FALSE(v.converged);
    CHECK(v.failure == QuadFailure::divergent_tail);
}

TEST_CASE("nested 2D driver integrates a separable product") {
    QuadratureSpec outer, inner;
    inner = inner.tightened(0.1);
    auto v = nested2([](double x, double y) { return std::exp(-x - y); },
                     Segment::ray_up(0.0),
                     [&](double, const QuadratureSpec& sp) {
                         return std::pair<Segment, QuadratureSpec>(Segment::ray_up(0.0), sp);
                     },
                     outer, inner);
    REQUIRE(v.converged);
    CHECK(std::abs(v.value - 1.0) < 1e-7);
}
