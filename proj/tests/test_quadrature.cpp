#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include <fraclab/quadrature.hpp>

using namespace fraclab;

TEST_CASE("spec validation") {
    CHECK_NOTHROW(QuadratureSpec(-3.0, 5.0, 64));
    CHECK_THROWS_AS(QuadratureSpec(1.0, 1.0, 64), std::invalid_argument);
    CHECK_THROWS_AS(QuadratureSpec(0.0, 1.0, 32), std::invalid_argument);
    CHECK_THROWS_AS(QuadratureSpec(0.0, std::numeric_limits<double>::infinity(), 64), std::invalid_argument);
}

TEST_CASE("trapezoid on a decayed window is spectrally accurate") {
    const auto gauss = [](double s) { return std::exp(-0.5 * s * s) / std::sqrt(2.0 * std::numbers::pi); };
    const TrapezoidResult res = log_trapezoid(gauss, QuadratureSpec(-10.0, 10.0, 256));
    CHECK(res.boundary_ok);
    CHECK(res.value == Catch::Approx(1.0).epsilon(1e-13));
    CHECK(res.max_abs == Catch::Approx(gauss(0.0)).epsilon(1e-6));
}

TEST_CASE("live boundary mass is detected, checked variant throws") {
    const auto gauss = [](double s) { return std::exp(-0.5 * s * s); };
    const TrapezoidResult res = log_trapezoid(gauss, QuadratureSpec(-1.0, 1.0, 64));
    CHECK_FALSE(res.boundary_ok);
    CHECK_THROWS_WITH(log_trapezoid_checked(gauss, QuadratureSpec(-1.0, 1.0, 64)),
                      Catch::Matchers::ContainsSubstring("window too narrow"));
}

TEST_CASE("non-finite integrand samples are rejected with the location") {
    const auto bad = [](double s) { return s == 0.0 ? std::numeric_limits<double>::infinity() : 1.0; };
    CHECK_THROWS_WITH(log_trapezoid(bad, QuadratureSpec(-1.0, 1.0, 64)),
                      Catch::Matchers::ContainsSubstring("non-finite"));
}

TEST_CASE("auto window grows until the integrand has decayed") {
    // Seeded far off center and too narrow; the window must still find the
    // full Gaussian mass sqrt(pi).
    const auto g = [](double s) { return std::exp(-(s - 3.0) * (s - 3.0)); };
    const QuadratureSpec q = auto_window(g, 2.5, 3.5, 128);
    CHECK(q.s_min < 3.0 - 5.0);
    CHECK(q.s_max > 3.0 + 5.0);
    const TrapezoidResult res = log_trapezoid(g, q);
    CHECK(res.boundary_ok);
    CHECK(res.value == Catch::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("auto window refuses integrands that do not decay") {
    CHECK_THROWS_WITH(auto_window([](double) { return 1.0; }, -1.0, 1.0, 128),
                      Catch::Matchers::ContainsSubstring("does not decay"));
    CHECK_THROWS_WITH(auto_window([](double s) { return std::exp(s); }, -1.0, 1.0, 128),
                      Catch::Matchers::ContainsSubstring("upper end"));
}

TEST_CASE("step count scales with the window width") {
    const auto g = [](double s) { return std::exp(-0.001 * s * s); };
    const QuadratureSpec q = auto_window(g, -1.0, 1.0, 128);
    CHECK(q.steps >= static_cast<int>((q.s_max - q.s_min) / 0.25));
}
