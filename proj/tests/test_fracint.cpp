#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <fraclab/commutator.hpp>
#include <fraclab/fracint.hpp>
#include <fraclab/norms.hpp>

using namespace fraclab;

TEST_CASE("riesz normalizing constant matches closed forms") {
    CHECK(gamma_alpha(1, 0.5) == Catch::Approx(2.5066282746310005).epsilon(1e-12));
    CHECK(gamma_alpha(1, 0.4) == Catch::Approx(3.5890575342698992).epsilon(1e-12));
    CHECK(gamma_alpha(2, 0.5) == Catch::Approx(13.145047206596874).epsilon(1e-12));
    CHECK(gamma_alpha(2, 0.4) == Catch::Approx(16.346158279254099).epsilon(1e-12));
    CHECK(gamma_alpha(2, 1.0) == Catch::Approx(6.283185307179586).epsilon(1e-12));

    CHECK_THROWS_WITH(gamma_alpha(1, 1.0), Catch::Matchers::ContainsSubstring("(0, dim)"));
    CHECK_THROWS_WITH(gamma_alpha(3, 0.5), Catch::Matchers::ContainsSubstring("dim must be 1 or 2"));
    CHECK_THROWS_WITH(riesz_kernel(1, 0.5, 0.0), Catch::Matchers::ContainsSubstring("positive"));
}

TEST_CASE("riesz kernel homogeneity") {
    const double alpha = 0.7;
    for (int dim : {1, 2}) {
        if (alpha >= dim) continue;
        const double ratio = riesz_kernel(dim, alpha, 0.4) / riesz_kernel(dim, alpha, 0.2);
        CHECK(ratio == Catch::Approx(std::pow(2.0, alpha - dim)).epsilon(1e-13));
    }
    CHECK(riesz_kernel(2, 1.0, 0.4) / riesz_kernel(2, 1.0, 0.2) == Catch::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("regularized self cell matches the exact cell average") {
    CHECK(regularized_riesz(1, 0.5, 0.1) == Catch::Approx(3.5682482323055422).epsilon(1e-12));
    CHECK(regularized_riesz(2, 1.0, 0.1) == Catch::Approx(5.6109985233918013).epsilon(1e-10));
    CHECK(regularized_riesz(2, 0.5, 0.1) == Catch::Approx(22.614636736434387).epsilon(1e-10));
    CHECK_THROWS_WITH(regularized_riesz(1, 0.5, 0.0), Catch::Matchers::ContainsSubstring("positive"));
}

TEST_CASE("time integral of the unit-diffusion family reproduces the riesz kernel") {
    struct Case {
        int dim;
        double alpha;
        double r;
    };
    for (const Case c : {Case{1, 0.5, 0.25}, Case{1, 0.4, 0.03}, Case{2, 1.0, 0.3}, Case{2, 0.5, 0.7}}) {
        const KernelFamily K = heat_kernel_family(c.dim, 1.0);
        const QuadratureSpec q = default_window(K, c.alpha, c.r, c.r);
        const double got = k_alpha_profile(K, c.alpha, c.r, q);
        const double want = riesz_kernel(c.dim, c.alpha, c.r);
        CHECK(std::fabs(got - want) / want <= 1e-10);
    }
}

TEST_CASE("diffusion constant scales the kernel by a^{-alpha/2}") {
    const KernelFamily H = heat_kernel_family(1, 0.5);
    const double alpha = 0.5;
    const double r = 0.2;
    const QuadratureSpec q = default_window(H, alpha, r, r);
    const double got = k_alpha_profile(H, alpha, r, q);
    const double want = std::pow(0.5, -0.5 * alpha) * riesz_kernel(1, alpha, r);
    CHECK(std::fabs(got - want) / want <= 1e-10);
}

TEST_CASE("grid-wide window covers both ends of the radius range") {
    const GridSpec spec(2, 1.0, 32, 4);
    const KernelFamily K = heat_kernel_family(2, 1.0);
    const QuadratureSpec q = default_window(spec, K, 0.5);
    const double h = spec.spacing();
    const double reach = std::sqrt(2.0) * 31.0 * h;
    CHECK_NOTHROW(k_alpha_profile(K, 0.5, h, q));
    CHECK_NOTHROW(k_alpha_profile(K, 0.5, reach, q));
    CHECK_THROWS_WITH(k_alpha_profile(K, 2.5, 0.1, q), Catch::Matchers::ContainsSubstring("(0, dim)"));
}

TEST_CASE("assembled semigroup-route stencil agrees with the direct kernel stencil") {
    const GridSpec spec(1, 1.0, 32, 4);
    const KernelFamily K = heat_kernel_family(1, 1.0);
    const double alpha = 0.5;
    const QuadratureSpec q = default_window(spec, K, alpha);
    const GridFunction f =
        sample(spec, [](std::array<double, 2> x) { return std::exp(-8.0 * x[0] * x[0]) * (1.0 + 0.5 * x[0]); });
    const GridFunction via_riesz = fractional_integral(f, alpha);
    const GridFunction via_family = l_alpha(f, K, alpha, q);
    CHECK(lp_norm(subtract(via_family, via_riesz), 2.0) / lp_norm(via_riesz, 2.0) <= 1e-8);
}

TEST_CASE("single-time difference kernel obeys the decay surrogate at one sample point") {
    const KernelFamily K = heat_kernel_family(1, 1.0);
    const double alpha = 0.5;
    const double t = 1e-4;
    const double r = 0.3;
    const QuadratureSpec q = difference_window(K, alpha, t, r);
    const double val = difference_kernel(K, alpha, t, r, q);
    REQUIRE(std::isfinite(val));
    CHECK(std::fabs(val) * std::pow(r, 1.0 + 2.0 - alpha) / t < 10.0);
}
