#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include <fraclab/corpus.hpp>
#include <fraclab/norms.hpp>
#include <fraclab/semigroup.hpp>

using namespace fraclab;

TEST_CASE("heat family profile and envelope constants") {
    const KernelFamily K = heat_kernel_family(1, 1.0);
    CHECK(K.name == "heat");
    CHECK(K.conservative);
    CHECK(K.profile(1.0, 0.0) == Catch::Approx(0.2820947917738781).epsilon(1e-15));
    CHECK(K.gaussian_C == Catch::Approx(std::pow(4.0 * std::numbers::pi, -0.5)).epsilon(1e-15));
    CHECK(K.gaussian_A == 0.25);

    const KernelFamily H = heat_kernel_family(2, 0.5);
    CHECK(H.name == "heat-a0.5");
    CHECK(H.gaussian_A == 0.5);
}

TEST_CASE("kernel lookup by name") {
    CHECK(kernel_by_name(2, "heat").name == "heat");
    CHECK(kernel_by_name(1, "heat-a0.5").gaussian_A == 0.5);
    CHECK_THROWS_WITH(kernel_by_name(1, "wave"), Catch::Matchers::ContainsSubstring("available: heat, heat-a0.5"));
}

TEST_CASE("admissibility guards the margin band") {
    const GridSpec s(1, 1.0, 256, 32);
    const KernelFamily K = heat_kernel_family(1, 1.0);
    const double mh = 32.0 * s.spacing();
    // Reach 4 sqrt(t/A) equals the margin band exactly at t = A (mh/4)^2.
    CHECK(time_admissible(s, K, K.gaussian_A * mh * mh / 16.0));
    CHECK_FALSE(time_admissible(s, K, 1.1 * K.gaussian_A * mh * mh / 16.0));
    CHECK_THROWS_WITH(apply_semigroup(GridFunction(s, 1.0), K, 0.5),
                      Catch::Matchers::ContainsSubstring("margin too small"));
}

TEST_CASE("coarse-time flag") {
    const GridSpec s(1, 1.0, 64, 8);
    const double h = s.spacing();
    CHECK(time_is_coarse(s, 3.9 * h * h));
    CHECK_FALSE(time_is_coarse(s, 4.1 * h * h));
}

TEST_CASE("evolving a gaussian matches the closed form") {
    const GridSpec s(1, 1.0, 256, 64);
    const KernelFamily K = heat_kernel_family(1, 1.0);
    const double sigma2 = 0.15 * 0.15;
    const GridFunction f = sample(s, [&](std::array<double, 2> x) { return std::exp(-x[0] * x[0] / (2.0 * sigma2)); });
    const double t = 1e-3;
    const GridFunction g = apply_semigroup(f, K, t);
    const double v2 = sigma2 + 2.0 * t;
    double worst = 0.0;
    for (int i = s.eval_lo(); i <= s.eval_hi(); ++i) {
        const double x = s.coord(i);
        const double expect = std::sqrt(sigma2 / v2) * std::exp(-x * x / (2.0 * v2));
        worst = std::max(worst, std::fabs(g.at(i) - expect));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("unit mass and the two-step law on a corpus member") {
    const GridSpec s(1, 1.0, 256, 64);
    const KernelFamily K = heat_kernel_family(1, 1.0);
    const double h = s.spacing();
    const double t = 16.0 * h * h;
    CHECK(std::fabs(kernel_mass(s, K, t) - 1.0) <= 1e-10);

    const SampledCorpus fs = corpus_sample(corpus_generate(20260817, 1, "density"), s);
    const GridFunction one = apply_semigroup(fs.functions[3], K, t);
    const GridFunction two = apply_semigroup(apply_semigroup(fs.functions[3], K, 0.5 * t), K, 0.5 * t);
    // The two routes only agree where neither sees the box boundary, i.e. on
    // the evaluation window.
    double worst = 0.0;
    for (int i = s.eval_lo(); i <= s.eval_hi(); ++i)
        worst = std::max(worst, std::fabs(one.at(i) - two.at(i)));
    CHECK(worst <= 1e-10);
}

TEST_CASE("gaussian bound validator accepts the exact envelope and flags excess") {
    const KernelFamily K = heat_kernel_family(2, 1.0);
    const GaussianBoundReport ok = validate_gaussian_bound(K, {1e-3, 1e-1, 1.0}, {0.0, 0.1, 1.0, 3.0});
    CHECK(ok.pass);
    CHECK(ok.max_ratio <= 1.0 + 1e-10);

    KernelFamily loud = K;
    loud.profile = [&K](double t, double r) { return 1.01 * K.profile(t, r); };
    const GaussianBoundReport bad = validate_gaussian_bound(loud, {1e-2}, {0.0, 0.5});
    CHECK_FALSE(bad.pass);
    CHECK(bad.max_ratio == Catch::Approx(1.01).epsilon(1e-12));
}

TEST_CASE("approximate-identity validator checks tail decay") {
    std::vector<double> u;
    for (int i = 0; i < 64; ++i) u.push_back(0.01 * std::pow(4000.0, i / 63.0));

    const KernelFamily K = heat_kernel_family(1, 1.0);
    const MajorantProfile good{[&K](double v) { return K.gaussian_C * std::exp(-K.gaussian_A * v * v); }, 1.0};
    CHECK(validate_approx_identity(good, 1, u).pass);

    // Decays too slowly: u^{dim+eps} g(u) grows, the validator must say no.
    const MajorantProfile slow{[](double v) { return std::pow(1.0 + v * v, -0.75); }, 1.0};
    CHECK_FALSE(validate_approx_identity(slow, 1, u).pass);

    CHECK_THROWS_WITH(validate_approx_identity(good, 1, {1.0, 2.0, 3.0}),
                      Catch::Matchers::ContainsSubstring("at least 8 samples"));
}
