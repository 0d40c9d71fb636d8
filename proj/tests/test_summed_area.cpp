#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <fraclab/summed_area.hpp>

using namespace fraclab;

namespace {

GridFunction noisy_grid(const GridSpec& s, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    GridFunction f(s);
    for (double& v : f.values) v = 2.0 * (static_cast<double>(eng() >> 11) * 0x1p-53) - 1.0;
    return f;
}

} // namespace

TEST_CASE("rectangle sums match direct accumulation") {
    const GridSpec s(2, 1.0, 32, 0);
    const GridFunction f = noisy_grid(s, 7);
    const SummedAreaTable table(f, {1.0, 2.0, 2.5});

    const auto direct = [&](int lo0, int hi0, int lo1, int hi1, double p) {
        long double acc = 0.0L;
        for (int i = lo0; i <= hi0; ++i)
            for (int j = lo1; j <= hi1; ++j) acc += p == 0.0 ? f.at(i, j) : abs_pow(f.at(i, j), p);
        return static_cast<double>(acc);
    };

    for (const auto& [lo0, hi0, lo1, hi1] :
         std::vector<std::array<int, 4>>{{0, 31, 0, 31}, {0, 0, 0, 0}, {5, 9, 17, 30}, {31, 31, 2, 2}}) {
        CHECK(table.rect_sum(lo0, hi0, lo1, hi1) == Catch::Approx(direct(lo0, hi0, lo1, hi1, 0.0)).margin(1e-12));
        for (double p : {1.0, 2.0, 2.5})
            CHECK(table.rect_sum_abs_pow(p, lo0, hi0, lo1, hi1) ==
                  Catch::Approx(direct(lo0, hi0, lo1, hi1, p)).margin(1e-12));
    }
}

TEST_CASE("ball sums agree with per-node loops") {
    const GridSpec s(2, 1.0, 64, 4);
    const GridFunction f = noisy_grid(s, 99);
    const SummedAreaTable table(f, {1.0, 3.0});
    const Ball b{{20, 44}, 6.3 * s.spacing()};

    long double plain = 0.0L, abs1 = 0.0L, abs3 = 0.0L;
    for_each_ball_row(s, b, [&](int i0, int j_lo, int j_hi) {
        for (int j = j_lo; j <= j_hi; ++j) {
            plain += f.at(i0, j);
            abs1 += std::fabs(f.at(i0, j));
            abs3 += abs_pow(f.at(i0, j), 3.0);
        }
    });
    CHECK(table.ball_sum(b) == Catch::Approx(static_cast<double>(plain)).margin(1e-12));
    CHECK(table.ball_sum_abs_pow(1.0, b) == Catch::Approx(static_cast<double>(abs1)).margin(1e-12));
    CHECK(table.ball_sum_abs_pow(3.0, b) == Catch::Approx(static_cast<double>(abs3)).margin(1e-12));
}

TEST_CASE("dimension one tables work the same way") {
    const GridSpec s(1, 1.0, 128, 8);
    const GridFunction f = noisy_grid(s, 3);
    const SummedAreaTable table(f, {2.0});
    long double acc = 0.0L;
    for (int i = 30; i <= 90; ++i) acc += f.at(i) * f.at(i);
    CHECK(table.rect_sum_abs_pow(2.0, 30, 90) == Catch::Approx(static_cast<double>(acc)).margin(1e-12));
}

TEST_CASE("undeclared exponents are rejected by name") {
    const GridSpec s(1, 1.0, 16, 0);
    const SummedAreaTable table(GridFunction(s, 1.0), {2.0});
    CHECK_THROWS_WITH(table.rect_sum_abs_pow(3.0, 0, 5), Catch::Matchers::ContainsSubstring("was not declared"));
}
