#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include <fraclab/corpus.hpp>

using namespace fraclab;

TEST_CASE("corpus is deterministic across calls") {
    const GridSpec s(2, 1.0, 32, 4);
    const SampledCorpus a = corpus_sample(corpus_generate(20260817, 2, "density"), s);
    const SampledCorpus b = corpus_sample(corpus_generate(20260817, 2, "density"), s);
    REQUIRE(a.functions.size() == b.functions.size());
    for (std::size_t j = 0; j < a.functions.size(); ++j) {
        CHECK(a.labels[j] == b.labels[j]);
        CHECK(a.functions[j].values == b.functions[j].values); // bitwise
    }
}

TEST_CASE("roles and seeds give different draws") {
    const auto density = corpus_generate(1, 1, "density");
    const auto symbol = corpus_generate(1, 1, "symbol");
    REQUIRE(density.size() == 8);
    REQUIRE(symbol.size() == 8);
    CHECK(density[0].label == "const");
    CHECK(symbol[0].label == "const");
    CHECK(density[1].label != symbol[1].label);

    // Same role, different seed: the random bump width differs.
    const auto other = corpus_generate(2, 1, "density");
    const std::array<double, 2> probe{0.3, 0.0};
    CHECK(density[1].fn(probe) != other[1].fn(probe));
}

TEST_CASE("member labels are unique per role") {
    for (const char* role : {"density", "symbol"}) {
        const auto members = corpus_generate(7, 2, role);
        std::set<std::string> seen;
        for (const auto& m : members) seen.insert(m.label);
        CHECK(seen.size() == members.size());
    }
}

TEST_CASE("all members sample finitely on a coarse grid") {
    for (int dim : {1, 2}) {
        const GridSpec s(dim, 1.0, 32, 4);
        for (const char* role : {"density", "symbol"}) {
            const SampledCorpus c = corpus_sample(corpus_generate(20260817, dim, role), s);
            for (const GridFunction& f : c.functions)
                for (double v : f.values) REQUIRE(std::isfinite(v));
        }
    }
}

TEST_CASE("dilation composes the recipe with a scaling") {
    const auto members = corpus_generate(5, 2, "density");
    const CorpusMember& m = members[3];
    const CorpusMember d = dilate_member(m, 0.5);
    CHECK(d.label == m.label + "-dil0.5");
    for (const std::array<double, 2> x : {std::array<double, 2>{0.2, -0.4}, {0.0, 0.0}, {-0.7, 0.3}})
        CHECK(d.fn(x) == m.fn({0.5 * x[0], 0.5 * x[1]}));
    CHECK_THROWS_WITH(dilate_member(m, 0.0), Catch::Matchers::ContainsSubstring("positive"));
}

TEST_CASE("bad corpus arguments are rejected") {
    CHECK_THROWS_WITH(corpus_generate(1, 3, "density"), Catch::Matchers::ContainsSubstring("dim must be 1 or 2"));
    CHECK_THROWS_WITH(corpus_generate(1, 1, "weights"), Catch::Matchers::ContainsSubstring("role"));
}
