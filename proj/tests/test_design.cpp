#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <optional>

#include "scdma/design.hpp"
#include "scdma/distance.hpp"
#include "scdma/presets.hpp"
#include "scdma/rng.hpp"

using namespace scdma;

namespace {
constexpr double pi = std::numbers::pi;

FactorGraph single_resource(int k_users) {
    std::vector<Edge> edges;
    for (int k = 0; k < k_users; ++k) edges.push_back({0, k});
    return FactorGraph(1, k_users, std::move(edges));
}
}  // namespace

TEST_CASE("parameter counts") {
    Parameterization fig2 = parameterize(presets::fig2_graph());
    CHECK(fig2.n_column_params() == 5);
    CHECK(fig2.loop_edges().size() == 3);
    CHECK(fig2.n_params() == 8);

    Parameterization tree = parameterize(graph_from_signature(tree_code(5)));
    CHECK(tree.n_params() == 4);
    CHECK(tree.loop_edges().empty());

    Parameterization chained = parameterize(graph_from_signature(presets::chained_4x8()));
    CHECK(chained.n_column_params() == 7);
    CHECK(chained.loop_edges().size() == 1);
}

TEST_CASE("parameterize rejects disconnected and short-cycle graphs") {
    CHECK_THROWS_AS(parameterize(FactorGraph(2, 2, {{0, 0}, {1, 1}})), std::invalid_argument);
    // two code nodes sharing two data nodes: a length-4 cycle
    CHECK_THROWS_AS(parameterize(FactorGraph(2, 2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}})),
                    std::invalid_argument);
}

TEST_CASE("instantiate / params_of round trip") {
    Parameterization p = parameterize(presets::fig2_graph());
    Rng rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> x(p.n_params());
        for (int d = 0; d < p.n_column_params(); ++d) x[d] = rng.uniform() * pi / 2;
        for (int d = p.n_column_params(); d < p.n_params(); ++d) x[d] = rng.uniform() * 2 * pi;
        SignatureMatrix m = p.instantiate(x);
        auto e1 = graph_from_signature(m).edges();
        auto e2 = p.graph().edges();
        CHECK(e1 == e2);
        auto back = p.params_of(m);
        REQUIRE(back.size() == x.size());
        for (std::size_t i = 0; i < x.size(); ++i) CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-9));
    }
}

TEST_CASE("optimize recovers the two-user optimum") {
    DesignResult r = optimize(single_resource(2), 2000, 1);
    CHECK(r.d_min == doctest::Approx(std::sqrt(3.0) - 1).epsilon(1e-9));
    CHECK(min_distance(r.matrix).d_min == doctest::Approx(r.d_min).epsilon(1e-12));
    CHECK(r.evaluations > 0);
    CHECK(!r.trace.empty());
}

TEST_CASE("optimize is deterministic and never beats the spreading bound") {
    DesignResult a = optimize(single_resource(3), 1500, 7);
    DesignResult b = optimize(single_resource(3), 1500, 7);
    CHECK(a.d_min == b.d_min);
    CHECK(a.params == b.params);
    CHECK(a.evaluations == b.evaluations);
    CHECK(a.d_min <= upper_bound_spreading(a.matrix) + 1e-12);
}

TEST_CASE("optimize does not regress below known labelings") {
    // warm starts include the published optima, so these hold with tiny budgets
    DesignResult fig2 = optimize(presets::fig2_graph(), 600, 1);
    CHECK(fig2.d_min >= min_distance(presets::optimized_4x6()).d_min - 1e-12);

    FactorGraph tg = graph_from_signature(tree_code(3));
    DesignResult tree = optimize(tg, 600, 1);
    CHECK(tree.d_min >= min_distance(tree_code(3)).d_min - 1e-12);
}

TEST_CASE("tree codes") {
    SignatureMatrix t2 = tree_code(2);
    CHECK(t2.rows() == 1);
    CHECK(t2.theta(0, 0) == doctest::Approx(0.0));
    CHECK(t2.theta(0, 1) == doctest::Approx(pi / 6));

    for (int K = 2; K <= 6; ++K) {
        double expect = std::min(std::sqrt(double(K - 1)) * (std::sqrt(3.0) - 1), std::sqrt(2.0));
        CHECK(min_distance(tree_code(K)).d_min == doctest::Approx(expect).epsilon(1e-9));
        CHECK(graph_from_signature(tree_code(K)).is_tree());
    }
    CHECK_THROWS_AS(tree_code(1), std::invalid_argument);
}

TEST_CASE("block-bidiagonal family matches its published instance") {
    SignatureMatrix m = presets::block_4x6();
    // printed form, row by row
    const std::optional<double> z;
    SignatureMatrix printed(4, 6,
                            {0.0, z, pi / 6, z, z, pi / 6,
                             z, 0.0, z, pi / 6, pi / 3, z,
                             z, z, pi / 6, z, pi / 3, z,
                             z, z, z, pi / 6, z, pi});
    CHECK(m == printed);
    CHECK(m.load() == doctest::Approx(1.5));

    CHECK_THROWS_AS(construction_1(2, 2, {{0.0, 0.0}, {0.0, 0.0}}), std::invalid_argument);
    // diagonal angles must sit in [0, pi/2)
    CHECK_THROWS_AS(construction_1(3, 1, {{pi}, {0.0}, {0.0}}), std::invalid_argument);
    // closing vector must match its predecessor except the last angle
    CHECK_THROWS_AS(construction_1(3, 2, {{0.0, 0.0}, {pi / 3, 0.0}, {pi / 4, 0.0}}),
                    std::invalid_argument);
}

TEST_CASE("banded family matches its published instance") {
    SignatureMatrix m = presets::chained_4x8();
    const std::optional<double> z;
    SignatureMatrix printed(4, 8,
                            {0.0, z, 0.1435 * pi, z, 0.2297 * pi, z, z, z,
                             z, 0.2618 * pi, z, 0.1279 * pi, z, 0.3505 * pi, z, z,
                             z, z, 0.1435 * pi, z, z, 0.2269 * pi, 0.3935 * pi, z,
                             z, z, z, 0.1279 * pi, 0.2297 * pi, z, z, 0.3610 * pi});
    CHECK(m == printed);
    CHECK(m.load() == doctest::Approx(2.0));

    CHECK_THROWS_AS(construction_2(3, 2, {0.0, 0.0}, {{0.0, 0.0}, {0.0, 0.0}}, {}),
                    std::invalid_argument);
    std::vector<std::array<std::vector<int>, 3>> bad_perms(
        2, {std::vector<int>{0, 1}, std::vector<int>{0, 1}, std::vector<int>{0, 0}});
    CHECK_THROWS_AS(construction_2(4, 2, {0.0, 0.0},
                                   {{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}}, {{0.0, 0.0}}, bad_perms),
                    std::invalid_argument);
}

TEST_CASE("latin baseline on the 6-user 4-resource topology") {
    std::vector<double> phases{0.0, pi / 6, pi / 3};
    LatinResult r = latin_search(presets::fig2_graph(), phases);
    CHECK(std::abs(r.d_min - 1.1658) < 1e-4);
    CHECK(min_distance(r.matrix).d_min == doctest::Approx(r.d_min).epsilon(1e-12));
    // strictly below the optimized labeling on the same topology
    CHECK(r.d_min < min_distance(presets::optimized_4x6()).d_min);

    CHECK_THROWS_AS(latin_search(graph_from_signature(tree_code(3)), phases), std::invalid_argument);
}
