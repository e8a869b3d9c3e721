#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "facmed/io.hpp"
#include "facmed/mechanisms.hpp"
#include "facmed/oracle.hpp"

using namespace facmed;

namespace {

TreeMetric line2() {
    TreeMetric::Builder b;
    VertexId v0 = b.add_vertex("0");
    b.add_edge(v0, b.add_vertex("2"), Rational(2));
    return b.build();
}

std::vector<PointRef> five_agents(const TreeMetric& m) {
    const PointRef p0 = m.vertex_point(0);
    const PointRef p1 = m.point_on_edge(0, Rational(1));
    const PointRef p2 = m.vertex_point(1);
    return {p0, p0, p1, p2, p2};
}

PointRef random_point(std::mt19937_64& rng, const TreeMetric& m) {
    if (rng() % 2 == 0) return m.vertex_point(static_cast<VertexId>(rng() % m.vertex_count()));
    auto ids = m.edge_ids();
    if (ids.empty()) return m.vertex_point(0);
    EdgeId e = ids[rng() % ids.size()];
    return m.point_on_edge(e, m.edge(e).length * make_rational(1 + static_cast<long long>(rng() % 7), 8));
}

} // namespace

TEST_CASE("social cost sums exact distances") {
    TreeMetric m = line2();
    auto agents = five_agents(m);
    CHECK(social_cost(m, agents, m.point_on_edge(0, Rational(1))) == 4);

    std::vector<PointRef> together(4, m.vertex_point(1));
    CHECK(social_cost(m, together, m.vertex_point(1)) == 0);

    Instance i1 = family_ex51(Rational(0), Rational(1), 2, 1);
    auto pooled = i1.pooled_agents();
    CHECK(social_cost(i1.metric, pooled, i1.metric.vertex_point(0)) == 7); // 3r + 1
}

TEST_CASE("brute force optimum over vertices and agent locations") {
    TreeMetric m = line2();
    auto agents = five_agents(m);
    auto [pt, cost] = optimal_location(m, agents);
    CHECK(pt == m.point_on_edge(0, Rational(1)));
    CHECK(cost == 4);

    std::vector<PointRef> one{m.point_on_edge(0, make_rational(1, 3))};
    auto [single_pt, single_cost] = optimal_location(m, one);
    CHECK(single_pt == one.front());
    CHECK(single_cost == 0);

    for (long long r : {1LL, 2LL, 5LL}) {
        Instance i2 = family_ex51(Rational(0), Rational(1), r, 2);
        auto pooled = i2.pooled_agents();
        auto [opt, opt_cost] = optimal_location(i2.metric, pooled);
        CHECK(opt == i2.metric.vertex_point(0));
        CHECK(opt_cost == r + 1);
    }

    // Away from the endpoints the optimum scales with the separation h - l.
    for (long long r : {1LL, 3LL}) {
        Instance i1 = family_ex51(make_rational(1, 4), make_rational(3, 4), r, 1);
        auto pooled = i1.pooled_agents();
        auto [opt, opt_cost] = optimal_location(i1.metric, pooled);
        CHECK(opt == i1.metric.point_on_edge(0, make_rational(3, 4)));
        CHECK(opt_cost == make_rational(r + 1, 2));
    }

    std::vector<PointRef> none;
    CHECK_THROWS_AS(optimal_location(m, none), validation_error);
}

TEST_CASE("expected cost is the probability-weighted social cost") {
    Instance i1 = family_ex51(Rational(0), Rational(1), 2, 1);
    auto agents = i1.pooled_agents();
    const PointRef zero = i1.metric.vertex_point(0);
    const PointRef one = i1.metric.vertex_point(1);

    PointDistribution mass = PointDistribution::point_mass(zero);
    CHECK(expected_cost(i1.metric, agents, mass) == social_cost(i1.metric, agents, zero));

    PointDistribution half = PointDistribution::make({{zero, make_rational(1, 2)},
                                                      {one, make_rational(1, 2)}});
    CHECK(expected_cost(i1.metric, agents, half) == 5); // 2r + 1 at r = 2

    // Uniform over two equal-cost points costs the same as either.
    TreeMetric m = line2();
    std::vector<PointRef> sym{m.vertex_point(0), m.vertex_point(1)};
    PointDistribution u = PointDistribution::make({{m.vertex_point(0), make_rational(1, 2)},
                                                   {m.vertex_point(1), make_rational(1, 2)}});
    CHECK(expected_cost(m, sym, u) == social_cost(m, sym, m.vertex_point(0)));

    CHECK_THROWS_AS(PointDistribution::make({{zero, make_rational(1, 3)}}), validation_error);
    CHECK_THROWS_AS(PointDistribution::make({{zero, make_rational(-1, 2)},
                                             {one, make_rational(3, 2)}}),
                    validation_error);
}

TEST_CASE("derandomization collapses a line distribution to its mean") {
    TreeMetric::Builder b;
    VertexId v0 = b.add_vertex("0");
    b.add_edge(v0, b.add_vertex("1"), Rational(1));
    TreeMetric m = b.build();
    PointDistribution half = PointDistribution::make({{m.vertex_point(0), make_rational(1, 2)},
                                                      {m.vertex_point(1), make_rational(1, 2)}});
    CHECK(derandomize(m, half) == m.point_on_edge(0, make_rational(1, 2)));

    PointDistribution skew = PointDistribution::make({{m.vertex_point(0), make_rational(3, 4)},
                                                      {m.vertex_point(1), make_rational(1, 4)}});
    CHECK(derandomize(m, skew) == m.point_on_edge(0, make_rational(1, 4)));

    const PointRef p = m.point_on_edge(0, make_rational(2, 7));
    CHECK(derandomize(m, PointDistribution::point_mass(p)) == p);
}

TEST_CASE("derandomization sends a symmetric star distribution to the center") {
    TreeMetric::Builder b;
    VertexId c = b.add_vertex("c");
    b.add_edge(c, b.add_vertex("x"), Rational(1));
    b.add_edge(c, b.add_vertex("y"), Rational(1));
    b.add_edge(c, b.add_vertex("w"), Rational(1));
    TreeMetric m = b.build();
    PointDistribution half = PointDistribution::make({{m.vertex_point(1), make_rational(1, 2)},
                                                      {m.vertex_point(2), make_rational(1, 2)}});
    const PointRef collapsed = derandomize(m, half);
    CHECK(collapsed == m.vertex_point(c));

    // The collapse point is never worse than the distribution, whatever the
    // agent multiset.
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<PointRef> agents;
        const int n = 1 + static_cast<int>(rng() % 6);
        for (int i = 0; i < n; ++i) agents.push_back(random_point(rng, m));
        CHECK(social_cost(m, agents, collapsed) <= expected_cost(m, agents, half));
    }
}

TEST_CASE("competitive reports divide by the brute-force optimum") {
    Instance i1 = family_ex51(Rational(0), Rational(1), 2, 1);
    CostReport wmm_report = competitive_report(i1, wmm(i1));
    CHECK(wmm_report.cost == 7);
    CHECK(wmm_report.optimal_cost == 3);
    CHECK(wmm_report.ratio == make_rational(7, 3));
    CHECK_FALSE(wmm_report.infinite_ratio);

    CostReport tprm_report = competitive_report(i1, tprm(i1));
    CHECK(tprm_report.cost == 5);
    CHECK(tprm_report.ratio == make_rational(5, 3));

    // All agents co-located: every mechanism is optimal.
    TreeMetric m = line2();
    Instance same;
    same.metric = m;
    same.mediators = {{m.vertex_point(0), m.vertex_point(0)}};
    same.z = m.vertex_point(0);
    same.z_list = {same.z};
    CostReport co = competitive_report(same, wmm(same));
    CHECK(co.cost == 0);
    CHECK(co.ratio == 1);
    CHECK_FALSE(co.infinite_ratio);
}

TEST_CASE("optimum matches the closest median cost on random weighted multisets") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        GeneratorParams params;
        params.seed = rng();
        Instance shell = gen_random(params);
        const TreeMetric& m = shell.metric;

        WeightedMultiset S;
        const int points = 1 + static_cast<int>(rng() % 6);
        for (int i = 0; i < points; ++i)
            S.add(random_point(rng, m),
                  make_rational(1 + static_cast<long long>(rng() % 6), 1 + static_cast<long long>(rng() % 3)));
        const PointRef z = random_point(rng, m);

        auto [opt_pt, opt_cost] = optimal_weighted_location(m, S);
        const PointRef med = closest_median(m, S, z).chosen;
        CHECK(weighted_cost(m, S, med) == opt_cost);
        CHECK(weighted_cost(m, S, opt_pt) == opt_cost);
    }
}
