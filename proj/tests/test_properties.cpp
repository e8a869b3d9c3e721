#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>

#include "facmed/audit.hpp"
#include "facmed/io.hpp"
#include "facmed/mechanisms.hpp"
#include "facmed/oracle.hpp"

using namespace facmed;

namespace {

PointRef random_point(std::mt19937_64& rng, const TreeMetric& m) {
    if (rng() % 2 == 0) return m.vertex_point(static_cast<VertexId>(rng() % m.vertex_count()));
    auto ids = m.edge_ids();
    if (ids.empty()) return m.vertex_point(0);
    EdgeId e = ids[rng() % ids.size()];
    return m.point_on_edge(e, m.edge(e).length * make_rational(1 + static_cast<long long>(rng() % 15), 16));
}

bool on_path(const TreeMetric& m, const PointRef& x, const PointRef& a, const PointRef& b) {
    return m.distance(a, x) + m.distance(x, b) == m.distance(a, b);
}

std::map<PointRef, Rational> probability_map(const TrmDiagnostics& diag) {
    std::map<PointRef, Rational> out;
    for (const auto& rec : diag.vertices) out[rec.point] = rec.probability;
    return out;
}

} // namespace

TEST_CASE("median predicate matches cost minimization over the candidate set") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 80; ++trial) {
        GeneratorParams params;
        params.seed = rng();
        params.max_vertices = 7;
        const TreeMetric m = gen_random(params).metric;

        WeightedMultiset S;
        const int points = 1 + static_cast<int>(rng() % 5);
        for (int i = 0; i < points; ++i)
            S.add(random_point(rng, m),
                  make_rational(1 + static_cast<long long>(rng() % 5), 1 + static_cast<long long>(rng() % 2)));

        std::vector<PointRef> candidates;
        for (VertexId v = 0; v < m.vertex_count(); ++v) candidates.push_back(m.vertex_point(v));
        for (const auto& p : S.support()) candidates.push_back(p);
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

        Rational best = weighted_cost(m, S, candidates.front());
        for (const auto& c : candidates) best = std::min(best, weighted_cost(m, S, c));
        for (const auto& c : candidates)
            CHECK(is_weighted_median(m, S, c) == (weighted_cost(m, S, c) == best));
    }
}

TEST_CASE("moving one weighted point drags the chosen median along the connecting path") {
    std::mt19937_64 rng(29);
    int moved = 0;
    for (int trial = 0; trial < 150; ++trial) {
        GeneratorParams params;
        params.seed = rng();
        params.max_vertices = 6;
        const TreeMetric m = gen_random(params).metric;

        WeightedMultiset S;
        const int points = 1 + static_cast<int>(rng() % 5);
        for (int i = 0; i < points; ++i)
            S.add(random_point(rng, m), make_rational(1 + static_cast<long long>(rng() % 3)));
        const PointRef z = random_point(rng, m);

        const auto entries = S.entries();
        const auto& victim = entries[rng() % entries.size()];
        const PointRef from = victim.location;
        const Rational weight = victim.weight;
        const PointRef to = random_point(rng, m);
        if (to == from) continue;

        WeightedMultiset removed;
        removed.add(from, weight);
        WeightedMultiset added;
        added.add(to, weight);
        WeightedMultiset S2 = S.set_difference(removed).set_union(added);

        const PointRef q = closest_median(m, S, z).chosen;
        const PointRef q2 = closest_median(m, S2, z).chosen;
        if (q == q2) continue;
        ++moved;
        CHECK(on_path(m, q, from, to));
        CHECK(on_path(m, q2, from, to));
        CHECK(m.distance(from, q) < m.distance(from, q2));
    }
    CHECK(moved > 10); // the property must actually fire
}

TEST_CASE("percentile list stays within twice the agent rank on either side") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        GeneratorParams params;
        params.seed = rng();
        params.force_path = true;
        params.max_vertices = 6;
        params.max_mediators = 4;
        params.max_agents = 5;
        Instance inst = gen_random(params);

        const PointRef origin =
            inst.metric.vertex_point(mech_detail::path_origin(inst.metric));
        std::vector<Rational> agent_coords;
        for (const auto& t : inst.pooled_agents())
            agent_coords.push_back(inst.metric.distance(origin, t));
        std::sort(agent_coords.begin(), agent_coords.end());

        TprmDiagnostics diag;
        tprm_from_summaries(inst.metric, mediator_summaries(inst), &diag);
        std::vector<Rational> u_coords;
        for (const auto& p : diag.sorted_points) u_coords.push_back(inst.metric.distance(origin, p));

        const std::size_t n = agent_coords.size();
        for (std::size_t i = 1; i < n; ++i) {
            std::size_t left = 0, right = 0;
            for (const auto& u : u_coords) {
                if (u < agent_coords[i]) ++left;      // strictly left of gap i
                if (u > agent_coords[i - 1]) ++right; // strictly right of gap i
            }
            CHECK(left <= 2 * i);
            CHECK(right <= 2 * (n - i));
        }
    }
}

TEST_CASE("tree mechanism probabilities are a distribution on every instance") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 60; ++trial) {
        GeneratorParams params;
        params.seed = rng();
        Instance inst = gen_random(params);
        MechanismOutcome out = trm(inst);
        Rational total(0);
        for (const auto& rec : std::get<TrmDiagnostics>(out.diagnostics).vertices) {
            CHECK(rec.probability >= 0);
            CHECK(rec.probability <= 1);
            total += rec.probability;
            if (!rec.in_core) CHECK(rec.probability == 0);
        }
        CHECK(total == 1);
    }
}

TEST_CASE("tree and percentile mechanisms agree on path metrics") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 80; ++trial) {
        GeneratorParams params;
        params.seed = rng();
        params.force_path = true;
        params.max_vertices = 7;
        params.max_mediators = 5;
        params.max_agents = 6;
        Instance inst = gen_random(params);
        MechanismOutcome a = tprm(inst);
        MechanismOutcome b = trm(inst);
        INFO("seed " << params.seed);
        CHECK(a.distribution() == b.distribution());
    }
}

TEST_CASE("mechanisms read nothing but each mediator's median and count") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 40; ++trial) {
        GeneratorParams params;
        params.seed = rng();
        params.force_path = (trial % 2 == 0);
        Instance inst = gen_random(params);
        const auto summaries = mediator_summaries(inst);

        Instance collapsed = inst;
        const std::size_t i = rng() % inst.mediators.size();
        collapsed.mediators[i].assign(collapsed.mediators[i].size(), summaries[i].median);

        CHECK(wmm(inst).point() == wmm(collapsed).point());
        CHECK(trm(inst).distribution() == trm(collapsed).distribution());
        if (inst.metric.is_path_graph())
            CHECK(tprm(inst).distribution() == tprm(collapsed).distribution());
    }
}

TEST_CASE("forcing one median moves probability mass along the path and nowhere else") {
    std::mt19937_64 rng(47);
    int checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        GeneratorParams params;
        params.seed = rng();
        params.max_vertices = 6;
        params.max_mediators = 4;
        params.max_agents = 4;
        Instance inst = gen_random(params);
        auto summaries = mediator_summaries(inst);

        const std::size_t i = rng() % summaries.size();
        const PointRef from = summaries[i].median;
        const PointRef to = random_point(rng, inst.metric);
        if (to == from) continue;

        auto [dist_a, diag_a] = trm_from_summaries(inst.metric, summaries, inst.z);
        auto forced = summaries;
        forced[i].median = to;
        auto [dist_b, diag_b] = trm_from_summaries(inst.metric, forced, inst.z);
        (void)dist_a;
        (void)dist_b;

        auto pa = probability_map(diag_a);
        auto pb = probability_map(diag_b);

        // Off the path the probabilities agree exactly (absent means zero).
        const auto prob_of = [](const std::map<PointRef, Rational>& m, const PointRef& p) {
            auto it = m.find(p);
            return it == m.end() ? Rational(0) : it->second;
        };
        std::vector<PointRef> path_points;
        for (const auto& [p, prob] : pa) {
            if (on_path(inst.metric, p, from, to))
                path_points.push_back(p);
            else
                CHECK(prob == prob_of(pb, p));
        }
        for (const auto& [p, prob] : pb) {
            if (on_path(inst.metric, p, from, to)) {
                if (std::find(path_points.begin(), path_points.end(), p) == path_points.end())
                    path_points.push_back(p);
            } else {
                CHECK(prob == prob_of(pa, p));
            }
        }

        // Along the path, ordered from the old median towards the forced one,
        // every suffix sum may only grow.
        std::sort(path_points.begin(), path_points.end(),
                  [&](const PointRef& x, const PointRef& y) {
                      return inst.metric.distance(from, x) < inst.metric.distance(from, y);
                  });
        for (std::size_t k = 0; k < path_points.size(); ++k) {
            Rational suffix_a(0), suffix_b(0);
            for (std::size_t j = k; j < path_points.size(); ++j) {
                suffix_a += prob_of(pa, path_points[j]);
                suffix_b += prob_of(pb, path_points[j]);
            }
            CHECK(suffix_a <= suffix_b);
        }
        ++checked;
    }
    CHECK(checked > 20);
}

TEST_CASE("iterated median cost stays within its exponential bound") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 40; ++trial) {
        GeneratorParams params;
        params.seed = rng();
        params.max_depth = 4;
        HierarchyInstance h = gen_random_hierarchy(params);
        MechanismOutcome out = iwmm(h);
        CostReport rep = competitive_report(h, out);
        if (rep.infinite_ratio) {
            FAIL("iterated median missed a zero-cost optimum");
        }
        const long long bound = (1LL << h.depth()) - 1;
        CHECK(rep.cost <= Rational(bound) * rep.optimal_cost);
    }
}

TEST_CASE("derandomized point never beats the distribution it came from") {
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 50; ++trial) {
        GeneratorParams params;
        params.seed = rng();
        const TreeMetric m = gen_random(params).metric;

        const int support = 1 + static_cast<int>(rng() % 5);
        std::vector<std::pair<PointRef, Rational>> mass;
        long long total = 0;
        std::vector<long long> weights;
        for (int i = 0; i < support; ++i) {
            weights.push_back(1 + static_cast<long long>(rng() % 9));
            total += weights.back();
        }
        for (int i = 0; i < support; ++i)
            mass.emplace_back(random_point(rng, m), make_rational(weights[i], total));
        PointDistribution dist = PointDistribution::make(std::move(mass));

        const PointRef collapsed = derandomize(m, dist);
        for (int probe = 0; probe < 10; ++probe) {
            std::vector<PointRef> agents;
            const int n = 1 + static_cast<int>(rng() % 5);
            for (int i = 0; i < n; ++i) agents.push_back(random_point(rng, m));
            CHECK(social_cost(m, agents, collapsed) <= expected_cost(m, agents, dist));
        }
    }
}

TEST_CASE("competitive ratios respect the proven bounds at desk scale") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 60; ++trial) {
        GeneratorParams params;
        params.seed = rng();
        params.max_vertices = 8;
        params.max_mediators = 5;
        Instance inst = gen_random(params);

        CostReport w = competitive_report(inst, wmm(inst));
        CHECK_FALSE(w.infinite_ratio);
        CHECK(w.ratio >= 1);
        CHECK(w.cost <= Rational(3) * w.optimal_cost);

        CostReport t = competitive_report(inst, trm(inst));
        CHECK_FALSE(t.infinite_ratio);
        CHECK(t.ratio >= 1);
        CHECK(t.cost <= Rational(2) * t.optimal_cost);

        CostReport g = competitive_report(inst, global_median(inst));
        CHECK(g.cost == g.optimal_cost);
        CHECK(g.ratio == 1);
    }
}
