#ifndef FACMED_ORACLE_HPP
#define FACMED_ORACLE_HPP

#include <algorithm>
#include <span>
#include <utility>
#include <vector>

#include "facmed/errors.hpp"
#include "facmed/instance.hpp"
#include "facmed/mechanisms.hpp"
#include "facmed/outcome.hpp"
#include "facmed/rational.hpp"
#include "facmed/tree_metric.hpp"
#include "facmed/weighted_multiset.hpp"

namespace facmed {

inline Rational social_cost(const TreeMetric& metric, std::span<const PointRef> agents,
                            const PointRef& p) {
    Rational total(0);
    for (const auto& t : agents) total += metric.distance(p, t);
    return total;
}

inline Rational weighted_cost(const TreeMetric& metric, const WeightedMultiset& S, const PointRef& p) {
    Rational total(0);
    for (const auto& e : S.entries())
        total += e.weight * Rational(BigInt(e.count)) * metric.distance(p, e.location);
    return total;
}

/// Exhaustive minimum of the weighted cost over vertices and support points;
/// a location from this finite set is always optimal. Ties resolve to the
/// first candidate in canonical point order.
inline std::pair<PointRef, Rational> optimal_weighted_location(const TreeMetric& metric,
                                                               const WeightedMultiset& S) {
    if (S.empty()) throw validation_error("optimal location of an empty multiset");
    std::vector<PointRef> candidates;
    for (VertexId v = 0; v < metric.vertex_count(); ++v) candidates.push_back(metric.vertex_point(v));
    for (const auto& p : S.support()) candidates.push_back(p);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    PointRef best = candidates.front();
    Rational best_cost = weighted_cost(metric, S, best);
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        Rational c = weighted_cost(metric, S, candidates[i]);
        if (c < best_cost) {
            best = candidates[i];
            best_cost = std::move(c);
        }
    }
    return {best, best_cost};
}

inline std::pair<PointRef, Rational> optimal_location(const TreeMetric& metric,
                                                      std::span<const PointRef> agents) {
    if (agents.empty()) throw validation_error("optimal location of an empty agent multiset");
    return optimal_weighted_location(metric, WeightedMultiset::from_points(agents));
}

inline Rational expected_cost(const TreeMetric& metric, std::span<const PointRef> agents,
                              const PointDistribution& dist) {
    Rational total(0);
    for (const auto& [p, prob] : dist.entries()) total += prob * social_cost(metric, agents, p);
    return total;
}

/// Expected distance from a fixed point to the mechanism's facility.
inline Rational expected_distance(const TreeMetric& metric, const MechanismOutcome& outcome,
                                  const PointRef& from) {
    if (outcome.deterministic()) return metric.distance(outcome.point(), from);
    Rational total(0);
    for (const auto& [p, prob] : outcome.distribution().entries())
        total += prob * metric.distance(p, from);
    return total;
}

namespace oracle_detail {

/// The point at a given arclength along a path decomposition.
inline PointRef point_at(const TreeMetric& metric, const PathDecomposition& path,
                         const Rational& coordinate) {
    if (coordinate < 0 || coordinate > path.total_length)
        throw validation_error("coordinate outside the path");
    if (path.waypoints.size() == 1) return path.waypoints.front();
    Rational cum(0);
    for (std::size_t i = 0; i + 1 < path.waypoints.size(); ++i) {
        const PointRef& a = path.waypoints[i];
        const PointRef& b = path.waypoints[i + 1];
        const Rational seg = metric.distance(a, b);
        if (coordinate > cum + seg) {
            cum += seg;
            continue;
        }
        // Consecutive waypoints share an edge; find it and interpolate.
        EdgeId e;
        if (!a.is_vertex()) {
            e = a.edge;
        } else if (!b.is_vertex()) {
            e = b.edge;
        } else {
            e = 0;
            bool found = false;
            for (const auto& [w, cand] : metric.neighbors(a.vertex)) {
                if (w == b.vertex) {
                    e = cand;
                    found = true;
                    break;
                }
            }
            if (!found) throw std::logic_error("waypoints do not share an edge");
        }
        const auto offset_on = [&](const PointRef& p) -> Rational {
            if (!p.is_vertex()) return p.offset;
            const auto& ed = metric.edge(e);
            if (p.vertex == ed.a) return Rational(0);
            if (p.vertex == ed.b) return ed.length;
            throw std::logic_error("waypoint off the shared edge");
        };
        const Rational off_a = offset_on(a);
        const Rational off_b = offset_on(b);
        const Rational delta = coordinate - cum;
        const Rational target = off_b > off_a ? Rational(off_a + delta) : Rational(off_a - delta);
        return metric.point_on_edge(e, target);
    }
    return path.waypoints.back();
}

} // namespace oracle_detail

/// Collapses a finite distribution to a single point whose cost never exceeds
/// the distribution's expected cost, for any agent multiset. Repeatedly takes
/// the two support points at maximum distance (ties resolved in canonical
/// point order) and moves all mass lying on the path between them to the
/// mass-weighted mean coordinate of that path. On a line this is the expected
/// location.
inline PointRef derandomize(const TreeMetric& metric, const PointDistribution& dist) {
    std::vector<std::pair<PointRef, Rational>> support(dist.entries().begin(), dist.entries().end());
    if (support.empty()) throw validation_error("derandomize of an empty distribution");
    while (support.size() > 1) {
        std::size_t bi = 0, bj = 1;
        Rational best = metric.distance(support[0].first, support[1].first);
        for (std::size_t i = 0; i < support.size(); ++i) {
            for (std::size_t j = i + 1; j < support.size(); ++j) {
                const Rational d = metric.distance(support[i].first, support[j].first);
                if (d > best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        }
        const PathDecomposition path = metric.path(support[bi].first, support[bj].first);
        std::vector<std::pair<PointRef, Rational>> rest;
        Rational mass(0);
        Rational moment(0);
        for (const auto& [p, prob] : support) {
            const Rational to_a = metric.distance(support[bi].first, p);
            if (to_a + metric.distance(p, support[bj].first) == path.total_length) {
                mass += prob;
                moment += prob * to_a;
            } else {
                rest.emplace_back(p, prob);
            }
        }
        const PointRef merged = oracle_detail::point_at(metric, path, moment / mass);
        rest.emplace_back(merged, mass);
        std::sort(rest.begin(), rest.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        support = std::move(rest);
    }
    return support.front().first;
}

struct CostReport {
    Rational cost;          // mechanism cost, in expectation for distributions
    PointRef optimal_point;
    Rational optimal_cost;
    Rational ratio;         // cost / optimal_cost; 1 when both are zero
    bool infinite_ratio = false; // optimal cost zero but mechanism cost positive
};

inline CostReport competitive_report(const TreeMetric& metric, std::span<const PointRef> agents,
                                     const MechanismOutcome& outcome) {
    CostReport r;
    r.cost = outcome.deterministic() ? social_cost(metric, agents, outcome.point())
                                     : expected_cost(metric, agents, outcome.distribution());
    std::tie(r.optimal_point, r.optimal_cost) = optimal_location(metric, agents);
    if (r.optimal_cost == 0) {
        r.infinite_ratio = r.cost != 0;
        r.ratio = r.infinite_ratio ? Rational(0) : Rational(1);
    } else {
        r.ratio = r.cost / r.optimal_cost;
    }
    return r;
}

inline CostReport competitive_report(const Instance& inst, const MechanismOutcome& outcome) {
    const auto agents = inst.pooled_agents();
    return competitive_report(inst.metric, agents, outcome);
}

inline CostReport competitive_report(const HierarchyInstance& h, const MechanismOutcome& outcome) {
    const auto agents = h.pooled_agents();
    return competitive_report(h.metric, agents, outcome);
}

} // namespace facmed

#endif
