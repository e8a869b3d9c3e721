#ifndef FACMED_MEDIAN_HPP
#define FACMED_MEDIAN_HPP

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "facmed/errors.hpp"
#include "facmed/rational.hpp"
#include "facmed/tree_metric.hpp"
#include "facmed/weighted_multiset.hpp"

namespace facmed {

/// Weights of the maximal groups of S minus S_p whose connecting paths avoid
/// p. Removing p cuts the tree into branches; each returned value is the
/// total weight one branch carries. Their sum is w(S) - w(S_p).
inline std::vector<Rational> component_weights(const TreeMetric& metric, const PointRef& p,
                                               const WeightedMultiset& S) {
    metric.validate_point(p);
    std::map<std::uint64_t, Rational> groups; // branch key -> weight
    const auto accumulate = [&](std::uint64_t key, const Rational& w) {
        auto [it, inserted] = groups.emplace(key, w);
        if (!inserted) it->second += w;
    };
    for (const auto& entry : S.entries()) {
        const PointRef& q = entry.location;
        metric.validate_point(q);
        if (q == p) continue;
        const Rational w = entry.weight * Rational(entry.count);
        if (p.is_vertex()) {
            const VertexId v = p.vertex;
            VertexId branch;
            if (q.is_vertex()) {
                branch = metric.first_step(v, q.vertex);
            } else {
                const auto& eq = metric.edge(q.edge);
                if (eq.a == v) {
                    branch = eq.b;
                } else if (eq.b == v) {
                    branch = eq.a;
                } else {
                    // Route through whichever endpoint of q's edge is closer to v.
                    const VertexId near = metric.vertex_distance(v, eq.a) + q.offset <
                                                  metric.vertex_distance(v, eq.b) + (eq.length - q.offset)
                                              ? eq.a
                                              : eq.b;
                    branch = metric.first_step(v, near);
                }
            }
            accumulate(branch, w);
        } else {
            const auto& ep = metric.edge(p.edge);
            bool a_side;
            if (!q.is_vertex() && q.edge == p.edge) {
                a_side = q.offset < p.offset;
            } else {
                const Rational via_a = metric.distance(q, metric.vertex_point(ep.a)) + p.offset;
                const Rational via_b =
                    metric.distance(q, metric.vertex_point(ep.b)) + (ep.length - p.offset);
                a_side = via_a < via_b;
            }
            accumulate(a_side ? 0u : 1u, w);
        }
    }
    std::vector<Rational> out;
    out.reserve(groups.size());
    for (auto& [key, w] : groups) out.push_back(std::move(w));
    return out;
}

/// m_p: the maximum weight of a sub-multi-set of S minus S_p connected by
/// paths avoiding p; 0 when S minus S_p is empty.
inline Rational m_p(const TreeMetric& metric, const WeightedMultiset& S, const PointRef& p) {
    if (S.empty()) throw validation_error("m_p of an empty multiset");
    Rational best(0);
    for (const Rational& w : component_weights(metric, p, S))
        if (w > best) best = w;
    return best;
}

inline bool is_weighted_median(const TreeMetric& metric, const WeightedMultiset& S, const PointRef& p) {
    if (S.empty()) throw validation_error("weighted median of an empty multiset");
    return m_p(metric, S, p) * 2 <= S.total_weight();
}

struct MedianResult {
    PointRef chosen;
    Rational m_value; // m_p certificate of the chosen point
    std::vector<std::pair<PointRef, bool>> candidates; // (candidate, is a weighted median)
};

/// The unique weighted median of S closest to z. The search is over the
/// finite candidate set V, z and the support of S, which always contains the
/// closest median: any median retracts towards z onto a point of this set
/// without leaving the median set or increasing the distance to z.
inline MedianResult closest_median(const TreeMetric& metric, const WeightedMultiset& S,
                                   const PointRef& z) {
    if (S.empty()) throw validation_error("closest_median of an empty multiset");
    metric.validate_point(z);
    std::vector<PointRef> candidates;
    for (VertexId v = 0; v < metric.vertex_count(); ++v) candidates.push_back(metric.vertex_point(v));
    candidates.push_back(z);
    for (const auto& p : S.support()) candidates.push_back(p);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    MedianResult result;
    bool found = false;
    bool tied = false;
    Rational best_dist(0);
    for (const auto& c : candidates) {
        const bool median = is_weighted_median(metric, S, c);
        result.candidates.emplace_back(c, median);
        if (!median) continue;
        const Rational d = metric.distance(c, z);
        if (!found || d < best_dist) {
            found = true;
            tied = false;
            best_dist = d;
            result.chosen = c;
        } else if (d == best_dist) {
            tied = true;
        }
    }
    if (!found) throw std::logic_error("no weighted median among candidates");
    if (tied) throw std::logic_error("two candidate medians tie in distance to z");
    result.m_value = m_p(metric, S, result.chosen);
    return result;
}

/// Median of an unweighted point multiset, ties broken towards z.
inline PointRef median_of_points(const TreeMetric& metric, std::span<const PointRef> points,
                                 const PointRef& z) {
    if (points.empty()) throw validation_error("median of an empty point multiset");
    return closest_median(metric, WeightedMultiset::from_points(points), z).chosen;
}

} // namespace facmed

#endif
