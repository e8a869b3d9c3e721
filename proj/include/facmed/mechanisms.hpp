#ifndef FACMED_MECHANISMS_HPP
#define FACMED_MECHANISMS_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "facmed/errors.hpp"
#include "facmed/instance.hpp"
#include "facmed/median.hpp"
#include "facmed/outcome.hpp"
#include "facmed/rational.hpp"
#include "facmed/tree_metric.hpp"
#include "facmed/weighted_multiset.hpp"

namespace facmed {

/// What a mediator contributes to a mediator-based mechanism: its reported
/// median and the number of agents it represents.
struct MediatorSummary {
    PointRef median;
    std::uint64_t count;
};

/// Per-mediator medians of the reported locations, ties broken towards each
/// mediator's own tie-break point.
inline std::vector<MediatorSummary> mediator_summaries(const Instance& inst) {
    inst.validate();
    std::vector<MediatorSummary> out;
    out.reserve(inst.mediators.size());
    for (std::size_t i = 0; i < inst.mediators.size(); ++i) {
        PointRef median = median_of_points(inst.metric, inst.mediators[i], inst.z_list[i]);
        out.push_back(MediatorSummary{median, inst.mediators[i].size()});
    }
    return out;
}

namespace mech_detail {

inline WeightedMultiset summary_multiset(std::span<const MediatorSummary> summaries) {
    WeightedMultiset s;
    for (const auto& m : summaries) s.add(m.median, Rational(BigInt(m.count)));
    return s;
}

inline std::uint64_t total_count(std::span<const MediatorSummary> summaries) {
    std::uint64_t n = 0;
    for (const auto& m : summaries) n += m.count;
    return n;
}

} // namespace mech_detail

// ---------------------------------------------------------------------------
// Weighted Median Mechanism
// ---------------------------------------------------------------------------

/// Weighted median of the mediator medians, weighted by agent counts, ties
/// broken towards z.
inline PointRef wmm_select(const TreeMetric& metric, std::span<const MediatorSummary> summaries,
                           const PointRef& z, MedianResult* selection = nullptr) {
    MedianResult r = closest_median(metric, mech_detail::summary_multiset(summaries), z);
    if (selection) *selection = r;
    return r.chosen;
}

inline MechanismOutcome wmm(const Instance& inst) {
    const auto summaries = mediator_summaries(inst);
    WmmDiagnostics diag;
    for (const auto& m : summaries) diag.medians.push_back(m.median);
    PointRef facility = wmm_select(inst.metric, summaries, inst.z, &diag.top);
    MechanismOutcome out;
    out.value = facility;
    out.diagnostics = std::move(diag);
    return out;
}

/// The optimal agent-side baseline: median of the pooled reports towards z.
/// Equivalent to running the weighted-median selection with every agent as
/// its own unit-weight mediator.
inline MechanismOutcome global_median(const Instance& inst) {
    inst.validate();
    std::vector<MediatorSummary> singletons;
    for (const auto& t : inst.pooled_agents()) singletons.push_back(MediatorSummary{t, 1});
    WmmDiagnostics diag;
    PointRef facility = wmm_select(inst.metric, singletons, inst.z, &diag.top);
    MechanismOutcome out;
    out.value = facility;
    out.diagnostics = std::move(diag);
    return out;
}

// ---------------------------------------------------------------------------
// Two Percentiles Range Mechanism (path metrics)
// ---------------------------------------------------------------------------

namespace mech_detail {

/// The coordinate origin of a path metric: the endpoint (degree <= 1 vertex)
/// with the smallest id.
inline VertexId path_origin(const TreeMetric& metric) {
    for (VertexId v = 0; v < metric.vertex_count(); ++v)
        if (metric.degree(v) <= 1) return v;
    throw shape_error("metric has no endpoint vertex");
}

} // namespace mech_detail

/// TPRM: expand each median to its agent count, sort along the line and give
/// the central half of the list uniform probability, with the two boundary
/// entries trimmed by the remainder of n modulo 4.
inline PointDistribution tprm_from_summaries(const TreeMetric& metric,
                                             std::span<const MediatorSummary> summaries,
                                             TprmDiagnostics* diagnostics = nullptr) {
    if (!metric.is_path_graph())
        throw shape_error("the percentile-range mechanism requires a path metric");
    const std::uint64_t n = mech_detail::total_count(summaries);
    if (n == 0) throw validation_error("no agents");

    const PointRef origin = metric.vertex_point(mech_detail::path_origin(metric));
    std::vector<std::pair<Rational, PointRef>> entries; // (coordinate, median) per agent
    for (const auto& m : summaries) {
        const Rational coord = metric.distance(origin, m.median);
        for (std::uint64_t i = 0; i < m.count; ++i) entries.emplace_back(coord, m.median);
    }
    std::sort(entries.begin(), entries.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });

    if (diagnostics) {
        diagnostics->medians.clear();
        for (const auto& m : summaries) diagnostics->medians.push_back(m.median);
        diagnostics->sorted_points.clear();
        for (const auto& [c, p] : entries) diagnostics->sorted_points.push_back(p);
    }

    if (n == 1) {
        // The percentile formula over-assigns for a single entry; the outcome
        // degenerates to a point mass.
        if (diagnostics) diagnostics->pick_first = diagnostics->pick_last = 1;
        return PointDistribution::point_mass(entries.front().second);
    }

    const std::uint64_t lo = n / 4 + 1;          // floor(n/4) + 1, 1-based
    const std::uint64_t hi = (3 * n + 3) / 4;    // ceil(3n/4)
    const std::uint64_t rem = n % 4;
    if (diagnostics) {
        diagnostics->pick_first = lo;
        diagnostics->pick_last = hi;
    }
    const Rational boundary(BigInt(4 - rem), BigInt(2 * n));
    const Rational interior(BigInt(2), BigInt(n));
    std::vector<std::pair<PointRef, Rational>> mass;
    for (std::uint64_t i = lo; i <= hi; ++i)
        mass.emplace_back(entries[i - 1].second, (i == lo || i == hi) ? boundary : interior);
    return PointDistribution::make(std::move(mass));
}

inline MechanismOutcome tprm(const Instance& inst) {
    const auto summaries = mediator_summaries(inst);
    TprmDiagnostics diag;
    PointDistribution dist = tprm_from_summaries(inst.metric, summaries, &diag);
    MechanismOutcome out;
    out.value = std::move(dist);
    out.diagnostics = std::move(diag);
    return out;
}

// ---------------------------------------------------------------------------
// Tree Randomized Mechanism
// ---------------------------------------------------------------------------

/// TRM: root the tree at the weighted median of the medians, split every
/// median point to a vertex, and hand each vertex u whose subtree holds at
/// least a quarter of the agents the probability
///   p(u) = [(treesize(u) - c(u)) - sum over core children (treesize - c)] / (n/2),
/// where c(u) is n/4 off the root and n/2 at the root.
inline std::pair<PointDistribution, TrmDiagnostics> trm_from_summaries(
    const TreeMetric& metric, std::span<const MediatorSummary> summaries, const PointRef& z) {
    const std::uint64_t n = mech_detail::total_count(summaries);
    if (n == 0) throw validation_error("no agents");

    // size(p): agents whose mediator's median is exactly p.
    std::map<PointRef, std::uint64_t> size_at;
    for (const auto& m : summaries) size_at[m.median] += m.count;

    WeightedMultiset L;
    for (const auto& [p, c] : size_at) L.add(p, Rational(BigInt(c)));
    const PointRef root_point = closest_median(metric, L, z).chosen;

    MetricRefinement ref(metric);
    const VertexId root = ref.ensure_vertex(root_point);
    for (const auto& [p, c] : size_at) {
        (void)c;
        ref.ensure_vertex(p);
    }
    const TreeMetric& tree = ref.current();
    const std::size_t vcount = tree.vertex_count();

    // Root the working tree and order vertices top-down.
    std::vector<VertexId> order;
    std::vector<VertexId> parent(vcount, root);
    std::vector<bool> seen(vcount, false);
    order.push_back(root);
    seen[root] = true;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const VertexId u = order[i];
        for (const auto& [w, e] : tree.neighbors(u)) {
            (void)e;
            if (seen[w]) continue;
            seen[w] = true;
            parent[w] = u;
            order.push_back(w);
        }
    }

    std::vector<std::uint64_t> size_of(vcount, 0);
    for (VertexId v = 0; v < vcount; ++v) {
        auto it = size_at.find(ref.to_base(v));
        if (it != size_at.end()) size_of[v] = it->second;
    }
    std::vector<std::uint64_t> treesize(size_of);
    for (std::size_t i = order.size(); i-- > 1;) // children before parents; skip the root itself
        treesize[parent[order[i]]] += treesize[order[i]];

    const Rational half(BigInt(n), 2);
    const Rational quarter(BigInt(n), 4);
    std::vector<bool> in_core(vcount, false);
    for (VertexId v = 0; v < vcount; ++v)
        in_core[v] = Rational(BigInt(treesize[v])) >= quarter;

    std::vector<Rational> prob(vcount, Rational(0));
    for (VertexId v = 0; v < vcount; ++v) {
        if (!in_core[v]) continue;
        const Rational cutoff = (v == root) ? half : quarter;
        Rational mass = Rational(BigInt(treesize[v])) - cutoff;
        for (const auto& [w, e] : tree.neighbors(v)) {
            (void)e;
            if (w == parent[v] && v != root) continue;
            if (!in_core[w]) continue;
            mass -= Rational(BigInt(treesize[w])) - quarter;
        }
        prob[v] = mass / half;
    }

    TrmDiagnostics diag;
    for (const auto& m : summaries) diag.medians.push_back(m.median);
    diag.root = root_point;
    for (VertexId v = 0; v < vcount; ++v) {
        TrmVertexRecord rec;
        rec.point = ref.to_base(v);
        rec.size = size_of[v];
        rec.treesize = treesize[v];
        rec.in_core = in_core[v];
        rec.cutoff = (v == root) ? half : quarter;
        rec.probability = prob[v];
        diag.vertices.push_back(std::move(rec));
    }
    diag.working = tree;

    std::vector<std::pair<PointRef, Rational>> mass;
    for (VertexId v = 0; v < vcount; ++v)
        if (prob[v] != 0) mass.emplace_back(ref.to_base(v), prob[v]);
    return {PointDistribution::make(std::move(mass)), std::move(diag)};
}

inline MechanismOutcome trm(const Instance& inst) {
    const auto summaries = mediator_summaries(inst);
    auto [dist, diag] = trm_from_summaries(inst.metric, summaries, inst.z);
    MechanismOutcome out;
    out.value = std::move(dist);
    out.diagnostics = std::move(diag);
    return out;
}

// ---------------------------------------------------------------------------
// Iterative Weighted Median Mechanism (mediation hierarchies)
// ---------------------------------------------------------------------------

namespace mech_detail {

inline PointRef iwmm_report(const TreeMetric& metric, const HierarchyNode& node,
                            IwmmDiagnostics* diag, const std::string* deviator,
                            const PointRef* forced) {
    PointRef report;
    if (node.is_agent) {
        report = node.location;
    } else {
        WeightedMultiset received;
        for (const auto& child : node.children) {
            const PointRef r = iwmm_report(metric, child, diag, deviator, forced);
            received.add(r, Rational(BigInt(child.agent_count())));
        }
        report = closest_median(metric, received, node.z).chosen;
    }
    if (deviator && node.name == *deviator) report = *forced;
    if (diag) diag->reports.emplace_back(node.name, report);
    return report;
}

} // namespace mech_detail

inline MechanismOutcome iwmm(const HierarchyInstance& h) {
    h.validate();
    IwmmDiagnostics diag;
    PointRef facility = mech_detail::iwmm_report(h.metric, h.root, &diag, nullptr, nullptr);
    MechanismOutcome out;
    out.value = facility;
    out.diagnostics = std::move(diag);
    return out;
}

/// IWMM with one node's upward report forced to a fixed point; everything
/// above it is recomputed. Used by the deviation audits.
inline PointRef iwmm_with_forced_report(const HierarchyInstance& h, const std::string& deviator,
                                        const PointRef& forced) {
    return mech_detail::iwmm_report(h.metric, h.root, nullptr, &deviator, &forced);
}

/// The non-mechanism baseline for hierarchies: every mediator forwards the
/// full list of locations below it (or its override), and the center places
/// the facility at the median of everything it receives, ties towards its
/// own tie-break point.
inline PointRef hierarchy_direct_median(
    const HierarchyInstance& h,
    const std::map<std::string, std::vector<PointRef>>& overrides = {}) {
    h.validate();
    const auto forward = [&](auto&& self, const HierarchyNode& node) -> std::vector<PointRef> {
        if (node.is_agent) return {node.location};
        auto it = overrides.find(node.name);
        if (it != overrides.end()) return it->second;
        std::vector<PointRef> pooled;
        for (const auto& child : node.children) {
            auto sub = self(self, child);
            pooled.insert(pooled.end(), sub.begin(), sub.end());
        }
        return pooled;
    };
    std::vector<PointRef> received;
    for (const auto& child : h.root.children) {
        auto sub = forward(forward, child);
        received.insert(received.end(), sub.begin(), sub.end());
    }
    return median_of_points(h.metric, received, h.root.z);
}

} // namespace facmed

#endif
