#ifndef FACMED_AUDIT_HPP
#define FACMED_AUDIT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "facmed/errors.hpp"
#include "facmed/instance.hpp"
#include "facmed/mechanisms.hpp"
#include "facmed/oracle.hpp"
#include "facmed/outcome.hpp"
#include "facmed/rational.hpp"
#include "facmed/tree_metric.hpp"

namespace facmed {

/// Human-readable point label: a vertex name or "a~b@offset".
inline std::string point_label(const TreeMetric& metric, const PointRef& p) {
    if (p.is_vertex()) return metric.vertex_name(p.vertex);
    const auto& ed = metric.edge(p.edge);
    return metric.vertex_name(ed.a) + "~" + metric.vertex_name(ed.b) + "@" + rational_str(p.offset);
}

enum class MechanismKind { Wmm, Tprm, Trm, GlobalMedian };
enum class HierarchyMechanismKind { Iwmm, DirectMedian };

inline const char* mechanism_name(MechanismKind k) {
    switch (k) {
        case MechanismKind::Wmm: return "wmm";
        case MechanismKind::Tprm: return "tprm";
        case MechanismKind::Trm: return "trm";
        case MechanismKind::GlobalMedian: return "global-median";
    }
    return "?";
}

inline const char* mechanism_name(HierarchyMechanismKind k) {
    return k == HierarchyMechanismKind::Iwmm ? "iwmm" : "direct-median";
}

struct CandidateParams {
    int samples_per_edge = 8;
    std::uint64_t seed = 0;
};

namespace audit_detail {

inline void add_interior_samples(std::vector<PointRef>& points, const TreeMetric& metric,
                                 const CandidateParams& params) {
    std::mt19937_64 rng(params.seed);
    constexpr std::uint64_t grid = 64;
    for (EdgeId e : metric.edge_ids()) {
        const Rational len = metric.edge(e).length;
        for (int i = 0; i < params.samples_per_edge; ++i) {
            const std::uint64_t tick = 1 + rng() % (grid - 1);
            points.push_back(metric.point_on_edge(e, len * Rational(BigInt(tick), BigInt(grid))));
        }
    }
}

inline void finish(std::vector<PointRef>& points) {
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
}

} // namespace audit_detail

/// Default deviation candidates: every structurally meaningful point of the
/// instance plus seeded random interior samples.
inline std::vector<PointRef> default_candidates(const Instance& inst, const CandidateParams& params) {
    std::vector<PointRef> points;
    for (VertexId v = 0; v < inst.metric.vertex_count(); ++v) points.push_back(inst.metric.vertex_point(v));
    for (const auto& reports : inst.mediators)
        for (const auto& t : reports) points.push_back(t);
    for (const auto& m : mediator_summaries(inst)) points.push_back(m.median);
    points.push_back(inst.z);
    for (const auto& zi : inst.z_list) points.push_back(zi);
    audit_detail::add_interior_samples(points, inst.metric, params);
    audit_detail::finish(points);
    return points;
}

inline std::vector<PointRef> default_candidates(const HierarchyInstance& h, const CandidateParams& params) {
    std::vector<PointRef> points;
    for (VertexId v = 0; v < h.metric.vertex_count(); ++v) points.push_back(h.metric.vertex_point(v));
    const auto walk = [&](auto&& self, const HierarchyNode& node) -> void {
        if (node.is_agent) {
            points.push_back(node.location);
            return;
        }
        points.push_back(node.z);
        for (const auto& c : node.children) self(self, c);
    };
    walk(walk, h.root);
    IwmmDiagnostics diag;
    mech_detail::iwmm_report(h.metric, h.root, &diag, nullptr, nullptr);
    for (const auto& [name, report] : diag.reports) points.push_back(report);
    audit_detail::add_interior_samples(points, h.metric, params);
    audit_detail::finish(points);
    return points;
}

struct Deviation {
    std::string deviator;
    std::size_t candidate_index = 0;
    PointRef candidate;
    Rational truthful_cost;
    Rational deviating_cost;
    std::string description;
};

struct AuditReport {
    std::string mechanism;
    std::string side; // "agent", "mediator" or "naive"
    std::size_t deviations_tested = 0;
    std::optional<Deviation> counterexample;
    // Secondary mediator-based consistency check: replacing a mediator's
    // report list by count copies of its median must not change the outcome.
    bool mediator_based_consistent = true;

    bool clean() const { return !counterexample.has_value(); }
};

namespace audit_detail {

struct Outcome {
    std::variant<PointRef, PointDistribution> value;

    Rational distance_from(const TreeMetric& metric, const PointRef& t) const {
        if (const auto* p = std::get_if<PointRef>(&value)) return metric.distance(*p, t);
        Rational total(0);
        for (const auto& [q, prob] : std::get<PointDistribution>(value).entries())
            total += prob * metric.distance(q, t);
        return total;
    }

    friend bool operator==(const Outcome& a, const Outcome& b) { return a.value == b.value; }
};

inline Outcome run_mediator_based(MechanismKind kind, const TreeMetric& metric,
                                  std::span<const MediatorSummary> summaries, const PointRef& z) {
    Outcome out;
    switch (kind) {
        case MechanismKind::Wmm:
            out.value = wmm_select(metric, summaries, z);
            break;
        case MechanismKind::Tprm:
            out.value = tprm_from_summaries(metric, summaries);
            break;
        case MechanismKind::Trm:
            out.value = trm_from_summaries(metric, summaries, z).first;
            break;
        case MechanismKind::GlobalMedian:
            throw std::logic_error("global median is not mediator based");
    }
    return out;
}

inline Outcome run_global_median(const TreeMetric& metric,
                                 const std::vector<std::vector<PointRef>>& reports, const PointRef& z) {
    std::vector<PointRef> pooled;
    for (const auto& list : reports) pooled.insert(pooled.end(), list.begin(), list.end());
    Outcome out;
    out.value = median_of_points(metric, pooled, z);
    return out;
}

/// Keeps the strongest counterexample: larger saving first, then smaller
/// deviator id, then smaller candidate index. The merge order is therefore
/// independent of evaluation order.
class Best {
public:
    void offer(Deviation d) {
        const Rational saving = d.truthful_cost - d.deviating_cost;
        if (best_) {
            const Rational cur = best_->truthful_cost - best_->deviating_cost;
            if (saving < cur) return;
            if (saving == cur && d.deviator > best_->deviator) return;
            if (saving == cur && d.deviator == best_->deviator &&
                d.candidate_index >= best_->candidate_index)
                return;
        }
        best_ = std::move(d);
    }
    std::optional<Deviation>& result() { return best_; }

private:
    std::optional<Deviation> best_;
};

} // namespace audit_detail

/// Tries every fake location in the candidate set for every agent, holding
/// the agent's mediator truthful, and reports the strongest strictly
/// beneficial deviation if one exists.
inline AuditReport audit_agent_side(const Instance& inst, MechanismKind kind,
                                    std::span<const PointRef> candidates) {
    inst.validate();
    AuditReport report;
    report.mechanism = mechanism_name(kind);
    report.side = "agent";

    const bool mediator_based = kind != MechanismKind::GlobalMedian;
    const auto summaries = mediator_summaries(inst);
    const audit_detail::Outcome truthful =
        mediator_based ? audit_detail::run_mediator_based(kind, inst.metric, summaries, inst.z)
                       : audit_detail::run_global_median(inst.metric, inst.mediators, inst.z);

    std::map<std::pair<std::size_t, PointRef>, audit_detail::Outcome> memo;
    audit_detail::Best best;
    for (std::size_t i = 0; i < inst.mediators.size(); ++i) {
        for (std::size_t j = 0; j < inst.mediators[i].size(); ++j) {
            const PointRef truth = inst.mediators[i][j];
            const Rational cost0 = truthful.distance_from(inst.metric, truth);
            for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
                const PointRef& fake = candidates[ci];
                if (fake == truth) continue;
                ++report.deviations_tested;
                audit_detail::Outcome deviated;
                if (mediator_based) {
                    std::vector<PointRef> reports = inst.mediators[i];
                    reports[j] = fake;
                    const PointRef forced = median_of_points(inst.metric, reports, inst.z_list[i]);
                    auto key = std::make_pair(i, forced);
                    auto it = memo.find(key);
                    if (it == memo.end()) {
                        std::vector<MediatorSummary> changed(summaries.begin(), summaries.end());
                        changed[i].median = forced;
                        it = memo.emplace(key,
                                          audit_detail::run_mediator_based(kind, inst.metric, changed,
                                                                           inst.z))
                                 .first;
                    }
                    deviated = it->second;
                } else {
                    std::vector<std::vector<PointRef>> reports = inst.mediators;
                    reports[i][j] = fake;
                    deviated = audit_detail::run_global_median(inst.metric, reports, inst.z);
                }
                const Rational cost1 = deviated.distance_from(inst.metric, truth);
                if (cost1 < cost0) {
                    Deviation d;
                    d.deviator = "a" + std::to_string(i + 1) + "." + std::to_string(j + 1);
                    d.candidate_index = ci;
                    d.candidate = fake;
                    d.truthful_cost = cost0;
                    d.deviating_cost = cost1;
                    d.description = "agent " + d.deviator + " reports " +
                                    point_label(inst.metric, fake) + " instead of " +
                                    point_label(inst.metric, truth);
                    best.offer(std::move(d));
                }
            }
        }
    }
    report.counterexample = std::move(best.result());
    return report;
}

/// Tries every candidate median for every mediator, holding the mediator's
/// agents truthful. Deviations are searched in median space: the implemented
/// mechanisms read nothing but each mediator's (median, count) pair. When
/// `check_mediator_based` is set, additionally verifies that replacing a
/// mediator's report list by count copies of its median leaves the outcome
/// bit-identical.
inline AuditReport audit_mediator_side(const Instance& inst, MechanismKind kind,
                                       std::span<const PointRef> candidates,
                                       bool check_mediator_based = false) {
    inst.validate();
    AuditReport report;
    report.mechanism = mechanism_name(kind);
    report.side = "mediator";

    const bool mediator_based = kind != MechanismKind::GlobalMedian;
    const auto summaries = mediator_summaries(inst);
    const audit_detail::Outcome truthful =
        mediator_based ? audit_detail::run_mediator_based(kind, inst.metric, summaries, inst.z)
                       : audit_detail::run_global_median(inst.metric, inst.mediators, inst.z);

    const auto mediator_cost = [&](const audit_detail::Outcome& out, std::size_t i) {
        Rational total(0);
        for (const auto& t : inst.mediators[i]) total += out.distance_from(inst.metric, t);
        return total;
    };

    const auto run_forced = [&](std::size_t i, const PointRef& forced) {
        if (mediator_based) {
            std::vector<MediatorSummary> changed(summaries.begin(), summaries.end());
            changed[i].median = forced;
            return audit_detail::run_mediator_based(kind, inst.metric, changed, inst.z);
        }
        std::vector<std::vector<PointRef>> reports = inst.mediators;
        reports[i].assign(reports[i].size(), forced);
        return audit_detail::run_global_median(inst.metric, reports, inst.z);
    };

    if (check_mediator_based && mediator_based) {
        for (std::size_t i = 0; i < inst.mediators.size(); ++i) {
            std::vector<std::vector<PointRef>> reports = inst.mediators;
            reports[i].assign(reports[i].size(), summaries[i].median);
            Instance collapsed = inst;
            collapsed.mediators = std::move(reports);
            const auto again = mediator_summaries(collapsed);
            if (!(again[i].median == summaries[i].median) ||
                !(audit_detail::run_mediator_based(kind, inst.metric, again, inst.z) == truthful))
                report.mediator_based_consistent = false;
        }
    }

    audit_detail::Best best;
    for (std::size_t i = 0; i < inst.mediators.size(); ++i) {
        const Rational cost0 = mediator_cost(truthful, i);
        for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
            const PointRef& fake = candidates[ci];
            if (fake == summaries[i].median) continue;
            ++report.deviations_tested;
            const Rational cost1 = mediator_cost(run_forced(i, fake), i);
            if (cost1 < cost0) {
                Deviation d;
                d.deviator = "d" + std::to_string(i + 1);
                d.candidate_index = ci;
                d.candidate = fake;
                d.truthful_cost = cost0;
                d.deviating_cost = cost1;
                d.description = "mediator " + d.deviator + " reports median " +
                                point_label(inst.metric, fake) + " instead of " +
                                point_label(inst.metric, summaries[i].median);
                best.offer(std::move(d));
            }
        }
    }
    report.counterexample = std::move(best.result());
    return report;
}

/// Naive incentive audit for mediation hierarchies: each mediator takes the
/// reports of its children at face value, assumes its ascendants keep
/// following the protocol, and tries every candidate report. The perceived
/// cost weights each child's report by the number of agents below it.
inline AuditReport audit_naive(const HierarchyInstance& h, HierarchyMechanismKind kind,
                               std::span<const PointRef> candidates) {
    h.validate();
    AuditReport report;
    report.mechanism = mechanism_name(kind);
    report.side = "naive";

    IwmmDiagnostics straightforward;
    mech_detail::iwmm_report(h.metric, h.root, &straightforward, nullptr, nullptr);
    std::map<std::string, PointRef> reports;
    for (const auto& [name, r] : straightforward.reports) reports.emplace(name, r);

    const PointRef truthful_facility = kind == HierarchyMechanismKind::Iwmm
                                           ? std::get<PointRef>(iwmm(h).value)
                                           : hierarchy_direct_median(h);

    // Perceived cost of an outcome from a mediator's point of view: children's
    // reports stand in for the agent locations below them.
    const auto perceived = [&](const HierarchyNode& node, const PointRef& facility) {
        Rational total(0);
        if (kind == HierarchyMechanismKind::Iwmm) {
            for (const auto& c : node.children)
                total += Rational(BigInt(c.agent_count())) *
                         h.metric.distance(facility, reports.at(c.name));
        } else {
            // Children forward full location lists; truthfully these are the
            // locations below them.
            const auto walk = [&](auto&& self, const HierarchyNode& n) -> void {
                if (n.is_agent) {
                    total += h.metric.distance(facility, n.location);
                    return;
                }
                for (const auto& c : n.children) self(self, c);
            };
            for (const auto& c : node.children) walk(walk, c);
        }
        return total;
    };

    audit_detail::Best best;
    const auto visit = [&](auto&& self, const HierarchyNode& node) -> void {
        if (node.is_agent) return;
        if (node.name != h.root.name) { // the root is the center, not a player
            const Rational cost0 = perceived(node, truthful_facility);
            const PointRef straight = reports.at(node.name);
            for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
                const PointRef& fake = candidates[ci];
                // Under direct forwarding, collapsing the list onto the
                // straightforward median is itself a deviation worth testing.
                if (kind == HierarchyMechanismKind::Iwmm && fake == straight) continue;
                ++report.deviations_tested;
                PointRef facility;
                if (kind == HierarchyMechanismKind::Iwmm) {
                    facility = iwmm_with_forced_report(h, node.name, fake);
                } else {
                    std::map<std::string, std::vector<PointRef>> overrides;
                    overrides[node.name] = std::vector<PointRef>(node.agent_count(), fake);
                    facility = hierarchy_direct_median(h, overrides);
                }
                const Rational cost1 = perceived(node, facility);
                if (cost1 < cost0) {
                    Deviation d;
                    d.deviator = node.name;
                    d.candidate_index = ci;
                    d.candidate = fake;
                    d.truthful_cost = cost0;
                    d.deviating_cost = cost1;
                    d.description = "mediator " + node.name + " reports " +
                                    point_label(h.metric, fake) + " for all " +
                                    std::to_string(node.agent_count()) + " agents below it";
                    best.offer(std::move(d));
                }
            }
        }
        for (const auto& c : node.children) self(self, c);
    };
    visit(visit, h.root);
    report.counterexample = std::move(best.result());
    return report;
}

} // namespace facmed

#endif
