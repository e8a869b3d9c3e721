#ifndef FACMED_OUTCOME_HPP
#define FACMED_OUTCOME_HPP

#include <algorithm>
#include <cstdint>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "facmed/errors.hpp"
#include "facmed/median.hpp"
#include "facmed/rational.hpp"
#include "facmed/tree_metric.hpp"

namespace facmed {

/// Finite exact distribution over points. Support entries are distinct, in
/// canonical order, carry strictly positive probabilities and sum to one.
class PointDistribution {
public:
    static PointDistribution point_mass(const PointRef& p) {
        PointDistribution d;
        d.support_.emplace_back(p, Rational(1));
        return d;
    }

    /// Aggregates duplicate points, drops zero-probability entries and
    /// validates that the total is exactly one.
    static PointDistribution make(std::vector<std::pair<PointRef, Rational>> entries) {
        std::sort(entries.begin(), entries.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        PointDistribution d;
        Rational total(0);
        for (auto& [p, prob] : entries) {
            if (prob < 0) throw validation_error("negative probability " + rational_str(prob));
            if (prob == 0) continue;
            total += prob;
            if (!d.support_.empty() && d.support_.back().first == p)
                d.support_.back().second += prob;
            else
                d.support_.emplace_back(p, std::move(prob));
        }
        if (total != 1)
            throw validation_error("distribution probabilities sum to " + rational_str(total) +
                                   ", expected 1");
        return d;
    }

    std::span<const std::pair<PointRef, Rational>> entries() const { return support_; }

    Rational probability_of(const PointRef& p) const {
        for (const auto& [q, prob] : support_)
            if (q == p) return prob;
        return Rational(0);
    }

    friend bool operator==(const PointDistribution& x, const PointDistribution& y) {
        return x.support_ == y.support_;
    }

private:
    std::vector<std::pair<PointRef, Rational>> support_;
};

struct WmmDiagnostics {
    std::vector<PointRef> medians; // per-mediator reported medians, in mediator order
    MedianResult top;              // the weighted-median selection among them
};

struct TprmDiagnostics {
    std::vector<PointRef> medians;       // per-mediator medians
    std::vector<PointRef> sorted_points; // the u-list, one entry per agent
    std::size_t pick_first = 0;          // 1-based index range receiving probability
    std::size_t pick_last = 0;
};

struct TrmVertexRecord {
    PointRef point;          // vertex of the working tree, in base coordinates
    std::uint64_t size;      // agents of mediators whose median is this point
    std::uint64_t treesize;  // agents of mediators whose median is in the subtree
    bool in_core;            // treesize >= n/4
    Rational cutoff;         // c(u): n/4, or n/2 at the root
    Rational probability;    // p(u); zero outside the core
};

struct TrmDiagnostics {
    std::vector<PointRef> medians; // per-mediator medians
    PointRef root;                 // weighted median of the median multiset, closest to z
    std::vector<TrmVertexRecord> vertices; // indexed by vertex id of the working metric
    TreeMetric working;            // the metric after splitting medians and root to vertices
};

struct IwmmDiagnostics {
    // (node label, report sent upwards) for every node of the mediation tree,
    // in post-order.
    std::vector<std::pair<std::string, PointRef>> reports;
};

/// Result of running a mechanism: a deterministic point or a distribution,
/// plus mechanism-specific diagnostics.
struct MechanismOutcome {
    std::variant<PointRef, PointDistribution> value;
    std::variant<std::monostate, WmmDiagnostics, TprmDiagnostics, TrmDiagnostics, IwmmDiagnostics>
        diagnostics;

    bool deterministic() const { return std::holds_alternative<PointRef>(value); }
    const PointRef& point() const { return std::get<PointRef>(value); }
    const PointDistribution& distribution() const { return std::get<PointDistribution>(value); }
};

} // namespace facmed

#endif
