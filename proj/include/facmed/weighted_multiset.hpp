#ifndef FACMED_WEIGHTED_MULTISET_HPP
#define FACMED_WEIGHTED_MULTISET_HPP

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "facmed/errors.hpp"
#include "facmed/rational.hpp"
#include "facmed/tree_metric.hpp"

namespace facmed {

/// A point carrying a strictly positive weight.
struct WeightedPoint {
    PointRef location;
    Rational weight;
};

/// Multi-set of weighted points. Entries are keyed by the (location, weight)
/// pair and carry multiplicities; union adds multiplicities and difference
/// uses max{f - f', 0} semantics.
class WeightedMultiset {
public:
    struct Entry {
        PointRef location;
        Rational weight;
        std::uint64_t count;
    };

    WeightedMultiset() = default;

    static WeightedMultiset from_points(std::span<const PointRef> points, Rational weight = Rational(1)) {
        WeightedMultiset s;
        for (const auto& p : points) s.add(p, weight);
        return s;
    }

    void add(const PointRef& location, const Rational& weight, std::uint64_t count = 1) {
        if (weight <= 0) throw validation_error("weighted point with non-positive weight");
        if (count == 0) return;
        for (auto& e : entries_) {
            if (e.location == location && e.weight == weight) {
                e.count += count;
                total_ += weight * Rational(count);
                return;
            }
        }
        entries_.push_back(Entry{location, weight, count});
        total_ += weight * Rational(count);
        std::sort(entries_.begin(), entries_.end(), entry_less);
    }

    bool empty() const { return entries_.empty(); }
    std::span<const Entry> entries() const { return entries_; }
    const Rational& total_weight() const { return total_; }

    std::uint64_t multiplicity(const PointRef& location, const Rational& weight) const {
        for (const auto& e : entries_)
            if (e.location == location && e.weight == weight) return e.count;
        return 0;
    }

    /// Total weight located exactly at p, i.e. w(S_p).
    Rational weight_at(const PointRef& p) const {
        Rational w(0);
        for (const auto& e : entries_)
            if (e.location == p) w += e.weight * Rational(e.count);
        return w;
    }

    /// Distinct locations appearing in the multiset, in canonical order.
    std::vector<PointRef> support() const {
        std::vector<PointRef> pts;
        for (const auto& e : entries_) pts.push_back(e.location);
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        return pts;
    }

    WeightedMultiset set_union(const WeightedMultiset& other) const {
        WeightedMultiset out = *this;
        for (const auto& e : other.entries_) out.add(e.location, e.weight, e.count);
        return out;
    }

    WeightedMultiset set_difference(const WeightedMultiset& other) const {
        WeightedMultiset out;
        for (const auto& e : entries_) {
            const std::uint64_t removed = other.multiplicity(e.location, e.weight);
            if (removed < e.count) out.add(e.location, e.weight, e.count - removed);
        }
        return out;
    }

    friend bool operator==(const WeightedMultiset& x, const WeightedMultiset& y) {
        if (x.entries_.size() != y.entries_.size()) return false;
        for (std::size_t i = 0; i < x.entries_.size(); ++i) {
            const Entry& a = x.entries_[i];
            const Entry& b = y.entries_[i];
            if (!(a.location == b.location) || a.weight != b.weight || a.count != b.count) return false;
        }
        return true;
    }

private:
    static bool entry_less(const Entry& a, const Entry& b) {
        if (a.location != b.location) return a.location < b.location;
        return a.weight < b.weight;
    }

    std::vector<Entry> entries_;
    Rational total_ = Rational(0);
};

} // namespace facmed

#endif
