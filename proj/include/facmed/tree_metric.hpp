#ifndef FACMED_TREE_METRIC_HPP
#define FACMED_TREE_METRIC_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "facmed/errors.hpp"
#include "facmed/rational.hpp"

namespace facmed {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

/// A point of the metric: either a vertex or a point strictly inside an edge,
/// measured from the edge's `a` endpoint. Offsets equal to 0 or to the edge
/// length are always normalized to the vertex form, so equality of points is
/// total and decidable.
struct PointRef {
    enum class Kind : std::uint8_t { Vertex, EdgeInterior };

    Kind kind = Kind::Vertex;
    VertexId vertex = 0;    // meaningful when kind == Vertex
    EdgeId edge = 0;        // meaningful when kind == EdgeInterior
    Rational offset;        // from the edge's `a` endpoint, 0 < offset < length

    static PointRef at_vertex(VertexId v) {
        PointRef p;
        p.kind = Kind::Vertex;
        p.vertex = v;
        return p;
    }

    bool is_vertex() const { return kind == Kind::Vertex; }

    friend bool operator==(const PointRef& x, const PointRef& y) {
        if (x.kind != y.kind) return false;
        if (x.kind == Kind::Vertex) return x.vertex == y.vertex;
        return x.edge == y.edge && x.offset == y.offset;
    }
    friend bool operator!=(const PointRef& x, const PointRef& y) { return !(x == y); }

    /// Total order used for canonical listings: vertices first by id, then
    /// interior points by (edge, offset).
    friend bool operator<(const PointRef& x, const PointRef& y) {
        if (x.kind != y.kind) return x.kind == Kind::Vertex;
        if (x.kind == Kind::Vertex) return x.vertex < y.vertex;
        if (x.edge != y.edge) return x.edge < y.edge;
        return x.offset < y.offset;
    }
};

/// Path between two points as an ordered waypoint list. Consecutive waypoints
/// always share an edge; the total length equals the distance between the two
/// end points.
struct PathDecomposition {
    std::vector<PointRef> waypoints;
    Rational total_length;
};

/// A finite edge-weighted tree plus the metric it induces. Immutable after
/// construction; splitting returns a new value. Vertex and edge ids of
/// pre-existing entities are stable across splits and retired ids are never
/// reused.
class TreeMetric {
public:
    struct Edge {
        VertexId a;
        VertexId b;
        Rational length;
        bool alive = true;
    };

    class Builder;

    std::size_t vertex_count() const { return names_.size(); }

    const std::string& vertex_name(VertexId v) const {
        check_vertex(v);
        return names_[v];
    }

    std::optional<VertexId> find_vertex(std::string_view name) const {
        for (VertexId v = 0; v < names_.size(); ++v)
            if (names_[v] == name) return v;
        return std::nullopt;
    }

    std::vector<EdgeId> edge_ids() const {
        std::vector<EdgeId> ids;
        for (EdgeId e = 0; e < edges_.size(); ++e)
            if (edges_[e].alive) ids.push_back(e);
        return ids;
    }

    const Edge& edge(EdgeId e) const {
        if (e >= edges_.size() || !edges_[e].alive)
            throw validation_error("unknown edge id " + std::to_string(e));
        return edges_[e];
    }

    /// Number of edge id slots ever allocated, including retired ones. The
    /// two edges produced by a split receive ids total_edge_slots() and
    /// total_edge_slots() + 1 of the pre-split metric.
    EdgeId total_edge_slots() const { return static_cast<EdgeId>(edges_.size()); }

    std::size_t degree(VertexId v) const {
        check_vertex(v);
        return adjacency_[v].size();
    }

    /// (neighbor, connecting edge) pairs of a vertex.
    const std::vector<std::pair<VertexId, EdgeId>>& neighbors(VertexId v) const {
        check_vertex(v);
        return adjacency_[v];
    }

    bool is_path_graph() const {
        for (VertexId v = 0; v < names_.size(); ++v)
            if (adjacency_[v].size() > 2) return false;
        return true;
    }

    PointRef vertex_point(VertexId v) const {
        check_vertex(v);
        return PointRef::at_vertex(v);
    }

    /// Canonical point on an edge: boundary offsets collapse to the vertex form.
    PointRef point_on_edge(EdgeId e, const Rational& offset) const {
        const Edge& ed = edge(e);
        if (offset < 0 || offset > ed.length)
            throw validation_error("offset " + rational_str(offset) + " out of range on edge " +
                                   std::to_string(e));
        if (offset == 0) return PointRef::at_vertex(ed.a);
        if (offset == ed.length) return PointRef::at_vertex(ed.b);
        PointRef p;
        p.kind = PointRef::Kind::EdgeInterior;
        p.edge = e;
        p.offset = offset;
        return p;
    }

    void validate_point(const PointRef& p) const {
        if (p.is_vertex()) {
            check_vertex(p.vertex);
            return;
        }
        const Edge& ed = edge(p.edge);
        if (p.offset <= 0 || p.offset >= ed.length)
            throw validation_error("non-canonical or out-of-range offset " + rational_str(p.offset) +
                                   " on edge " + std::to_string(p.edge));
    }

    Rational vertex_distance(VertexId u, VertexId v) const {
        check_vertex(u);
        check_vertex(v);
        return dist_[u][v];
    }

    /// Neighbor of `from` on the unique path towards `to`; `from` itself when
    /// they coincide.
    VertexId first_step(VertexId from, VertexId to) const {
        check_vertex(from);
        check_vertex(to);
        return step_[from][to];
    }

    Rational distance(const PointRef& p, const PointRef& q) const {
        validate_point(p);
        validate_point(q);
        if (p == q) return Rational(0);
        if (p.is_vertex() && q.is_vertex()) return dist_[p.vertex][q.vertex];
        if (p.is_vertex()) return vertex_to_interior(p.vertex, q);
        if (q.is_vertex()) return vertex_to_interior(q.vertex, p);
        if (p.edge == q.edge) {
            Rational d = p.offset - q.offset;
            return d < 0 ? Rational(-d) : d;
        }
        const Edge& ep = edges_[p.edge];
        Rational via_a = p.offset + vertex_to_interior(ep.a, q);
        Rational via_b = (ep.length - p.offset) + vertex_to_interior(ep.b, q);
        return std::min(via_a, via_b);
    }

    PathDecomposition path(const PointRef& p, const PointRef& q) const {
        validate_point(p);
        validate_point(q);
        PathDecomposition out;
        out.total_length = distance(p, q);
        if (p == q) {
            out.waypoints = {p};
            return out;
        }
        if (!p.is_vertex() && !q.is_vertex() && p.edge == q.edge) {
            out.waypoints = {p, q};
            return out;
        }
        VertexId from = p.is_vertex() ? p.vertex : exit_vertex(p, q);
        VertexId to = q.is_vertex() ? q.vertex : exit_vertex(q, p);
        if (!p.is_vertex()) out.waypoints.push_back(p);
        VertexId cur = from;
        out.waypoints.push_back(PointRef::at_vertex(cur));
        while (cur != to) {
            cur = step_[cur][to];
            out.waypoints.push_back(PointRef::at_vertex(cur));
        }
        if (!q.is_vertex()) out.waypoints.push_back(q);
        return out;
    }

    /// Splits the metric at a point. Vertices are returned unchanged; an
    /// interior point replaces its edge by two edges meeting at a fresh
    /// vertex. All distances between pre-existing points are preserved.
    std::pair<TreeMetric, VertexId> split_at(const PointRef& p) const {
        validate_point(p);
        if (p.is_vertex()) return {*this, p.vertex};
        TreeMetric next = *this;
        const Edge ed = edges_[p.edge];
        VertexId fresh = static_cast<VertexId>(next.names_.size());
        next.names_.push_back("@" + std::to_string(fresh));
        next.edges_[p.edge].alive = false;
        next.edges_.push_back(Edge{ed.a, fresh, p.offset, true});
        next.edges_.push_back(Edge{fresh, ed.b, ed.length - p.offset, true});
        next.rebuild_tables();
        return {std::move(next), fresh};
    }

private:
    std::vector<std::string> names_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::pair<VertexId, EdgeId>>> adjacency_;
    std::vector<std::vector<Rational>> dist_;
    std::vector<std::vector<VertexId>> step_;

    void check_vertex(VertexId v) const {
        if (v >= names_.size()) throw validation_error("unknown vertex id " + std::to_string(v));
    }

    Rational vertex_to_interior(VertexId v, const PointRef& q) const {
        const Edge& eq = edges_[q.edge];
        Rational via_a = dist_[v][eq.a] + q.offset;
        Rational via_b = dist_[v][eq.b] + (eq.length - q.offset);
        return std::min(via_a, via_b);
    }

    /// Endpoint of p's edge through which the path from interior point p
    /// towards `target` leaves the edge.
    VertexId exit_vertex(const PointRef& p, const PointRef& target) const {
        const Edge& ep = edges_[p.edge];
        Rational via_a = p.offset + (target.is_vertex() ? dist_[ep.a][target.vertex]
                                                        : vertex_to_interior(ep.a, target));
        Rational via_b = (ep.length - p.offset) + (target.is_vertex() ? dist_[ep.b][target.vertex]
                                                                      : vertex_to_interior(ep.b, target));
        return via_a <= via_b ? ep.a : ep.b;
    }

    void rebuild_tables() {
        const std::size_t n = names_.size();
        adjacency_.assign(n, {});
        for (EdgeId e = 0; e < edges_.size(); ++e) {
            if (!edges_[e].alive) continue;
            adjacency_[edges_[e].a].emplace_back(edges_[e].b, e);
            adjacency_[edges_[e].b].emplace_back(edges_[e].a, e);
        }
        dist_.assign(n, std::vector<Rational>(n, Rational(0)));
        step_.assign(n, std::vector<VertexId>(n, 0));
        std::vector<VertexId> stack;
        for (VertexId root = 0; root < n; ++root) {
            std::vector<bool> seen(n, false);
            stack.assign(1, root);
            seen[root] = true;
            step_[root][root] = root;
            while (!stack.empty()) {
                VertexId u = stack.back();
                stack.pop_back();
                for (const auto& [w, e] : adjacency_[u]) {
                    if (seen[w]) continue;
                    seen[w] = true;
                    dist_[root][w] = dist_[root][u] + edges_[e].length;
                    step_[root][w] = (u == root) ? w : step_[root][u];
                    stack.push_back(w);
                }
            }
        }
    }

    friend class Builder;
};

/// Assembles and validates a TreeMetric. Vertex names must be unique, must
/// not start with '@' (reserved for split vertices), edge lengths must be
/// positive and the graph must be a tree.
class TreeMetric::Builder {
public:
    VertexId add_vertex(std::string name) {
        if (name.empty()) throw validation_error("empty vertex name");
        if (name[0] == '@') throw validation_error("vertex name '" + name + "' uses reserved prefix '@'");
        for (char c : name) {
            const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                            (c >= '0' && c <= '9') || c == '_' || c == '.' || c == '-';
            if (!ok) throw validation_error("vertex name '" + name + "' has unsupported character");
        }
        for (const auto& existing : names_)
            if (existing == name) throw validation_error("duplicate vertex name '" + name + "'");
        names_.push_back(std::move(name));
        return static_cast<VertexId>(names_.size() - 1);
    }

    EdgeId add_edge(VertexId a, VertexId b, Rational length) {
        if (a >= names_.size() || b >= names_.size())
            throw validation_error("edge references unknown vertex");
        if (a == b) throw validation_error("self-loop at vertex '" + names_[a] + "'");
        if (length <= 0)
            throw validation_error("non-positive edge length " + rational_str(length));
        edges_.push_back(TreeMetric::Edge{a, b, std::move(length), true});
        return static_cast<EdgeId>(edges_.size() - 1);
    }

    TreeMetric build() {
        if (names_.empty()) throw validation_error("metric needs at least one vertex");
        if (edges_.size() != names_.size() - 1)
            throw validation_error("not a tree: " + std::to_string(names_.size()) + " vertices but " +
                                   std::to_string(edges_.size()) + " edges");
        TreeMetric m;
        m.names_ = std::move(names_);
        m.edges_ = std::move(edges_);
        m.rebuild_tables();
        // |E| = |V| - 1 plus connectivity implies acyclicity.
        std::vector<bool> seen(m.names_.size(), false);
        std::vector<VertexId> stack{0};
        seen[0] = true;
        std::size_t reached = 1;
        while (!stack.empty()) {
            VertexId u = stack.back();
            stack.pop_back();
            for (const auto& [w, e] : m.adjacency_[u]) {
                (void)e;
                if (!seen[w]) {
                    seen[w] = true;
                    ++reached;
                    stack.push_back(w);
                }
            }
        }
        if (reached != m.names_.size()) throw validation_error("metric graph is disconnected");
        return m;
    }

private:
    std::vector<std::string> names_;
    std::vector<TreeMetric::Edge> edges_;
};

/// Incremental refinement of a base metric by edge splits, keeping the map
/// between points of the refined metric and points of the base metric. Used
/// by mechanisms that split edges internally but must report outcomes in the
/// caller's coordinates.
class MetricRefinement {
public:
    explicit MetricRefinement(TreeMetric base) : base_(std::move(base)), current_(base_) {
        for (VertexId v = 0; v < base_.vertex_count(); ++v)
            vertex_origin_.push_back(PointRef::at_vertex(v));
        for (EdgeId e : base_.edge_ids()) {
            const auto& ed = base_.edge(e);
            segments_[e] = {Segment{Rational(0), ed.length, e}};
        }
    }

    const TreeMetric& base() const { return base_; }
    const TreeMetric& current() const { return current_; }

    /// Ensures the given base-metric point is a vertex of the refined metric,
    /// splitting once if necessary, and returns its current vertex id.
    VertexId ensure_vertex(const PointRef& base_point) {
        PointRef cur = to_current(base_point);
        if (cur.is_vertex()) return cur.vertex;
        const EdgeId low = current_.total_edge_slots();
        auto [next, fresh] = current_.split_at(cur);
        for (auto& [base_e, segs] : segments_) {
            (void)base_e;
            for (std::size_t i = 0; i < segs.size(); ++i) {
                if (segs[i].current_edge != cur.edge) continue;
                const Rational cut = segs[i].lo + cur.offset;
                Segment tail{cut, segs[i].hi, static_cast<EdgeId>(low + 1)};
                segs[i].hi = cut;
                segs[i].current_edge = low;
                segs.insert(segs.begin() + static_cast<std::ptrdiff_t>(i) + 1, tail);
                current_ = std::move(next);
                vertex_origin_.push_back(base_point);
                return fresh;
            }
        }
        throw std::logic_error("refinement split segment not found");
    }

    /// Maps a base-metric point into the refined metric (canonical form).
    PointRef to_current(const PointRef& base_point) const {
        base_.validate_point(base_point);
        if (base_point.is_vertex()) return base_point; // vertex ids are stable
        const auto& segs = segments_.at(base_point.edge);
        for (const auto& seg : segs) {
            if (base_point.offset < seg.lo || base_point.offset > seg.hi) continue;
            return current_.point_on_edge(seg.current_edge, base_point.offset - seg.lo);
        }
        throw std::logic_error("refinement segment lookup failed");
    }

    /// Maps a refined-metric vertex back to the base-metric point it came from.
    PointRef to_base(VertexId current_vertex) const {
        if (current_vertex >= vertex_origin_.size())
            throw validation_error("unknown vertex id " + std::to_string(current_vertex));
        return vertex_origin_[current_vertex];
    }

private:
    struct Segment {
        Rational lo;          // base-edge offset where this piece starts
        Rational hi;          // base-edge offset where it ends
        EdgeId current_edge;  // id in the refined metric, oriented low -> high
    };

    TreeMetric base_;
    TreeMetric current_;
    std::vector<PointRef> vertex_origin_;
    std::map<EdgeId, std::vector<Segment>> segments_;
};

} // namespace facmed

#endif
