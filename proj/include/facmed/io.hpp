#ifndef FACMED_IO_HPP
#define FACMED_IO_HPP

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "facmed/errors.hpp"
#include "facmed/instance.hpp"
#include "facmed/rational.hpp"
#include "facmed/tree_metric.hpp"

namespace facmed {

using ParsedDocument = std::variant<Instance, HierarchyInstance>;

namespace io_detail {

using Json = nlohmann::ordered_json;

inline const Json& field(const Json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key))
        throw validation_error(where + ": missing field '" + key + "'");
    return obj.at(key);
}

inline std::string string_field(const Json& j, const std::string& where) {
    if (!j.is_string()) throw validation_error(where + ": expected a string");
    return j.get<std::string>();
}

inline Rational rational_field(const Json& j, const std::string& where) {
    if (!j.is_string())
        throw validation_error(where + ": rationals must be \"num/den\" strings, not numbers");
    try {
        return parse_rational(j.get<std::string>());
    } catch (const validation_error& e) {
        throw validation_error(where + ": " + e.what());
    }
}

inline VertexId lookup_vertex(const TreeMetric& m, const std::string& name, const std::string& where) {
    auto v = m.find_vertex(name);
    if (!v) throw validation_error(where + ": unknown vertex '" + name + "'");
    return *v;
}

inline EdgeId lookup_edge(const TreeMetric& m, VertexId a, VertexId b, const std::string& where) {
    for (const auto& [nb, e] : m.neighbors(a))
        if (nb == b) return e;
    throw validation_error(where + ": no edge between '" + m.vertex_name(a) + "' and '" +
                           m.vertex_name(b) + "'");
}

inline PointRef parse_point(const TreeMetric& m, const Json& j, const std::string& where) {
    if (j.is_string()) return m.vertex_point(lookup_vertex(m, j.get<std::string>(), where));
    if (!j.is_object())
        throw validation_error(where + ": a point is a vertex name or {edge, offset}");
    const Json& ej = field(j, "edge", where);
    if (!ej.is_array() || ej.size() != 2)
        throw validation_error(where + ".edge: expected a pair of vertex names");
    VertexId a = lookup_vertex(m, string_field(ej[0], where + ".edge[0]"), where);
    VertexId b = lookup_vertex(m, string_field(ej[1], where + ".edge[1]"), where);
    EdgeId e = lookup_edge(m, a, b, where);
    Rational offset = rational_field(field(j, "offset", where), where + ".offset");
    const auto& ed = m.edge(e);
    if (offset < 0 || offset > ed.length)
        throw validation_error(where + ".offset: " + rational_str(offset) + " out of range");
    return m.point_on_edge(e, ed.a == a ? offset : ed.length - offset);
}

inline Json point_json(const TreeMetric& m, const PointRef& p) {
    if (p.is_vertex()) return Json(m.vertex_name(p.vertex));
    const auto& ed = m.edge(p.edge);
    std::string na = m.vertex_name(ed.a);
    std::string nb = m.vertex_name(ed.b);
    Rational offset = p.offset;
    if (nb < na) {
        std::swap(na, nb);
        offset = ed.length - offset;
    }
    Json j;
    j["edge"] = Json::array({na, nb});
    j["offset"] = rational_str(offset);
    return j;
}

inline TreeMetric parse_metric(const Json& j) {
    const Json& vj = field(j, "vertices", "metric");
    const Json& ej = field(j, "edges", "metric");
    if (!vj.is_array() || vj.empty()) throw validation_error("metric.vertices: expected a non-empty array");
    if (!ej.is_array()) throw validation_error("metric.edges: expected an array");
    TreeMetric::Builder b;
    try {
        for (std::size_t i = 0; i < vj.size(); ++i)
            b.add_vertex(string_field(vj[i], "metric.vertices[" + std::to_string(i) + "]"));
    } catch (const validation_error& e) {
        throw validation_error(std::string("metric.vertices: ") + e.what());
    }
    // A temporary name table, since edges reference vertices by name.
    std::map<std::string, VertexId> names;
    for (std::size_t i = 0; i < vj.size(); ++i) names[vj[i].get<std::string>()] = static_cast<VertexId>(i);
    for (std::size_t i = 0; i < ej.size(); ++i) {
        const std::string where = "metric.edges[" + std::to_string(i) + "]";
        const Json& edge = ej[i];
        const std::string na = string_field(field(edge, "a", where), where + ".a");
        const std::string nb = string_field(field(edge, "b", where), where + ".b");
        auto ita = names.find(na);
        auto itb = names.find(nb);
        if (ita == names.end()) throw validation_error(where + ".a: unknown vertex '" + na + "'");
        if (itb == names.end()) throw validation_error(where + ".b: unknown vertex '" + nb + "'");
        Rational len = rational_field(field(edge, "length", where), where + ".length");
        try {
            b.add_edge(ita->second, itb->second, len);
        } catch (const validation_error& e) {
            throw validation_error(where + ": " + e.what());
        }
    }
    try {
        return b.build();
    } catch (const validation_error& e) {
        throw validation_error(std::string("metric: ") + e.what());
    }
}

inline Json metric_json(const TreeMetric& m) {
    std::vector<std::string> names;
    for (VertexId v = 0; v < m.vertex_count(); ++v) names.push_back(m.vertex_name(v));
    std::sort(names.begin(), names.end());
    struct Row {
        std::string a, b;
        Rational length;
    };
    std::vector<Row> rows;
    for (EdgeId e : m.edge_ids()) {
        const auto& ed = m.edge(e);
        std::string na = m.vertex_name(ed.a);
        std::string nb = m.vertex_name(ed.b);
        if (nb < na) std::swap(na, nb);
        rows.push_back(Row{na, nb, ed.length});
    }
    std::sort(rows.begin(), rows.end(),
              [](const Row& x, const Row& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
    Json j;
    j["vertices"] = names;
    j["edges"] = Json::array();
    for (const auto& row : rows) {
        Json e;
        e["a"] = row.a;
        e["b"] = row.b;
        e["length"] = rational_str(row.length);
        j["edges"].push_back(std::move(e));
    }
    return j;
}

inline PointRef smallest_vertex_point(const TreeMetric& m) {
    VertexId best = 0;
    for (VertexId v = 1; v < m.vertex_count(); ++v)
        if (m.vertex_name(v) < m.vertex_name(best)) best = v;
    return m.vertex_point(best);
}

inline HierarchyNode parse_hierarchy_node(const TreeMetric& m, const Json& j, const std::string& where,
                                          const std::string& auto_name) {
    HierarchyNode node;
    if (j.is_object() && j.contains("agent")) {
        node.is_agent = true;
        node.name = auto_name;
        node.location = parse_point(m, j.at("agent"), where + ".agent");
        return node;
    }
    if (!j.is_object() || !j.contains("children"))
        throw validation_error(where + ": node must be {agent: point} or have 'children'");
    node.is_agent = false;
    node.name = j.contains("name") ? string_field(j.at("name"), where + ".name") : auto_name;
    node.z = j.contains("z") ? parse_point(m, j.at("z"), where + ".z") : smallest_vertex_point(m);
    const Json& cj = j.at("children");
    if (!cj.is_array() || cj.empty())
        throw validation_error(where + ".children: expected a non-empty array");
    for (std::size_t i = 0; i < cj.size(); ++i)
        node.children.push_back(parse_hierarchy_node(m, cj[i],
                                                     where + ".children[" + std::to_string(i) + "]",
                                                     node.name + "." + std::to_string(i)));
    return node;
}

inline Json hierarchy_node_json(const TreeMetric& m, const HierarchyNode& node) {
    Json j;
    if (node.is_agent) {
        j["agent"] = point_json(m, node.location);
        return j;
    }
    j["name"] = node.name;
    j["z"] = point_json(m, node.z);
    j["children"] = Json::array();
    for (const auto& c : node.children) j["children"].push_back(hierarchy_node_json(m, c));
    return j;
}

} // namespace io_detail

inline std::string serialize(const Instance& inst) {
    using io_detail::Json;
    Json j;
    j["schema"] = 1;
    j["kind"] = "instance";
    j["metric"] = io_detail::metric_json(inst.metric);
    j["mediators"] = Json::array();
    for (const auto& reports : inst.mediators) {
        // Sort by the rendered form so the ordering does not depend on
        // internal ids, which differ between equivalent metrics.
        std::vector<Json> rendered;
        for (const auto& p : reports) rendered.push_back(io_detail::point_json(inst.metric, p));
        std::sort(rendered.begin(), rendered.end(),
                  [](const Json& x, const Json& y) { return x.dump() < y.dump(); });
        Json list = Json::array();
        for (auto& p : rendered) list.push_back(std::move(p));
        j["mediators"].push_back(std::move(list));
    }
    j["z"] = io_detail::point_json(inst.metric, inst.z);
    j["z_list"] = Json::array();
    for (const auto& zi : inst.z_list) j["z_list"].push_back(io_detail::point_json(inst.metric, zi));
    return j.dump(2) + "\n";
}

inline std::string serialize(const HierarchyInstance& h) {
    using io_detail::Json;
    Json j;
    j["schema"] = 1;
    j["kind"] = "hierarchy";
    j["metric"] = io_detail::metric_json(h.metric);
    j["root"] = io_detail::hierarchy_node_json(h.metric, h.root);
    return j.dump(2) + "\n";
}

/// Parses and validates an instance or hierarchy document. Errors identify
/// the offending field.
inline ParsedDocument parse_document(const std::string& text) {
    io_detail::Json j;
    try {
        j = io_detail::Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("document is not valid JSON: ") + e.what());
    }
    const auto& schema = io_detail::field(j, "schema", "document");
    if (!schema.is_number_integer() || schema.get<int>() != 1)
        throw validation_error("document.schema: expected 1");
    const std::string kind = io_detail::string_field(io_detail::field(j, "kind", "document"), "document.kind");
    TreeMetric metric = io_detail::parse_metric(io_detail::field(j, "metric", "document"));
    if (kind == "instance") {
        Instance inst;
        inst.metric = std::move(metric);
        const auto& mj = io_detail::field(j, "mediators", "document");
        if (!mj.is_array() || mj.empty())
            throw validation_error("document.mediators: expected a non-empty array");
        for (std::size_t i = 0; i < mj.size(); ++i) {
            const std::string where = "mediators[" + std::to_string(i) + "]";
            if (!mj[i].is_array() || mj[i].empty())
                throw validation_error(where + ": mediator must hold at least one agent");
            std::vector<PointRef> reports;
            for (std::size_t k = 0; k < mj[i].size(); ++k)
                reports.push_back(io_detail::parse_point(inst.metric, mj[i][k],
                                                         where + "[" + std::to_string(k) + "]"));
            inst.mediators.push_back(std::move(reports));
        }
        inst.z = j.contains("z") ? io_detail::parse_point(inst.metric, j.at("z"), "z")
                                 : io_detail::smallest_vertex_point(inst.metric);
        if (j.contains("z_list")) {
            const auto& zj = j.at("z_list");
            if (!zj.is_array()) throw validation_error("z_list: expected an array");
            for (std::size_t i = 0; i < zj.size(); ++i)
                inst.z_list.push_back(io_detail::parse_point(inst.metric, zj[i],
                                                             "z_list[" + std::to_string(i) + "]"));
        } else {
            inst.z_list.assign(inst.mediators.size(), io_detail::smallest_vertex_point(inst.metric));
        }
        inst.validate();
        return inst;
    }
    if (kind == "hierarchy") {
        HierarchyInstance h;
        h.metric = std::move(metric);
        h.root = io_detail::parse_hierarchy_node(h.metric, io_detail::field(j, "root", "document"),
                                                 "root", "center");
        h.validate();
        return h;
    }
    throw validation_error("document.kind: expected 'instance' or 'hierarchy', got '" + kind + "'");
}

/// FNV-1a 64-bit content hash, rendered as a stable hex string.
inline std::string digest(std::string_view bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

// ---------------------------------------------------------------------------
// Seeded random generation
// ---------------------------------------------------------------------------

struct GeneratorParams {
    std::uint64_t seed = 0;
    int min_vertices = 2;
    int max_vertices = 8;
    Rational min_edge_length = Rational(1);
    Rational max_edge_length = Rational(3);
    int length_grid = 2; // edge lengths are multiples of 1/length_grid
    int min_mediators = 1;
    int max_mediators = 4;
    int min_agents = 1; // per mediator
    int max_agents = 6;
    bool force_path = false;
    int offset_grid = 8; // interior points sit at multiples of length/offset_grid
    int min_depth = 2;   // hierarchy generation only
    int max_depth = 4;

    void validate() const {
        if (min_vertices < 1 || min_vertices > max_vertices)
            throw validation_error("generator: bad vertex count range");
        if (min_mediators < 1 || min_mediators > max_mediators)
            throw validation_error("generator: bad mediator count range");
        if (min_agents < 1 || min_agents > max_agents)
            throw validation_error("generator: bad agents-per-mediator range");
        if (length_grid < 1 || offset_grid < 2) throw validation_error("generator: bad grid");
        if (min_edge_length <= 0 || min_edge_length > max_edge_length)
            throw validation_error("generator: bad edge length range");
        if (min_depth < 1 || min_depth > max_depth)
            throw validation_error("generator: bad hierarchy depth range");
    }
};

namespace io_detail {

inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
    // Inclusive range. Not uniform_int_distribution: its stream is
    // implementation-defined and seeds must reproduce exactly.
    return lo + rng() % (hi - lo + 1);
}

inline Rational random_length(std::mt19937_64& rng, const GeneratorParams& p) {
    // Multiples of 1/grid inside [min, max].
    const Rational lo_r = p.min_edge_length * p.length_grid;
    const Rational hi_r = p.max_edge_length * p.length_grid;
    BigInt lo = numerator(lo_r) / denominator(lo_r);
    if (Rational(lo) < lo_r) lo += 1; // ceil
    BigInt hi = numerator(hi_r) / denominator(hi_r); // floor for non-negative values
    if (lo > hi) throw validation_error("generator: no grid multiple inside the edge length range");
    const std::uint64_t span = (hi - lo).convert_to<std::uint64_t>();
    BigInt pick = lo + BigInt(bounded(rng, 0, span));
    return Rational(pick, BigInt(p.length_grid));
}

inline TreeMetric random_metric(std::mt19937_64& rng, const GeneratorParams& p) {
    const int n = static_cast<int>(bounded(rng, p.min_vertices, p.max_vertices));
    TreeMetric::Builder b;
    for (int i = 0; i < n; ++i) b.add_vertex("v" + std::to_string(i));
    if (p.force_path) {
        for (int i = 1; i < n; ++i)
            b.add_edge(static_cast<VertexId>(i - 1), static_cast<VertexId>(i), random_length(rng, p));
        return b.build();
    }
    if (n == 1) return b.build();
    if (n == 2) {
        b.add_edge(0, 1, random_length(rng, p));
        return b.build();
    }
    // Uniform labeled tree via a Pruefer sequence.
    std::vector<int> seq(n - 2);
    for (int& s : seq) s = static_cast<int>(bounded(rng, 0, n - 1));
    std::vector<int> degree(n, 1);
    for (int s : seq) ++degree[s];
    std::priority_queue<int, std::vector<int>, std::greater<int>> leaves;
    for (int v = 0; v < n; ++v)
        if (degree[v] == 1) leaves.push(v);
    for (int s : seq) {
        int leaf = leaves.top();
        leaves.pop();
        b.add_edge(static_cast<VertexId>(leaf), static_cast<VertexId>(s), random_length(rng, p));
        if (--degree[s] == 1) leaves.push(s);
    }
    int u = leaves.top();
    leaves.pop();
    int v = leaves.top();
    b.add_edge(static_cast<VertexId>(u), static_cast<VertexId>(v), random_length(rng, p));
    return b.build();
}

inline PointRef random_point(std::mt19937_64& rng, const TreeMetric& m, const GeneratorParams& p) {
    const auto edges = m.edge_ids();
    if (!edges.empty() && rng() % 2 == 0) {
        EdgeId e = edges[bounded(rng, 0, edges.size() - 1)];
        const Rational frac = Rational(BigInt(bounded(rng, 1, p.offset_grid - 1)), BigInt(p.offset_grid));
        return m.point_on_edge(e, m.edge(e).length * frac);
    }
    return m.vertex_point(static_cast<VertexId>(bounded(rng, 0, m.vertex_count() - 1)));
}

inline HierarchyNode random_hierarchy_node(std::mt19937_64& rng, const TreeMetric& m,
                                           const GeneratorParams& p, int level, const std::string& name) {
    HierarchyNode node;
    node.name = name;
    node.z = m.vertex_point(static_cast<VertexId>(bounded(rng, 0, m.vertex_count() - 1)));
    const auto add_agent = [&](std::size_t idx) {
        HierarchyNode a;
        a.is_agent = true;
        a.name = name + "." + std::to_string(idx);
        a.location = random_point(rng, m, p);
        node.children.push_back(std::move(a));
    };
    if (level == 1) {
        const std::uint64_t agents = bounded(rng, p.min_agents, p.max_agents);
        for (std::uint64_t i = 0; i < agents; ++i) add_agent(i);
        return node;
    }
    const std::uint64_t kids = bounded(rng, 1, 3);
    for (std::uint64_t i = 0; i < kids; ++i) {
        const std::string child_name = name + "." + std::to_string(i);
        if (i == 0) {
            // Keep one chain at full depth so the tree reaches the drawn depth.
            node.children.push_back(random_hierarchy_node(rng, m, p, level - 1, child_name));
        } else if (rng() % 4 == 0) {
            add_agent(i);
        } else {
            const int sub = static_cast<int>(bounded(rng, 1, level - 1));
            node.children.push_back(random_hierarchy_node(rng, m, p, sub, child_name));
        }
    }
    return node;
}

} // namespace io_detail

/// Seeded random instance; the seed fully determines the output.
inline Instance gen_random(const GeneratorParams& params) {
    params.validate();
    std::mt19937_64 rng(params.seed);
    Instance inst;
    inst.metric = io_detail::random_metric(rng, params);
    const std::uint64_t k = io_detail::bounded(rng, params.min_mediators, params.max_mediators);
    for (std::uint64_t i = 0; i < k; ++i) {
        const std::uint64_t agents = io_detail::bounded(rng, params.min_agents, params.max_agents);
        std::vector<PointRef> reports;
        for (std::uint64_t a = 0; a < agents; ++a)
            reports.push_back(io_detail::random_point(rng, inst.metric, params));
        inst.mediators.push_back(std::move(reports));
    }
    inst.z = inst.metric.vertex_point(
        static_cast<VertexId>(io_detail::bounded(rng, 0, inst.metric.vertex_count() - 1)));
    for (std::uint64_t i = 0; i < k; ++i)
        inst.z_list.push_back(inst.metric.vertex_point(
            static_cast<VertexId>(io_detail::bounded(rng, 0, inst.metric.vertex_count() - 1))));
    inst.validate();
    return inst;
}

/// Seeded random mediation hierarchy over a random metric.
inline HierarchyInstance gen_random_hierarchy(const GeneratorParams& params) {
    params.validate();
    std::mt19937_64 rng(params.seed ^ 0x6d656469617465ull);
    HierarchyInstance h;
    h.metric = io_detail::random_metric(rng, params);
    const int depth = static_cast<int>(io_detail::bounded(rng, params.min_depth, params.max_depth));
    h.root = io_detail::random_hierarchy_node(rng, h.metric, params, depth, "center");
    h.validate();
    return h;
}

// ---------------------------------------------------------------------------
// Named instance families
// ---------------------------------------------------------------------------

namespace io_detail {

inline TreeMetric interval_metric(const char* left, const char* right, const Rational& length) {
    TreeMetric::Builder b;
    VertexId l = b.add_vertex(left);
    VertexId r = b.add_vertex(right);
    b.add_edge(l, r, length);
    return b.build();
}

inline PointRef interval_point(const TreeMetric& m, const Rational& coordinate) {
    return m.point_on_edge(m.edge_ids().front(), coordinate);
}

} // namespace io_detail

/// Two-mediator line instances with mediator medians pinned at l and h.
/// Variant 1 tilts mediator one towards l, variant 2 mirrors, variant 3
/// co-locates each mediator's agents.
inline Instance family_ex51(const Rational& l, const Rational& h, long long r, int variant) {
    if (!(0 <= l && l < h && h <= 1)) throw validation_error("family ex51 needs 0 <= l < h <= 1");
    if (r < 1) throw validation_error("family ex51 needs r >= 1");
    if (variant < 1 || variant > 3) throw validation_error("family ex51 variant must be 1, 2 or 3");
    Instance inst;
    inst.metric = io_detail::interval_metric("0", "1", Rational(1));
    const PointRef pl = io_detail::interval_point(inst.metric, l);
    const PointRef ph = io_detail::interval_point(inst.metric, h);
    const auto copies = [](const PointRef& p, long long count) {
        return std::vector<PointRef>(static_cast<std::size_t>(count), p);
    };
    std::vector<PointRef> d1, d2;
    if (variant == 1) {
        d1 = copies(pl, r + 1);
        auto extra = copies(ph, r);
        d1.insert(d1.end(), extra.begin(), extra.end());
        d2 = copies(ph, 2 * r + 1);
    } else if (variant == 2) {
        d1 = copies(pl, 2 * r + 1);
        d2 = copies(pl, r);
        auto extra = copies(ph, r + 1);
        d2.insert(d2.end(), extra.begin(), extra.end());
    } else {
        d1 = copies(pl, 2 * r + 1);
        d2 = copies(ph, 2 * r + 1);
    }
    inst.mediators = {std::move(d1), std::move(d2)};
    inst.z = inst.metric.vertex_point(0);
    inst.z_list = {inst.z, inst.z};
    inst.validate();
    return inst;
}

/// Binary mediation hierarchy of depth s over the unit interval. Level-1
/// mediators hold r agents each except the first, which holds r + 1; variant
/// 1 puts every agent at 0, variant 2 puts all but the first mediator's
/// agents at 1.
inline HierarchyInstance family_ex61(long long r, int s, int variant) {
    if (r < 1) throw validation_error("family ex61 needs r >= 1");
    if (s < 3) throw validation_error("family ex61 needs depth s >= 3");
    if (variant < 1 || variant > 2) throw validation_error("family ex61 variant must be 1 or 2");
    HierarchyInstance h;
    h.metric = io_detail::interval_metric("0", "1", Rational(1));
    const PointRef zero = h.metric.vertex_point(0);
    const PointRef one = h.metric.vertex_point(1);

    std::vector<long long> counter(static_cast<std::size_t>(s), 0);
    const auto build = [&](auto&& self, int level) -> HierarchyNode {
        HierarchyNode node;
        node.z = zero;
        const long long j = ++counter[static_cast<std::size_t>(level - 1)];
        node.name = "d" + std::to_string(level) + "." + std::to_string(j);
        if (level == 1) {
            const long long agents = (j == 1) ? r + 1 : r;
            const PointRef loc = (variant == 1 || j == 1) ? zero : one;
            for (long long a = 0; a < agents; ++a) {
                HierarchyNode leaf;
                leaf.is_agent = true;
                leaf.name = node.name + ".a" + std::to_string(a);
                leaf.location = loc;
                node.children.push_back(std::move(leaf));
            }
            return node;
        }
        node.children.push_back(self(self, level - 1));
        node.children.push_back(self(self, level - 1));
        return node;
    };

    h.root.name = "center";
    h.root.z = zero;
    h.root.children.push_back(build(build, s - 1));
    h.validate();
    return h;
}

/// Seven-mediator tree with unit edges whose randomized-mechanism
/// distribution exercises nested core subtrees.
inline Instance fig1_tree() {
    TreeMetric::Builder b;
    const VertexId R = b.add_vertex("R");
    const VertexId A = b.add_vertex("A");
    const VertexId B = b.add_vertex("B");
    const VertexId BC = b.add_vertex("BC");
    const VertexId D = b.add_vertex("D");
    const VertexId DC = b.add_vertex("DC");
    const VertexId E = b.add_vertex("E");
    const VertexId F = b.add_vertex("F");
    b.add_edge(R, E, Rational(1));
    b.add_edge(R, F, Rational(1));
    b.add_edge(E, A, Rational(1));
    b.add_edge(E, B, Rational(1));
    b.add_edge(B, BC, Rational(1));
    b.add_edge(F, D, Rational(1));
    b.add_edge(D, DC, Rational(1));
    TreeMetric metric = b.build();

    Instance inst;
    inst.metric = std::move(metric);
    const std::vector<std::pair<VertexId, std::size_t>> blocks = {
        {R, 24}, {A, 10}, {B, 1}, {BC, 25}, {D, 5}, {DC, 25}, {F, 10}};
    for (const auto& [v, count] : blocks)
        inst.mediators.emplace_back(count, inst.metric.vertex_point(v));
    inst.z = inst.metric.vertex_point(R);
    inst.z_list.assign(inst.mediators.size(), inst.z);
    inst.validate();
    return inst;
}

/// Five-agent, two-level mediation example on the interval [0, 2]: mediator A
/// holds agents at 0, 0 and 1, mediator B holds two agents at 2, both under a
/// single middle mediator C. Every tie-break sits at 0.
inline HierarchyInstance sec6_example() {
    HierarchyInstance h;
    h.metric = io_detail::interval_metric("0", "2", Rational(2));
    const PointRef zero = h.metric.vertex_point(0);
    const PointRef two = h.metric.vertex_point(1);
    const PointRef one = io_detail::interval_point(h.metric, Rational(1));

    const auto agent = [](std::string name, const PointRef& at) {
        HierarchyNode n;
        n.is_agent = true;
        n.name = std::move(name);
        n.location = at;
        return n;
    };

    HierarchyNode A;
    A.name = "A";
    A.z = zero;
    A.children = {agent("a", zero), agent("b", zero), agent("c", one)};

    HierarchyNode B;
    B.name = "B";
    B.z = zero;
    B.children = {agent("d", two), agent("e", two)};

    HierarchyNode C;
    C.name = "C";
    C.z = zero;
    C.children = {std::move(A), std::move(B)};

    h.root.name = "center";
    h.root.z = zero;
    h.root.children.push_back(std::move(C));
    h.validate();
    return h;
}

/// One level of mediation expressed as a depth-2 hierarchy.
inline HierarchyInstance hierarchy_from_instance(const Instance& inst) {
    inst.validate();
    HierarchyInstance h;
    h.metric = inst.metric;
    h.root.name = "center";
    h.root.z = inst.z;
    for (std::size_t i = 0; i < inst.mediators.size(); ++i) {
        HierarchyNode m;
        m.name = "d" + std::to_string(i + 1);
        m.z = inst.z_list[i];
        for (std::size_t a = 0; a < inst.mediators[i].size(); ++a) {
            HierarchyNode leaf;
            leaf.is_agent = true;
            leaf.name = m.name + ".a" + std::to_string(a);
            leaf.location = inst.mediators[i][a];
            m.children.push_back(std::move(leaf));
        }
        h.root.children.push_back(std::move(m));
    }
    h.validate();
    return h;
}

} // namespace facmed

#endif
