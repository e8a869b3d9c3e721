#ifndef FACMED_INSTANCE_HPP
#define FACMED_INSTANCE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "facmed/errors.hpp"
#include "facmed/tree_metric.hpp"

namespace facmed {

/// One level of mediation: k mediators, each holding the reported locations
/// of its agents, a global tie-break point z and per-mediator tie-breaks.
struct Instance {
    TreeMetric metric;
    std::vector<std::vector<PointRef>> mediators; // mediator i -> its agents' locations
    PointRef z;
    std::vector<PointRef> z_list; // one tie-break per mediator

    std::size_t total_agents() const {
        std::size_t n = 0;
        for (const auto& m : mediators) n += m.size();
        return n;
    }

    std::vector<PointRef> pooled_agents() const {
        std::vector<PointRef> all;
        for (const auto& m : mediators)
            for (const auto& t : m) all.push_back(t);
        return all;
    }

    void validate() const {
        if (mediators.empty()) throw validation_error("instance needs at least one mediator");
        if (z_list.size() != mediators.size())
            throw validation_error("z_list has " + std::to_string(z_list.size()) + " entries for " +
                                   std::to_string(mediators.size()) + " mediators");
        metric.validate_point(z);
        for (std::size_t i = 0; i < mediators.size(); ++i) {
            if (mediators[i].empty())
                throw validation_error("mediator " + std::to_string(i + 1) + " has no agents");
            metric.validate_point(z_list[i]);
            for (const auto& t : mediators[i]) metric.validate_point(t);
        }
    }
};

/// Node of a mediation tree: either an agent leaf with a location, or a
/// mediator with children and its own tie-break point. The root is the
/// center; it behaves like a mediator when the mechanism iterates medians.
struct HierarchyNode {
    std::string name;
    bool is_agent = false;
    PointRef location; // agents only
    PointRef z;        // mediators only
    std::vector<HierarchyNode> children;

    std::size_t agent_count() const {
        if (is_agent) return 1;
        std::size_t n = 0;
        for (const auto& c : children) n += c.agent_count();
        return n;
    }

    std::size_t depth() const {
        if (is_agent) return 0;
        std::size_t d = 0;
        for (const auto& c : children) d = std::max(d, c.depth() + 1);
        return d;
    }
};

struct HierarchyInstance {
    TreeMetric metric;
    HierarchyNode root; // the center

    std::size_t total_agents() const { return root.agent_count(); }
    std::size_t depth() const { return root.depth(); }

    std::vector<PointRef> pooled_agents() const {
        std::vector<PointRef> all;
        collect_agents(root, all);
        return all;
    }

    void validate() const {
        if (root.is_agent) throw validation_error("hierarchy root must be a mediator");
        std::vector<std::string> names;
        validate_node(root, names);
    }

private:
    void collect_agents(const HierarchyNode& node, std::vector<PointRef>& out) const {
        if (node.is_agent) {
            out.push_back(node.location);
            return;
        }
        for (const auto& c : node.children) collect_agents(c, out);
    }

    void validate_node(const HierarchyNode& node, std::vector<std::string>& names) const {
        if (node.name.empty()) throw validation_error("hierarchy node without a name");
        for (const auto& seen : names)
            if (seen == node.name)
                throw validation_error("duplicate hierarchy node name '" + node.name + "'");
        names.push_back(node.name);
        if (node.is_agent) {
            if (!node.children.empty())
                throw validation_error("agent '" + node.name + "' cannot have children");
            metric.validate_point(node.location);
            return;
        }
        if (node.children.empty())
            throw validation_error("mediator '" + node.name + "' has no children");
        metric.validate_point(node.z);
        for (const auto& c : node.children) validate_node(c, names);
    }
};

} // namespace facmed

#endif
