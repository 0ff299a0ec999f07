#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dirtsch/geometry.hpp"

namespace dirtsch {

using NodeId = int;

inline constexpr NodeId kSinkId = 0;

enum class Placement {
    Uniform,  // seeded uniform positions, resampled until connected
    Fixed,    // positions supplied explicitly
};

struct TopologyConfig {
    double area_w = 1000.0;  // meters
    double area_h = 1000.0;
    int num_nodes = 16;
    double radius = 300.0;  // communication radius, uniform for all nodes
    Placement placement = Placement::Uniform;
    std::uint64_t seed = 1;
    Vec2 sink_pos{-1.0, -1.0};  // negative: defaults to area center
    std::vector<Vec2> fixed_positions;  // used when placement == Fixed; index = node id
};

// Node layout plus the radio radius. Immutable after construction.
class Topology {
public:
    Topology(std::vector<Vec2> positions, double radius, double area_w, double area_h);

    int size() const { return static_cast<int>(positions_.size()); }
    NodeId sink() const { return kSinkId; }
    double radius() const { return radius_; }
    double areaWidth() const { return area_w_; }
    double areaHeight() const { return area_h_; }

    const Vec2& position(NodeId id) const;
    bool contains(NodeId id) const { return id >= 0 && id < size(); }

    // Closed ball: distance exactly equal to the radius counts as connected.
    bool inRange(NodeId a, NodeId b) const;
    std::set<NodeId> neighbors(NodeId id) const;

    // Stable text form, one node per line: "id x y".
    std::string dump() const;

private:
    std::vector<Vec2> positions_;
    double radius_;
    double area_w_;
    double area_h_;
};

Topology buildTopology(const TopologyConfig& config);

struct TopSubtree {
    NodeId root = kSinkId;          // a child of the sink
    std::set<NodeId> members;       // root plus all of its descendants
};

// BFS shortest-hop tree rooted at the sink; equal-hop parent candidates are
// broken toward the lowest node id so the result is reproducible.
class Tree {
public:
    static Tree build(const Topology& topo);

    bool isSink(NodeId id) const { return id == kSinkId; }
    NodeId parent(NodeId id) const;
    int level(NodeId id) const;  // sink is level 0
    const std::vector<NodeId>& children(NodeId id) const;
    int size() const { return static_cast<int>(level_.size()); }
    int depth() const { return depth_; }

    std::vector<NodeId> nodesAtLevel(int level) const;
    std::vector<TopSubtree> topSubtrees() const;

    // Stable text form, one node per line: "id level parent" (sink parent "-").
    std::string dump() const;

private:
    std::map<NodeId, NodeId> parent_;
    std::map<NodeId, int> level_;
    std::map<NodeId, std::vector<NodeId>> children_;
    int depth_ = 0;
};

}  // namespace dirtsch
