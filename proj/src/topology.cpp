#include "dirtsch/topology.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <sstream>

#include "dirtsch/errors.hpp"

namespace dirtsch {

Topology::Topology(std::vector<Vec2> positions, double radius, double area_w, double area_h)
    : positions_(std::move(positions)), radius_(radius), area_w_(area_w), area_h_(area_h) {
    if (positions_.empty()) throw ConfigError("topology needs at least the sink node");
    if (radius_ <= 0.0) throw ConfigError("communication radius must be positive");
    if (area_w_ <= 0.0 || area_h_ <= 0.0) throw ConfigError("area dimensions must be positive");
    for (const Vec2& p : positions_) {
        if (p.x < 0.0 || p.x > area_w_ || p.y < 0.0 || p.y > area_h_)
            throw ConfigError("node position outside the deployment area");
    }
}

const Vec2& Topology::position(NodeId id) const {
    if (!contains(id)) throw LookupError("unknown node id " + std::to_string(id));
    return positions_[static_cast<std::size_t>(id)];
}

bool Topology::inRange(NodeId a, NodeId b) const {
    return distance(position(a), position(b)) <= radius_;
}

std::set<NodeId> Topology::neighbors(NodeId id) const {
    if (!contains(id)) throw LookupError("unknown node id " + std::to_string(id));
    std::set<NodeId> out;
    for (NodeId other = 0; other < size(); ++other) {
        if (other != id && inRange(id, other)) out.insert(other);
    }
    return out;
}

std::string Topology::dump() const {
    std::ostringstream os;
    os.precision(6);
    os << std::fixed;
    for (NodeId id = 0; id < size(); ++id) {
        const Vec2& p = positions_[static_cast<std::size_t>(id)];
        os << id << ' ' << p.x << ' ' << p.y << '\n';
    }
    return os.str();
}

namespace {

bool connectedUnderRadius(const std::vector<Vec2>& pos, double radius) {
    const int n = static_cast<int>(pos.size());
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::deque<int> frontier{0};
    seen[0] = true;
    int reached = 1;
    while (!frontier.empty()) {
        int u = frontier.front();
        frontier.pop_front();
        for (int v = 0; v < n; ++v) {
            if (!seen[static_cast<std::size_t>(v)] &&
                distance(pos[static_cast<std::size_t>(u)], pos[static_cast<std::size_t>(v)]) <= radius) {
                seen[static_cast<std::size_t>(v)] = true;
                frontier.push_back(v);
                ++reached;
            }
        }
    }
    return reached == n;
}

double uniformIn(std::mt19937_64& rng, double lo, double hi) {
    // 53-bit mantissa draw; avoids distribution objects so streams are
    // identical across standard library implementations.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
}

}  // namespace

Topology buildTopology(const TopologyConfig& config) {
    if (config.num_nodes < 1) throw ConfigError("number of nodes must be at least 1");
    if (config.radius <= 0.0) throw ConfigError("communication radius must be positive");
    if (config.area_w <= 0.0 || config.area_h <= 0.0)
        throw ConfigError("area dimensions must be positive");

    Vec2 sink = config.sink_pos;
    if (sink.x < 0.0 || sink.y < 0.0) sink = {config.area_w / 2.0, config.area_h / 2.0};

    if (config.placement == Placement::Fixed) {
        if (static_cast<int>(config.fixed_positions.size()) != config.num_nodes)
            throw ConfigError("fixed placement needs one position per node");
        return Topology(config.fixed_positions, config.radius, config.area_w, config.area_h);
    }

    std::mt19937_64 rng(config.seed);
    constexpr int kMaxAttempts = 64;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        std::vector<Vec2> pos;
        pos.reserve(static_cast<std::size_t>(config.num_nodes));
        pos.push_back(sink);
        for (int i = 1; i < config.num_nodes; ++i) {
            pos.push_back({uniformIn(rng, 0.0, config.area_w), uniformIn(rng, 0.0, config.area_h)});
        }
        if (connectedUnderRadius(pos, config.radius))
            return Topology(std::move(pos), config.radius, config.area_w, config.area_h);
    }
    throw ConfigError("could not draw a connected layout for this seed; increase the radius");
}

Tree Tree::build(const Topology& topo) {
    Tree tree;
    tree.level_[kSinkId] = 0;
    tree.children_[kSinkId] = {};
    std::deque<NodeId> frontier{kSinkId};
    while (!frontier.empty()) {
        NodeId u = frontier.front();
        frontier.pop_front();
        // std::set iteration is ascending, which realizes the lowest-id
        // parent preference among equal-hop candidates.
        for (NodeId v : topo.neighbors(u)) {
            if (tree.level_.count(v)) continue;
            tree.level_[v] = tree.level_[u] + 1;
            tree.parent_[v] = u;
            tree.children_[v] = {};
            tree.children_[u].push_back(v);
            tree.depth_ = std::max(tree.depth_, tree.level_[v]);
            frontier.push_back(v);
        }
    }
    if (static_cast<int>(tree.level_.size()) != topo.size()) {
        std::ostringstream os;
        os << "topology is disconnected; unreachable nodes:";
        for (NodeId id = 0; id < topo.size(); ++id) {
            if (!tree.level_.count(id)) os << ' ' << id;
        }
        throw ConfigError(os.str());
    }
    return tree;
}

NodeId Tree::parent(NodeId id) const {
    auto it = parent_.find(id);
    if (it == parent_.end()) throw LookupError("node " + std::to_string(id) + " has no parent");
    return it->second;
}

int Tree::level(NodeId id) const {
    auto it = level_.find(id);
    if (it == level_.end()) throw LookupError("unknown node id " + std::to_string(id));
    return it->second;
}

const std::vector<NodeId>& Tree::children(NodeId id) const {
    auto it = children_.find(id);
    if (it == children_.end()) throw LookupError("unknown node id " + std::to_string(id));
    return it->second;
}

std::vector<NodeId> Tree::nodesAtLevel(int level) const {
    std::vector<NodeId> out;
    for (const auto& [id, lvl] : level_) {
        if (lvl == level) out.push_back(id);
    }
    return out;
}

std::vector<TopSubtree> Tree::topSubtrees() const {
    std::vector<TopSubtree> out;
    for (NodeId root : children(kSinkId)) {
        TopSubtree ts;
        ts.root = root;
        std::deque<NodeId> frontier{root};
        while (!frontier.empty()) {
            NodeId u = frontier.front();
            frontier.pop_front();
            ts.members.insert(u);
            for (NodeId c : children(u)) frontier.push_back(c);
        }
        out.push_back(std::move(ts));
    }
    return out;
}

std::string Tree::dump() const {
    std::ostringstream os;
    for (const auto& [id, lvl] : level_) {
        os << id << ' ' << lvl << ' ';
        if (id == kSinkId)
            os << '-';
        else
            os << parent_.at(id);
        os << '\n';
    }
    return os.str();
}

}  // namespace dirtsch
