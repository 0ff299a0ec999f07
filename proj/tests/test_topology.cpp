#include <doctest.h>

#include <cmath>
#include <deque>
#include <set>

#include "dirtsch/errors.hpp"
#include "dirtsch/fixtures.hpp"
#include "dirtsch/topology.hpp"

using namespace dirtsch;

namespace {

// Independent BFS over raw positions, used as the level oracle.
std::map<NodeId, int> bfsLevels(const std::vector<Vec2>& pos, double radius) {
    std::map<NodeId, int> level{{0, 0}};
    std::deque<NodeId> q{0};
    while (!q.empty()) {
        NodeId u = q.front();
        q.pop_front();
        for (NodeId v = 0; v < static_cast<NodeId>(pos.size()); ++v) {
            if (v == u || level.count(v)) continue;
            const double dx = pos[v].x - pos[u].x;
            const double dy = pos[v].y - pos[u].y;
            if (std::sqrt(dx * dx + dy * dy) <= radius) {
                level[v] = level[u] + 1;
                q.push_back(v);
            }
        }
    }
    return level;
}

}  // namespace

TEST_CASE("configuration errors are rejected") {
    TopologyConfig cfg;
    cfg.num_nodes = 0;
    CHECK_THROWS_AS(buildTopology(cfg), ConfigError);
    cfg.num_nodes = 4;
    cfg.radius = 0.0;
    CHECK_THROWS_AS(buildTopology(cfg), ConfigError);
    cfg.radius = -5.0;
    CHECK_THROWS_AS(buildTopology(cfg), ConfigError);
    cfg.radius = 100.0;
    cfg.area_w = 0.0;
    CHECK_THROWS_AS(buildTopology(cfg), ConfigError);
    CHECK_THROWS_AS(Topology({{0, 0}, {2000, 50}}, 100.0, 1000.0, 1000.0), ConfigError);
}

TEST_CASE("single-node network is just the sink") {
    TopologyConfig cfg;
    cfg.num_nodes = 1;
    cfg.radius = 100.0;
    Topology topo = buildTopology(cfg);
    CHECK(topo.size() == 1);
    CHECK(topo.neighbors(0).empty());
    Tree tree = Tree::build(topo);
    CHECK(tree.level(0) == 0);
    CHECK(tree.topSubtrees().empty());
    CHECK(tree.depth() == 0);
}

TEST_CASE("four nodes in a small square are fully connected") {
    // Side 60 m, diagonal 60*sqrt(2) ~ 84.9 m, all under the 100 m radius.
    Topology topo({{100, 100}, {160, 100}, {100, 160}, {160, 160}}, 100.0, 1000.0, 1000.0);
    for (NodeId id = 0; id < 4; ++id) CHECK(topo.neighbors(id).size() == 3);
}

TEST_CASE("distance exactly equal to the radius counts as connected") {
    Topology topo({{0, 0}, {300, 0}}, 300.0, 1000.0, 1000.0);
    CHECK(topo.inRange(0, 1));
    CHECK(topo.neighbors(0) == std::set<NodeId>{1});
    CHECK(topo.neighbors(1) == std::set<NodeId>{0});
}

TEST_CASE("neighbor sets match a brute-force all-pairs scan") {
    TopologyConfig cfg;
    cfg.num_nodes = 16;
    cfg.seed = 7;
    Topology topo = buildTopology(cfg);
    for (NodeId a = 0; a < topo.size(); ++a) {
        std::set<NodeId> expected;
        for (NodeId b = 0; b < topo.size(); ++b) {
            if (a == b) continue;
            const double dx = topo.position(a).x - topo.position(b).x;
            const double dy = topo.position(a).y - topo.position(b).y;
            if (std::sqrt(dx * dx + dy * dy) <= topo.radius()) expected.insert(b);
        }
        CHECK(topo.neighbors(a) == expected);
    }
    CHECK_THROWS_AS(topo.neighbors(99), LookupError);
}

TEST_CASE("star layout puts every node at level 1") {
    // Four leaves 250 m from the sink, pairwise more than 300 m apart.
    Topology topo({{500, 500}, {750, 500}, {500, 750}, {250, 500}, {500, 250}}, 300.0, 1000.0,
                  1000.0);
    Tree tree = Tree::build(topo);
    for (NodeId id = 1; id < 5; ++id) {
        CHECK(tree.level(id) == 1);
        CHECK(tree.parent(id) == 0);
    }
    CHECK(tree.topSubtrees().size() == 4);
}

TEST_CASE("equal-hop parent candidates resolve to the lowest id") {
    // Nodes 1 and 2 both reach the sink; node 3 reaches both but not the sink.
    Topology topo({{500, 500}, {500, 700}, {700, 500}, {680, 680}}, 220.0, 1000.0, 1000.0);
    Tree tree = Tree::build(topo);
    REQUIRE(tree.level(3) == 2);
    CHECK(tree.parent(3) == 1);
}

TEST_CASE("tree levels equal independent BFS distance on random layouts") {
    for (std::uint64_t seed : {1ULL, 5ULL, 11ULL, 23ULL}) {
        TopologyConfig cfg;
        cfg.num_nodes = 24;
        cfg.radius = 320.0;
        cfg.seed = seed;
        Topology topo = buildTopology(cfg);
        Tree tree = Tree::build(topo);
        std::vector<Vec2> pos;
        for (NodeId id = 0; id < topo.size(); ++id) pos.push_back(topo.position(id));
        auto oracle = bfsLevels(pos, topo.radius());
        for (NodeId id = 0; id < topo.size(); ++id) CHECK(tree.level(id) == oracle.at(id));
    }
}

TEST_CASE("parent, children and level stay mutually consistent") {
    TopologyConfig cfg;
    cfg.num_nodes = 20;
    cfg.radius = 350.0;
    cfg.seed = 3;
    Topology topo = buildTopology(cfg);
    Tree tree = Tree::build(topo);
    for (NodeId id = 1; id < topo.size(); ++id) {
        const NodeId p = tree.parent(id);
        CHECK(tree.level(id) == tree.level(p) + 1);
        CHECK(topo.inRange(id, p));
        const auto& siblings = tree.children(p);
        CHECK(std::count(siblings.begin(), siblings.end(), id) == 1);
        // Walking parents always reaches the sink.
        NodeId cur = id;
        int hops = 0;
        while (cur != 0 && hops <= topo.size()) {
            cur = tree.parent(cur);
            ++hops;
        }
        CHECK(cur == 0);
    }
}

TEST_CASE("disconnected layouts report the unreachable nodes") {
    Topology topo({{0, 0}, {50, 0}, {900, 900}}, 100.0, 1000.0, 1000.0);
    try {
        Tree::build(topo);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
}

TEST_CASE("sixteen-node example network builds the documented tree") {
    Topology topo = exampleTopology16();
    Tree tree = Tree::build(topo);
    const std::map<NodeId, NodeId> expected{{1, 0}, {2, 0}, {3, 0},  {4, 1},  {5, 1},
                                            {6, 2}, {7, 2}, {8, 2},  {9, 3},  {10, 3},
                                            {11, 4}, {12, 4}, {13, 5}, {14, 6}, {15, 6}};
    for (const auto& [node, parent] : expected) CHECK(tree.parent(node) == parent);
    CHECK(tree.depth() == 3);

    auto subtrees = tree.topSubtrees();
    REQUIRE(subtrees.size() == 3);
    std::set<NodeId> seen;
    std::size_t total = 0;
    for (const auto& ts : subtrees) {
        CHECK(tree.parent(ts.root) == 0);
        CHECK(ts.members.count(ts.root) == 1);
        total += ts.members.size();
        seen.insert(ts.members.begin(), ts.members.end());
    }
    // Pairwise disjoint and covering all non-sink nodes.
    CHECK(total == seen.size());
    CHECK(seen.size() == 15);
    CHECK(seen.count(0) == 0);
    CHECK(subtrees[0].members.size() == 6);
    CHECK(subtrees[1].members.size() == 6);
    CHECK(subtrees[2].members.size() == 3);
}

TEST_CASE("chain topology forms exactly one top-subtree") {
    Topology topo({{100, 500}, {300, 500}, {500, 500}, {700, 500}}, 250.0, 1000.0, 1000.0);
    Tree tree = Tree::build(topo);
    auto subtrees = tree.topSubtrees();
    REQUIRE(subtrees.size() == 1);
    CHECK(subtrees[0].root == 1);
    CHECK(subtrees[0].members == std::set<NodeId>{1, 2, 3});
}

TEST_CASE("identical config and seed give byte-identical dumps") {
    TopologyConfig cfg;
    cfg.num_nodes = 16;
    cfg.seed = 42;
    Topology a = buildTopology(cfg);
    Topology b = buildTopology(cfg);
    CHECK(a.dump() == b.dump());
    CHECK(Tree::build(a).dump() == Tree::build(b).dump());
    cfg.seed = 43;
    CHECK(buildTopology(cfg).dump() != a.dump());
}
