#include "dirtsch/fixtures.hpp"

namespace dirtsch {

Topology exampleTopology16() {
    std::vector<Vec2> pos = {
        {700, 620},  // n0  sink
        {480, 550},  // n1
        {600, 480},  // n2
        {470, 430},  // n3
        {200, 500},  // n4   child of n1
        {290, 720},  // n5   child of n1
        {820, 310},  // n6   child of n2
        {700, 280},  // n7   child of n2
        {690, 200},  // n8   child of n2
        {360, 180},  // n9   child of n3
        {510, 150},  // n10  child of n3
        {80, 260},   // n11  child of n4
        {60, 540},   // n12  child of n4
        {350, 990},  // n13  child of n5
        {990, 120},  // n14  child of n6
        {970, 440},  // n15  child of n6
    };
    return Topology(std::move(pos), 300.0, 1000.0, 1000.0);
}

std::map<NodeId, int> walkthroughBacklog() {
    return {
        {1, 15}, {2, 31}, {3, 7},             // level 1: n2 wins, then n1, then n3
        {4, 31}, {5, 15}, {6, 9},  {7, 7},    // level 2: n4 first, n10 ties n4
        {8, 5},  {9, 3},  {10, 31},
        {11, 2}, {12, 1}, {13, 31}, {14, 15}, {15, 3},  // level 3
    };
}

Topology fourNodeTopology() {
    std::vector<Vec2> pos = {
        {300, 300},  // A
        {500, 300},  // B
        {300, 500},  // C
        {100, 500},  // D
    };
    return Topology(std::move(pos), 300.0, 1000.0, 1000.0);
}

}  // namespace dirtsch
