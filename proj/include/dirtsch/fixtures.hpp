#pragma once

#include <map>

#include "dirtsch/topology.hpp"

namespace dirtsch {

// The sixteen-node example network the protocol discussion walks through:
// sink n0 with first-hop children n1, n2, n3; n4 and n5 under n1; n10 under
// n3; three tree levels. The layout also realizes the single-channel case
// where n2->n0 and n4->n1 run on beam pair (1,3) and n10->n3 on (2,4).
Topology exampleTopology16();

// Load profile (buffered packets per node) that drives the scheduling
// walk-through: n2 fires first at level 1, n4 first at level 2.
std::map<NodeId, int> walkthroughBacklog();

// Four nodes on one channel: pair (0,1) and pair (2,3) want four slots each.
Topology fourNodeTopology();

}  // namespace dirtsch
