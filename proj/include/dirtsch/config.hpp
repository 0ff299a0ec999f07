#pragma once

#include <iosfwd>
#include <string>

#include "dirtsch/link_model.hpp"
#include "dirtsch/sim.hpp"
#include "dirtsch/topology.hpp"

namespace dirtsch {

// Everything one run needs, loadable from a flat key=value file. Precedence
// is flag > file > default; the CLI applies flags after loading.
struct RunConfig {
    // The stock profile is the paper's simulation setup: 16 nodes on a
    // 1000x1000 m field, 2 Mbps, 127-byte packets, 300 s, single channel.
    RunConfig() { sim.sched.num_channels = 1; }

    TopologyConfig topo;
    SimConfig sim;
    LinkModelParams link;
    double rx_threshold_dbm = -81.0;     // receiver sensitivity; derives the radius if
                                         // radius_m is set to 0
    double sense_threshold_dbm = -91.0;  // carrier sense level, echoed for reference
    std::string topology_file;           // fixed "id x y" layout instead of seeded placement

    // One documented key per line; unknown keys are an error.
    void set(const std::string& key, const std::string& value);

    // Resolves derived values (seed propagation, threshold-based radius).
    void finalize();
};

RunConfig parseConfig(std::istream& in, const std::string& source_name);
RunConfig loadConfigFile(const std::string& path);

// Reads a "id x y" node list (one per line, ids 0..N-1 in any order).
std::vector<Vec2> loadTopologyFile(const std::string& path);

}  // namespace dirtsch
