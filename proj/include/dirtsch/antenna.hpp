#pragma once

#include "dirtsch/geometry.hpp"
#include "dirtsch/topology.hpp"

namespace dirtsch {

// Switched-beam sector antenna: M fixed sectors of 360/M degrees each.
// Sector k (1-indexed) covers azimuths [(k-1)*width, k*width), measured
// counterclockwise from east, so with M=4 a target due east lands in beam 1
// and one due north in beam 2.
struct BeamConfig {
    int sectors = 4;

    double beamWidthDeg() const { return 360.0 / sectors; }
    void validate() const;
    // opposite_beam needs antipodal sectors; directional operation rejects odd M.
    void validateForDirectional() const;
};

struct BeamIndex {
    int value = 1;  // 1..M

    bool operator==(const BeamIndex&) const = default;
};

enum class Mode { Omni, Directional };

BeamIndex beamOf(const Vec2& from, const Vec2& to, const BeamConfig& cfg);
BeamIndex oppositeBeam(BeamIndex beam, const BeamConfig& cfg);

// True iff the target is within range of the observer and inside the active
// sector. An observer never covers its own position.
bool covers(const Vec2& observer, BeamIndex active_beam, const Vec2& target,
            const BeamConfig& cfg, double radius);

// One scheduled transmission with the beams used on each end. Beams are
// ignored in omni mode.
struct Transmission {
    NodeId tx = 0;
    NodeId rx = 0;
    BeamIndex tx_beam{1};
    BeamIndex rx_beam{1};
};

// Whether two same-(slot,channel) transmissions can not coexist.
// Primary: shared endpoint (half-duplex transceiver). Secondary: the receiver
// of one transmission is hit by the other sender -- in directional mode "hit"
// means inside the sender's active sector, in omni mode plain range membership.
// interference_scale widens the interference radius relative to the
// communication radius (default 1.0: identical ranges).
bool directionalConflict(const Transmission& a, const Transmission& b, const Topology& topo,
                         const BeamConfig& cfg, Mode mode, double interference_scale = 1.0);

}  // namespace dirtsch
