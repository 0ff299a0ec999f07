#include "dirtsch/antenna.hpp"

#include <cmath>
#include <string>

#include "dirtsch/errors.hpp"

namespace dirtsch {

void BeamConfig::validate() const {
    if (sectors < 2) throw ConfigError("beam config needs at least 2 sectors");
}

void BeamConfig::validateForDirectional() const {
    validate();
    if (sectors % 2 != 0)
        throw ConfigError("directional operation needs an even sector count, got " +
                          std::to_string(sectors));
}

BeamIndex beamOf(const Vec2& from, const Vec2& to, const BeamConfig& cfg) {
    cfg.validate();
    if (from == to) throw DomainError("beam undefined for identical positions");
    const double az = azimuthDeg(from, to);
    int k = static_cast<int>(az / cfg.beamWidthDeg()) + 1;
    if (k > cfg.sectors) k = cfg.sectors;  // guards az==360 rounding
    return BeamIndex{k};
}

BeamIndex oppositeBeam(BeamIndex beam, const BeamConfig& cfg) {
    cfg.validateForDirectional();
    if (beam.value < 1 || beam.value > cfg.sectors)
        throw DomainError("beam index out of range: " + std::to_string(beam.value));
    return BeamIndex{(beam.value - 1 + cfg.sectors / 2) % cfg.sectors + 1};
}

bool covers(const Vec2& observer, BeamIndex active_beam, const Vec2& target,
            const BeamConfig& cfg, double radius) {
    if (observer == target) return false;
    if (distance(observer, target) > radius) return false;
    return beamOf(observer, target, cfg) == active_beam;
}

namespace {

// Secondary conflict of b's sender against a's receiver.
bool senderHitsReceiver(const Transmission& victim, const Transmission& other,
                        const Topology& topo, const BeamConfig& cfg, Mode mode,
                        double interference_radius) {
    const Vec2& rx_pos = topo.position(victim.rx);
    const Vec2& tx_pos = topo.position(other.tx);
    if (mode == Mode::Omni) return distance(tx_pos, rx_pos) <= interference_radius;
    return covers(tx_pos, other.tx_beam, rx_pos, cfg, interference_radius);
}

}  // namespace

bool directionalConflict(const Transmission& a, const Transmission& b, const Topology& topo,
                         const BeamConfig& cfg, Mode mode, double interference_scale) {
    if (a.tx == b.tx || a.tx == b.rx || a.rx == b.tx || a.rx == b.rx) return true;
    const double r = topo.radius() * interference_scale;
    return senderHitsReceiver(a, b, topo, cfg, mode, r) ||
           senderHitsReceiver(b, a, topo, cfg, mode, r);
}

}  // namespace dirtsch
