#include "dirtsch/schedule.hpp"

#include <algorithm>
#include <sstream>

namespace dirtsch {

void ScheduleParams::validate() const {
    if (slotframe_length < 1) throw ConfigError("slotframe needs at least one slot");
    if (num_channels < 1) throw ConfigError("need at least one channel offset");
}

void Schedule::validateCell(const Cell& cell, const Topology& topo, const BeamConfig& cfg) const {
    if (cell.slot < 0 || cell.slot >= params_.slotframe_length)
        throw ConfigError("cell slot outside the slotframe");
    if (cell.channel < 0 || cell.channel >= params_.num_channels)
        throw ConfigError("cell channel offset out of range");
    if (cell.tx == cell.rx) throw ConfigError("cell endpoints must differ");
    if (!topo.contains(cell.tx) || !topo.contains(cell.rx))
        throw LookupError("cell endpoint not in topology");
    if (mode_ == Mode::Directional) {
        if (!cell.beams) throw ConfigError("directional cell needs beam indices");
        if (cfg.sectors % 2 == 0 &&
            cell.beams->rx_beam != oppositeBeam(cell.beams->tx_beam, cfg))
            throw ConfigError("receive beam must face the transmit beam");
    } else if (cell.beams) {
        throw ConfigError("omni cell must not carry beam indices");
    }
}

std::optional<Conflict> Schedule::conflictBetween(const Cell& candidate, const Cell& existing,
                                                  bool foreign, const Topology& topo,
                                                  const BeamConfig& cfg) const {
    if (existing.slot != candidate.slot) return std::nullopt;
    const Transmission a = candidate.transmission();
    const Transmission b = existing.transmission();
    // A half-duplex node cannot appear in two cells of the same slot,
    // whatever the channels.
    if (a.tx == b.tx || a.tx == b.rx || a.rx == b.tx || a.rx == b.rx)
        return Conflict{ConflictKind::Primary, existing, foreign};
    if (existing.channel != candidate.channel) return std::nullopt;
    if (directionalConflict(a, b, topo, cfg, mode_)) {
        return Conflict{mode_ == Mode::Omni ? ConflictKind::SecondaryOmni
                                            : ConflictKind::SecondaryDirectional,
                        existing, foreign};
    }
    return std::nullopt;
}

std::vector<Conflict> Schedule::conflicts(const Cell& candidate, const Topology& topo,
                                          const BeamConfig& cfg) const {
    validateCell(candidate, topo, cfg);
    std::vector<Conflict> out;
    for (const Cell& c : cells_) {
        if (auto conf = conflictBetween(candidate, c, false, topo, cfg)) out.push_back(*conf);
    }
    for (const Cell& c : foreign_) {
        if (auto conf = conflictBetween(candidate, c, true, topo, cfg)) out.push_back(*conf);
    }
    return out;
}

void Schedule::allocate(const Cell& candidate, const Topology& topo, const BeamConfig& cfg) {
    auto confs = conflicts(candidate, topo, cfg);
    if (!confs.empty()) {
        std::ostringstream os;
        os << "cell (" << candidate.slot << ',' << candidate.channel << ") " << candidate.tx
           << "->" << candidate.rx << " rejected: " << confs.size() << " conflict(s)";
        throw ConflictError(os.str(), std::move(confs));
    }
    cells_.insert(candidate);
}

void Schedule::deallocate(const Cell& cell) {
    auto it = cells_.find(cell);
    if (it == cells_.end()) throw LookupError("cell not present in schedule");
    cells_.erase(it);
}

void Schedule::mergeAdvert(const std::set<Cell>& advert, const Topology& topo,
                           const BeamConfig& cfg) {
    for (const Cell& c : advert) {
        validateCell(c, topo, cfg);
        if (cells_.count(c)) continue;  // already own this one
        auto [it, inserted] = foreign_.insert(c);
        if (!inserted) continue;
        for (const Cell& own : cells_) {
            if (conflictBetween(c, own, false, topo, cfg)) {
                std::ostringstream os;
                os << "advertised cell (" << c.slot << ',' << c.channel << ") " << c.tx << "->"
                   << c.rx << " clashes with owned cell (" << own.slot << ',' << own.channel
                   << ") " << own.tx << "->" << own.rx;
                diagnostics_.push_back(os.str());
            }
        }
    }
}

std::optional<Cell> Schedule::firstFit(NodeId tx, NodeId rx, const Topology& topo,
                                       const BeamConfig& cfg,
                                       const std::vector<Cell>& extra_busy) const {
    std::optional<BeamPair> beams;
    if (mode_ == Mode::Directional) {
        const BeamIndex fwd = beamOf(topo.position(tx), topo.position(rx), cfg);
        beams = BeamPair{fwd, oppositeBeam(fwd, cfg)};
    }
    for (int slot = 0; slot < params_.slotframe_length; ++slot) {
        for (int ch = 0; ch < params_.num_channels; ++ch) {
            Cell cand{slot, ch, tx, rx, beams};
            if (!conflicts(cand, topo, cfg).empty()) continue;
            bool clear = true;
            for (const Cell& busy : extra_busy) {
                if (busy == cand || conflictBetween(cand, busy, true, topo, cfg)) {
                    clear = false;
                    break;
                }
            }
            if (clear) return cand;
        }
    }
    return std::nullopt;
}

int Schedule::scheduleLength() const {
    int max_slot = -1;
    for (const Cell& c : cells_) max_slot = std::max(max_slot, c.slot);
    return max_slot + 1;
}

ChannelMatrix Schedule::channelMatrix() const {
    ChannelMatrix m;
    auto mark = [&m](const Cell& c) {
        m.entries[c.tx][{c.slot, c.channel}] = 'T';
        m.entries[c.rx][{c.slot, c.channel}] = 'R';
    };
    for (const Cell& c : cells_) mark(c);
    for (const Cell& c : foreign_) mark(c);
    return m;
}

DirectionalMatrix Schedule::directionalMatrix() const {
    DirectionalMatrix m;
    auto mark = [&m](const Cell& c) {
        if (!c.beams) return;
        m.entries[{c.tx, c.rx}] = c.beams->tx_beam;
        m.entries[{c.rx, c.tx}] = c.beams->rx_beam;
    };
    for (const Cell& c : cells_) mark(c);
    for (const Cell& c : foreign_) mark(c);
    return m;
}

std::string Schedule::dump() const {
    std::ostringstream os;
    for (const Cell& c : cells_) {
        os << c.slot << ',' << c.channel << ',' << c.tx << ',' << c.rx << ',';
        if (c.beams)
            os << c.beams->tx_beam.value << ',' << c.beams->rx_beam.value;
        else
            os << "-,-";
        os << '\n';
    }
    return os.str();
}

std::vector<std::string> findScheduleViolations(const Schedule& sched, const Topology& topo,
                                                const BeamConfig& cfg) {
    std::vector<std::string> out;
    const auto& cells = sched.cells();
    for (auto it = cells.begin(); it != cells.end(); ++it) {
        for (auto jt = std::next(it); jt != cells.end(); ++jt) {
            if (it->slot != jt->slot) continue;
            const Transmission a = it->transmission();
            const Transmission b = jt->transmission();
            const bool shared =
                a.tx == b.tx || a.tx == b.rx || a.rx == b.tx || a.rx == b.rx;
            const bool same_channel = it->channel == jt->channel;
            if (shared ||
                (same_channel && directionalConflict(a, b, topo, cfg, sched.mode()))) {
                std::ostringstream os;
                os << "cells (" << it->slot << ',' << it->channel << ") " << it->tx << "->"
                   << it->rx << " and (" << jt->slot << ',' << jt->channel << ") " << jt->tx
                   << "->" << jt->rx << " cannot coexist";
                out.push_back(os.str());
            }
        }
    }
    return out;
}

}  // namespace dirtsch
