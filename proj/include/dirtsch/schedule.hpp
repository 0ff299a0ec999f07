#pragma once

#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "dirtsch/antenna.hpp"
#include "dirtsch/errors.hpp"
#include "dirtsch/topology.hpp"

namespace dirtsch {

struct BeamPair {
    BeamIndex tx_beam{1};
    BeamIndex rx_beam{1};

    bool operator==(const BeamPair&) const = default;
};

// One (timeslot, channel offset) communication opportunity on a link.
// Beams are absent in omni mode.
struct Cell {
    int slot = 0;
    int channel = 0;
    NodeId tx = 0;
    NodeId rx = 0;
    std::optional<BeamPair> beams;

    Transmission transmission() const {
        Transmission t{tx, rx};
        if (beams) {
            t.tx_beam = beams->tx_beam;
            t.rx_beam = beams->rx_beam;
        }
        return t;
    }

    auto key() const { return std::tuple(slot, channel, tx, rx); }
    bool operator<(const Cell& o) const { return key() < o.key(); }
    bool operator==(const Cell& o) const { return key() == o.key(); }
};

enum class ConflictKind { Primary, SecondaryOmni, SecondaryDirectional };

struct Conflict {
    ConflictKind kind;
    Cell existing;
    bool foreign = false;
};

// Rejection of a cell that cannot coexist with the current schedule.
class ConflictError : public Error {
public:
    ConflictError(std::string what, std::vector<Conflict> conflicts)
        : Error(std::move(what)), conflicts(std::move(conflicts)) {}

    std::vector<Conflict> conflicts;
};

struct ScheduleParams {
    int slotframe_length = 16;
    int num_channels = 16;

    void validate() const;
};

// Node-channel occupancy: which cells a node uses, on which channel, and in
// which role. Derived from the cell set.
struct ChannelMatrix {
    // node -> (slot, channel) -> 'T' or 'R'
    std::map<NodeId, std::map<std::pair<int, int>, char>> entries;

    bool operator==(const ChannelMatrix&) const = default;
};

// Active-beam bookkeeping per node pair during scheduled cells. Derived from
// the cell set; empty in omni mode.
struct DirectionalMatrix {
    std::map<std::pair<NodeId, NodeId>, BeamIndex> entries;

    bool operator==(const DirectionalMatrix&) const = default;
};

// Cell allocation state of one node (or the network union): owned cells plus
// foreign cells merged from neighbour adverts, which act as occupancy
// constraints but cannot be deallocated locally.
class Schedule {
public:
    Schedule() = default;
    Schedule(Mode mode, ScheduleParams params) : mode_(mode), params_(params) {
        params_.validate();
    }

    Mode mode() const { return mode_; }
    const ScheduleParams& params() const { return params_; }
    const std::set<Cell>& cells() const { return cells_; }
    const std::set<Cell>& foreignCells() const { return foreign_; }
    const std::vector<std::string>& diagnostics() const { return diagnostics_; }

    // Conflicts of the candidate against every known (owned or foreign) cell
    // in its slot. Empty result means the candidate can coexist.
    std::vector<Conflict> conflicts(const Cell& candidate, const Topology& topo,
                                    const BeamConfig& cfg) const;

    void allocate(const Cell& candidate, const Topology& topo, const BeamConfig& cfg);
    void deallocate(const Cell& cell);

    // Record another node's advertised cells as constraints. Idempotent;
    // foreign information clashing with owned cells is surfaced through
    // diagnostics() rather than thrown.
    void mergeAdvert(const std::set<Cell>& advert, const Topology& topo, const BeamConfig& cfg);

    // Earliest (slot, channel) where the link fits, scanning slots outward so
    // the schedule stays short. extra_busy carries a peer's known cells during
    // a reservation handshake.
    std::optional<Cell> firstFit(NodeId tx, NodeId rx, const Topology& topo,
                                 const BeamConfig& cfg,
                                 const std::vector<Cell>& extra_busy = {}) const;

    // 1 + highest owned slot index; 0 when no cells are owned.
    int scheduleLength() const;

    ChannelMatrix channelMatrix() const;
    DirectionalMatrix directionalMatrix() const;

    // One line per owned cell: "slot,channel,tx,rx,tx_beam,rx_beam"
    // (beams print as "-" in omni mode).
    std::string dump() const;

    void validateCell(const Cell& cell, const Topology& topo, const BeamConfig& cfg) const;

private:
    std::optional<Conflict> conflictBetween(const Cell& candidate, const Cell& existing,
                                            bool foreign, const Topology& topo,
                                            const BeamConfig& cfg) const;

    Mode mode_ = Mode::Directional;
    ScheduleParams params_{};
    std::set<Cell> cells_;
    std::set<Cell> foreign_;
    std::vector<std::string> diagnostics_;
};

// Sanity checker used by tests and the acceptance suite: every owned cell
// pair must satisfy the mode's conflict predicate.
std::vector<std::string> findScheduleViolations(const Schedule& sched, const Topology& topo,
                                                const BeamConfig& cfg);

}  // namespace dirtsch
