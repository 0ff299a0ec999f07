#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dirtsch/schedule.hpp"
#include "dirtsch/topology.hpp"

namespace dirtsch {

// Contention timer: nodes with more buffered packets fire earlier.
struct TimerPolicy {
    int base_ticks = 64;

    int timerValue(int backlog_packets) const;
};

enum class NodeMode { Idle, Timing, Sending, Receiving };

std::string modeName(NodeMode mode);

enum class MsgKind { Rts, Cts, Nav, Available, SchedAdvert };

std::string kindName(MsgKind kind);

struct SchedMessage {
    MsgKind kind = MsgKind::Rts;
    NodeId src = 0;
    std::optional<NodeId> dst;   // empty: broadcast to everyone in range
    std::vector<Cell> cells;     // RTS: proposed cell; CTS: granted cell; NAV/advert: owned cells
    std::vector<Cell> busy;      // RTS only: requester's known occupancy constraints
};

// What a node believes about a neighbour's role, stamped with the period the
// belief was formed in. A stale Open entry is still treated as an invitation,
// which is what lets levels deeper than 3 reserve across periods.
enum class PeerState { Unknown, Open, Granted, Sending };

struct PeerInfo {
    PeerState state = PeerState::Unknown;
    std::uint32_t period = 0;
};

struct NodeSchedState {
    NodeId id = 0;
    int level = 0;
    NodeMode mode = NodeMode::Idle;
    int timer = 0;               // micro-tick at which the timer fires; 0 = not armed
    bool reserved = false;       // holds a confirmed uplink cell this period
    bool granted_child = false;  // already accepted one child reservation this period
    std::map<NodeId, PeerInfo> peers;
    Schedule table;              // own cells plus merged neighbour constraints
};

// Read-only per-node view handed to the transition functions. Positions come
// from the topology (every node knows locations); everything else a node acts
// on must arrive through messages.
struct NodeContext {
    const Topology* topo = nullptr;
    const Tree* tree = nullptr;
    const BeamConfig* beams = nullptr;
    Mode mode = Mode::Directional;
    std::uint32_t period = 0;
    int backlog_packets = 0;
};

struct Transition {
    NodeSchedState state;
    std::vector<SchedMessage> out;
    std::vector<std::string> notes;  // dropped/ignored message diagnostics
};

// Pure transitions: same (state, input, context) always gives the same result.
Transition onTimerExpiry(const NodeSchedState& state, const NodeContext& ctx);
Transition handleMessage(const NodeSchedState& state, const SchedMessage& msg,
                         const NodeContext& ctx);

struct SchedulingResult {
    Schedule schedule;               // union of all confirmed cells
    std::vector<std::string> trace;  // stable text, one event per line
    std::vector<std::string> diagnostics;
    std::vector<NodeId> unscheduled;  // had backlog, requested, but got no cell
    std::map<NodeId, NodeMode> final_modes;
};

// Drives the synchronous scheduling period: three TDMA scheduling slots, level
// l contending in slot (l-1) mod 3, timers inside a slot resolved on a
// micro-tick grid. Keeps per-node peer knowledge across periods so deeper
// levels can use availability learned in the previous period.
// control_loss_rate drops each delivered message copy with that probability
// (seeded, for experiments; the protocol assumes lossless control at 0).
class SchedulingEngine {
public:
    SchedulingEngine(const Topology& topo, const Tree& tree, Mode mode, TimerPolicy policy,
                     BeamConfig beams, ScheduleParams params, double control_loss_rate = 0.0,
                     std::uint64_t loss_seed = 0);

    SchedulingResult runPeriod(const std::map<NodeId, int>& backlog_packets);

    std::uint32_t period() const { return period_; }

private:
    struct Runtime;

    const Topology& topo_;
    const Tree& tree_;
    Mode mode_;
    TimerPolicy policy_;
    BeamConfig beams_;
    ScheduleParams params_;
    double control_loss_rate_;
    std::mt19937_64 loss_rng_;
    std::uint32_t period_ = 0;
    std::map<NodeId, NodeSchedState> states_;
};

// One-shot scheduling period starting from blank node state.
SchedulingResult runSchedulingPeriod(const Topology& topo, const Tree& tree,
                                     const std::map<NodeId, int>& backlog_packets, Mode mode,
                                     const TimerPolicy& policy, const BeamConfig& beams,
                                     const ScheduleParams& params);

// Same engine with the omni interference predicate.
SchedulingResult omniBaseline(const Topology& topo, const Tree& tree,
                              const std::map<NodeId, int>& backlog_packets,
                              const TimerPolicy& policy, const ScheduleParams& params);

}  // namespace dirtsch
