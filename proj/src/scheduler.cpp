#include "dirtsch/scheduler.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "dirtsch/errors.hpp"

namespace dirtsch {

int TimerPolicy::timerValue(int backlog_packets) const {
    if (backlog_packets < 0) throw DomainError("backlog must be nonnegative");
    if (base_ticks < 1) throw ConfigError("timer base must be at least one tick");
    return std::max(1, base_ticks / (1 + backlog_packets));
}

std::string modeName(NodeMode mode) {
    switch (mode) {
        case NodeMode::Idle: return "idle";
        case NodeMode::Timing: return "timing";
        case NodeMode::Sending: return "sending";
        case NodeMode::Receiving: return "receiving";
    }
    return "?";
}

std::string kindName(MsgKind kind) {
    switch (kind) {
        case MsgKind::Rts: return "RTS";
        case MsgKind::Cts: return "CTS";
        case MsgKind::Nav: return "NAV";
        case MsgKind::Available: return "AVAIL";
        case MsgKind::SchedAdvert: return "ADV";
    }
    return "?";
}

namespace {

std::string cellText(const Cell& c) {
    std::ostringstream os;
    os << c.slot << '/' << c.channel << " n" << c.tx << "->n" << c.rx << " beams=";
    if (c.beams)
        os << c.beams->tx_beam.value << '/' << c.beams->rx_beam.value;
    else
        os << '-';
    return os.str();
}

void notePeer(NodeSchedState& st, NodeId peer, PeerState state, std::uint32_t period) {
    st.peers[peer] = PeerInfo{state, period};
}

// Whether this node may direct an RTS at its parent right now.
bool parentLooksAvailable(const NodeSchedState& st, const NodeContext& ctx) {
    const NodeId parent = ctx.tree->parent(st.id);
    auto it = st.peers.find(parent);
    if (parent == kSinkId) {
        // The sink accepts the first reservation of every period.
        return it == st.peers.end() || it->second.period != ctx.period ||
               it->second.state == PeerState::Open || it->second.state == PeerState::Unknown;
    }
    if (it == st.peers.end()) return false;
    if (it->second.period == ctx.period) return it->second.state == PeerState::Open;
    // Stale knowledge: only a standing invitation counts.
    return it->second.state == PeerState::Open;
}

Transition loserPath(NodeSchedState st, const NodeContext& ctx) {
    Transition tr;
    if (!ctx.tree->children(st.id).empty()) {
        st.mode = NodeMode::Receiving;
        tr.out.push_back(SchedMessage{MsgKind::Available, st.id, std::nullopt, {}, {}});
    } else {
        st.mode = NodeMode::Idle;
    }
    tr.state = std::move(st);
    return tr;
}

}  // namespace

Transition onTimerExpiry(const NodeSchedState& state, const NodeContext& ctx) {
    NodeSchedState st = state;
    if (st.mode != NodeMode::Timing || st.reserved || st.level <= 0) {
        // Resolved earlier in the period (granted a child, or confirmed).
        Transition tr;
        tr.state = std::move(st);
        return tr;
    }
    if (ctx.backlog_packets <= 0) return loserPath(std::move(st), ctx);
    if (!parentLooksAvailable(st, ctx)) return loserPath(std::move(st), ctx);

    const NodeId parent = ctx.tree->parent(st.id);
    auto proposal = st.table.firstFit(st.id, parent, *ctx.topo, *ctx.beams);
    if (!proposal) {
        Transition tr = loserPath(std::move(st), ctx);
        tr.notes.push_back("n" + std::to_string(state.id) +
                           " found no free cell toward its parent");
        return tr;
    }
    Transition tr;
    SchedMessage rts{MsgKind::Rts, st.id, parent, {*proposal}, {}};
    rts.busy.insert(rts.busy.end(), st.table.cells().begin(), st.table.cells().end());
    rts.busy.insert(rts.busy.end(), st.table.foreignCells().begin(),
                    st.table.foreignCells().end());
    tr.out.push_back(std::move(rts));
    tr.state = std::move(st);  // stays Timing until the grant is heard
    return tr;
}

Transition handleMessage(const NodeSchedState& state, const SchedMessage& msg,
                         const NodeContext& ctx) {
    NodeSchedState st = state;
    Transition tr;

    switch (msg.kind) {
        case MsgKind::Rts: {
            if (!msg.dst || *msg.dst != st.id) break;  // unicast for someone else
            if (msg.cells.empty() || msg.src == kSinkId) {
                tr.notes.push_back("dropped malformed RTS from n" + std::to_string(msg.src));
                break;
            }
            if (ctx.tree->parent(msg.src) != st.id) {
                tr.notes.push_back("dropped RTS from non-child n" + std::to_string(msg.src));
                break;
            }
            if (st.mode == NodeMode::Sending || st.reserved || st.granted_child) {
                tr.notes.push_back("n" + std::to_string(st.id) + " busy, RTS from n" +
                                   std::to_string(msg.src) + " unanswered");
                break;
            }
            auto grant = st.table.firstFit(msg.src, st.id, *ctx.topo, *ctx.beams, msg.busy);
            if (!grant) {
                tr.notes.push_back("n" + std::to_string(st.id) +
                                   " exhausted the slotframe for n" + std::to_string(msg.src));
                break;
            }
            st.table.allocate(*grant, *ctx.topo, *ctx.beams);
            st.granted_child = true;
            st.mode = NodeMode::Receiving;
            tr.out.push_back(SchedMessage{MsgKind::Cts, st.id, std::nullopt, {*grant}, {}});
            break;
        }
        case MsgKind::Cts: {
            if (msg.cells.empty()) {
                tr.notes.push_back("dropped malformed CTS from n" + std::to_string(msg.src));
                break;
            }
            const Cell& cell = msg.cells.front();
            notePeer(st, msg.src, PeerState::Granted, ctx.period);
            notePeer(st, cell.tx, PeerState::Sending, ctx.period);
            if (cell.tx == st.id) {
                if (st.reserved) {
                    tr.notes.push_back("n" + std::to_string(st.id) +
                                       " already reserved, extra CTS ignored");
                    break;
                }
                st.reserved = true;
                st.mode = NodeMode::Sending;
                st.table.allocate(cell, *ctx.topo, *ctx.beams);
                if (!ctx.tree->children(st.id).empty())
                    tr.out.push_back(SchedMessage{MsgKind::Nav, st.id, std::nullopt, {cell}, {}});
                tr.out.push_back(
                    SchedMessage{MsgKind::SchedAdvert, st.id, std::nullopt, {cell}, {}});
            } else {
                st.table.mergeAdvert({cell}, *ctx.topo, *ctx.beams);
            }
            break;
        }
        case MsgKind::Nav:
        case MsgKind::SchedAdvert: {
            if (msg.cells.empty()) {
                tr.notes.push_back("dropped malformed " + kindName(msg.kind) + " from n" +
                                   std::to_string(msg.src));
                break;
            }
            notePeer(st, msg.src, PeerState::Sending, ctx.period);
            std::set<Cell> cells(msg.cells.begin(), msg.cells.end());
            st.table.mergeAdvert(cells, *ctx.topo, *ctx.beams);
            break;
        }
        case MsgKind::Available: {
            notePeer(st, msg.src, PeerState::Open, ctx.period);
            break;
        }
    }
    tr.state = std::move(st);
    return tr;
}

SchedulingEngine::SchedulingEngine(const Topology& topo, const Tree& tree, Mode mode,
                                   TimerPolicy policy, BeamConfig beams, ScheduleParams params,
                                   double control_loss_rate, std::uint64_t loss_seed)
    : topo_(topo),
      tree_(tree),
      mode_(mode),
      policy_(policy),
      beams_(beams),
      params_(params),
      control_loss_rate_(control_loss_rate),
      loss_rng_(loss_seed) {
    params_.validate();
    if (control_loss_rate_ < 0.0 || control_loss_rate_ > 1.0)
        throw ConfigError("control loss rate must lie in [0, 1]");
    if (mode_ == Mode::Directional)
        beams_.validateForDirectional();
    else
        beams_.validate();
    if (policy_.base_ticks < 1) throw ConfigError("timer base must be at least one tick");
    for (NodeId id = 0; id < topo_.size(); ++id) {
        NodeSchedState st;
        st.id = id;
        st.level = tree_.level(id);
        st.table = Schedule(mode_, params_);
        states_.emplace(id, std::move(st));
    }
}

struct SchedulingEngine::Runtime {
    SchedulingEngine& eng;
    const std::map<NodeId, int>& backlog;
    SchedulingResult& result;
    int sched_slot = 0;
    int tick = 0;

    NodeContext contextFor(NodeId id) const {
        auto it = backlog.find(id);
        return NodeContext{&eng.topo_, &eng.tree_, &eng.beams_, eng.mode_, eng.period_,
                           it == backlog.end() ? 0 : it->second};
    }

    void log(const std::string& text) {
        std::ostringstream os;
        os << 's' << sched_slot << " t" << tick << ' ' << text;
        result.trace.push_back(os.str());
    }

    void logMessage(const SchedMessage& msg) {
        std::ostringstream os;
        os << kindName(msg.kind) << " n" << msg.src;
        if (msg.dst) os << "->n" << *msg.dst;
        if (msg.kind == MsgKind::Rts)
            os << " want=" << cellText(msg.cells.front());
        else if (msg.kind == MsgKind::Cts)
            os << " grant=" << cellText(msg.cells.front());
        else if (!msg.cells.empty())
            os << " cell=" << cellText(msg.cells.front());
        log(os.str());
    }

    void apply(NodeId id, Transition&& tr) {
        NodeSchedState& st = eng.states_.at(id);
        const NodeMode before = st.mode;
        st = std::move(tr.state);
        if (st.mode != before) log("MODE n" + std::to_string(id) + ' ' + modeName(st.mode));
        for (const std::string& note : tr.notes) result.diagnostics.push_back(note);
        for (const SchedMessage& msg : tr.out) emit(msg);
    }

    bool lost(const SchedMessage& msg, NodeId receiver) {
        if (eng.control_loss_rate_ <= 0.0) return false;
        const double u = static_cast<double>(eng.loss_rng_() >> 11) * 0x1.0p-53;
        if (u >= eng.control_loss_rate_) return false;
        log("LOST " + kindName(msg.kind) + " n" + std::to_string(msg.src) + "->n" +
            std::to_string(receiver));
        return true;
    }

    void emit(const SchedMessage& msg) {
        logMessage(msg);
        // A reservation counts once the winner confirms it (it announces the
        // cell exactly once). Under control loss two confirmed grants can
        // clash; the later one is reported and dropped from the result.
        if (msg.kind == MsgKind::SchedAdvert && !msg.cells.empty()) {
            try {
                result.schedule.allocate(msg.cells.front(), eng.topo_, eng.beams_);
            } catch (const ConflictError& e) {
                result.diagnostics.push_back("confirmed reservation of n" +
                                             std::to_string(msg.src) +
                                             " collides under control loss: " + e.what());
            }
        }
        if (msg.dst) {
            if (eng.topo_.inRange(msg.src, *msg.dst) && !lost(msg, *msg.dst))
                apply(*msg.dst, handleMessage(eng.states_.at(*msg.dst), msg, contextFor(*msg.dst)));
            return;
        }
        for (NodeId r : eng.topo_.neighbors(msg.src)) {
            if (!lost(msg, r))
                apply(r, handleMessage(eng.states_.at(r), msg, contextFor(r)));
        }
    }
};

SchedulingResult SchedulingEngine::runPeriod(const std::map<NodeId, int>& backlog_packets) {
    ++period_;
    SchedulingResult result;
    result.schedule = Schedule(mode_, params_);

    for (auto& [id, st] : states_) {
        st.mode = NodeMode::Idle;
        st.timer = 0;
        st.reserved = false;
        st.granted_child = false;
        st.table = Schedule(mode_, params_);  // cells are rebuilt every period
    }

    Runtime rt{*this, backlog_packets, result};
    for (int slot = 0; slot < 3; ++slot) {
        rt.sched_slot = slot;
        rt.tick = 0;
        // Arm timers of every level mapped to this scheduling slot.
        for (auto& [id, st] : states_) {
            if (st.level <= 0 || (st.level - 1) % 3 != slot) continue;
            if (st.mode != NodeMode::Idle) continue;  // already committed this period
            st.mode = NodeMode::Timing;
            st.timer = policy_.timerValue(rt.contextFor(id).backlog_packets);
            rt.log("TIMER n" + std::to_string(id) + '=' + std::to_string(st.timer));
        }
        for (int tick = 1; tick <= policy_.base_ticks; ++tick) {
            rt.tick = tick;
            // Expiries resolve largest backlog first, then lowest id, so the
            // heaviest contender wins even when the floor collapses timers.
            std::vector<NodeId> firing;
            for (auto& [id, st] : states_) {
                if (st.mode == NodeMode::Timing && (st.level - 1) % 3 == slot &&
                    st.timer == tick)
                    firing.push_back(id);
            }
            std::sort(firing.begin(), firing.end(), [&](NodeId a, NodeId b) {
                const int ba = rt.contextFor(a).backlog_packets;
                const int bb = rt.contextFor(b).backlog_packets;
                if (ba != bb) return ba > bb;
                return a < b;
            });
            for (NodeId id : firing)
                rt.apply(id, onTimerExpiry(states_.at(id), rt.contextFor(id)));
        }
        // Requesters that never heard a grant back fall out of contention.
        for (auto& [id, st] : states_) {
            if (st.mode == NodeMode::Timing && (st.level - 1) % 3 == slot) {
                if (rt.contextFor(id).backlog_packets > 0 && !st.reserved)
                    result.unscheduled.push_back(id);
                st.mode = NodeMode::Idle;
            }
        }
    }

    for (const auto& [id, st] : states_) result.final_modes[id] = st.mode;
    return result;
}

SchedulingResult runSchedulingPeriod(const Topology& topo, const Tree& tree,
                                     const std::map<NodeId, int>& backlog_packets, Mode mode,
                                     const TimerPolicy& policy, const BeamConfig& beams,
                                     const ScheduleParams& params) {
    SchedulingEngine engine(topo, tree, mode, policy, beams, params);
    return engine.runPeriod(backlog_packets);
}

SchedulingResult omniBaseline(const Topology& topo, const Tree& tree,
                              const std::map<NodeId, int>& backlog_packets,
                              const TimerPolicy& policy, const ScheduleParams& params) {
    return runSchedulingPeriod(topo, tree, backlog_packets, Mode::Omni, policy, BeamConfig{},
                               params);
}

}  // namespace dirtsch
