#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dirtsch/link_model.hpp"
#include "dirtsch/scheduler.hpp"

namespace dirtsch {

enum class TrafficModel { Cbr, Poisson };

struct TrafficConfig {
    TrafficModel model = TrafficModel::Cbr;
    double rate_pps = 60.0;  // packets per second per source node
};

struct SimConfig {
    double duration_s = 300.0;
    double timeslot_s = 0.010;
    double mac_rate_bps = 2e6;
    int packet_size_bytes = 127;
    TrafficConfig traffic;
    int buffer_capacity = 512;  // packets per node
    std::uint64_t seed = 1;
    Mode mode = Mode::Directional;
    int reschedule_period = 1;  // slotframes between scheduling periods
    double idle_energy_per_slot_j = 0.0;
    double tx_power_dbm = 15.0;        // drives the analytic uplink rate
    double downlink_rate_bps = 2e6;    // rd for the analytic downlink delay
    double control_loss_rate = 0.0;    // scheduling-message loss, experiments only
    ScheduleParams sched;
    BeamConfig beams;
    TimerPolicy policy;

    int packetsPerCell() const;  // packets one cell activation can move
    void validate() const;
};

struct Packet {
    long id = 0;
    NodeId source = 0;
    double created_at = 0.0;
    double delivered_at = -1.0;  // unset until sink arrival
    int size_bytes = 127;
};

enum class EventKind { Gen, Hop, Deliver, Drop, Energy, Sched };

struct SimEvent {
    EventKind kind = EventKind::Gen;
    double t = 0.0;
    NodeId a = -1;       // Gen/Drop/Energy: node; Hop: tx; Deliver: packet source
    NodeId b = -1;       // Hop: rx
    long packet = -1;
    int slot = -1;       // Hop: cell coordinates
    int channel = -1;
    double value = 0.0;    // Energy: joules; Sched: schedule length;
                           // Gen/Hop: 1 when the destination rejected the packet
    double created = 0.0;  // Deliver: packet creation time

    std::string toLine() const;
};

using EventSink = std::function<void(const SimEvent&)>;

struct MetricsReport {
    std::string mode;
    std::uint64_t seed = 0;
    double duration_s = 0.0;
    long generated = 0;
    long delivered = 0;
    long dropped = 0;
    double delivery_ratio = 0.0;
    double aggregate_sink_throughput_bps = 0.0;  // delivered bits / duration, exactly
    double mean_delay_s = 0.0;
    double p50_delay_s = 0.0;
    double p95_delay_s = 0.0;
    double max_delay_s = 0.0;
    double max_uplink_delay_s = 0.0;    // backlog-peak transfer bound, uplink rates
    double max_downlink_delay_s = 0.0;  // same with the configured downlink rate
    double mean_schedule_length = 0.0;
    int max_schedule_length = 0;
    int scheduling_periods = 0;
    double energy_total_j = 0.0;
    std::map<NodeId, double> energy_j;
    std::map<std::pair<NodeId, NodeId>, double> link_throughput_bps;
    std::map<NodeId, int> buffer_peak;

    std::string toText() const;   // key=value lines
    std::string toTable() const;  // aligned two-column summary
};

// Slot-stepped convergecast simulation: alternates scheduling periods with
// data slotframes, moves packets along tree parents through the scheduled
// cells, and accounts transmit energy per activation. When given,
// last_schedule_dump receives the final period's cell list in dump format.
MetricsReport run(const SimConfig& cfg, const Topology& topo, const Tree& tree,
                  const LinkModelParams& link, const EventSink& sink = nullptr,
                  std::string* last_schedule_dump = nullptr);

// Rebuilds a full report from an event log. Pure; the incremental report the
// engine produces must match this one on the same run.
MetricsReport collectMetrics(const std::vector<SimEvent>& log, const SimConfig& cfg,
                             const Topology& topo, const Tree& tree,
                             const LinkModelParams& link);

}  // namespace dirtsch
