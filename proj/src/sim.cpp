#include "dirtsch/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <numeric>
#include <sstream>

#include "dirtsch/errors.hpp"

namespace dirtsch {

int SimConfig::packetsPerCell() const {
    return static_cast<int>(mac_rate_bps * timeslot_s / (8.0 * packet_size_bytes));
}

void SimConfig::validate() const {
    if (duration_s <= 0.0) throw ConfigError("simulation duration must be positive");
    if (timeslot_s <= 0.0) throw ConfigError("timeslot must be positive");
    if (mac_rate_bps <= 0.0) throw ConfigError("MAC data rate must be positive");
    if (packet_size_bytes < 1) throw ConfigError("packet size must be at least one byte");
    if (buffer_capacity < 1) throw ConfigError("buffer capacity must be at least one packet");
    if (reschedule_period < 1) throw ConfigError("reschedule period must be at least one frame");
    if (traffic.rate_pps < 0.0) throw ConfigError("traffic rate must be nonnegative");
    if (control_loss_rate < 0.0 || control_loss_rate > 1.0)
        throw ConfigError("control loss rate must lie in [0, 1]");
    if (packetsPerCell() < 1)
        throw ConfigError("one timeslot cannot carry a single packet at this rate");
    sched.validate();
    if (mode == Mode::Directional)
        beams.validateForDirectional();
    else
        beams.validate();
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

const char* kindName(EventKind k) {
    switch (k) {
        case EventKind::Gen: return "GEN";
        case EventKind::Hop: return "HOP";
        case EventKind::Deliver: return "DLV";
        case EventKind::Drop: return "DRP";
        case EventKind::Energy: return "NRG";
        case EventKind::Sched: return "SCH";
    }
    return "?";
}

}  // namespace

std::string SimEvent::toLine() const {
    std::ostringstream os;
    os << fmt(t) << ' ' << kindName(kind);
    switch (kind) {
        case EventKind::Gen:
        case EventKind::Drop:
            os << " node=" << a << " pkt=" << packet;
            break;
        case EventKind::Hop:
            os << " slot=" << slot << '/' << channel << " n" << a << "->n" << b
               << " pkt=" << packet;
            if (value != 0.0) os << " bounced";
            break;
        case EventKind::Deliver:
            os << " src=" << a << " pkt=" << packet << " created=" << fmt(created);
            break;
        case EventKind::Energy:
            os << " node=" << a << " j=" << fmt(value);
            break;
        case EventKind::Sched:
            os << " length=" << static_cast<int>(value);
            break;
    }
    return os.str();
}

namespace {

// Single aggregation path shared by the live engine and collectMetrics so the
// two can never drift apart.
class Accumulator {
public:
    Accumulator(const SimConfig& cfg, const Topology& topo) : cfg_(cfg) {
        for (NodeId id = 0; id < topo.size(); ++id) {
            occupancy_[id] = 0;
            peak_[id] = 0;
        }
    }

    void consume(const SimEvent& ev) {
        switch (ev.kind) {
            case EventKind::Gen:
                ++generated_;
                if (ev.value == 0.0) bump(ev.a, +1);
                break;
            case EventKind::Drop:
                ++dropped_;
                break;
            case EventKind::Hop:
                bump(ev.a, -1);
                if (ev.b != kSinkId && ev.value == 0.0) bump(ev.b, +1);
                link_bits_[{ev.a, ev.b}] += 8.0 * cfg_.packet_size_bytes;
                break;
            case EventKind::Deliver:
                ++delivered_;
                delays_.push_back(ev.t - ev.created);
                break;
            case EventKind::Energy:
                energy_[ev.a] += ev.value;
                break;
            case EventKind::Sched:
                ++periods_;
                length_sum_ += ev.value;
                max_length_ = std::max(max_length_, static_cast<int>(ev.value));
                break;
        }
    }

    long generated() const { return generated_; }
    long delivered() const { return delivered_; }
    long dropped() const { return dropped_; }

    MetricsReport finalize(double duration, const Topology& topo, const Tree& tree,
                           const LinkModelParams& link) const {
        MetricsReport r;
        r.mode = cfg_.mode == Mode::Directional ? "directional" : "omni";
        r.seed = cfg_.seed;
        r.duration_s = duration;
        r.generated = generated_;
        r.delivered = delivered_;
        r.dropped = dropped_;
        r.delivery_ratio = generated_ > 0 ? static_cast<double>(delivered_) / generated_ : 0.0;
        r.aggregate_sink_throughput_bps =
            delivered_ * 8.0 * cfg_.packet_size_bytes / duration;
        if (!delays_.empty()) {
            std::vector<double> d = delays_;
            std::sort(d.begin(), d.end());
            r.mean_delay_s = std::accumulate(d.begin(), d.end(), 0.0) / d.size();
            r.p50_delay_s = d[d.size() / 2];
            r.p95_delay_s = d[std::min(d.size() - 1, d.size() * 95 / 100)];
            r.max_delay_s = d.back();
        }
        r.scheduling_periods = periods_;
        r.mean_schedule_length = periods_ > 0 ? length_sum_ / periods_ : 0.0;
        r.max_schedule_length = max_length_;
        for (const auto& [node, joules] : energy_) {
            r.energy_j[node] = joules;
            r.energy_total_j += joules;
        }
        for (const auto& [lk, bits] : link_bits_) r.link_throughput_bps[lk] = bits / duration;
        r.buffer_peak = peak_;

        // Worst-node transfer bounds evaluated at the observed buffer peaks.
        std::map<NodeId, double> peak_bits;
        std::map<NodeId, double> up_rates;
        std::map<NodeId, double> down_rates;
        const double p_tx = dbmToWatts(cfg_.tx_power_dbm);
        for (NodeId id = 0; id < topo.size(); ++id) {
            if (id == kSinkId) continue;
            peak_bits[id] = peak_.at(id) * 8.0 * cfg_.packet_size_bytes;
            const double d = distance(topo.position(id), topo.position(tree.parent(id)));
            up_rates[id] = makeLinkState(link, d, 1.0, p_tx).rate;
            down_rates[id] = cfg_.downlink_rate_bps;
        }
        r.max_uplink_delay_s = maxTransferDelay(peak_bits, up_rates, link.access_time_up);
        r.max_downlink_delay_s = maxTransferDelay(peak_bits, down_rates, link.access_time_down);
        return r;
    }

private:
    void bump(NodeId node, int delta) {
        int& occ = occupancy_[node];
        occ += delta;
        peak_[node] = std::max(peak_[node], occ);
    }

    const SimConfig& cfg_;
    long generated_ = 0;
    long delivered_ = 0;
    long dropped_ = 0;
    std::vector<double> delays_;
    std::map<NodeId, int> occupancy_;
    std::map<NodeId, int> peak_;
    std::map<NodeId, double> energy_;
    std::map<std::pair<NodeId, NodeId>, double> link_bits_;
    int periods_ = 0;
    double length_sum_ = 0.0;
    int max_length_ = 0;
};

// Per-node packet arrival stream, reproducible from the run seed.
class ArrivalStream {
public:
    ArrivalStream(const SimConfig& cfg, NodeId node, int num_nodes)
        : model_(cfg.traffic.model),
          rate_(cfg.traffic.rate_pps),
          rng_(cfg.seed ^ (0x9E3779B97F4A7C15ULL * (node + 1))) {
        if (rate_ <= 0.0) {
            next_ = -1.0;
            return;
        }
        if (model_ == TrafficModel::Cbr) {
            phase_ = node * (1.0 / rate_) / num_nodes;
            next_ = phase_;
        } else {
            next_ = exponential();
        }
    }

    // Next arrival strictly before `limit`, or negative if none.
    double pop(double limit) {
        if (next_ < 0.0 || next_ >= limit) return -1.0;
        const double t = next_;
        if (model_ == TrafficModel::Cbr) {
            ++count_;
            next_ = phase_ + count_ / rate_;
        } else {
            next_ += exponential();
        }
        return t;
    }

private:
    double exponential() {
        const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
        return -std::log1p(-u) / rate_;
    }

    TrafficModel model_;
    double rate_;
    std::mt19937_64 rng_;
    double phase_ = 0.0;
    double next_ = -1.0;
    long count_ = 0;
};

}  // namespace

MetricsReport run(const SimConfig& cfg, const Topology& topo, const Tree& tree,
                  const LinkModelParams& link, const EventSink& sink,
                  std::string* last_schedule_dump) {
    cfg.validate();
    link.validate();
    if (tree.size() != topo.size())
        throw ConfigError("tree does not cover the topology");

    const int frame = cfg.sched.slotframe_length;
    const long total_slots =
        static_cast<long>(std::ceil(cfg.duration_s / cfg.timeslot_s - 1e-9));
    const double sim_duration = total_slots * cfg.timeslot_s;
    const int ppc = cfg.packetsPerCell();
    const double p_tx_w = dbmToWatts(cfg.tx_power_dbm);

    Accumulator acc(cfg, topo);
    auto emit = [&](const SimEvent& ev) {
        acc.consume(ev);
        if (sink) sink(ev);
    };

    std::vector<std::deque<Packet>> buffers(static_cast<std::size_t>(topo.size()));
    std::vector<ArrivalStream> arrivals;
    for (NodeId id = 0; id < topo.size(); ++id) arrivals.emplace_back(cfg, id, topo.size());

    SchedulingEngine scheduler(topo, tree, cfg.mode, cfg.policy, cfg.beams, cfg.sched,
                               cfg.control_loss_rate, cfg.seed ^ 0xA076147A2E3F1B25ULL);
    FadingSampler fading(cfg.seed ^ 0xD1B54A32D192ED03ULL);

    std::vector<Cell> active_cells;  // current schedule, sorted
    int schedule_length = 0;
    long next_packet_id = 0;

    for (long abs_slot = 0; abs_slot < total_slots; ++abs_slot) {
        const double t0 = abs_slot * cfg.timeslot_s;
        const double t1 = (abs_slot + 1) * cfg.timeslot_s;

        if (abs_slot % frame == 0) {
            const long frame_index = abs_slot / frame;
            if (frame_index % cfg.reschedule_period == 0) {
                std::map<NodeId, int> backlog;
                for (NodeId id = 0; id < topo.size(); ++id)
                    backlog[id] = static_cast<int>(buffers[static_cast<std::size_t>(id)].size());
                SchedulingResult res = scheduler.runPeriod(backlog);
                active_cells.assign(res.schedule.cells().begin(), res.schedule.cells().end());
                schedule_length = res.schedule.scheduleLength();
                if (last_schedule_dump) *last_schedule_dump = res.schedule.dump();
                emit({EventKind::Sched, t0, -1, -1, -1, -1, -1,
                      static_cast<double>(schedule_length), 0.0});
            }
        }

        // Arrivals land in this slot's window and are eligible immediately.
        for (NodeId id = 1; id < topo.size(); ++id) {
            auto& buf = buffers[static_cast<std::size_t>(id)];
            for (double at = arrivals[static_cast<std::size_t>(id)].pop(t1); at >= 0.0;
                 at = arrivals[static_cast<std::size_t>(id)].pop(t1)) {
                const long pid = next_packet_id++;
                const bool fits = static_cast<int>(buf.size()) < cfg.buffer_capacity;
                emit({EventKind::Gen, at, id, -1, pid, -1, -1, fits ? 0.0 : 1.0, 0.0});
                if (!fits) {
                    emit({EventKind::Drop, at, id, -1, pid, -1, -1, 0.0, 0.0});
                    continue;
                }
                buf.push_back(Packet{pid, id, at, -1.0, cfg.packet_size_bytes});
            }
        }

        if (schedule_length > 0) {
            const int frame_slot = static_cast<int>(abs_slot % frame);
            for (const Cell& cell : active_cells) {
                if (cell.slot != frame_slot % schedule_length) continue;
                auto& src = buffers[static_cast<std::size_t>(cell.tx)];
                const int moving = std::min<int>(ppc, static_cast<int>(src.size()));
                if (moving == 0) continue;

                const double d = distance(topo.position(cell.tx), topo.position(cell.rx));
                const LinkState channel = makeLinkState(link, d, fading.sample(), p_tx_w);
                const double power = requiredTxPower(cfg.mac_rate_bps, link.bandwidth,
                                                     link.noise_density, channel.gain);
                const double bits = moving * 8.0 * cfg.packet_size_bytes;
                emit({EventKind::Energy, t0, cell.tx, -1, -1, -1, -1,
                      txEnergy(power, bits, cfg.mac_rate_bps), 0.0});

                for (int i = 0; i < moving; ++i) {
                    Packet pkt = src.front();
                    src.pop_front();
                    if (cell.rx == kSinkId) {
                        emit({EventKind::Hop, t0, cell.tx, cell.rx, pkt.id, cell.slot,
                              cell.channel, 0.0, 0.0});
                        pkt.delivered_at = t1;
                        emit({EventKind::Deliver, t1, pkt.source, -1, pkt.id, -1, -1, 0.0,
                              pkt.created_at});
                        continue;
                    }
                    auto& dst = buffers[static_cast<std::size_t>(cell.rx)];
                    const bool fits = static_cast<int>(dst.size()) < cfg.buffer_capacity;
                    emit({EventKind::Hop, t0, cell.tx, cell.rx, pkt.id, cell.slot, cell.channel,
                          fits ? 0.0 : 1.0, 0.0});
                    if (!fits) {
                        emit({EventKind::Drop, t0, cell.rx, -1, pkt.id, -1, -1, 0.0, 0.0});
                        continue;
                    }
                    dst.push_back(pkt);
                }
            }
        }

        if (cfg.idle_energy_per_slot_j > 0.0) {
            for (NodeId id = 0; id < topo.size(); ++id)
                emit({EventKind::Energy, t0, id, -1, -1, -1, -1, cfg.idle_energy_per_slot_j,
                      0.0});
        }

        long buffered = 0;
        for (const auto& buf : buffers) buffered += static_cast<long>(buf.size());
        if (acc.generated() != acc.delivered() + acc.dropped() + buffered)
            throw Error("packet conservation violated at slot " + std::to_string(abs_slot));
    }

    return acc.finalize(sim_duration, topo, tree, link);
}

MetricsReport collectMetrics(const std::vector<SimEvent>& log, const SimConfig& cfg,
                             const Topology& topo, const Tree& tree,
                             const LinkModelParams& link) {
    const long total_slots =
        static_cast<long>(std::ceil(cfg.duration_s / cfg.timeslot_s - 1e-9));
    Accumulator acc(cfg, topo);
    for (const SimEvent& ev : log) acc.consume(ev);
    return acc.finalize(total_slots * cfg.timeslot_s, topo, tree, link);
}

std::string MetricsReport::toText() const {
    std::ostringstream os;
    os << "mode=" << mode << '\n';
    os << "seed=" << seed << '\n';
    os << "duration_s=" << fmt(duration_s) << '\n';
    os << "packets_generated=" << generated << '\n';
    os << "packets_delivered=" << delivered << '\n';
    os << "packets_dropped=" << dropped << '\n';
    os << "delivery_ratio=" << fmt(delivery_ratio) << '\n';
    os << "aggregate_sink_throughput_bps=" << fmt(aggregate_sink_throughput_bps) << '\n';
    os << "mean_end_to_end_delay_s=" << fmt(mean_delay_s) << '\n';
    os << "p50_delay_s=" << fmt(p50_delay_s) << '\n';
    os << "p95_delay_s=" << fmt(p95_delay_s) << '\n';
    os << "max_delay_s=" << fmt(max_delay_s) << '\n';
    os << "max_uplink_delay_s=" << fmt(max_uplink_delay_s) << '\n';
    os << "max_downlink_delay_s=" << fmt(max_downlink_delay_s) << '\n';
    os << "schedule_length_mean=" << fmt(mean_schedule_length) << '\n';
    os << "schedule_length_max=" << max_schedule_length << '\n';
    os << "scheduling_periods=" << scheduling_periods << '\n';
    os << "energy_total_j=" << fmt(energy_total_j) << '\n';
    for (const auto& [node, joules] : energy_j)
        os << "energy_n" << node << "_j=" << fmt(joules) << '\n';
    for (const auto& [lk, bps] : link_throughput_bps)
        os << "link_throughput_n" << lk.first << "_n" << lk.second << "_bps=" << fmt(bps)
           << '\n';
    for (const auto& [node, peak] : buffer_peak)
        os << "buffer_peak_n" << node << '=' << peak << '\n';
    return os.str();
}

std::string MetricsReport::toTable() const {
    std::ostringstream os;
    auto row = [&os](const std::string& k, const std::string& v) {
        os << "  " << k;
        for (std::size_t i = k.size(); i < 34; ++i) os << ' ';
        os << v << '\n';
    };
    row("mode", mode);
    row("packets generated", std::to_string(generated));
    row("packets delivered", std::to_string(delivered));
    row("packets dropped", std::to_string(dropped));
    row("delivery ratio", fmt(delivery_ratio));
    row("sink throughput (bit/s)", fmt(aggregate_sink_throughput_bps));
    row("mean end-to-end delay (s)", fmt(mean_delay_s));
    row("p95 end-to-end delay (s)", fmt(p95_delay_s));
    row("schedule length (mean)", fmt(mean_schedule_length));
    row("schedule length (max)", std::to_string(max_schedule_length));
    row("energy total (J)", fmt(energy_total_j));
    return os.str();
}

}  // namespace dirtsch
