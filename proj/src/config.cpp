#include "dirtsch/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "dirtsch/errors.hpp"

namespace dirtsch {

namespace {

double toDouble(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ParseError("key '" + key + "': '" + value + "' is not a number");
    }
}

long toLong(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        long v = std::stol(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ParseError("key '" + key + "': '" + value + "' is not an integer");
    }
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
    if (key == "area_w_m") topo.area_w = toDouble(key, value);
    else if (key == "area_h_m") topo.area_h = toDouble(key, value);
    else if (key == "area_m") topo.area_w = topo.area_h = toDouble(key, value);
    else if (key == "nodes") topo.num_nodes = static_cast<int>(toLong(key, value));
    else if (key == "radius_m") topo.radius = toDouble(key, value);
    else if (key == "seed") sim.seed = static_cast<std::uint64_t>(toLong(key, value));
    else if (key == "sink_x_m") topo.sink_pos.x = toDouble(key, value);
    else if (key == "sink_y_m") topo.sink_pos.y = toDouble(key, value);
    else if (key == "topology_file") topology_file = value;
    else if (key == "tx_power_dbm") sim.tx_power_dbm = toDouble(key, value);
    else if (key == "rx_threshold_dbm") rx_threshold_dbm = toDouble(key, value);
    else if (key == "sense_threshold_dbm") sense_threshold_dbm = toDouble(key, value);
    else if (key == "noise_dbm_per_hz") link.noise_density = dbmToWatts(toDouble(key, value));
    else if (key == "bandwidth_hz") link.bandwidth = toDouble(key, value);
    else if (key == "path_loss_exp") link.path_loss_exp = toDouble(key, value);
    else if (key == "path_loss_ref") link.path_loss_ref = toDouble(key, value);
    else if (key == "ber") link.ber = toDouble(key, value);
    else if (key == "access_time_up_s") link.access_time_up = toDouble(key, value);
    else if (key == "access_time_down_s") link.access_time_down = toDouble(key, value);
    else if (key == "data_rate_bps") sim.mac_rate_bps = toDouble(key, value);
    else if (key == "packet_size_bytes") sim.packet_size_bytes = static_cast<int>(toLong(key, value));
    else if (key == "timeslot_s") sim.timeslot_s = toDouble(key, value);
    else if (key == "slotframe_slots") sim.sched.slotframe_length = static_cast<int>(toLong(key, value));
    else if (key == "channels") sim.sched.num_channels = static_cast<int>(toLong(key, value));
    else if (key == "beams") sim.beams.sectors = static_cast<int>(toLong(key, value));
    else if (key == "timer_base_ticks") sim.policy.base_ticks = static_cast<int>(toLong(key, value));
    else if (key == "sim_time_s") sim.duration_s = toDouble(key, value);
    else if (key == "traffic_model") {
        if (value == "cbr") sim.traffic.model = TrafficModel::Cbr;
        else if (value == "poisson") sim.traffic.model = TrafficModel::Poisson;
        else throw ParseError("key 'traffic_model': expected cbr or poisson, got '" + value + "'");
    }
    else if (key == "traffic_pps") sim.traffic.rate_pps = toDouble(key, value);
    else if (key == "buffer_packets") sim.buffer_capacity = static_cast<int>(toLong(key, value));
    else if (key == "reschedule_frames") sim.reschedule_period = static_cast<int>(toLong(key, value));
    else if (key == "idle_energy_per_slot_j") sim.idle_energy_per_slot_j = toDouble(key, value);
    else if (key == "downlink_rate_bps") sim.downlink_rate_bps = toDouble(key, value);
    else if (key == "control_loss_rate") sim.control_loss_rate = toDouble(key, value);
    else if (key == "mode") {
        if (value == "directional") sim.mode = Mode::Directional;
        else if (value == "omni") sim.mode = Mode::Omni;
        else throw ParseError("key 'mode': expected directional or omni, got '" + value + "'");
    }
    else throw ParseError("unknown config key '" + key + "'");
}

void RunConfig::finalize() {
    topo.seed = sim.seed;
    if (topo.radius == 0.0) {
        // Link-budget radius: largest distance still above the receive threshold.
        const double ratio = dbmToWatts(sim.tx_power_dbm) * link.path_loss_ref /
                             dbmToWatts(rx_threshold_dbm);
        if (ratio <= 0.0) throw ConfigError("thresholds give no positive radius");
        topo.radius = std::pow(ratio, 1.0 / link.path_loss_exp);
    }
    if (!topology_file.empty()) {
        topo.placement = Placement::Fixed;
        topo.fixed_positions = loadTopologyFile(topology_file);
        topo.num_nodes = static_cast<int>(topo.fixed_positions.size());
    }
}

RunConfig parseConfig(std::istream& in, const std::string& source_name) {
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string text = trim(line.substr(0, line.find('#')));
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw ParseError(source_name + ":" + std::to_string(lineno) +
                             ": expected key=value, got '" + text + "'");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        try {
            cfg.set(key, value);
        } catch (const ParseError& e) {
            throw ParseError(source_name + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

RunConfig loadConfigFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parseConfig(in, path);
}

std::vector<Vec2> loadTopologyFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open topology file '" + path + "'");
    std::map<int, Vec2> by_id;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string text = trim(line.substr(0, line.find('#')));
        if (text.empty()) continue;
        std::istringstream ls(text);
        int id = -1;
        double x = 0, y = 0;
        if (!(ls >> id >> x >> y) || id < 0)
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": expected 'id x y', got '" + text + "'");
        if (!by_id.emplace(id, Vec2{x, y}).second)
            throw ParseError(path + ":" + std::to_string(lineno) + ": duplicate node id");
    }
    std::vector<Vec2> out;
    for (int i = 0; i < static_cast<int>(by_id.size()); ++i) {
        auto it = by_id.find(i);
        if (it == by_id.end())
            throw ParseError(path + ": node ids must cover 0.." +
                             std::to_string(by_id.size() - 1));
        out.push_back(it->second);
    }
    if (out.empty()) throw ParseError(path + ": no nodes given");
    return out;
}

}  // namespace dirtsch
