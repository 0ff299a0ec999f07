#include "dirtsch/link_model.hpp"

#include <cmath>

#include "dirtsch/errors.hpp"

namespace dirtsch {

void LinkModelParams::validate() const {
    if (noise_density <= 0.0) throw ConfigError("noise density must be positive");
    if (bandwidth <= 0.0) throw ConfigError("bandwidth must be positive");
    if (path_loss_exp < 2.0 || path_loss_exp > 6.0)
        throw ConfigError("path loss exponent must lie in [2, 6]");
    if (ber <= 0.0 || ber >= 0.2) throw ConfigError("bit error rate must lie in (0, 0.2)");
    if (access_time_up < 0.0 || access_time_down < 0.0)
        throw ConfigError("channel access times must be nonnegative");
}

double dbmToWatts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double upsilon(double ber) {
    if (ber <= 0.0 || ber >= 0.2)
        throw DomainError("upsilon defined only for BER in (0, 0.2)");
    return -1.5 / std::log(5.0 * ber);
}

double receivedPower(double p_tx, double omega, double d, double alpha) {
    if (p_tx < 0.0) throw DomainError("transmit power must be nonnegative");
    if (d <= 0.0) throw DomainError("distance must be positive");
    return p_tx * omega * std::pow(d, -alpha);
}

double snr(double p_rx, double fading_power, double noise_density, double bandwidth) {
    if (noise_density <= 0.0 || bandwidth <= 0.0)
        throw DomainError("noise density and bandwidth must be positive");
    return p_rx * fading_power / (noise_density * bandwidth);
}

double rate(double bandwidth, double ups, double gamma) {
    if (gamma < 0.0) throw DomainError("SNR must be nonnegative");
    return bandwidth * std::log2(1.0 + ups * gamma);
}

double channelGain(double ups, double omega, double d, double alpha, double fading_power) {
    if (d <= 0.0) throw DomainError("distance must be positive");
    return ups * omega * std::pow(d, -alpha) * fading_power;
}

double requiredTxPower(double r, double bandwidth, double noise_density, double gain) {
    if (gain <= 0.0) throw DomainError("channel gain must be positive");
    if (bandwidth <= 0.0) throw DomainError("bandwidth must be positive");
    if (r < 0.0) throw DomainError("rate must be nonnegative");
    return noise_density * bandwidth / gain * (std::exp2(r / bandwidth) - 1.0);
}

double txEnergy(double p_tx, double bits, double r) {
    if (bits == 0.0) return 0.0;
    if (r <= 0.0) throw DomainError("rate must be positive to transfer data");
    return p_tx * bits / r;
}

double maxTransferDelay(const std::map<NodeId, double>& backlog_bits,
                        const std::map<NodeId, double>& rates, double access_time) {
    double worst = 0.0;
    for (const auto& [node, bits] : backlog_bits) {
        auto it = rates.find(node);
        const double r = it == rates.end() ? 0.0 : it->second;
        if (r <= 0.0) {
            if (bits > 0.0)
                throw DomainError("node " + std::to_string(node) +
                                  " has backlog but zero link rate");
            worst = std::max(worst, access_time);
            continue;
        }
        worst = std::max(worst, bits / r + access_time);
    }
    return worst;
}

double computeCycles(double compute_density, double data_size) {
    if (compute_density < 0.0 || data_size < 0.0)
        throw DomainError("compute density and data size must be nonnegative");
    return compute_density * data_size;
}

LinkState makeLinkState(const LinkModelParams& params, double distance, double fading_power,
                        double tx_power_w) {
    if (distance <= 0.0) throw DomainError("link distance must be positive");
    if (fading_power < 0.0) throw DomainError("fading power must be nonnegative");
    LinkState st;
    st.distance = distance;
    st.fading_power = fading_power;
    const double ups = upsilon(params.ber);
    st.gain = channelGain(ups, params.path_loss_ref, distance, params.path_loss_exp,
                          fading_power);
    const double p_rx =
        receivedPower(tx_power_w, params.path_loss_ref, distance, params.path_loss_exp);
    st.snr = snr(p_rx, fading_power, params.noise_density, params.bandwidth);
    st.rate = rate(params.bandwidth, ups, st.snr);
    return st;
}

double FadingSampler::sample() {
    // Inverse-CDF draw with a 53-bit uniform in [0, 1).
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return -std::log1p(-u);
}

}  // namespace dirtsch
