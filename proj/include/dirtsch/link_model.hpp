#pragma once

#include <cstdint>
#include <map>
#include <random>

#include "dirtsch/topology.hpp"

namespace dirtsch {

// Radio and channel constants. Linear units throughout; dBm values from the
// config file are converted at load time.
struct LinkModelParams {
    double noise_density = 3.9810717055349565e-21;  // N0, W/Hz (-174 dBm/Hz)
    double bandwidth = 20e6;                        // W, Hz per link
    double path_loss_exp = 3.0;                     // alpha, 2..6
    double path_loss_ref = 1.0;                     // omega
    double ber = 1e-5;                              // target bit error rate
    double access_time_up = 0.0;                    // zeta_u, s
    double access_time_down = 0.0;                  // zeta_d, s

    void validate() const;
};

// Per-node traffic/compute load snapshot.
struct NodeLoad {
    double backlog_bits = 0.0;     // |B_i|
    double compute_density = 0.0;  // chi_i, cycles per data unit
    double data_size = 0.0;        // S_i, data units
};

// One link's instantaneous channel state with its derived quantities.
struct LinkState {
    double distance = 0.0;       // m
    double fading_power = 1.0;   // |h|^2
    double gain = 0.0;           // composite channel gain
    double snr = 0.0;            // at the given transmit power
    double rate = 0.0;           // achievable bits/s at that power
};

LinkState makeLinkState(const LinkModelParams& params, double distance, double fading_power,
                        double tx_power_w);

double dbmToWatts(double dbm);

// SNR gap to capacity for the target bit error rate: -1.5 / ln(5 * BER).
// Defined (and positive) for BER in (0, 0.2).
double upsilon(double ber);

// Power-law attenuation: p_tx * omega * d^-alpha.
double receivedPower(double p_tx, double omega, double d, double alpha);

double snr(double p_rx, double fading_power, double noise_density, double bandwidth);

// Shannon-style achievable rate with the BER gap: W * log2(1 + upsilon * gamma).
double rate(double bandwidth, double ups, double gamma);

// Composite channel gain: upsilon * omega * d^-alpha * |h|^2.
double channelGain(double ups, double omega, double d, double alpha, double fading_power);

// Power needed to sustain rate r over a link with gain g.
double requiredTxPower(double r, double bandwidth, double noise_density, double gain);

// Energy to push `bits` at rate `r` with transmit power `p_tx`.
double txEnergy(double p_tx, double bits, double r);

// Worst per-node transfer delay: max over nodes of backlog/rate + access time.
// Nodes with zero backlog and zero rate contribute only the access time.
double maxTransferDelay(const std::map<NodeId, double>& backlog_bits,
                        const std::map<NodeId, double>& rates, double access_time);

double computeCycles(double compute_density, double data_size);

// Unit-mean exponential |h|^2 samples (Rayleigh amplitude fading).
// Self-contained draw so identical seeds give identical streams on every
// standard library.
class FadingSampler {
public:
    explicit FadingSampler(std::uint64_t seed) : rng_(seed) {}

    double sample();

private:
    std::mt19937_64 rng_;
};

}  // namespace dirtsch
