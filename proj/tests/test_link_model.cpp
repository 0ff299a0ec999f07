#include <doctest.h>

#include <cmath>
#include <random>

#include "dirtsch/errors.hpp"
#include "dirtsch/link_model.hpp"

using namespace dirtsch;

namespace {

double randomIn(std::mt19937_64& rng, double lo, double hi) {
    return lo + (static_cast<double>(rng() >> 11) * 0x1.0p-53) * (hi - lo);
}

}  // namespace

TEST_CASE("upsilon at the stock bit error rate") {
    // -1.5 / ln(5e-5) evaluated independently: ln 5 - 5 ln 10 = -9.9034876.
    CHECK(upsilon(1e-5) == doctest::Approx(0.15146175).epsilon(1e-6));
    CHECK(std::abs(upsilon(1e-5) - 0.15147) < 1e-4);
}

TEST_CASE("upsilon domain ends where the log vanishes") {
    CHECK_THROWS_AS(upsilon(0.2), DomainError);  // ln(1) = 0
    CHECK_THROWS_AS(upsilon(0.0), DomainError);
    CHECK_THROWS_AS(upsilon(-0.01), DomainError);
    CHECK_THROWS_AS(upsilon(0.25), DomainError);
}

TEST_CASE("upsilon grows with the tolerated bit error rate") {
    double prev = upsilon(1e-6);
    for (double ber = 1e-5; ber < 0.2; ber *= 1.7) {
        const double cur = upsilon(ber);
        CHECK(cur > prev);
        CHECK(cur > 0.0);
        prev = cur;
    }
}

TEST_CASE("received power follows the power law") {
    CHECK(receivedPower(1.0, 1.0, 1.0, 3.0) == doctest::Approx(1.0));
    CHECK(receivedPower(8.0, 1.0, 2.0, 3.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(receivedPower(1.0, 1.0, 0.0, 3.0), DomainError);
    CHECK_THROWS_AS(receivedPower(-1.0, 1.0, 5.0, 3.0), DomainError);

    std::mt19937_64 rng(1);
    for (int i = 0; i < 500; ++i) {
        const double p = randomIn(rng, 1e-6, 10.0);
        const double w = randomIn(rng, 0.1, 5.0);
        const double d = randomIn(rng, 0.5, 2000.0);
        const double a = randomIn(rng, 2.0, 6.0);
        CHECK(receivedPower(p, w, d, a) == doctest::Approx(p * w * std::pow(d, -a)));
    }
}

TEST_CASE("snr is the fading-scaled power over noise") {
    CHECK(snr(1.0, 1.0, 1.0, 1.0) == doctest::Approx(1.0));
    CHECK(snr(2.0, 2.0, 1.0, 1.0) == doctest::Approx(2.0 * snr(2.0, 1.0, 1.0, 1.0)));
    CHECK_THROWS_AS(snr(1.0, 1.0, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(snr(1.0, 1.0, 1.0, -2.0), DomainError);
}

TEST_CASE("rate covers the textbook points") {
    CHECK(rate(1.0, 0.5, 0.0) == doctest::Approx(0.0));
    CHECK(rate(1.0, 0.5, 2.0) == doctest::Approx(1.0));        // log2(2)
    CHECK(rate(20e6, 1.5, 2.0) == doctest::Approx(40e6));      // log2(4) = 2
    CHECK_THROWS_AS(rate(1.0, 0.5, -1.0), DomainError);
}

TEST_CASE("channel gain composes the pieces") {
    CHECK(channelGain(1.0, 1.0, 1.0, 2.0, 1.0) == doctest::Approx(1.0));
    // Halving distance at alpha=2 quadruples the gain.
    CHECK(channelGain(1.0, 1.0, 50.0, 2.0, 1.0) ==
          doctest::Approx(4.0 * channelGain(1.0, 1.0, 100.0, 2.0, 1.0)));
    CHECK_THROWS_AS(channelGain(1.0, 1.0, 0.0, 2.0, 1.0), DomainError);

    std::mt19937_64 rng(2);
    for (int i = 0; i < 500; ++i) {
        const double u = randomIn(rng, 0.05, 0.6);
        const double w = randomIn(rng, 0.1, 5.0);
        const double d = randomIn(rng, 1.0, 1500.0);
        const double a = randomIn(rng, 2.0, 6.0);
        const double h = randomIn(rng, 0.01, 8.0);
        CHECK(channelGain(u, w, d, a, h) == doctest::Approx(u * w * std::pow(d, -a) * h));
    }
}

TEST_CASE("required power is zero exactly for zero rate") {
    CHECK(requiredTxPower(0.0, 1.0, 1.0, 1.0) == doctest::Approx(0.0));
    CHECK(requiredTxPower(1.0, 1.0, 1.0, 1.0) == doctest::Approx(1.0));  // 2^1 - 1
    CHECK_THROWS_AS(requiredTxPower(1.0, 1.0, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(requiredTxPower(-1.0, 1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("power, SNR and rate formulas are mutual inverses") {
    std::mt19937_64 rng(3);
    const double ups = upsilon(1e-5);
    for (int i = 0; i < 10000; ++i) {
        const double bw = randomIn(rng, 1e5, 1e8);
        const double r = bw * randomIn(rng, 0.01, 20.0);
        const double n0 = randomIn(rng, 1e-21, 1e-15);
        const double d = randomIn(rng, 1.0, 1000.0);
        const double alpha = randomIn(rng, 2.0, 6.0);
        const double omega = randomIn(rng, 0.1, 10.0);
        const double h = randomIn(rng, 0.01, 10.0);

        const double g = channelGain(ups, omega, d, alpha, h);
        const double p_tx = requiredTxPower(r, bw, n0, g);
        const double p_rx = receivedPower(p_tx, omega, d, alpha);
        const double back = rate(bw, ups, snr(p_rx, h, n0, bw));
        CHECK(std::abs(back - r) <= 1e-9 * r);
    }
}

TEST_CASE("rate, power and energy move the right way") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 1000; ++i) {
        const double bw = randomIn(rng, 1e5, 1e8);
        const double ups = randomIn(rng, 0.05, 0.5);
        const double g1 = randomIn(rng, 0.0, 1e4);
        const double g2 = g1 + randomIn(rng, 0.0, 1e4);
        CHECK(rate(bw, ups, g2) >= rate(bw, ups, g1));  // rate grows with SNR

        const double gain = randomIn(rng, 1e-12, 1.0);
        const double n0 = randomIn(rng, 1e-21, 1e-15);
        const double r1 = bw * randomIn(rng, 0.0, 10.0);
        const double r2 = r1 + bw * randomIn(rng, 0.0, 10.0);
        CHECK(requiredTxPower(r2, bw, n0, gain) >= requiredTxPower(r1, bw, n0, gain));

        // Fixed power and payload: a faster link never costs more energy.
        const double p = randomIn(rng, 1e-6, 1.0);
        const double bits = randomIn(rng, 1.0, 1e7);
        const double fast = std::max(r2, 1.0);
        const double slow = std::max(r1, 0.5);
        CHECK(txEnergy(p, bits, std::max(fast, slow)) <=
              txEnergy(p, bits, std::min(fast, slow)));

        // Everything stays finite and nonnegative on the stated domains.
        for (double v : {rate(bw, ups, g1), requiredTxPower(r1, bw, n0, gain),
                         receivedPower(p, 1.0, randomIn(rng, 0.1, 2000.0), 3.0),
                         channelGain(ups, 1.0, randomIn(rng, 0.1, 2000.0), 3.0, g1)}) {
            CHECK(std::isfinite(v));
            CHECK(v >= 0.0);
        }
    }
}

TEST_CASE("transmit energy is power times airtime") {
    CHECK(txEnergy(5.0, 0.0, 0.0) == doctest::Approx(0.0));
    CHECK(txEnergy(2.0, 1e6, 1e6) == doctest::Approx(2.0));
    CHECK_THROWS_AS(txEnergy(2.0, 10.0, 0.0), DomainError);

    // One 127-byte packet at the stock 2 Mbps rate over a 200 m hop.
    const LinkModelParams link;
    const double ups = upsilon(link.ber);
    const double g = ups * link.path_loss_ref * std::pow(200.0, -link.path_loss_exp);
    const double p = link.noise_density * link.bandwidth / g *
                     (std::pow(2.0, 2e6 / link.bandwidth) - 1.0);
    CHECK(txEnergy(p, 127.0 * 8.0, 2e6) == doctest::Approx(p * 1016.0 / 2e6));
}

TEST_CASE("worst transfer delay scans every node") {
    CHECK(maxTransferDelay({}, {}, 0.0) == doctest::Approx(0.0));
    CHECK(maxTransferDelay({{1, 0.0}, {2, 0.0}}, {{1, 2e6}, {2, 2e6}}, 0.0) ==
          doctest::Approx(0.0));
    CHECK(maxTransferDelay({{1, 1e6}}, {{1, 2e6}}, 0.001) == doctest::Approx(0.501));
    CHECK_THROWS_AS(maxTransferDelay({{1, 100.0}}, {{1, 0.0}}, 0.0), DomainError);

    std::mt19937_64 rng(4);
    std::map<NodeId, double> bits, rates;
    double expected = 0.0;
    for (NodeId id = 1; id <= 16; ++id) {
        bits[id] = randomIn(rng, 0.0, 1e7);
        rates[id] = randomIn(rng, 1e5, 1e7);
        expected = std::max(expected, bits[id] / rates[id] + 0.002);
    }
    CHECK(maxTransferDelay(bits, rates, 0.002) == doctest::Approx(expected));
}

TEST_CASE("compute cycles multiply density by size") {
    CHECK(computeCycles(100.0, 0.0) == doctest::Approx(0.0));
    CHECK(computeCycles(100.0, 50.0) == doctest::Approx(5000.0));
    const NodeLoad load{1016.0, 100.0, 50.0};
    CHECK(computeCycles(load.compute_density, load.data_size) == doctest::Approx(5000.0));
    CHECK_THROWS_AS(computeCycles(-1.0, 5.0), DomainError);
    std::mt19937_64 rng(6);
    for (int i = 0; i < 200; ++i) {
        const double chi = randomIn(rng, 0.0, 1e4);
        const double s = randomIn(rng, 0.0, 1e4);
        CHECK(computeCycles(chi, s) == doctest::Approx(chi * s));
    }
}

TEST_CASE("link state derives gain, SNR and rate together") {
    const LinkModelParams params;
    const double p = dbmToWatts(15.0);
    const LinkState st = makeLinkState(params, 200.0, 0.7, p);
    const double ups = upsilon(params.ber);
    CHECK(st.gain ==
          doctest::Approx(channelGain(ups, params.path_loss_ref, 200.0, params.path_loss_exp, 0.7)));
    CHECK(st.snr == doctest::Approx(snr(receivedPower(p, params.path_loss_ref, 200.0,
                                                      params.path_loss_exp),
                                        0.7, params.noise_density, params.bandwidth)));
    CHECK(st.rate == doctest::Approx(rate(params.bandwidth, ups, st.snr)));
    CHECK(st.rate >= 0.0);
    CHECK(makeLinkState(params, 200.0, 0.0, p).rate == doctest::Approx(0.0));
    CHECK_THROWS_AS(makeLinkState(params, 0.0, 1.0, p), DomainError);
    CHECK_THROWS_AS(makeLinkState(params, 10.0, -0.5, p), DomainError);
}

TEST_CASE("fading samples are unit-mean exponential and reproducible") {
    FadingSampler sampler(42);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double h = sampler.sample();
        CHECK(h >= 0.0);
        sum += h;
    }
    CHECK(std::abs(sum / 100000.0 - 1.0) < 0.02);

    FadingSampler a(7), b(7), c(8);
    bool any_diff = false;
    for (int i = 0; i < 100; ++i) {
        const double va = a.sample();
        CHECK(va == b.sample());
        if (va != c.sample()) any_diff = true;
    }
    CHECK(any_diff);
}

TEST_CASE("dBm conversion hits the reference points") {
    CHECK(dbmToWatts(0.0) == doctest::Approx(1e-3));
    CHECK(dbmToWatts(15.0) == doctest::Approx(0.0316227766).epsilon(1e-6));
    CHECK(dbmToWatts(-174.0) == doctest::Approx(3.98107e-21).epsilon(1e-4));
}

TEST_CASE("link parameter validation") {
    LinkModelParams p;
    CHECK_NOTHROW(p.validate());
    p.path_loss_exp = 1.5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = LinkModelParams{};
    p.ber = 0.5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = LinkModelParams{};
    p.noise_density = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
}
