#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "snsqkd/mcsim.hpp"
#include "snsqkd/physics.hpp"
#include "snsqkd/rng.hpp"
#include "support.hpp"

using namespace snsqkd;
using namespace snsqkd::physics;
using testsupport::channel;
using testsupport::table_device;

TEST_CASE("vacuum click is the dark count") {
    DeviceParams dev = table_device();
    CHECK(click_vacuum(dev) == 1e-11);
    dev.dark = 0.0;
    CHECK(click_vacuum(dev) == 0.0);
    dev.dark = 0.5;
    CHECK(click_vacuum(dev) == 0.5);
}

TEST_CASE("single photon interference limits") {
    DeviceParams dev = table_device();
    dev.dark = 0.0;
    dev.misalign = 0.0;
    const auto ch = ChannelPoint::from_loss_db(0.0, dev);
    CHECK(click_single_photon(dev, ch, 0.0) == doctest::Approx(0.0));
    CHECK(click_single_photon(dev, ch, M_PI) == doctest::Approx(1.0));
}

TEST_CASE("single photon click matches Monte Carlo sampling") {
    const auto dev = table_device();
    const auto ch = channel(20.0);
    const double expected = click_single_photon(dev, ch, 0.0);
    const FreqEstimate f = simulate_fock(dev, ch, 1, 0.0, 10000000, 4242);
    CHECK(std::fabs(f.rate - expected) <= 3.0 * f.std_err);
}

TEST_CASE("two photon click closed form") {
    DeviceParams dev = table_device();
    dev.dark = 0.0;
    const auto ch0 = ChannelPoint::from_loss_db(0.0, dev);
    CHECK(click_two_photon(dev, ch0) == doctest::Approx(0.75));
    const auto ch_deep = ChannelPoint::from_loss_db(200.0, dev);
    CHECK(click_two_photon(dev, ch_deep) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("two photon click equals a path enumeration") {
    const auto dev = table_device();
    const auto ch = channel(20.0);
    // Each photon is lost, reaches the right port, or reaches the left
    // port; the right detector clicks on any right-port photon or a dark
    // count. Enumerate the nine joint outcomes directly.
    const double sq = ch.arm_eta;
    const double probs[3] = {1.0 - sq, sq / 2.0, sq / 2.0};  // lost, right, left
    double click = 0.0;
    for (int o1 = 0; o1 < 3; ++o1)
        for (int o2 = 0; o2 < 3; ++o2) {
            const double pr = probs[o1] * probs[o2];
            click += pr * ((o1 == 1 || o2 == 1) ? 1.0 : dev.dark);
        }
    CHECK(click_two_photon(dev, ch) == doctest::Approx(click).epsilon(1e-14));
}

TEST_CASE("multi photon upper bound") {
    DeviceParams dev = table_device();
    dev.dark = 0.0;
    const auto ch0 = ChannelPoint::from_loss_db(0.0, dev);
    CHECK(click_multi_photon_upper(dev, ch0, 3) == doctest::Approx(1.0));
    const auto deep = ChannelPoint::from_loss_db(300.0, dev);
    for (int j : {3, 5, 9})
        CHECK(click_multi_photon_upper(dev, deep, j) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK_THROWS_AS(click_multi_photon_upper(dev, ch0, 2), std::invalid_argument);
}

TEST_CASE("multi photon bound dominates an independent-path sampler") {
    const auto dev = table_device();
    const auto ch = channel(10.0);
    const int j = 5;
    Xoshiro256 rng(777);
    const long n = 2000000;
    long clicks = 0;
    for (long i = 0; i < n; ++i) {
        bool right = false;
        for (int k = 0; k < j; ++k)
            if (rng.uniform() < ch.arm_eta && rng.uniform() < 0.5) right = true;
        if (right || rng.uniform() < dev.dark) ++clicks;
    }
    const double freq = static_cast<double>(clicks) / n;
    CHECK(click_multi_photon_upper(dev, ch, j) >= freq);
}

TEST_CASE("correct-round click closed form") {
    const auto dev_clean = [] {
        DeviceParams d = table_device();
        d.dark = 0.0;
        return d;
    }();
    const auto ch = ChannelPoint::from_loss_db(0.0, dev_clean);
    ProtocolParams proto;
    proto.p_send = 0.5;
    proto.mu = 1e-300;
    CHECK(c_round_click(dev_clean, ch, proto) == doctest::Approx(0.0));
    proto.p_send = 0.05;
    proto.mu = 0.1;
    CHECK(c_round_click(dev_clean, ch, proto) ==
          doctest::Approx(2.0 * 0.05 * 0.95 * (1.0 - std::exp(-0.05))).epsilon(1e-14));
}

TEST_CASE("error-round click limits and quadrature cross-check") {
    DeviceParams dev = table_device();
    auto ch = channel(20.0, dev);
    ProtocolParams proto;
    proto.p_send = 1e-9;
    proto.mu = 0.4;
    proto.delta = 0.3;
    CHECK(e_round_click(dev, ch, proto) == doctest::Approx(dev.dark).epsilon(1e-6));

    // With misalignment at one half the cosine term vanishes and the
    // integrand is constant.
    DeviceParams half = dev;
    half.misalign = 0.5;
    ch = channel(20.0, half);
    proto.p_send = 0.3;
    for (double delta : {0.05, 0.4, 1.2}) {
        proto.delta = delta;
        const double expect =
            (1.0 - 0.3) * (1.0 - 0.3) * half.dark +
            0.3 * 0.3 * (1.0 - (1.0 - half.dark) * std::exp(-ch.arm_eta * proto.mu));
        CHECK(e_round_click(half, ch, proto) == doctest::Approx(expect).epsilon(1e-12));
    }

    // Window average against a one-million-point Riemann oracle.
    ch = channel(20.0, dev);
    proto.delta = 0.1;
    proto.mu = 0.4;
    auto integrand = [&](double x) {
        return 1.0 - (1.0 - dev.dark) *
                         std::exp(-ch.arm_eta * proto.mu *
                                  (1.0 - (1.0 - 2.0 * dev.misalign) * std::cos(x)));
    };
    const double oracle =
        (1.0 - 0.3) * (1.0 - 0.3) * dev.dark +
        0.3 * 0.3 * testsupport::riemann(integrand, -0.1, 0.1, 1000000) / 0.2;
    CHECK(e_round_click(dev, ch, proto) == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("total click and qber") {
    const auto dev = table_device();
    const auto ch = channel(20.0);
    ProtocolParams proto;
    proto.p_send = 1e-15;
    proto.mu = 0.4;
    proto.delta = 0.3;
    const auto r = total_click_and_qber(dev, ch, proto);
    CHECK_FALSE(r.degenerate);
    CHECK(r.e_bit == doctest::Approx(1.0).epsilon(1e-4));

    DeviceParams clean = dev;
    clean.dark = 0.0;
    clean.misalign = 0.0;
    ProtocolParams tiny = proto;
    tiny.p_send = 0.1;
    tiny.mu = 1e-300;
    const auto deg = total_click_and_qber(clean, channel(20.0, clean), tiny);
    CHECK(deg.degenerate);
}

TEST_CASE("click probabilities stay in the unit interval") {
    testsupport::ParamSampler sampler(101);
    for (int i = 0; i < 300; ++i) {
        const DeviceParams dev = sampler.device();
        const auto ch = channel(sampler.uniform(0.0, 120.0), dev);
        const double delta = sampler.uniform(-M_PI, M_PI);
        for (double v :
             {click_vacuum(dev), click_single_photon(dev, ch, delta),
              click_single_photon_left(dev, ch, delta), click_two_photon(dev, ch),
              click_multi_photon_upper(dev, ch, 3 + i % 7)}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        ProtocolParams proto = sampler.protocol((i % 3 == 0) ? 0 : 2 * (1 + i % 2));
        const auto t = total_click_and_qber(dev, ch, proto);
        CHECK(t.p_total >= 0.0);
        CHECK(t.p_total <= 1.0);
        CHECK(t.e_bit >= 0.0);
        CHECK(t.e_bit <= 1.0);
    }
}

TEST_CASE("single photon click is even and monotone in the phase magnitude") {
    testsupport::ParamSampler sampler(202);
    for (int i = 0; i < 100; ++i) {
        DeviceParams dev = sampler.device();
        dev.misalign = sampler.uniform(0.0, 0.49);
        const auto ch = channel(sampler.uniform(0.0, 60.0), dev);
        const double d1 = sampler.uniform(0.0, M_PI);
        const double d2 = sampler.uniform(0.0, M_PI);
        CHECK(click_single_photon(dev, ch, d1) ==
              doctest::Approx(click_single_photon(dev, ch, -d1)).epsilon(1e-14));
        const double lo = std::min(d1, d2), hi = std::max(d1, d2);
        CHECK(click_single_photon(dev, ch, lo) <=
              click_single_photon(dev, ch, hi) + 1e-15);
    }
}

TEST_CASE("the two single-photon ports sum to a phase-independent total") {
    testsupport::ParamSampler sampler(303);
    for (int i = 0; i < 100; ++i) {
        const DeviceParams dev = sampler.device();
        const auto ch = channel(sampler.uniform(0.0, 60.0), dev);
        const double delta = sampler.uniform(-M_PI, M_PI);
        const double total =
            click_single_photon(dev, ch, delta) + click_single_photon(dev, ch, M_PI - delta);
        const double at_zero =
            click_single_photon(dev, ch, 0.0) + click_single_photon(dev, ch, M_PI);
        CHECK(total == doctest::Approx(at_zero).epsilon(1e-12));
    }
}

TEST_CASE("left detector formulas are the pi-shifted right ones") {
    testsupport::ParamSampler sampler(404);
    for (int i = 0; i < 100; ++i) {
        const DeviceParams dev = sampler.device();
        const auto ch = channel(sampler.uniform(0.0, 80.0), dev);
        const double delta = sampler.uniform(-M_PI, M_PI);
        CHECK(click_single_photon_left(dev, ch, delta) ==
              doctest::Approx(click_single_photon(dev, ch, delta + M_PI)).epsilon(1e-13));
        ProtocolParams proto = sampler.protocol(i % 2 ? 0 : 2);
        CHECK(e_round_click_left(dev, ch, proto) ==
              doctest::Approx(e_round_click(dev, ch, proto)).epsilon(1e-11));
    }
}

TEST_CASE("error-round click grows with the window") {
    testsupport::ParamSampler sampler(505);
    for (int i = 0; i < 60; ++i) {
        DeviceParams dev = sampler.device();
        dev.misalign = sampler.uniform(0.0, 0.49);
        const auto ch = channel(sampler.uniform(0.0, 60.0), dev);
        ProtocolParams proto = sampler.protocol(0);
        ProtocolParams wider = proto;
        wider.delta = std::min(M_PI, proto.delta * sampler.uniform(1.0, 2.5));
        CHECK(e_round_click(dev, ch, proto) <=
              e_round_click(dev, ch, wider) + 1e-15);
    }
}
