#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "snsqkd/keyrate.hpp"
#include "snsqkd/phase_error.hpp"
#include "snsqkd/physics.hpp"
#include "support.hpp"

using namespace snsqkd;
using testsupport::channel;
using testsupport::table_device;

namespace {

ProtocolParams proto_at(double p, double mu, double delta, int m = 0) {
    ProtocolParams proto;
    proto.p_send = p;
    proto.mu = mu;
    proto.delta = delta;
    proto.m_phases = m;
    return proto;
}

}  // namespace

TEST_CASE("binary entropy") {
    CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    // Frozen from an independent high-precision evaluation.
    CHECK(binary_entropy(0.11) == doctest::Approx(0.499915958164528).epsilon(1e-12));
    CHECK_THROWS_AS(binary_entropy(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(binary_entropy(1.1), std::invalid_argument);
    testsupport::ParamSampler sampler(11);
    for (int i = 0; i < 50; ++i) {
        const double x = sampler.uniform(0.0, 1.0);
        CHECK(binary_entropy(x) == doctest::Approx(binary_entropy(1.0 - x)).epsilon(1e-12));
    }
}

TEST_CASE("postselection rate clamps to zero under saturated phase error") {
    const auto dev = table_device();
    const auto ch = channel(200.0);
    const auto b = keyrate_postselection(dev, ch, proto_at(0.3, 1.0, 0.5));
    CHECK(b.r_total == 0.0);
    CHECK(b.r_per_detector == 0.0);
}

TEST_CASE("postselection rate vanishes without clicks") {
    DeviceParams dev = table_device();
    dev.dark = 0.0;
    dev.misalign = 0.0;
    const auto ch = channel(20.0, dev);
    const auto b = keyrate_postselection(dev, ch, proto_at(0.5, 1e-300, 0.3));
    CHECK(b.degenerate);
    CHECK(b.r_total == 0.0);
}

TEST_CASE("postselection rate is positive at short distance") {
    const auto dev = table_device();
    for (double loss : {0.0, 5.0, 10.0}) {
        const auto b = keyrate_postselection(dev, channel(loss), proto_at(0.3, 0.4, 0.4));
        CHECK(b.r_total > 0.0);
        CHECK(b.r_total == doctest::Approx(2.0 * b.r_per_detector));
        CHECK(b.p_c <= b.p_t + 1e-15);
    }
}

TEST_CASE("dual-path left/right assembly agrees with the symmetric shortcut") {
    const auto dev = table_device();
    const auto ch = channel(30.0);
    for (int m : {0, 2, 4}) {
        const auto proto = proto_at(0.3, 0.4, 0.3, m);
        const auto b = keyrate_postselection(dev, ch, proto);

        const PhaseVariant pv = m == 0   ? PhaseVariant::Continuous
                                : m == 2 ? PhaseVariant::M2
                                         : PhaseVariant::M4;
        const double s = proto.sifting_efficiency();
        const double pc = physics::c_round_click(dev, ch, proto);

        // Right-detector rate assembled from scratch.
        const double pe_r = physics::e_round_click(dev, ch, proto);
        const double pph_r =
            phase_error(dev, ch, proto, pv, analytic_yields(dev, ch, proto)).value;
        const double pt_r = pc + pe_r;
        const double rr =
            s * (pc * (1.0 - binary_entropy(std::min(0.5, pph_r / pc))) -
                 dev.ec_eff * pt_r * binary_entropy(pe_r / pt_r));

        // Left-detector rate from the independently coded left formulas.
        const double pe_l = physics::e_round_click_left(dev, ch, proto);
        const double pph_l = left_click_phase_error(dev, ch, proto, pv).value;
        const double pt_l = pc + pe_l;
        const double rl =
            s * (pc * (1.0 - binary_entropy(std::min(0.5, pph_l / pc))) -
                 dev.ec_eff * pt_l * binary_entropy(pe_l / pt_l));

        CHECK(b.r_total == doctest::Approx(rr + rl).epsilon(1e-12));
    }
}

TEST_CASE("baseline rate vanishes toward the sending-probability edges") {
    const auto dev = table_device();
    const auto ch = channel(10.0);
    CHECK(keyrate_sns_baseline(dev, ch, proto_at(1e-12, 0.5, M_PI)).r_total < 1e-9);
    CHECK(keyrate_sns_baseline(dev, ch, proto_at(1.0 - 1e-12, 0.5, M_PI)).r_total < 1e-9);
}

TEST_CASE("baseline breakdown at moderate loss") {
    const auto dev = table_device();
    const auto b = keyrate_sns_baseline(dev, channel(20.0), proto_at(0.05, 0.45, M_PI));
    CHECK(b.r_total > 0.0);
    CHECK(b.e_bit > 0.0);
    CHECK(b.p_c <= b.p_t + 1e-15);
    CHECK(b.s == 1.0);
}

TEST_CASE("error-correction inefficiency weakly decreases every rate") {
    testsupport::ParamSampler sampler(2211);
    for (int i = 0; i < 40; ++i) {
        DeviceParams dev = sampler.device();
        const auto ch = channel(sampler.uniform(0.0, 60.0), dev);
        const auto proto = sampler.protocol(0);
        for (Variant v : {Variant::SnsBaseline, Variant::Continuous, Variant::M2,
                          Variant::M4, Variant::ContinuousAopp, Variant::SnsBaselineAopp}) {
            DeviceParams harder = dev;
            harder.ec_eff = dev.ec_eff + sampler.uniform(0.05, 0.5);
            const double r1 = keyrate_for_variant(dev, ch, proto, v).r_total;
            const double r2 = keyrate_for_variant(harder, ch, proto, v).r_total;
            CHECK(r2 <= r1 + 1e-15);
        }
    }
}

TEST_CASE("rates are finite, nonnegative and symmetric across detectors") {
    testsupport::ParamSampler sampler(3322);
    for (int i = 0; i < 120; ++i) {
        const DeviceParams dev = sampler.device();
        const auto ch = channel(sampler.uniform(0.0, 150.0), dev);
        const auto proto = sampler.protocol(0);
        for (Variant v : {Variant::SnsBaseline, Variant::Continuous, Variant::M2,
                          Variant::M4, Variant::SnsBaselineAopp, Variant::ContinuousAopp,
                          Variant::M2Aopp, Variant::M4Aopp}) {
            const auto b = keyrate_for_variant(dev, ch, proto, v);
            CHECK(std::isfinite(b.r_total));
            CHECK(b.r_total >= 0.0);
            CHECK(b.r_total == doctest::Approx(2.0 * b.r_per_detector));
            CHECK(b.e_bit >= 0.0);
            CHECK(b.e_bit <= 1.0);
        }
    }
}

TEST_CASE("pairing without bit errors keeps half the clicks") {
    DeviceParams dev = table_device();
    dev.dark = 0.0;
    dev.misalign = 0.0;
    const auto ch = channel(15.0, dev);
    // Two-phase sifting with no misalignment and no darks has error-free
    // sifted keys, so pairing rejects nothing beyond the pairing itself.
    const auto proto = proto_at(0.3, 0.4, 0.3, 2);
    const auto plain = keyrate_postselection(dev, ch, proto);
    const auto paired = keyrate_with_aopp(dev, ch, proto, Variant::M2);
    CHECK(plain.e_bit == 0.0);
    CHECK(paired.e_bit == 0.0);
    CHECK(paired.p_t == doctest::Approx(plain.p_t / 2.0).epsilon(1e-12));
    const double eph = plain.p_ph / plain.p_c;
    CHECK(paired.p_ph == doctest::Approx(2.0 * eph * (1.0 - eph)).epsilon(1e-12));
}

TEST_CASE("aopp dispatcher rejects aopp-of-aopp") {
    const auto dev = table_device();
    const auto ch = channel(10.0);
    CHECK_THROWS_AS(
        keyrate_with_aopp(dev, ch, proto_at(0.3, 0.4, 0.3), Variant::ContinuousAopp),
        std::invalid_argument);
}
