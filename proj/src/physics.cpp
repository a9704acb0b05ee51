#include "snsqkd/physics.hpp"

#include <cmath>
#include <stdexcept>

#include "snsqkd/quadrature.hpp"

namespace snsqkd::physics {

double click_vacuum(const DeviceParams& dev) {
    dev.validate();
    return dev.dark;
}

double click_single_photon(const DeviceParams& dev, const ChannelPoint& ch,
                           double delta_phase) {
    const double sq = ch.arm_eta;
    const double d = dev.dark;
    const double e = dev.misalign;
    // Probability the photon exits toward the left (constructive) port,
    // including the misalignment swap.
    const double p_left = 0.5 * (1.0 + std::cos(delta_phase)) * (1.0 - e) +
                          0.5 * (1.0 - std::cos(delta_phase)) * e;
    return clamp01(sq * (1.0 - p_left * (1.0 - d)) + (1.0 - sq) * d);
}

double click_single_photon_left(const DeviceParams& dev, const ChannelPoint& ch,
                                double delta_phase) {
    const double sq = ch.arm_eta;
    const double d = dev.dark;
    const double e = dev.misalign;
    const double p_right = 0.5 * (1.0 - std::cos(delta_phase)) * (1.0 - e) +
                           0.5 * (1.0 + std::cos(delta_phase)) * e;
    return clamp01(sq * (1.0 - p_right * (1.0 - d)) + (1.0 - sq) * d);
}

double click_two_photon(const DeviceParams& dev, const ChannelPoint& ch) {
    const double miss = 1.0 - ch.arm_eta / 2.0;  // one photon misses the right detector
    return clamp01(miss * miss * dev.dark + 1.0 - miss * miss);
}

double click_multi_photon_upper(const DeviceParams& dev, const ChannelPoint& ch,
                                int j) {
    if (j < 3) throw std::invalid_argument("click_multi_photon_upper requires j >= 3");
    const double miss_all = std::pow(1.0 - ch.arm_eta / 2.0, j);
    return clamp01(2.0 * (miss_all * dev.dark + 1.0 - miss_all));
}

double c_round_click(const DeviceParams& dev, const ChannelPoint& ch,
                     const ProtocolParams& proto) {
    const double p = proto.p_send;
    const double click = 1.0 - std::exp(-ch.arm_eta * proto.mu / 2.0) * (1.0 - dev.dark);
    return clamp01(2.0 * p * (1.0 - p) * click);
}

namespace {

// Send-send right-click probability at phase difference delta.
double send_send_click_right(const DeviceParams& dev, const ChannelPoint& ch,
                             double mu, double delta) {
    const double intensity =
        ch.arm_eta * mu * (1.0 - (1.0 - 2.0 * dev.misalign) * std::cos(delta));
    return 1.0 - (1.0 - dev.dark) * std::exp(-intensity);
}

// Left-port mirror: constructive port is bright at matched phases.
double send_send_click_left(const DeviceParams& dev, const ChannelPoint& ch,
                            double mu, double delta) {
    const double intensity =
        ch.arm_eta * mu * (1.0 + (1.0 - 2.0 * dev.misalign) * std::cos(delta));
    return 1.0 - (1.0 - dev.dark) * std::exp(-intensity);
}

}  // namespace

double e_round_click(const DeviceParams& dev, const ChannelPoint& ch,
                     const ProtocolParams& proto) {
    const double p = proto.p_send;
    double send_send;
    if (proto.discrete()) {
        send_send = send_send_click_right(dev, ch, proto.mu, 0.0);
    } else {
        send_send = integrate(
                        [&](double delta) {
                            return send_send_click_right(dev, ch, proto.mu, delta);
                        },
                        -proto.delta, proto.delta) /
                    (2.0 * proto.delta);
    }
    return clamp01((1.0 - p) * (1.0 - p) * dev.dark + p * p * send_send);
}

double e_round_click_left(const DeviceParams& dev, const ChannelPoint& ch,
                          const ProtocolParams& proto) {
    const double p = proto.p_send;
    double send_send;
    if (proto.discrete()) {
        send_send = send_send_click_left(dev, ch, proto.mu, M_PI);
    } else {
        // Left clicks are kept for phase differences within delta of pi.
        send_send = integrate(
                        [&](double u) {
                            return send_send_click_left(dev, ch, proto.mu, M_PI + u);
                        },
                        -proto.delta, proto.delta) /
                    (2.0 * proto.delta);
    }
    return clamp01((1.0 - p) * (1.0 - p) * dev.dark + p * p * send_send);
}

ClickAndQber total_click_and_qber(const DeviceParams& dev, const ChannelPoint& ch,
                                  const ProtocolParams& proto) {
    dev.validate();
    proto.validate();
    ClickAndQber out;
    const double pc = c_round_click(dev, ch, proto);
    const double pe = e_round_click(dev, ch, proto);
    out.p_total = clamp01(pc + pe);
    if (out.p_total <= 0.0) {
        out.degenerate = true;
        out.e_bit = 0.0;
        return out;
    }
    out.e_bit = clamp01(pe / out.p_total);
    return out;
}

}  // namespace snsqkd::physics
