#pragma once

#include "snsqkd/params.hpp"

namespace snsqkd::physics {

/// Right-detector click probability when both parties send vacuum.
double click_vacuum(const DeviceParams& dev);

/// Right-detector click probability for a single photon shared across the
/// two arms with relative phase delta_phase. Misalignment swaps the exit
/// port with probability dev.misalign; dark counts fire independently.
double click_single_photon(const DeviceParams& dev, const ChannelPoint& ch,
                           double delta_phase);

/// Left-detector mirror of click_single_photon, coded from the left port's
/// own interference weights. Equals click_single_photon(delta + pi).
double click_single_photon_left(const DeviceParams& dev, const ChannelPoint& ch,
                                double delta_phase);

/// Right-detector click probability for the symmetric two-photon state,
/// treating the photons as transmitting independently (worst case). The
/// result does not depend on the relative phase or on misalignment.
double click_two_photon(const DeviceParams& dev, const ChannelPoint& ch);

/// Upper bound on the right-click probability of the symmetric j-photon
/// state, j >= 3: twice the single-arm j-photon click rate, clamped to 1.
double click_multi_photon_upper(const DeviceParams& dev, const ChannelPoint& ch,
                                int j);

/// Probability of a right click in a round where exactly one party sends,
/// conditional on the announced phases passing the sifting window.
double c_round_click(const DeviceParams& dev, const ChannelPoint& ch,
                     const ProtocolParams& proto);

/// Probability of a right click in a round where both or neither party
/// sends, conditional on sifting. For continuous randomization the
/// send-send term averages the phase difference over the window; for
/// discrete variants only exactly matched phases survive sifting, so the
/// integrand is taken at zero phase difference.
double e_round_click(const DeviceParams& dev, const ChannelPoint& ch,
                     const ProtocolParams& proto);

/// Left-detector mirror of e_round_click over the opposite-phase window.
double e_round_click_left(const DeviceParams& dev, const ChannelPoint& ch,
                          const ProtocolParams& proto);

struct ClickAndQber {
    double p_total = 0.0;  ///< sifted right-click probability (conditional on sifting)
    double e_bit = 0.0;    ///< bit error rate among sifted right clicks
    bool degenerate = false;  ///< true when the total click rate vanishes
};

/// Total sifted right-click probability and its bit error rate.
ClickAndQber total_click_and_qber(const DeviceParams& dev, const ChannelPoint& ch,
                                  const ProtocolParams& proto);

}  // namespace snsqkd::physics
