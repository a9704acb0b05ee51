#pragma once

#include "snsqkd/params.hpp"

namespace snsqkd {

/// Per-variant key-rate decomposition. Click probabilities are per detector
/// and conditional on phase sifting (for the baseline there is no sifting,
/// so they are plain per-round probabilities). Rates are bits per emitted
/// round.
struct RateBreakdown {
    Variant variant = Variant::Continuous;
    double s = 0.0;      ///< sifting efficiency entering the rate
    double p_c = 0.0;    ///< correct-source click probability
    double p_t = 0.0;    ///< total click probability
    double e_bit = 0.0;  ///< bit error rate
    /// Phase-error entry. Postselection variants: the phase-error
    /// probability bound. Baseline: the single-photon phase-error rate.
    /// AOPP variants: the mapped pair-level phase-error rate.
    double p_ph = 0.0;
    double r_per_detector = 0.0;
    double r_total = 0.0;
    bool degenerate = false;  ///< no clicks at all
};

/// Binary entropy in bits, with the continuity convention at 0 and 1.
/// Throws on arguments outside [0, 1].
double binary_entropy(double x);

/// Key rate of the phase-postselection protocol; proto.m_phases selects the
/// continuous (0) or discrete (2, 4) flavour, which fixes both the sifting
/// efficiency and the phase-error bound.
RateBreakdown keyrate_postselection(const DeviceParams& dev, const ChannelPoint& ch,
                                    const ProtocolParams& proto);

/// Comparison baseline: the no-sifting protocol rate
///   R = 2 p (1-p) e^-mu mu Y1 (1 - H2(e1)) - f Q_t H2(E_t)
/// with Y1 the full-circle average single-photon click probability summed
/// over both detectors and e1 its dark-count plus misalignment error rate.
RateBreakdown keyrate_sns_baseline(const DeviceParams& dev, const ChannelPoint& ch,
                                   const ProtocolParams& proto);

/// Applies odd-parity pairing to the pre-pairing bit statistics of the
/// selected base variant, then reassembles the rate on the surviving pairs.
RateBreakdown keyrate_with_aopp(const DeviceParams& dev, const ChannelPoint& ch,
                                const ProtocolParams& proto, Variant base);

/// Dispatch on any Variant (m_phases in proto is overridden to match).
RateBreakdown keyrate_for_variant(const DeviceParams& dev, const ChannelPoint& ch,
                                  ProtocolParams proto, Variant variant);

}  // namespace snsqkd
