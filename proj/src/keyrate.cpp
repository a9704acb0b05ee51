#include "snsqkd/keyrate.hpp"

#include <cmath>
#include <stdexcept>

#include "snsqkd/aopp.hpp"
#include "snsqkd/phase_error.hpp"
#include "snsqkd/physics.hpp"
#include "snsqkd/quadrature.hpp"

namespace snsqkd {

double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::invalid_argument("binary_entropy argument must be in [0,1]");
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

namespace {

double entropy_ratio(double numerator, double denominator) {
    if (denominator <= 0.0) return 0.5;
    const double r = numerator / denominator;
    return r > 0.5 ? 0.5 : r;
}

// Full-circle average of the send-send right-click probability.
double send_send_full_circle(const DeviceParams& dev, const ChannelPoint& ch,
                             double mu) {
    return integrate(
               [&](double theta) {
                   const double intensity =
                       ch.arm_eta * mu *
                       (1.0 - (1.0 - 2.0 * dev.misalign) * std::cos(theta));
                   return 1.0 - (1.0 - dev.dark) * std::exp(-intensity);
               },
               0.0, 2.0 * M_PI) /
           (2.0 * M_PI);
}

// Full-circle single-photon click probability summed over both detectors,
// assembled from the two independently coded port formulas. A window of pi
// makes the cosine average vanish, which is the full-circle value.
double single_photon_total_click(const DeviceParams& dev, const ChannelPoint& ch) {
    return avg_yield_single(dev, ch, M_PI) + avg_yield_single_left(dev, ch, M_PI);
}

double baseline_single_photon_phase_error(const DeviceParams& dev,
                                          const ChannelPoint& ch, double y1_total) {
    const double sq = ch.arm_eta;
    if (y1_total <= 0.0) return 0.5;
    return clamp01(((1.0 - sq) * dev.dark + sq * (1.0 - dev.dark) * dev.misalign) /
                   y1_total);
}

PhaseVariant phase_variant_for(const ProtocolParams& proto) {
    if (proto.m_phases == 2) return PhaseVariant::M2;
    if (proto.m_phases == 4) return PhaseVariant::M4;
    return PhaseVariant::Continuous;
}

}  // namespace

RateBreakdown keyrate_postselection(const DeviceParams& dev, const ChannelPoint& ch,
                                    const ProtocolParams& proto) {
    dev.validate();
    proto.validate();
    RateBreakdown out;
    out.variant = proto.m_phases == 2   ? Variant::M2
                  : proto.m_phases == 4 ? Variant::M4
                                        : Variant::Continuous;
    out.s = proto.sifting_efficiency();
    out.p_c = physics::c_round_click(dev, ch, proto);
    const double pe = physics::e_round_click(dev, ch, proto);
    out.p_t = clamp01(out.p_c + pe);
    if (out.p_t <= 0.0 || out.p_c <= 0.0) {
        out.degenerate = true;
        return out;
    }
    out.e_bit = clamp01(pe / out.p_t);

    const FockYieldSet yields = analytic_yields(dev, ch, proto);
    out.p_ph = phase_error(dev, ch, proto, phase_variant_for(proto), yields).value;

    const double priv = out.p_c * (1.0 - binary_entropy(entropy_ratio(out.p_ph, out.p_c)));
    const double ec = dev.ec_eff * out.p_t * binary_entropy(out.e_bit);
    out.r_per_detector = std::max(0.0, out.s * (priv - ec));
    out.r_total = 2.0 * out.r_per_detector;
    return out;
}

RateBreakdown keyrate_sns_baseline(const DeviceParams& dev, const ChannelPoint& ch,
                                   const ProtocolParams& proto) {
    dev.validate();
    proto.validate();
    const double p = proto.p_send;
    const double mu = proto.mu;

    RateBreakdown out;
    out.variant = Variant::SnsBaseline;
    out.s = 1.0;

    const double c1 = 1.0 - std::exp(-ch.arm_eta * mu / 2.0) * (1.0 - dev.dark);
    const double i_full = send_send_full_circle(dev, ch, mu);
    out.p_c = clamp01(2.0 * p * (1.0 - p) * c1);
    const double qe = (1.0 - p) * (1.0 - p) * dev.dark + p * p * i_full;
    out.p_t = clamp01(out.p_c + qe);
    if (out.p_t <= 0.0) {
        out.degenerate = true;
        return out;
    }
    out.e_bit = clamp01(qe / out.p_t);

    const double y1 = single_photon_total_click(dev, ch);
    out.p_ph = baseline_single_photon_phase_error(dev, ch, y1);

    const double singles = 2.0 * p * (1.0 - p) * std::exp(-mu) * mu * y1;
    const double priv = singles * (1.0 - binary_entropy(entropy_ratio(out.p_ph, 1.0)));
    const double ec = dev.ec_eff * 2.0 * out.p_t * binary_entropy(out.e_bit);
    out.r_total = std::max(0.0, priv - ec);
    out.r_per_detector = out.r_total / 2.0;
    return out;
}

RateBreakdown keyrate_with_aopp(const DeviceParams& dev, const ChannelPoint& ch,
                                const ProtocolParams& proto, Variant base) {
    dev.validate();
    proto.validate();
    if (variant_uses_aopp(base))
        throw std::invalid_argument("base variant must not itself be an AOPP variant");

    const double p = proto.p_send;
    RateBreakdown out;
    out.degenerate = false;

    // Pre-pairing click statistics split by Bob's bit value. Bob's 0-bits
    // come from rounds where he sent (errors there are both-send rounds);
    // his 1-bits from rounds where he did not (errors are dark counts on
    // vacuum-vacuum rounds).
    double z0_ok, z0_err, z1_ok, z1_err;
    double eph_pre;        // phase error fed to the pair-level mapping
    double untagged = 1.0; // fraction of correct clicks usable for key, per position

    if (base == Variant::SnsBaseline) {
        out.variant = Variant::SnsBaselineAopp;
        out.s = 1.0;
        const double c1 = 1.0 - std::exp(-ch.arm_eta * proto.mu / 2.0) * (1.0 - dev.dark);
        const double i_full = send_send_full_circle(dev, ch, proto.mu);
        z0_ok = p * (1.0 - p) * c1;
        z0_err = p * p * i_full;
        z1_ok = p * (1.0 - p) * c1;
        z1_err = (1.0 - p) * (1.0 - p) * dev.dark;
        const double y1 = single_photon_total_click(dev, ch);
        eph_pre = baseline_single_photon_phase_error(dev, ch, y1);
        untagged = c1 > 0.0 ? clamp01(std::exp(-proto.mu) * proto.mu * y1 / (2.0 * c1))
                            : 0.0;
    } else {
        out.variant = base == Variant::Continuous ? Variant::ContinuousAopp
                      : base == Variant::M2       ? Variant::M2Aopp
                                                  : Variant::M4Aopp;
        ProtocolParams pproto = proto;
        pproto.m_phases = variant_m_phases(base);
        out.s = pproto.sifting_efficiency();
        const double pc = physics::c_round_click(dev, ch, pproto);
        const double pe = physics::e_round_click(dev, ch, pproto);
        z0_ok = pc / 2.0;
        z1_ok = pc / 2.0;
        z1_err = (1.0 - p) * (1.0 - p) * dev.dark;
        z0_err = std::max(0.0, pe - z1_err);  // the send-send share of the error clicks
        if (pc <= 0.0) {
            out.degenerate = true;
            return out;
        }
        const FockYieldSet yields = analytic_yields(dev, ch, pproto);
        const double pph = phase_error(dev, ch, pproto, phase_variant_for(pproto), yields).value;
        eph_pre = entropy_ratio(pph, pc);
    }

    const double pt_pre = z0_ok + z0_err + z1_ok + z1_err;
    if (pt_pre <= 0.0) {
        out.degenerate = true;
        return out;
    }
    const double q0 = (z0_ok + z0_err) / pt_pre;
    const double e0 = (z0_ok + z0_err) > 0.0 ? z0_err / (z0_ok + z0_err) : 0.0;
    const double e1 = (z1_ok + z1_err) > 0.0 ? z1_err / (z1_ok + z1_err) : 0.0;

    const AoppStats stats =
        aopp_asymptotic_classes(e0, e1, q0, std::min(0.5, eph_pre));

    out.p_t = pt_pre * stats.survival_fraction;  // surviving pairs per round
    out.e_bit = stats.post_bit_error;
    out.p_c = out.p_t * (1.0 - out.e_bit);       // pairs with both positions correct
    out.p_ph = stats.post_phase_error;

    const double priv =
        out.p_c * untagged * untagged * (1.0 - binary_entropy(std::min(0.5, out.p_ph)));
    const double ec = dev.ec_eff * out.p_t * binary_entropy(clamp01(out.e_bit));
    out.r_per_detector = std::max(0.0, out.s * (priv - ec));
    out.r_total = 2.0 * out.r_per_detector;
    return out;
}

RateBreakdown keyrate_for_variant(const DeviceParams& dev, const ChannelPoint& ch,
                                  ProtocolParams proto, Variant variant) {
    proto.m_phases = variant_m_phases(variant);
    if (!variant_uses_delta(variant) && variant_base(variant) != Variant::Continuous)
        proto.delta = M_PI;  // placeholder; discrete sifting ignores the window
    if (variant_base(variant) == Variant::SnsBaseline) proto.delta = M_PI;

    if (variant_uses_aopp(variant))
        return keyrate_with_aopp(dev, ch, proto, variant_base(variant));
    if (variant == Variant::SnsBaseline)
        return keyrate_sns_baseline(dev, ch, proto);
    return keyrate_postselection(dev, ch, proto);
}

}  // namespace snsqkd
