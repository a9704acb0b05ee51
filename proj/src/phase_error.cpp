#include "snsqkd/phase_error.hpp"

#include <cmath>
#include <stdexcept>

#include "snsqkd/physics.hpp"

namespace snsqkd {
namespace {

constexpr double kRelTailGuard = 1e-9;
constexpr double kSqrtFloor = 1e-300;  // below this a yield square root is treated as 0

double safe_sqrt(double x) { return x < kSqrtFloor ? 0.0 : std::sqrt(x); }

// Poisson weights e^-mu mu^j / j! for j = 0..j_max, computed by forward
// recursion.
std::vector<double> poisson_weights(double mu, int j_max) {
    std::vector<double> w(static_cast<std::size_t>(j_max) + 1);
    w[0] = std::exp(-mu);
    for (int j = 1; j <= j_max; ++j) w[j] = w[j - 1] * mu / j;
    return w;
}

// P(Poisson(mu) > j_max), summed forward from the first excluded term.
double poisson_tail(double mu, int j_max) {
    double term = std::exp(-mu);
    for (int j = 1; j <= j_max + 1; ++j) term *= mu / j;
    double sum = 0.0;
    int j = j_max + 1;
    while (term > 0.0 && (sum == 0.0 || term > sum * 1e-18) && j < j_max + 2000) {
        sum += term;
        ++j;
        term *= mu / j;
    }
    return sum;
}

// Sum of sqrt(e^-mu mu^j / j!) over j > j_max in the residue class (j mod m == r).
double sqrt_weight_tail(double mu, int j_max, int m, int r) {
    double sum = 0.0;
    double w = std::exp(-mu);
    for (int j = 1; j <= j_max; ++j) w *= mu / j;
    int j = j_max;
    for (int extra = 1; extra <= 400; ++extra) {
        ++j;
        w *= mu / j;
        if (j % m == r) {
            const double s = safe_sqrt(w);
            if (s == 0.0) break;
            sum += s;
            if (s < sum * 1e-18) break;
        }
    }
    return sum;
}

struct SeriesParts {
    double diagonal = 0.0;    // sum of Poisson-weighted yields up to the cutoff
    double cross = 0.0;       // Cauchy-Schwarz cross terms (zero for continuous)
    double tail = 0.0;        // bound on everything beyond the cutoff
};

SeriesParts evaluate_series(const FockYieldSet& yields, double mu, int j_max,
                            int m_classes) {
    SeriesParts parts;
    const auto w = poisson_weights(mu, j_max);
    for (int j = 0; j <= j_max; ++j) parts.diagonal += w[j] * yields.at(j);

    // Diagonal tail: every truncated term's yield is at most the factor-2
    // multi-photon bound.
    parts.tail = 2.0 * poisson_tail(mu, j_max);

    if (m_classes > 0) {
        for (int r = 0; r < m_classes; ++r) {
            double s = 0.0, s2 = 0.0;
            for (int j = r; j <= j_max; j += m_classes) {
                const double a = safe_sqrt(w[j] * yields.at(j));
                s += a;
                s2 += a * a;
            }
            parts.cross += s * s - s2;
            // Cross-term tail: truncated amplitudes bounded by yield 1.
            const double t = sqrt_weight_tail(mu, j_max, m_classes, r);
            parts.tail += 2.0 * s * t + t * t;
        }
    }
    return parts;
}

PhaseErrorBound assemble(const DeviceParams& dev, const ChannelPoint&,
                         const ProtocolParams& proto, const FockYieldSet& yields,
                         Truncation trunc, PhaseVariant variant, int m_classes) {
    dev.validate();
    proto.validate();
    if (trunc.j_max < 1) throw std::invalid_argument("truncation j_max must be >= 1");
    if (yields.max_j() < trunc.j_max)
        throw std::invalid_argument("yield set does not cover the requested truncation");

    const double prefactor = proto.p_send * (1.0 - proto.p_send);
    int j_max = trunc.j_max;
    for (;;) {
        const SeriesParts parts = evaluate_series(yields, proto.mu, j_max, m_classes);
        PhaseErrorBound out;
        out.truncation_j = j_max;
        out.tail_bound = prefactor * parts.tail;
        out.value = prefactor * (parts.diagonal + parts.cross) + out.tail_bound;
        out.variant = variant;
        if (prefactor == 0.0 || out.tail_bound <= kRelTailGuard * out.value)
            return out;
        if (trunc.auto_extend && 2 * j_max <= yields.max_j()) {
            j_max *= 2;
            continue;
        }
        throw std::runtime_error(
            "phase-error truncation too small: tail exceeds 1e-9 of the value");
    }
}

}  // namespace

double avg_yield_single(const DeviceParams& dev, const ChannelPoint& ch,
                        double delta) {
    if (!(delta > 0.0 && delta <= M_PI))
        throw std::invalid_argument("delta must be in (0, pi]");
    const double mean_cos = std::sin(delta) / delta;
    const double sq = ch.arm_eta;
    const double d = dev.dark;
    const double e = dev.misalign;
    const double p_left = 0.5 * (1.0 + mean_cos) * (1.0 - e) +
                          0.5 * (1.0 - mean_cos) * e;
    return clamp01(sq * (1.0 - p_left * (1.0 - d)) + (1.0 - sq) * d);
}

double avg_yield_single_left(const DeviceParams& dev, const ChannelPoint& ch,
                             double delta) {
    if (!(delta > 0.0 && delta <= M_PI))
        throw std::invalid_argument("delta must be in (0, pi]");
    // Over the left window the phase difference is pi + u, u in [-delta, delta],
    // so the mean of cos collapses to -sin(delta)/delta.
    const double mean_cos = -std::sin(delta) / delta;
    const double sq = ch.arm_eta;
    const double d = dev.dark;
    const double e = dev.misalign;
    const double p_right = 0.5 * (1.0 - mean_cos) * (1.0 - e) +
                           0.5 * (1.0 + mean_cos) * e;
    return clamp01(sq * (1.0 - p_right * (1.0 - d)) + (1.0 - sq) * d);
}

FockYieldSet analytic_yields(const DeviceParams& dev, const ChannelPoint& ch,
                             const ProtocolParams& proto, int j_max) {
    if (j_max < 3) throw std::invalid_argument("j_max must be >= 3");
    FockYieldSet ys;
    ys.source = YieldSource::Analytic;
    ys.y.resize(static_cast<std::size_t>(j_max) + 1);
    ys.y[0] = clamp01(2.0 * physics::click_vacuum(dev));
    ys.y[1] = proto.discrete() ? physics::click_single_photon(dev, ch, 0.0)
                               : avg_yield_single(dev, ch, proto.delta);
    ys.y[2] = physics::click_two_photon(dev, ch);
    for (int j = 3; j <= j_max; ++j)
        ys.y[j] = physics::click_multi_photon_upper(dev, ch, j);
    return ys;
}

FockYieldSet analytic_yields_left(const DeviceParams& dev, const ChannelPoint& ch,
                                  const ProtocolParams& proto, int j_max) {
    if (j_max < 3) throw std::invalid_argument("j_max must be >= 3");
    FockYieldSet ys;
    ys.source = YieldSource::Analytic;
    ys.y.resize(static_cast<std::size_t>(j_max) + 1);
    ys.y[0] = clamp01(2.0 * physics::click_vacuum(dev));
    ys.y[1] = proto.discrete() ? physics::click_single_photon_left(dev, ch, M_PI)
                               : avg_yield_single_left(dev, ch, proto.delta);
    // Two and more photons transmit independently in the worst case, which
    // is port-symmetric.
    ys.y[2] = physics::click_two_photon(dev, ch);
    for (int j = 3; j <= j_max; ++j)
        ys.y[j] = physics::click_multi_photon_upper(dev, ch, j);
    return ys;
}

PhaseErrorBound phase_error_continuous(const DeviceParams& dev,
                                       const ChannelPoint& ch,
                                       const ProtocolParams& proto,
                                       const FockYieldSet& yields,
                                       Truncation trunc) {
    return assemble(dev, ch, proto, yields, trunc, PhaseVariant::Continuous, 0);
}

PhaseErrorBound phase_error_m2(const DeviceParams& dev, const ChannelPoint& ch,
                               const ProtocolParams& proto,
                               const FockYieldSet& yields, Truncation trunc) {
    return assemble(dev, ch, proto, yields, trunc, PhaseVariant::M2, 2);
}

PhaseErrorBound phase_error_m4(const DeviceParams& dev, const ChannelPoint& ch,
                               const ProtocolParams& proto,
                               const FockYieldSet& yields, Truncation trunc) {
    return assemble(dev, ch, proto, yields, trunc, PhaseVariant::M4, 4);
}

PhaseErrorBound phase_error(const DeviceParams& dev, const ChannelPoint& ch,
                            const ProtocolParams& proto, PhaseVariant variant,
                            const FockYieldSet& yields, Truncation trunc) {
    switch (variant) {
        case PhaseVariant::Continuous:
            return phase_error_continuous(dev, ch, proto, yields, trunc);
        case PhaseVariant::M2:
            return phase_error_m2(dev, ch, proto, yields, trunc);
        case PhaseVariant::M4:
            return phase_error_m4(dev, ch, proto, yields, trunc);
    }
    throw std::logic_error("unknown phase variant");
}

PhaseErrorBound left_click_phase_error(const DeviceParams& dev,
                                       const ChannelPoint& ch,
                                       const ProtocolParams& proto,
                                       PhaseVariant variant, Truncation trunc) {
    const FockYieldSet ys = analytic_yields_left(dev, ch, proto);
    return phase_error(dev, ch, proto, variant, ys, trunc);
}

}  // namespace snsqkd
