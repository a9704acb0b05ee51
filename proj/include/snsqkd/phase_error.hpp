#pragma once

#include <vector>

#include "snsqkd/params.hpp"

namespace snsqkd {

enum class PhaseVariant { Continuous, M2, M4 };

/// Upper bound on the phase-error probability of sifted right-click (or
/// left-click) rounds where exactly one party sent.
struct PhaseErrorBound {
    double value = 0.0;      ///< reported bound; includes the series tail
    int truncation_j = 0;    ///< photon-number cutoff of the explicit sum
    double tail_bound = 0.0; ///< contribution assigned to terms beyond the cutoff
    PhaseVariant variant = PhaseVariant::Continuous;
};

/// Which physical model produced a yield set.
enum class YieldSource { Analytic, DecoyLp };

/// Click rates of the symmetric photon-number superposition states shared
/// across the two arms, indexed by total photon number j.
///
/// Entry 0 carries the doubled vacuum click rate (the j = 0 component of
/// the phase-averaged source state is an unnormalized vacuum pair), so all
/// entries feed the phase-error sums with plain Poisson weights. Entries
/// with j >= 3 are upper bounds.
struct FockYieldSet {
    std::vector<double> y;
    YieldSource source = YieldSource::Analytic;

    int max_j() const { return static_cast<int>(y.size()) - 1; }
    double at(int j) const { return y[static_cast<std::size_t>(j)]; }
};

/// Truncation policy for the phase-error series.
struct Truncation {
    int j_max = 20;
    /// Double j_max until the tail is below 1e-9 of the value. Disable to
    /// evaluate at an exact cutoff.
    bool auto_extend = true;
};

/// Average right-click yield of the single-photon superposition state over
/// phase differences in [-delta, delta]. The yield is affine in cos of the
/// phase difference, so the window average substitutes its mean sin(delta)/delta.
double avg_yield_single(const DeviceParams& dev, const ChannelPoint& ch,
                        double delta);

/// Left-detector mirror of avg_yield_single over the opposite-phase window.
double avg_yield_single_left(const DeviceParams& dev, const ChannelPoint& ch,
                             double delta);

/// Analytic yield set for the right detector. For continuous randomization
/// the single-photon entry is averaged over the sifting window of width
/// proto.delta; discrete variants keep only exactly matched phases, so the
/// single-photon entry is evaluated at zero phase difference.
FockYieldSet analytic_yields(const DeviceParams& dev, const ChannelPoint& ch,
                             const ProtocolParams& proto, int j_max = 80);

/// Left-detector yields, built from the independently coded left-click
/// formulas. Under the symmetric channel model they equal the right yields.
FockYieldSet analytic_yields_left(const DeviceParams& dev, const ChannelPoint& ch,
                                  const ProtocolParams& proto, int j_max = 80);

/// Phase-error probability for continuous phase randomization: Poisson
/// mixture of the window-averaged yields plus a rigorous series tail.
PhaseErrorBound phase_error_continuous(const DeviceParams& dev,
                                       const ChannelPoint& ch,
                                       const ProtocolParams& proto,
                                       const FockYieldSet& yields,
                                       Truncation trunc = {});

/// Phase-error bound for two discrete phases. On top of the diagonal
/// Poisson mixture, Cauchy-Schwarz cross terms couple all photon numbers of
/// equal parity; they are evaluated through the identity
/// sum_{j!=k} a_j a_k = (sum_j a_j)^2 - sum_j a_j^2 per parity class.
PhaseErrorBound phase_error_m2(const DeviceParams& dev, const ChannelPoint& ch,
                               const ProtocolParams& proto,
                               const FockYieldSet& yields, Truncation trunc = {});

/// Phase-error bound for four discrete phases; cross terms couple photon
/// numbers within each residue class mod 4.
PhaseErrorBound phase_error_m4(const DeviceParams& dev, const ChannelPoint& ch,
                               const ProtocolParams& proto,
                               const FockYieldSet& yields, Truncation trunc = {});

/// Phase-error bound for sifted left-click rounds, evaluated from the
/// left-detector yields. Returns the same value as the right-click bound
/// under the symmetric channel model.
PhaseErrorBound left_click_phase_error(const DeviceParams& dev,
                                       const ChannelPoint& ch,
                                       const ProtocolParams& proto,
                                       PhaseVariant variant,
                                       Truncation trunc = {});

/// Dispatch on variant with right-detector yields.
PhaseErrorBound phase_error(const DeviceParams& dev, const ChannelPoint& ch,
                            const ProtocolParams& proto, PhaseVariant variant,
                            const FockYieldSet& yields, Truncation trunc = {});

}  // namespace snsqkd
