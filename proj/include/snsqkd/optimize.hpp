#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "snsqkd/keyrate.hpp"
#include "snsqkd/params.hpp"

namespace snsqkd {

/// Search box for the protocol parameters.
struct OptimizerBox {
    double p_min = 1e-3, p_max = 0.5;
    double mu_min = 1e-3, mu_max = 1.0;
    double delta_min = 1e-3, delta_max = M_PI / 2.0;
};

struct OptimizationResult {
    ProtocolParams best_params;
    double best_rate = 0.0;
    /// Incumbents recorded along the way (coarse grid best, then one entry
    /// per descent sweep).
    std::vector<std::pair<ProtocolParams, double>> trace;
    bool converged = false;
};

/// Maximizes an arbitrary rate function over the box: coarse logarithmic
/// grid followed by coordinate descent with golden-section line searches,
/// to a relative rate tolerance of 1e-4. When use_delta is false the
/// sifting width is not searched.
OptimizationResult optimize_function(
    const std::function<double(const ProtocolParams&)>& rate, const OptimizerBox& box,
    bool use_delta, std::optional<ProtocolParams> warm_start = std::nullopt);

/// Maximizes the key rate of the given variant at one channel point.
OptimizationResult optimize_point(
    const DeviceParams& dev, const ChannelPoint& ch, Variant variant,
    const OptimizerBox& box = {},
    std::optional<ProtocolParams> warm_start = std::nullopt);

struct SweepRow {
    double loss_db = 0.0;
    Variant variant = Variant::Continuous;
    OptimizationResult opt;
    RateBreakdown rate;
};

/// Optimized rate curve over the loss grid for each variant. Each point is
/// warm-started from the previous optimum of its variant (and always
/// re-seeded from the coarse grid, so cold and warm runs agree). Variants
/// are processed in parallel; rows come back ordered by (variant, loss).
std::vector<SweepRow> sweep(const DeviceParams& dev,
                            const std::vector<double>& losses_db,
                            const std::vector<Variant>& variants,
                            const OptimizerBox& box = {}, bool warm_start = true,
                            int jobs = 0);

/// Largest grid loss whose optimized rate exceeds the floor, or a negative
/// value when the variant never clears it.
double max_tolerable_loss(const std::vector<SweepRow>& rows, Variant variant,
                          double rate_floor = 1e-12);

}  // namespace snsqkd
