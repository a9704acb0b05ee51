#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "snsqkd/params.hpp"

namespace snsqkd {

/// A frequency estimate with its binomial standard error.
struct FreqEstimate {
    double rate = 0.0;
    double std_err = 0.0;
    std::uint64_t numerator = 0;
    std::uint64_t denominator = 0;
};

/// Aggregated outcome counts of a protocol simulation. Sifted quantities
/// are per emitted round; QBER entries are conditional on the sifted click
/// sets. Unsifted totals are kept for validating the no-sifting baseline.
struct MCSummary {
    std::uint64_t n_rounds = 0;
    FreqEstimate sifted_right_rate;
    FreqEstimate sifted_left_rate;
    FreqEstimate c_round_right_rate;  ///< sifted right clicks from single-sender rounds
    FreqEstimate qber_right;
    FreqEstimate qber_left;
    FreqEstimate total_right_rate;    ///< right clicks regardless of sifting
    FreqEstimate total_right_qber;    ///< error-source fraction of all right clicks
    std::uint64_t c_round_bit_errors = 0;  ///< sifted single-sender rounds with unequal bits
    std::uint64_t double_clicks = 0;       ///< rounds discarded because both detectors fired
};

struct MCOptions {
    int jobs = 0;                    ///< worker threads; 0 = hardware concurrency
    std::uint64_t block_size = 1 << 20;
    /// When set, every round is appended to this CSV file and the
    /// simulation runs single threaded.
    std::optional<std::string> dump_path;
};

/// Round-by-round simulation of the protocol. Each party sends a pulse
/// with probability p and announces a phase (uniform, or uniform over the
/// discrete set). Detector clicks are sampled from the per-port coherent
/// click probabilities, which are exact for threshold detectors. Rounds
/// where both detectors fire are discarded as failed events.
///
/// Results are bit-for-bit reproducible for a fixed (seed, block_size),
/// independent of the worker count.
MCSummary simulate(const DeviceParams& dev, const ChannelPoint& ch,
                   const ProtocolParams& proto, std::uint64_t n_rounds,
                   std::uint64_t seed, const MCOptions& opts = {});

/// Click-frequency estimate for the arm-symmetric Fock superposition states
/// (j = 1 or 2) by sampling photon survival and exit ports. Counts marginal
/// right-detector clicks, matching the closed-form click probabilities.
FreqEstimate simulate_fock(const DeviceParams& dev, const ChannelPoint& ch, int j,
                           double delta_phase, std::uint64_t n_rounds,
                           std::uint64_t seed, const MCOptions& opts = {});

}  // namespace snsqkd
