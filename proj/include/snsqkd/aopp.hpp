#pragma once

#include <cstdint>
#include <vector>

#include "snsqkd/params.hpp"

namespace snsqkd {

/// Raw sifted key bits of both parties, in round order. The per-bit tag
/// records whether the round had exactly one sender; it is bookkeeping for
/// the oracle and plays no role in the pairing itself.
struct BitBatch {
    std::vector<std::uint8_t> alice;
    std::vector<std::uint8_t> bob;
    std::vector<std::uint8_t> tag;  ///< 0 = single-sender round, 1 = error-source round

    std::size_t size() const { return bob.size(); }
};

/// Outcome of odd-parity pairing, per input bit.
struct AoppStats {
    double survival_fraction = 0.0;  ///< surviving pairs / input bits, <= 1/2
    double post_bit_error = 0.0;     ///< error rate of the surviving bits
    double post_phase_error = 0.0;   ///< mapped pair-level phase error (analytic path only)
    std::uint64_t pairs = 0;         ///< pairs formed (MC path)
    std::uint64_t survivors = 0;     ///< pairs kept (MC path)
};

/// Exact pairing procedure on a sampled batch. Bob pairs each of his 1-bits
/// with a distinct 0-bit uniformly at random; a pair survives when Alice's
/// two corresponding bits also have odd parity, and the surviving pair
/// contributes the bit at its lower-index position. This is the Monte Carlo
/// oracle for aopp_asymptotic.
AoppStats aopp_pair_mc(const BitBatch& batch, std::uint64_t seed);

/// Closed-form expectation of aopp_pair_mc for a batch whose errors hit
/// Bob's 0-bits and 1-bits at separate rates e0 and e1. zero_fraction is
/// the fraction of Bob's bits equal to 0.
///
/// A random pair joins one 0-position and one 1-position; it survives when
/// Alice differs at both or at neither, and the kept bit is wrong only when
/// she differs at both:
///   survival  = min(q0, 1-q0) * ((1-e0)(1-e1) + e0 e1)
///   bit error = e0 e1 / ((1-e0)(1-e1) + e0 e1)
/// The pair-level phase error uses the documented leading-order mapping
/// e_ph' = 2 e_ph (1 - e_ph); it stands in for the full two-way analysis
/// and is kept behind this interface so it can be replaced in isolation.
AoppStats aopp_asymptotic_classes(double e0, double e1, double zero_fraction,
                                  double pre_phase_error = 0.0);

/// Symmetric-error convenience form: errors independent of the bit value.
AoppStats aopp_asymptotic(double pre_bit_error, double zero_fraction,
                          double pre_phase_error = 0.0);

/// The documented pair-level phase-error mapping.
double aopp_phase_error_map(double pre_phase_error);

}  // namespace snsqkd
