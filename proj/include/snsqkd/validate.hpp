#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "snsqkd/mcsim.hpp"
#include "snsqkd/params.hpp"

namespace snsqkd {

/// One analytic-versus-simulation comparison.
struct ZScoreRow {
    std::string quantity;
    double loss_db = 0.0;
    double expected = 0.0;
    double observed = 0.0;
    double z = 0.0;
    bool pass = true;  ///< |z| <= 3
};

/// z-score of an observed count against an expected probability under the
/// binomial model. Degenerate expectations (0 or 1) pass only on exact
/// agreement.
double binomial_z(std::uint64_t count, std::uint64_t trials, double expected_p);

/// Runs the protocol simulation at one channel point and compares every
/// analytic observable against it: sifted click rates, the single-sender
/// subset, both QBERs, the unsifted totals used by the no-sifting baseline
/// and the j = 1, 2 photon click rates. Also asserts that sifted
/// single-sender rounds carry no bit errors.
std::vector<ZScoreRow> validate_point(const DeviceParams& dev, const ChannelPoint& ch,
                                      const ProtocolParams& proto,
                                      std::uint64_t n_rounds, std::uint64_t seed,
                                      const MCOptions& opts = {});

}  // namespace snsqkd
