#include "snsqkd/aopp.hpp"

#include <algorithm>
#include <stdexcept>

#include "snsqkd/rng.hpp"

namespace snsqkd {

AoppStats aopp_pair_mc(const BitBatch& batch, std::uint64_t seed) {
    const std::size_t n = batch.size();
    if (n == 0) throw std::invalid_argument("empty batch");
    if (batch.alice.size() != n)
        throw std::invalid_argument("bit strings must have equal length");

    std::vector<std::uint32_t> zeros, ones;
    zeros.reserve(n);
    ones.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        (batch.bob[i] ? ones : zeros).push_back(static_cast<std::uint32_t>(i));

    AoppStats out;
    const std::size_t n_pairs = std::min(zeros.size(), ones.size());
    out.pairs = n_pairs;
    if (n_pairs == 0) return out;

    // Uniform random matching: shuffle both position lists and zip them.
    Xoshiro256 rng(seed);
    for (std::size_t i = zeros.size(); i > 1; --i)
        std::swap(zeros[i - 1], zeros[rng.below(i)]);
    for (std::size_t i = ones.size(); i > 1; --i)
        std::swap(ones[i - 1], ones[rng.below(i)]);

    std::uint64_t kept = 0, errors = 0;
    for (std::size_t k = 0; k < n_pairs; ++k) {
        const std::uint32_t i = zeros[k], j = ones[k];
        if (batch.alice[i] == batch.alice[j]) continue;  // even parity, discarded
        ++kept;
        const std::uint32_t first = std::min(i, j);
        if (batch.alice[first] != batch.bob[first]) ++errors;
    }
    out.survivors = kept;
    out.survival_fraction = static_cast<double>(kept) / static_cast<double>(n);
    out.post_bit_error =
        kept ? static_cast<double>(errors) / static_cast<double>(kept) : 0.0;
    return out;
}

AoppStats aopp_asymptotic_classes(double e0, double e1, double zero_fraction,
                                  double pre_phase_error) {
    for (double v : {e0, e1, zero_fraction, pre_phase_error})
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("aopp inputs must be probabilities");
    AoppStats out;
    const double pair_fraction = std::min(zero_fraction, 1.0 - zero_fraction);
    const double p_survive = (1.0 - e0) * (1.0 - e1) + e0 * e1;
    out.survival_fraction = pair_fraction * p_survive;
    out.post_bit_error = p_survive > 0.0 ? e0 * e1 / p_survive : 0.0;
    out.post_phase_error = aopp_phase_error_map(pre_phase_error);
    return out;
}

AoppStats aopp_asymptotic(double pre_bit_error, double zero_fraction,
                          double pre_phase_error) {
    return aopp_asymptotic_classes(pre_bit_error, pre_bit_error, zero_fraction,
                                   pre_phase_error);
}

double aopp_phase_error_map(double pre_phase_error) {
    return clamp01(2.0 * pre_phase_error * (1.0 - pre_phase_error));
}

}  // namespace snsqkd
