#pragma once

#include <string>
#include <vector>

#include "snsqkd/lp.hpp"
#include "snsqkd/params.hpp"
#include "snsqkd/phase_error.hpp"

namespace snsqkd {

/// Phase relation under which a decoy gain was collected.
enum class SiftClass { Matched, Opposite, Independent };
enum class Detector { Right, Left };

struct DecoyObservation {
    double intensity = 0.0;  ///< per-arm mean photon number of the decoy pair
    SiftClass sift_class = SiftClass::Matched;
    Detector detector = Detector::Right;
    double gain = 0.0;       ///< observed click probability
};

/// Observed decoy gains. Text format: one observation per line,
///   intensity  class  detector  gain
/// with class in {matched, opposite, independent} and detector in
/// {left, right}; '#' starts a comment.
struct DecoyDataset {
    std::vector<DecoyObservation> entries;

    static DecoyDataset load(const std::string& path);
    void save(const std::string& path) const;
};

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

/// Certified bounds on the yields entering the phase-error estimate.
/// y0j/yj0 are indexed by photon number; entries below j = 3 are unused.
struct YieldBounds {
    Interval y00;       ///< vacuum pair
    Interval y1;        ///< window-averaged single-photon superposition
    Interval y2_plus;   ///< matched-phase two-photon state
    Interval y2_minus;  ///< opposite-phase two-photon state
    Interval y11;       ///< one photon in each arm
    std::vector<Interval> y0j;
    std::vector<Interval> yj0;
    int j_max = 0;
    Detector detector = Detector::Right;
};

/// Poisson-mixture constraint system for one detector. Matched and
/// opposite phase classes expand the paired coherent state into symmetric
/// n-photon components sharing the vacuum yield; independent-phase entries
/// constrain the per-arm photon-number yields through a product-Poisson
/// expansion. Truncated terms are covered by an explicit tail interval.
struct DecoyConstraintSystem {
    lp::Problem problem;
    std::vector<std::string> var_names;
    int j_max = 0;
    Detector detector = Detector::Right;

    int index_of(const std::string& name) const;
};

DecoyConstraintSystem build_constraints(const DecoyDataset& ds, int j_max,
                                        Detector detector = Detector::Right);

/// Minimizes and maximizes each target yield subject to the constraint
/// system and the unit box. Throws std::runtime_error on an infeasible
/// system (inconsistent data) or a failed solver certificate.
YieldBounds solve_yield_bounds(const DecoyConstraintSystem& system);

/// Interval for the symmetric two-photon state obtained by combining the
/// matched and opposite-phase two-photon yields with the cross yield.
Interval combine_two_photon(Interval plus_avg, Interval minus_avg, Interval y11);

/// Upper bound for the symmetric j-photon state (j >= 3): the sum of the
/// two single-arm bounds, clamped to 1.
double high_order_upper(double y_0j_upper, double y_j0_upper);

/// Conservative yield set for the phase-error bounds: upper bounds
/// everywhere, extended by the trivial bound beyond the LP truncation.
FockYieldSet yields_from_bounds(const YieldBounds& bounds, int series_j_max = 80);

/// Noiseless dataset computed from the closed-form coherent-state click
/// model, for feasibility and containment tests. delta is the sifting
/// half-width shared with the signal states.
DecoyDataset synthetic_dataset(const DeviceParams& dev, const ChannelPoint& ch,
                               double delta, const std::vector<double>& intensities,
                               Detector detector = Detector::Right);

}  // namespace snsqkd
