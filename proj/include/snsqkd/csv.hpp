#pragma once

#include <ostream>
#include <vector>

#include "snsqkd/optimize.hpp"

namespace snsqkd {

/// Sweep table in CSV form: one row per (loss, variant), loss-major with
/// variants in their configured order, floats at 12 significant digits.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows,
                     const std::vector<Variant>& variants,
                     const std::vector<double>& losses);

}  // namespace snsqkd
