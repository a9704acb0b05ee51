#pragma once

#include <functional>

namespace snsqkd {

/// Adaptive Gauss-Legendre integration of f over [a, b].
///
/// Each panel is evaluated with a 15-node rule and compared against its two
/// halves; panels are split until the difference is below the tolerance
/// share assigned to them. Intended for smooth integrands.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12);

}  // namespace snsqkd
