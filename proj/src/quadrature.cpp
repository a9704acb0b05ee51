#include "snsqkd/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace snsqkd {
namespace {

// 15-node Gauss-Legendre rule on [-1, 1].
constexpr int kNodes = 15;
constexpr double kX[kNodes] = {
    -0.9879925180204854, -0.9372733924007060, -0.8482065834104272,
    -0.7244177313601701, -0.5709721726085388, -0.3941513470775634,
    -0.2011940939974345, 0.0,                 0.2011940939974345,
    0.3941513470775634,  0.5709721726085388,  0.7244177313601701,
    0.8482065834104272,  0.9372733924007060,  0.9879925180204854};
constexpr double kW[kNodes] = {
    0.0307532419961173, 0.0703660474881081, 0.1071592204671719,
    0.1395706779261543, 0.1662692058169939, 0.1861610000155622,
    0.1984314853271116, 0.2025782419255613, 0.1984314853271116,
    0.1861610000155622, 0.1662692058169939, 0.1395706779261543,
    0.1071592204671719, 0.0703660474881081, 0.0307532419961173};

double panel(const std::function<double(double)>& f, double a, double b) {
    const double h = 0.5 * (b - a);
    const double m = 0.5 * (a + b);
    double s = 0.0;
    for (int i = 0; i < kNodes; ++i) s += kW[i] * f(m + h * kX[i]);
    return s * h;
}

double refine(const std::function<double(double)>& f, double a, double b,
              double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double left = panel(f, a, m);
    const double right = panel(f, m, b);
    const double err = std::fabs(left + right - whole);
    if (err <= tol || depth >= 40) return left + right;
    return refine(f, a, m, left, 0.5 * tol, depth + 1) +
           refine(f, m, b, right, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol) {
    if (!(abs_tol > 0.0)) throw std::invalid_argument("abs_tol must be > 0");
    if (a == b) return 0.0;
    return refine(f, a, b, panel(f, a, b), abs_tol, 0);
}

}  // namespace snsqkd
