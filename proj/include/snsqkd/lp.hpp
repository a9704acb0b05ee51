#pragma once

#include <vector>

namespace snsqkd::lp {

/// Dense linear program over x >= 0 with rows a.x <= b (use add_lower for
/// a.x >= b). Solved by a two-phase primal simplex with Bland's rule.
///
/// Every reported optimum carries an independently recomputed certificate:
/// primal residuals, dual feasibility of the simplex multipliers and the
/// primal-dual gap are all checked against the original data. A solve whose
/// certificate exceeds the tolerance is reported as NumericalFailure rather
/// than returned as a bound.
class Problem {
public:
    enum class Status { Optimal, Infeasible, Unbounded, NumericalFailure };

    struct Solution {
        Status status = Status::NumericalFailure;
        double objective = 0.0;
        std::vector<double> x;
        double certificate_gap = 0.0;  ///< worst violation found by the check
    };

    explicit Problem(int n_vars);

    int n_vars() const { return n_; }

    void add_upper(const std::vector<double>& coeffs, double b);  ///< a.x <= b
    void add_lower(const std::vector<double>& coeffs, double b);  ///< a.x >= b

    Solution minimize(const std::vector<double>& c) const;
    Solution maximize(const std::vector<double>& c) const;

    static constexpr double kCertTol = 1e-9;

private:
    int n_;
    std::vector<std::vector<double>> rows_;  // stored as a.x <= b
    std::vector<double> rhs_;
};

}  // namespace snsqkd::lp
