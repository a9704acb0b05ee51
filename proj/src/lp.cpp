#include "snsqkd/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace snsqkd::lp {
namespace {

constexpr double kPivotTol = 1e-11;

struct Tableau {
    int m = 0;                  // constraint rows
    int cols = 0;               // total columns incl. rhs
    int n_total = 0;            // structural + slack + artificial columns
    std::vector<double> data;   // (m + 1) x cols, last row = objective
    std::vector<int> basis;     // basic column per row

    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const {
        return data[static_cast<std::size_t>(r) * cols + c];
    }
    int rhs_col() const { return cols - 1; }

    void pivot(int pr, int pc) {
        const double pv = at(pr, pc);
        for (int c = 0; c < cols; ++c) at(pr, c) /= pv;
        for (int r = 0; r <= m; ++r) {
            if (r == pr) continue;
            const double f = at(r, pc);
            if (f == 0.0) continue;
            for (int c = 0; c < cols; ++c) at(r, c) -= f * at(pr, c);
        }
        basis[pr] = pc;
    }

    // Bland's rule simplex on the current objective row. Returns false when
    // the problem is unbounded in the current phase.
    bool iterate(const std::vector<bool>& allowed) {
        for (;;) {
            int enter = -1;
            for (int c = 0; c < n_total; ++c) {
                if (!allowed[c]) continue;
                if (at(m, c) < -kPivotTol) {
                    enter = c;
                    break;
                }
            }
            if (enter < 0) return true;
            int leave = -1;
            double best = 0.0;
            for (int r = 0; r < m; ++r) {
                const double a = at(r, enter);
                if (a > kPivotTol) {
                    const double t = at(r, rhs_col()) / a;
                    if (leave < 0 || t < best - 1e-15 ||
                        (std::fabs(t - best) <= 1e-15 && basis[r] < basis[leave])) {
                        leave = r;
                        best = t;
                    }
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
    }
};

}  // namespace

Problem::Problem(int n_vars) : n_(n_vars) {
    if (n_vars <= 0) throw std::invalid_argument("n_vars must be positive");
}

void Problem::add_upper(const std::vector<double>& coeffs, double b) {
    if (static_cast<int>(coeffs.size()) != n_)
        throw std::invalid_argument("coefficient count mismatch");
    rows_.push_back(coeffs);
    rhs_.push_back(b);
}

void Problem::add_lower(const std::vector<double>& coeffs, double b) {
    std::vector<double> neg(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) neg[i] = -coeffs[i];
    add_upper(neg, -b);
}

Problem::Solution Problem::maximize(const std::vector<double>& c) const {
    std::vector<double> neg(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) neg[i] = -c[i];
    Solution s = minimize(neg);
    s.objective = -s.objective;
    return s;
}

Problem::Solution Problem::minimize(const std::vector<double>& c) const {
    if (static_cast<int>(c.size()) != n_)
        throw std::invalid_argument("objective size mismatch");
    const int m = static_cast<int>(rows_.size());

    // Row equilibration, then sign normalization so every rhs is >= 0.
    // Flipped rows get a -1 slack and need an artificial variable.
    std::vector<std::vector<double>> a(rows_.begin(), rows_.end());
    std::vector<double> b(rhs_);
    std::vector<double> row_scale(static_cast<std::size_t>(m), 1.0);
    std::vector<int> row_sign(static_cast<std::size_t>(m), 1);
    for (int r = 0; r < m; ++r) {
        double mx = std::fabs(b[r]);
        for (double v : a[r]) mx = std::max(mx, std::fabs(v));
        if (mx > 0.0) {
            row_scale[r] = mx;
            for (double& v : a[r]) v /= mx;
            b[r] /= mx;
        }
        if (b[r] < 0.0) {
            row_sign[r] = -1;
            for (double& v : a[r]) v = -v;
            b[r] = -b[r];
        }
    }

    int n_art = 0;
    for (int r = 0; r < m; ++r)
        if (row_sign[r] < 0) ++n_art;

    Tableau t;
    t.m = m;
    t.n_total = n_ + m + n_art;
    t.cols = t.n_total + 1;
    t.data.assign(static_cast<std::size_t>(m + 1) * t.cols, 0.0);
    t.basis.assign(static_cast<std::size_t>(m), -1);

    int art = n_ + m;
    for (int r = 0; r < m; ++r) {
        for (int j = 0; j < n_; ++j) t.at(r, j) = a[r][static_cast<std::size_t>(j)];
        t.at(r, n_ + r) = row_sign[r] > 0 ? 1.0 : -1.0;
        t.at(r, t.rhs_col()) = b[r];
        if (row_sign[r] > 0) {
            t.basis[r] = n_ + r;
        } else {
            t.at(r, art) = 1.0;
            t.basis[r] = art;
            ++art;
        }
    }

    std::vector<bool> allowed(static_cast<std::size_t>(t.n_total), true);

    if (n_art > 0) {
        // Phase 1: minimize the sum of artificials. Start from unit costs
        // on the artificial columns and reduce by the rows where they sit
        // in the basis.
        for (int cidx = n_ + m; cidx < t.n_total; ++cidx) t.at(m, cidx) = 1.0;
        for (int r = 0; r < m; ++r) {
            if (t.basis[r] < n_ + m) continue;
            for (int cidx = 0; cidx < t.cols; ++cidx) t.at(m, cidx) -= t.at(r, cidx);
        }
        if (!t.iterate(allowed)) return {Status::NumericalFailure, 0.0, {}, 0.0};
        if (t.at(m, t.rhs_col()) < -1e-9)
            return {Status::Infeasible, 0.0, {}, 0.0};
        // Drive any degenerate artificials out of the basis.
        for (int r = 0; r < m; ++r) {
            if (t.basis[r] < n_ + m) continue;
            int enter = -1;
            for (int cidx = 0; cidx < n_ + m; ++cidx)
                if (std::fabs(t.at(r, cidx)) > kPivotTol) {
                    enter = cidx;
                    break;
                }
            if (enter >= 0) t.pivot(r, enter);
        }
        for (int cidx = n_ + m; cidx < t.n_total; ++cidx) allowed[cidx] = false;
        for (int cidx = 0; cidx < t.cols; ++cidx) t.at(m, cidx) = 0.0;
    }

    // Phase 2 objective row: c reduced by the current basis.
    for (int j = 0; j < n_; ++j) t.at(m, j) = c[static_cast<std::size_t>(j)];
    for (int r = 0; r < m; ++r) {
        if (t.basis[r] >= n_) continue;
        const double f = t.at(m, t.basis[r]);
        if (f == 0.0) continue;
        for (int cidx = 0; cidx < t.cols; ++cidx) t.at(m, cidx) -= f * t.at(r, cidx);
    }
    if (!t.iterate(allowed)) return {Status::Unbounded, 0.0, {}, 0.0};

    Solution sol;
    sol.x.assign(static_cast<std::size_t>(n_), 0.0);
    for (int r = 0; r < m; ++r)
        if (t.basis[r] < n_) sol.x[static_cast<std::size_t>(t.basis[r])] = t.at(r, t.rhs_col());
    sol.objective = 0.0;
    for (int j = 0; j < n_; ++j) sol.objective += c[static_cast<std::size_t>(j)] * sol.x[static_cast<std::size_t>(j)];

    // Certificate against the original (unscaled) data. The multiplier of
    // original row r is -objrow[slack_r] / row_scale[r]; for a minimization
    // over rows a.x <= b the duals must be <= 0, the reduced costs
    // nonnegative, and the dual objective y.b must meet the primal value.
    std::vector<double> y(static_cast<std::size_t>(m));
    for (int r = 0; r < m; ++r)
        y[static_cast<std::size_t>(r)] =
            -t.at(m, n_ + r) / row_scale[static_cast<std::size_t>(r)];

    double worst = 0.0;
    double dual_obj = 0.0;
    for (int r = 0; r < m; ++r) {
        double ax = 0.0;
        for (int j = 0; j < n_; ++j)
            ax += rows_[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] *
                  sol.x[static_cast<std::size_t>(j)];
        worst = std::max(worst, (ax - rhs_[static_cast<std::size_t>(r)]) /
                                    row_scale[static_cast<std::size_t>(r)]);
        worst = std::max(worst, y[static_cast<std::size_t>(r)] *
                                    row_scale[static_cast<std::size_t>(r)]);
        dual_obj += y[static_cast<std::size_t>(r)] * rhs_[static_cast<std::size_t>(r)];
    }
    for (double xi : sol.x) worst = std::max(worst, -xi);
    for (int j = 0; j < n_; ++j) {
        double red = c[static_cast<std::size_t>(j)];
        for (int r = 0; r < m; ++r)
            red -= y[static_cast<std::size_t>(r)] *
                   rows_[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
        worst = std::max(worst, -red);
    }
    worst = std::max(worst, std::fabs(sol.objective - dual_obj) /
                                std::max(1.0, std::fabs(sol.objective)));
    sol.certificate_gap = worst;
    sol.status = worst <= kCertTol ? Status::Optimal : Status::NumericalFailure;
    return sol;
}

}  // namespace snsqkd::lp
