#include "snsqkd/decoy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "snsqkd/quadrature.hpp"

namespace snsqkd {
namespace {

std::string class_token(SiftClass c) {
    switch (c) {
        case SiftClass::Matched: return "matched";
        case SiftClass::Opposite: return "opposite";
        case SiftClass::Independent: return "independent";
    }
    throw std::logic_error("unknown sift class");
}

SiftClass class_from_token(const std::string& tok) {
    if (tok == "matched") return SiftClass::Matched;
    if (tok == "opposite") return SiftClass::Opposite;
    if (tok == "independent") return SiftClass::Independent;
    throw std::runtime_error("unknown sift class token: " + tok);
}

std::string detector_token(Detector d) {
    return d == Detector::Right ? "right" : "left";
}

Detector detector_from_token(const std::string& tok) {
    if (tok == "right") return Detector::Right;
    if (tok == "left") return Detector::Left;
    throw std::runtime_error("unknown detector token: " + tok);
}

// e^-x x^n / n! for n = 0..n_max.
std::vector<double> poisson_row(double x, int n_max) {
    std::vector<double> w(static_cast<std::size_t>(n_max) + 1);
    w[0] = std::exp(-x);
    for (int n = 1; n <= n_max; ++n) w[n] = w[n - 1] * x / n;
    return w;
}

}  // namespace

DecoyDataset DecoyDataset::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset: " + path);
    DecoyDataset ds;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string cls, det;
        DecoyObservation obs;
        if (!(ss >> obs.intensity)) continue;  // blank line
        if (!(ss >> cls >> det >> obs.gain))
            throw std::runtime_error("dataset line " + std::to_string(lineno) +
                                     ": expected 'intensity class detector gain'");
        obs.sift_class = class_from_token(cls);
        obs.detector = detector_from_token(det);
        if (obs.intensity < 0.0)
            throw std::runtime_error("dataset line " + std::to_string(lineno) +
                                     ": negative intensity");
        if (!(obs.gain >= 0.0 && obs.gain <= 1.0))
            throw std::runtime_error("dataset line " + std::to_string(lineno) +
                                     ": gain outside [0,1]");
        ds.entries.push_back(obs);
    }
    return ds;
}

void DecoyDataset::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write dataset: " + path);
    out << "# intensity class detector gain\n";
    out.precision(17);
    for (const auto& e : entries)
        out << e.intensity << ' ' << class_token(e.sift_class) << ' '
            << detector_token(e.detector) << ' ' << e.gain << '\n';
}

int DecoyConstraintSystem::index_of(const std::string& name) const {
    const auto it = std::find(var_names.begin(), var_names.end(), name);
    if (it == var_names.end()) throw std::logic_error("unknown variable: " + name);
    return static_cast<int>(it - var_names.begin());
}

DecoyConstraintSystem build_constraints(const DecoyDataset& ds, int j_max,
                                        Detector detector) {
    if (j_max < 3) throw std::invalid_argument("j_max must be >= 3");
    std::vector<DecoyObservation> obs;
    for (const auto& e : ds.entries)
        if (e.detector == detector) obs.push_back(e);
    if (obs.empty())
        throw std::invalid_argument("no observations for the requested detector");

    // Variable layout: shared vacuum yield, then the matched-class and
    // opposite-class n-photon yields, then the per-arm photon pair yields.
    std::vector<std::string> names;
    names.push_back("y00");
    names.push_back("y1");
    names.push_back("y2_plus");
    for (int n = 3; n <= j_max; ++n) names.push_back("m" + std::to_string(n));
    names.push_back("o1");
    names.push_back("y2_minus");
    for (int n = 3; n <= j_max; ++n) names.push_back("o" + std::to_string(n));
    std::vector<std::pair<int, int>> jk;
    for (int j = 0; j <= j_max; ++j)
        for (int k = 0; k <= j_max; ++k)
            if (j != 0 || k != 0) jk.emplace_back(j, k);
    for (const auto& [j, k] : jk)
        names.push_back("y" + std::to_string(j) + "_" + std::to_string(k));

    const int nv = static_cast<int>(names.size());
    DecoyConstraintSystem sys{lp::Problem(nv), names, j_max, detector};
    auto idx = [&](const std::string& s) {
        return static_cast<std::size_t>(sys.index_of(s));
    };

    // Unit box.
    for (int v = 0; v < nv; ++v) {
        std::vector<double> row(static_cast<std::size_t>(nv), 0.0);
        row[static_cast<std::size_t>(v)] = 1.0;
        sys.problem.add_upper(row, 1.0);
    }

    for (const auto& e : obs) {
        std::vector<double> row(static_cast<std::size_t>(nv), 0.0);
        double tail = 0.0;
        if (e.sift_class == SiftClass::Independent) {
            const auto u = poisson_row(e.intensity, j_max);
            double covered = 0.0;
            row[idx("y00")] = u[0] * u[0];
            covered += u[0] * u[0];
            for (const auto& [j, k] : jk) {
                const double w = u[static_cast<std::size_t>(j)] * u[static_cast<std::size_t>(k)];
                row[idx("y" + std::to_string(j) + "_" + std::to_string(k))] = w;
                covered += w;
            }
            tail = std::max(0.0, 1.0 - covered);
        } else {
            const auto w = poisson_row(2.0 * e.intensity, j_max);
            double covered = 0.0;
            for (double v : w) covered += v;
            tail = std::max(0.0, 1.0 - covered);
            row[idx("y00")] = w[0];
            if (e.sift_class == SiftClass::Matched) {
                row[idx("y1")] = w[1];
                row[idx("y2_plus")] = w[2];
                for (int n = 3; n <= j_max; ++n)
                    row[idx("m" + std::to_string(n))] = w[static_cast<std::size_t>(n)];
            } else {
                row[idx("o1")] = w[1];
                row[idx("y2_minus")] = w[2];
                for (int n = 3; n <= j_max; ++n)
                    row[idx("o" + std::to_string(n))] = w[static_cast<std::size_t>(n)];
            }
        }
        sys.problem.add_upper(row, e.gain);
        sys.problem.add_lower(row, e.gain - tail);
    }
    return sys;
}

namespace {

Interval bound_variable(const lp::Problem& problem, int nv, int target) {
    std::vector<double> c(static_cast<std::size_t>(nv), 0.0);
    c[static_cast<std::size_t>(target)] = 1.0;
    const auto lo = problem.minimize(c);
    const auto hi = problem.maximize(c);
    auto check = [](const lp::Problem::Solution& s) {
        if (s.status == lp::Problem::Status::Infeasible)
            throw std::runtime_error(
                "decoy data inconsistent: constraint system is infeasible");
        if (s.status != lp::Problem::Status::Optimal)
            throw std::runtime_error("decoy bound solve failed its certificate");
    };
    check(lo);
    check(hi);
    return {clamp01(lo.objective), clamp01(hi.objective)};
}

}  // namespace

YieldBounds solve_yield_bounds(const DecoyConstraintSystem& sys) {
    const int nv = sys.problem.n_vars();
    YieldBounds out;
    out.j_max = sys.j_max;
    out.detector = sys.detector;
    out.y00 = bound_variable(sys.problem, nv, sys.index_of("y00"));
    out.y1 = bound_variable(sys.problem, nv, sys.index_of("y1"));
    out.y2_plus = bound_variable(sys.problem, nv, sys.index_of("y2_plus"));
    out.y2_minus = bound_variable(sys.problem, nv, sys.index_of("y2_minus"));
    out.y11 = bound_variable(sys.problem, nv, sys.index_of("y1_1"));
    out.y0j.assign(static_cast<std::size_t>(sys.j_max) + 1, Interval{0.0, 1.0});
    out.yj0.assign(static_cast<std::size_t>(sys.j_max) + 1, Interval{0.0, 1.0});
    for (int j = 3; j <= sys.j_max; ++j) {
        out.y0j[static_cast<std::size_t>(j)] =
            bound_variable(sys.problem, nv, sys.index_of("y0_" + std::to_string(j)));
        out.yj0[static_cast<std::size_t>(j)] =
            bound_variable(sys.problem, nv, sys.index_of("y" + std::to_string(j) + "_0"));
    }
    return out;
}

Interval combine_two_photon(Interval plus_avg, Interval minus_avg, Interval y11) {
    Interval out;
    out.lo = std::max(0.0, plus_avg.lo + minus_avg.lo - y11.hi);
    out.hi = std::min(1.0, plus_avg.hi + minus_avg.hi - y11.lo);
    out.hi = std::max(out.hi, out.lo);
    return out;
}

double high_order_upper(double y_0j_upper, double y_j0_upper) {
    return std::min(1.0, y_0j_upper + y_j0_upper);
}

FockYieldSet yields_from_bounds(const YieldBounds& bounds, int series_j_max) {
    if (series_j_max < 3) throw std::invalid_argument("series_j_max must be >= 3");
    FockYieldSet ys;
    ys.source = YieldSource::DecoyLp;
    ys.y.assign(static_cast<std::size_t>(series_j_max) + 1, 1.0);
    ys.y[0] = clamp01(2.0 * bounds.y00.hi);
    ys.y[1] = bounds.y1.hi;
    ys.y[2] = combine_two_photon(bounds.y2_plus, bounds.y2_minus, bounds.y11).hi;
    for (int j = 3; j <= bounds.j_max && j <= series_j_max; ++j)
        ys.y[static_cast<std::size_t>(j)] =
            high_order_upper(bounds.y0j[static_cast<std::size_t>(j)].hi,
                             bounds.yj0[static_cast<std::size_t>(j)].hi);
    return ys;
}

DecoyDataset synthetic_dataset(const DeviceParams& dev, const ChannelPoint& ch,
                               double delta, const std::vector<double>& intensities,
                               Detector detector) {
    dev.validate();
    if (!(delta > 0.0 && delta <= M_PI))
        throw std::invalid_argument("delta must be in (0, pi]");
    const double sign = detector == Detector::Right ? 1.0 : -1.0;
    auto click = [&](double nu, double phase) {
        // Right port is dark at matched phases, bright at opposite ones.
        const double intensity =
            ch.arm_eta * nu *
            (1.0 - sign * (1.0 - 2.0 * dev.misalign) * std::cos(phase));
        return 1.0 - (1.0 - dev.dark) * std::exp(-intensity);
    };
    DecoyDataset ds;
    for (double nu : intensities) {
        for (SiftClass cls :
             {SiftClass::Matched, SiftClass::Opposite, SiftClass::Independent}) {
            DecoyObservation obs;
            obs.intensity = nu;
            obs.sift_class = cls;
            obs.detector = detector;
            if (nu == 0.0) {
                obs.gain = dev.dark;
            } else if (cls == SiftClass::Matched) {
                obs.gain = integrate([&](double x) { return click(nu, x); }, -delta,
                                     delta) /
                           (2.0 * delta);
            } else if (cls == SiftClass::Opposite) {
                obs.gain = integrate([&](double x) { return click(nu, M_PI + x); },
                                     -delta, delta) /
                           (2.0 * delta);
            } else {
                obs.gain = integrate([&](double x) { return click(nu, x); }, 0.0,
                                     2.0 * M_PI) /
                           (2.0 * M_PI);
            }
            ds.entries.push_back(obs);
        }
    }
    return ds;
}

}  // namespace snsqkd
