#include "snsqkd/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace snsqkd {
namespace {

constexpr double kRelTol = 1e-4;   // contract tolerance on the returned rate
constexpr double kSweepTol = 1e-7;  // internal stop, well inside the contract
constexpr int kGoldenIters = 64;
constexpr int kMaxSweeps = 160;
constexpr int kDescentStarts = 3;   // best coarse-grid cells refined per point

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] =
            std::exp(llo + (lhi - llo) * i / static_cast<double>(n - 1));
    return g;
}

// Golden-section maximization of f on [lo, hi].
double golden_max(const std::function<double(double)>& f, double lo, double hi) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < kGoldenIters; ++i) {
        if (f1 > f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

ProtocolParams clamp_to_box(ProtocolParams p, const OptimizerBox& box) {
    p.p_send = std::clamp(p.p_send, box.p_min, box.p_max);
    p.mu = std::clamp(p.mu, box.mu_min, box.mu_max);
    p.delta = std::clamp(p.delta, box.delta_min, box.delta_max);
    return p;
}

// Deterministic Nelder-Mead polish. Coordinate descent alone crawls on the
// curved ridges that show up near the maximum-distance end of the curves,
// so the incumbent is refined with a simplex search clamped to the box.
struct Simplex {
    int dim;
    const OptimizerBox& box;
    const std::function<double(const ProtocolParams&)>& rate;

    double lo(int c) const {
        return c == 0 ? box.p_min : (c == 1 ? box.mu_min : box.delta_min);
    }
    double hi(int c) const {
        return c == 0 ? box.p_max : (c == 1 ? box.mu_max : box.delta_max);
    }

    ProtocolParams to_params(const std::vector<double>& x,
                             const ProtocolParams& base) const {
        ProtocolParams p = base;
        p.p_send = std::clamp(x[0], box.p_min, box.p_max);
        p.mu = std::clamp(x[1], box.mu_min, box.mu_max);
        if (dim > 2) p.delta = std::clamp(x[2], box.delta_min, box.delta_max);
        return p;
    }

    ProtocolParams run(ProtocolParams start, double& best_rate) const {
        const int n = dim;
        std::vector<std::vector<double>> pts;
        std::vector<double> vals;
        std::vector<double> x0 = {start.p_send, start.mu};
        if (n > 2) x0.push_back(start.delta);
        pts.push_back(x0);
        vals.push_back(-rate(to_params(x0, start)));
        for (int c = 0; c < n; ++c) {
            auto x = x0;
            const double step = 0.05 * (hi(c) - lo(c));
            x[static_cast<std::size_t>(c)] =
                std::clamp(x[static_cast<std::size_t>(c)] + step, lo(c), hi(c));
            if (x[static_cast<std::size_t>(c)] == x0[static_cast<std::size_t>(c)])
                x[static_cast<std::size_t>(c)] =
                    std::clamp(x0[static_cast<std::size_t>(c)] - step, lo(c), hi(c));
            pts.push_back(x);
            vals.push_back(-rate(to_params(x, start)));
        }
        const int kIters = 600;
        for (int it = 0; it < kIters; ++it) {
            // Order best to worst.
            for (std::size_t i = 0; i + 1 < pts.size(); ++i)
                for (std::size_t j = i + 1; j < pts.size(); ++j)
                    if (vals[j] < vals[i]) {
                        std::swap(vals[i], vals[j]);
                        std::swap(pts[i], pts[j]);
                    }
            double spread = 0.0;
            for (int c = 0; c < n; ++c) {
                double mn = pts[0][static_cast<std::size_t>(c)], mx = mn;
                for (const auto& p : pts) {
                    mn = std::min(mn, p[static_cast<std::size_t>(c)]);
                    mx = std::max(mx, p[static_cast<std::size_t>(c)]);
                }
                spread = std::max(spread, (mx - mn) / (hi(c) - lo(c)));
            }
            if (spread < 1e-10) break;

            std::vector<double> centroid(static_cast<std::size_t>(n), 0.0);
            for (std::size_t i = 0; i + 1 < pts.size(); ++i)
                for (int c = 0; c < n; ++c)
                    centroid[static_cast<std::size_t>(c)] +=
                        pts[i][static_cast<std::size_t>(c)] / static_cast<double>(n);
            auto affine = [&](double t) {
                std::vector<double> x(static_cast<std::size_t>(n));
                for (int c = 0; c < n; ++c)
                    x[static_cast<std::size_t>(c)] = std::clamp(
                        centroid[static_cast<std::size_t>(c)] +
                            t * (centroid[static_cast<std::size_t>(c)] -
                                 pts.back()[static_cast<std::size_t>(c)]),
                        lo(c), hi(c));
                return x;
            };
            const auto xr = affine(1.0);
            const double fr = -rate(to_params(xr, start));
            if (fr < vals[0]) {
                const auto xe = affine(2.0);
                const double fe = -rate(to_params(xe, start));
                if (fe < fr) {
                    pts.back() = xe;
                    vals.back() = fe;
                } else {
                    pts.back() = xr;
                    vals.back() = fr;
                }
            } else if (fr < vals[vals.size() - 2]) {
                pts.back() = xr;
                vals.back() = fr;
            } else {
                const auto xc = affine(fr < vals.back() ? 0.5 : -0.5);
                const double fc = -rate(to_params(xc, start));
                if (fc < std::min(fr, vals.back())) {
                    pts.back() = xc;
                    vals.back() = fc;
                } else {
                    for (std::size_t i = 1; i < pts.size(); ++i) {
                        for (int c = 0; c < n; ++c)
                            pts[i][static_cast<std::size_t>(c)] =
                                0.5 * (pts[i][static_cast<std::size_t>(c)] +
                                       pts[0][static_cast<std::size_t>(c)]);
                        vals[i] = -rate(to_params(pts[i], start));
                    }
                }
            }
        }
        std::size_t bi = 0;
        for (std::size_t i = 1; i < vals.size(); ++i)
            if (vals[i] < vals[bi]) bi = i;
        best_rate = -vals[bi];
        return to_params(pts[bi], start);
    }
};

}  // namespace

OptimizationResult optimize_function(
    const std::function<double(const ProtocolParams&)>& rate, const OptimizerBox& box,
    bool use_delta, std::optional<ProtocolParams> warm_start) {
    OptimizationResult out;

    // Coarse logarithmic grid.
    const auto ps = log_grid(box.p_min, box.p_max, 12);
    const auto mus = log_grid(box.mu_min, box.mu_max, 10);
    const auto deltas =
        use_delta ? log_grid(box.delta_min, box.delta_max, 8)
                  : std::vector<double>{std::clamp(0.1, box.delta_min, box.delta_max)};
    ProtocolParams best;
    best.delta = deltas.front();
    double best_rate = -1.0;
    std::vector<std::pair<double, ProtocolParams>> scored;
    for (double p : ps)
        for (double mu : mus)
            for (double dd : deltas) {
                ProtocolParams cand;
                cand.p_send = p;
                cand.mu = mu;
                cand.delta = dd;
                const double r = rate(cand);
                scored.emplace_back(r, cand);
                if (r > best_rate) {
                    best_rate = r;
                    best = cand;
                }
            }
    out.trace.emplace_back(best, best_rate);
    std::sort(scored.begin(), scored.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });

    auto descend = [&](ProtocolParams start) {
        ProtocolParams cur = clamp_to_box(start, box);
        double cur_rate = rate(cur);
        int stalled = 0;
        for (int sweep_i = 0; sweep_i < kMaxSweeps; ++sweep_i) {
            ProtocolParams next = cur;
            next.p_send = golden_max(
                [&](double v) {
                    ProtocolParams q = next;
                    q.p_send = v;
                    return rate(q);
                },
                box.p_min, box.p_max);
            next.mu = golden_max(
                [&](double v) {
                    ProtocolParams q = next;
                    q.mu = v;
                    return rate(q);
                },
                box.mu_min, box.mu_max);
            if (use_delta) {
                next.delta = golden_max(
                    [&](double v) {
                        ProtocolParams q = next;
                        q.delta = v;
                        return rate(q);
                    },
                    box.delta_min, box.delta_max);
            }
            const double next_rate = rate(next);
            const double prev_rate = cur_rate;
            if (next_rate > cur_rate) {
                cur = next;
                cur_rate = next_rate;
                out.trace.emplace_back(cur, cur_rate);
            }
            stalled = next_rate - prev_rate <= kSweepTol * std::fabs(prev_rate)
                          ? stalled + 1
                          : 0;
            if (stalled >= 2) break;
        }
        const Simplex polish{use_delta ? 3 : 2, box, rate};
        double polished_rate = cur_rate;
        const ProtocolParams polished = polish.run(cur, polished_rate);
        if (polished_rate > cur_rate) {
            cur = polished;
            cur_rate = polished_rate;
            out.trace.emplace_back(cur, cur_rate);
        }
        return std::make_pair(cur, cur_rate);
    };

    std::vector<ProtocolParams> starts;
    for (int k = 0; k < kDescentStarts && k < static_cast<int>(scored.size()); ++k)
        if (scored[static_cast<std::size_t>(k)].first > 0.0 || k == 0)
            starts.push_back(scored[static_cast<std::size_t>(k)].second);
    if (warm_start) starts.push_back(*warm_start);
    for (const auto& s0 : starts) {
        auto [refined, refined_rate] = descend(s0);
        if (refined_rate > best_rate) {
            best = refined;
            best_rate = refined_rate;
        }
    }

    out.best_params = best;
    out.best_rate = std::max(0.0, best_rate);
    out.converged = out.best_rate > 0.0;
    if (!out.converged) out.best_rate = 0.0;
    return out;
}

OptimizationResult optimize_point(const DeviceParams& dev, const ChannelPoint& ch,
                                  Variant variant, const OptimizerBox& box,
                                  std::optional<ProtocolParams> warm_start) {
    const bool use_delta = variant_uses_delta(variant);
    return optimize_function(
        [&](const ProtocolParams& p) {
            return keyrate_for_variant(dev, ch, p, variant).r_total;
        },
        box, use_delta, warm_start);
}

std::vector<SweepRow> sweep(const DeviceParams& dev,
                            const std::vector<double>& losses_db,
                            const std::vector<Variant>& variants,
                            const OptimizerBox& box, bool warm_start, int jobs) {
    std::vector<SweepRow> rows(losses_db.size() * variants.size());
    if (rows.empty()) return rows;

    auto run_variant = [&](std::size_t vi) {
        const Variant variant = variants[vi];
        std::optional<ProtocolParams> warm;
        for (std::size_t li = 0; li < losses_db.size(); ++li) {
            const ChannelPoint ch = ChannelPoint::from_loss_db(losses_db[li], dev);
            SweepRow row;
            row.loss_db = losses_db[li];
            row.variant = variant;
            row.opt = optimize_point(dev, ch, variant, box, warm);
            row.rate = keyrate_for_variant(dev, ch, row.opt.best_params, variant);
            if (warm_start && row.opt.converged) warm = row.opt.best_params;
            rows[vi * losses_db.size() + li] = std::move(row);
        }
    };

    int n_jobs = jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency());
    n_jobs = std::max(1, std::min<int>(n_jobs, static_cast<int>(variants.size())));
    if (n_jobs == 1) {
        for (std::size_t vi = 0; vi < variants.size(); ++vi) run_variant(vi);
    } else {
        std::vector<std::thread> workers;
        for (int w = 0; w < n_jobs; ++w)
            workers.emplace_back([&, w]() {
                for (std::size_t vi = static_cast<std::size_t>(w); vi < variants.size();
                     vi += static_cast<std::size_t>(n_jobs))
                    run_variant(vi);
            });
        for (auto& t : workers) t.join();
    }
    return rows;
}

double max_tolerable_loss(const std::vector<SweepRow>& rows, Variant variant,
                          double rate_floor) {
    double best = -1.0;
    for (const auto& row : rows)
        if (row.variant == variant && row.rate.r_total > rate_floor)
            best = std::max(best, row.loss_db);
    return best;
}

}  // namespace snsqkd
