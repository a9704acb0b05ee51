#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

#include "snsqkd/decoy.hpp"
#include "snsqkd/phase_error.hpp"
#include "support.hpp"

using namespace snsqkd;
using testsupport::channel;
using testsupport::table_device;

namespace {

// True yields of the targets under the coherent-state click model that
// generates the synthetic datasets. Kept independent of the library by
// integrating with a plain Riemann sum.
struct Truth {
    double y00, y1, y2_plus, y2_minus, y11;
    std::vector<double> y0j;

    static Truth at(const DeviceParams& dev, const ChannelPoint& ch, double delta,
                    int j_max) {
        const double sq = ch.arm_eta;
        const double d = dev.dark;
        const double e = dev.misalign;
        auto p_right = [&](double x) {
            return 0.5 * (1.0 - std::cos(x)) * (1.0 - e) +
                   0.5 * (1.0 + std::cos(x)) * e;
        };
        auto n_photons = [&](double x, int n) {
            return 1.0 - (1.0 - d) * std::pow(1.0 - sq * p_right(x), n);
        };
        Truth t;
        t.y00 = d;
        t.y1 = testsupport::riemann([&](double x) { return n_photons(x, 1); }, -delta,
                                    delta, 20000) /
               (2.0 * delta);
        t.y2_plus = testsupport::riemann([&](double x) { return n_photons(x, 2); },
                                         -delta, delta, 20000) /
                    (2.0 * delta);
        t.y2_minus = testsupport::riemann(
                         [&](double x) { return n_photons(M_PI + x, 2); }, -delta,
                         delta, 20000) /
                     (2.0 * delta);
        t.y11 = 1.0 - (1.0 - d) * std::pow(1.0 - sq / 2.0, 2);
        t.y0j.assign(static_cast<std::size_t>(j_max) + 1, 0.0);
        for (int j = 0; j <= j_max; ++j)
            t.y0j[static_cast<std::size_t>(j)] =
                1.0 - (1.0 - d) * std::pow(1.0 - sq / 2.0, j);
        return t;
    }
};

void check_contains(const Interval& iv, double truth) {
    CHECK(iv.lo <= truth + 1e-9);
    CHECK(iv.hi >= truth - 1e-9);
}

}  // namespace

TEST_CASE("synthetic dataset bounds contain the generating truth") {
    const auto dev = table_device();
    const auto ch = channel(20.0);
    const double delta = 0.1;
    const auto ds = synthetic_dataset(dev, ch, delta, {0.0, 0.01, 0.1, 0.3});
    const auto sys = build_constraints(ds, 10);
    const auto bounds = solve_yield_bounds(sys);
    const auto truth = Truth::at(dev, ch, delta, 10);

    check_contains(bounds.y00, truth.y00);
    check_contains(bounds.y1, truth.y1);
    check_contains(bounds.y2_plus, truth.y2_plus);
    check_contains(bounds.y2_minus, truth.y2_minus);
    check_contains(bounds.y11, truth.y11);
    for (int j = 3; j <= 10; ++j) {
        check_contains(bounds.y0j[static_cast<std::size_t>(j)],
                       truth.y0j[static_cast<std::size_t>(j)]);
        check_contains(bounds.yj0[static_cast<std::size_t>(j)],
                       truth.y0j[static_cast<std::size_t>(j)]);
    }
    // The vacuum decoy pins the vacuum yield.
    CHECK(bounds.y00.hi - bounds.y00.lo <= 1e-9);
    // Single-photon bounds are tight with these intensities.
    CHECK(bounds.y1.hi - bounds.y1.lo <= 0.05 * truth.y1);
}

TEST_CASE("adding an intensity never widens a bound") {
    const auto dev = table_device();
    const auto ch = channel(20.0);
    const double delta = 0.1;
    const auto ds3 = synthetic_dataset(dev, ch, delta, {0.0, 0.01, 0.1});
    const auto ds4 = synthetic_dataset(dev, ch, delta, {0.0, 0.01, 0.1, 0.3});
    const auto b3 = solve_yield_bounds(build_constraints(ds3, 10));
    const auto b4 = solve_yield_bounds(build_constraints(ds4, 10));
    auto tighter = [](const Interval& wide, const Interval& narrow) {
        CHECK(narrow.lo >= wide.lo - 1e-9);
        CHECK(narrow.hi <= wide.hi + 1e-9);
    };
    tighter(b3.y00, b4.y00);
    tighter(b3.y1, b4.y1);
    tighter(b3.y2_plus, b4.y2_plus);
    tighter(b3.y2_minus, b4.y2_minus);
    tighter(b3.y11, b4.y11);
    for (int j = 3; j <= 10; ++j) {
        tighter(b3.y0j[static_cast<std::size_t>(j)], b4.y0j[static_cast<std::size_t>(j)]);
        tighter(b3.yj0[static_cast<std::size_t>(j)], b4.yj0[static_cast<std::size_t>(j)]);
    }
}

TEST_CASE("vacuum-only dataset pins the vacuum and nothing else") {
    const auto dev = table_device();
    const auto ch = channel(20.0);
    const auto ds = synthetic_dataset(dev, ch, 0.1, {0.0});
    const auto bounds = solve_yield_bounds(build_constraints(ds, 5));
    CHECK(bounds.y00.lo == doctest::Approx(dev.dark).epsilon(1e-6));
    CHECK(bounds.y00.hi == doctest::Approx(dev.dark).epsilon(1e-6));
    CHECK(bounds.y1.lo == doctest::Approx(0.0));
    CHECK(bounds.y1.hi == doctest::Approx(1.0));
    CHECK(bounds.y11.lo == doctest::Approx(0.0));
    CHECK(bounds.y11.hi == doctest::Approx(1.0));
}

TEST_CASE("a single intensity leaves the single-photon yield undetermined") {
    const auto dev = table_device();
    const auto ch = channel(20.0);
    const double delta = 0.1;
    const auto truth = Truth::at(dev, ch, delta, 5);
    DecoyDataset ds = synthetic_dataset(dev, ch, delta, {0.1});
    const auto bounds = solve_yield_bounds(build_constraints(ds, 5));
    CHECK(bounds.y1.lo == doctest::Approx(0.0));
    CHECK(bounds.y1.hi >= truth.y1 - 1e-9);
    // One intensity pins far less than the reference four-decoy set.
    const auto full = solve_yield_bounds(build_constraints(
        synthetic_dataset(dev, ch, delta, {0.0, 0.01, 0.1, 0.3}), 5));
    CHECK(bounds.y1.hi - bounds.y1.lo >= 50.0 * (full.y1.hi - full.y1.lo));
}

TEST_CASE("a small gain perturbation keeps the system feasible and close") {
    const auto dev = table_device();
    const auto ch = channel(20.0);
    auto ds = synthetic_dataset(dev, ch, 0.1, {0.0, 0.01, 0.1, 0.3});
    const auto before = solve_yield_bounds(build_constraints(ds, 10));
    for (auto& e : ds.entries)
        if (e.intensity == 0.1 && e.sift_class == SiftClass::Matched) e.gain += 1e-6;
    const auto after = solve_yield_bounds(build_constraints(ds, 10));
    CHECK(std::fabs(after.y1.lo - before.y1.lo) <= 1e-3);
    CHECK(std::fabs(after.y1.hi - before.y1.hi) <= 1e-3);
    CHECK(after.y1.hi - after.y1.lo >= before.y1.hi - before.y1.lo - 1e-3);
}

TEST_CASE("grossly inconsistent data is reported as infeasible") {
    const auto dev = table_device();
    const auto ch = channel(20.0);
    auto ds = synthetic_dataset(dev, ch, 0.1, {0.0, 0.1});
    // Duplicate the matched observation with a contradictory gain.
    for (const auto& e : ds.entries) {
        if (e.intensity == 0.1 && e.sift_class == SiftClass::Matched) {
            auto dup = e;
            dup.gain = std::min(1.0, e.gain + 0.5);
            ds.entries.push_back(dup);
            break;
        }
    }
    CHECK_THROWS_AS(solve_yield_bounds(build_constraints(ds, 10)), std::runtime_error);
}

TEST_CASE("two-photon combination identity and clamping") {
    CHECK(combine_two_photon({0, 0}, {0, 0}, {0, 0}).hi == 0.0);
    const auto clamped = combine_two_photon({0.1, 0.2}, {0.1, 0.2}, {0.5, 0.6});
    CHECK(clamped.lo == 0.0);

    const auto dev = table_device();
    const auto ch = channel(20.0);
    const auto truth = Truth::at(dev, ch, 0.1, 5);
    // With point intervals the combination reduces to the plain identity.
    const Interval sym = combine_two_photon({truth.y2_plus, truth.y2_plus},
                                            {truth.y2_minus, truth.y2_minus},
                                            {truth.y11, truth.y11});
    const double expect = truth.y2_plus + truth.y2_minus - truth.y11;
    CHECK(sym.lo == doctest::Approx(expect).epsilon(1e-12));
    CHECK(sym.hi == doctest::Approx(expect).epsilon(1e-12));

    // And on the LP output it brackets the identity value of the truth.
    const auto ds = synthetic_dataset(dev, ch, 0.1, {0.0, 0.01, 0.1, 0.3});
    const auto bounds = solve_yield_bounds(build_constraints(ds, 10));
    const Interval lp_sym = combine_two_photon(bounds.y2_plus, bounds.y2_minus, bounds.y11);
    CHECK(lp_sym.lo <= expect + 1e-9);
    CHECK(lp_sym.hi >= expect - 1e-9);
}

TEST_CASE("high-order upper bound doubles the independent-arm value") {
    CHECK(high_order_upper(0.0, 0.0) == 0.0);
    CHECK(high_order_upper(0.6, 0.6) == 1.0);
    const auto dev = table_device();
    const auto ch = channel(20.0);
    const auto truth = Truth::at(dev, ch, 0.1, 5);
    // Fed with the exact single-arm yields, the bound sits at twice the
    // independent-arm click rate of the symmetric state.
    const double y03 = truth.y0j[3];
    const double bound = high_order_upper(y03, y03);
    const double ratio = bound / y03;  // the symmetric state clicks like y03 here
    CHECK(ratio >= 1.5);
    CHECK(ratio <= 2.5);
}

TEST_CASE("bound-backed yields give a conservative phase error") {
    const auto dev = table_device();
    ProtocolParams proto;
    proto.p_send = 0.3;
    proto.mu = 0.4;
    proto.delta = 0.1;
    for (double loss : {10.0, 20.0, 30.0}) {
        const auto ch = channel(loss);
        const auto ds = synthetic_dataset(dev, ch, proto.delta, {0.0, 0.01, 0.1, 0.3});
        const auto bounds = solve_yield_bounds(build_constraints(ds, 10));
        const auto lp_yields = yields_from_bounds(bounds);
        const auto exact = analytic_yields(dev, ch, proto);
        const double pph_lp = phase_error_continuous(dev, ch, proto, lp_yields).value;
        const double pph_exact = phase_error_continuous(dev, ch, proto, exact).value;
        CHECK(pph_lp >= pph_exact * (1.0 - 1e-9));
    }
}

TEST_CASE("dataset files round trip and reject malformed input") {
    const auto dev = table_device();
    const auto ch = channel(20.0);
    const auto ds = synthetic_dataset(dev, ch, 0.1, {0.0, 0.1});
    const std::string path = "/tmp/snsqkd_ds_test.txt";
    ds.save(path);
    const auto loaded = DecoyDataset::load(path);
    REQUIRE(loaded.entries.size() == ds.entries.size());
    for (std::size_t i = 0; i < ds.entries.size(); ++i) {
        CHECK(loaded.entries[i].intensity == ds.entries[i].intensity);
        CHECK(loaded.entries[i].gain == doctest::Approx(ds.entries[i].gain).epsilon(1e-15));
        CHECK(loaded.entries[i].sift_class == ds.entries[i].sift_class);
    }
    std::remove(path.c_str());
    CHECK_THROWS_AS(DecoyDataset::load("/definitely/missing/file.txt"),
                    std::runtime_error);
}
