#pragma once

#include <cmath>

#include "snsqkd/params.hpp"
#include "snsqkd/rng.hpp"

namespace testsupport {

/// Reference device parameters shared across the suites.
inline snsqkd::DeviceParams table_device() {
    snsqkd::DeviceParams dev;
    dev.det_eff = 1.0;
    dev.dark = 1e-11;
    dev.ec_eff = 1.1;
    dev.misalign = 0.01;
    return dev;
}

inline snsqkd::ChannelPoint channel(double loss_db,
                                    const snsqkd::DeviceParams& dev = table_device()) {
    return snsqkd::ChannelPoint::from_loss_db(loss_db, dev);
}

/// Riemann-midpoint quadrature oracle, deliberately independent of the
/// library's quadrature.
template <typename F>
double riemann(F f, double a, double b, long n) {
    double sum = 0.0;
    const double h = (b - a) / static_cast<double>(n);
    for (long i = 0; i < n; ++i) sum += f(a + (i + 0.5) * h);
    return sum * h;
}

/// Deterministic random parameter draws for property tests.
struct ParamSampler {
    snsqkd::Xoshiro256 rng;
    explicit ParamSampler(std::uint64_t seed) : rng(seed) {}

    double uniform(double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

    snsqkd::DeviceParams device() {
        snsqkd::DeviceParams dev;
        dev.det_eff = uniform(0.3, 1.0);
        dev.dark = std::pow(10.0, uniform(-12.0, -6.0));
        dev.ec_eff = uniform(1.0, 1.3);
        dev.misalign = uniform(0.0, 0.2);
        return dev;
    }

    snsqkd::ProtocolParams protocol(int m_phases = 0) {
        snsqkd::ProtocolParams proto;
        proto.p_send = uniform(0.01, 0.9);
        proto.mu = uniform(0.01, 1.0);
        proto.delta = uniform(0.01, M_PI / 2.0);
        proto.m_phases = m_phases;
        return proto;
    }
};

}  // namespace testsupport
