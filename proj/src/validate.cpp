#include "snsqkd/validate.hpp"

#include <cmath>

#include "snsqkd/keyrate.hpp"
#include "snsqkd/phase_error.hpp"
#include "snsqkd/physics.hpp"
#include "snsqkd/quadrature.hpp"

namespace snsqkd {

double binomial_z(std::uint64_t count, std::uint64_t trials, double expected_p) {
    if (trials == 0) return 0.0;
    const double var = expected_p * (1.0 - expected_p);
    const double observed = static_cast<double>(count) / static_cast<double>(trials);
    if (var <= 0.0) return observed == expected_p ? 0.0 : INFINITY;
    return (observed - expected_p) /
           std::sqrt(var / static_cast<double>(trials));
}

namespace {

ZScoreRow make_row(const std::string& name, double loss_db, double expected,
                   std::uint64_t count, std::uint64_t trials) {
    ZScoreRow row;
    row.quantity = name;
    row.loss_db = loss_db;
    row.expected = expected;
    row.observed = trials ? static_cast<double>(count) / static_cast<double>(trials)
                          : 0.0;
    row.z = binomial_z(count, trials, expected);
    row.pass = std::fabs(row.z) <= 3.0;
    return row;
}

}  // namespace

std::vector<ZScoreRow> validate_point(const DeviceParams& dev, const ChannelPoint& ch,
                                      const ProtocolParams& proto,
                                      std::uint64_t n_rounds, std::uint64_t seed,
                                      const MCOptions& opts) {
    const MCSummary mc = simulate(dev, ch, proto, n_rounds, seed, opts);

    const double s = proto.sifting_efficiency();
    const double pc = physics::c_round_click(dev, ch, proto);
    const double pe = physics::e_round_click(dev, ch, proto);
    const double pt = pc + pe;
    const double pe_left = physics::e_round_click_left(dev, ch, proto);
    const double pt_left = pc + pe_left;

    // Unsifted totals, matching the no-sifting baseline observables.
    const double p = proto.p_send;
    const double c1 = 1.0 - std::exp(-ch.arm_eta * proto.mu / 2.0) * (1.0 - dev.dark);
    const double i_full = integrate(
                              [&](double th) {
                                  const double intensity =
                                      ch.arm_eta * proto.mu *
                                      (1.0 - (1.0 - 2.0 * dev.misalign) * std::cos(th));
                                  return 1.0 - (1.0 - dev.dark) * std::exp(-intensity);
                              },
                              0.0, 2.0 * M_PI) /
                          (2.0 * M_PI);
    const double q_err = (1.0 - p) * (1.0 - p) * dev.dark + p * p * i_full;
    const double q_t = 2.0 * p * (1.0 - p) * c1 + q_err;

    std::vector<ZScoreRow> rows;
    rows.push_back(make_row("sifted_right_rate", ch.loss_db, s * pt,
                            mc.sifted_right_rate.numerator, n_rounds));
    rows.push_back(make_row("sifted_left_rate", ch.loss_db, s * pt_left,
                            mc.sifted_left_rate.numerator, n_rounds));
    rows.push_back(make_row("c_round_right_rate", ch.loss_db, s * pc,
                            mc.c_round_right_rate.numerator, n_rounds));
    rows.push_back(make_row("qber_right", ch.loss_db, pt > 0.0 ? pe / pt : 0.0,
                            mc.qber_right.numerator, mc.qber_right.denominator));
    rows.push_back(make_row("qber_left", ch.loss_db,
                            pt_left > 0.0 ? pe_left / pt_left : 0.0,
                            mc.qber_left.numerator, mc.qber_left.denominator));
    rows.push_back(make_row("baseline_q_t", ch.loss_db, q_t,
                            mc.total_right_rate.numerator, n_rounds));
    rows.push_back(make_row("baseline_e_t", ch.loss_db, q_t > 0.0 ? q_err / q_t : 0.0,
                            mc.total_right_qber.numerator,
                            mc.total_right_qber.denominator));

    // Photon-number click rates against the closed forms.
    const double delta_probe = 0.3;
    const FreqEstimate f1 =
        simulate_fock(dev, ch, 1, delta_probe, n_rounds, seed ^ 0x9E3779B9ULL, opts);
    rows.push_back(make_row("fock_j1_click", ch.loss_db,
                            physics::click_single_photon(dev, ch, delta_probe),
                            f1.numerator, f1.denominator));
    const FreqEstimate f2 =
        simulate_fock(dev, ch, 2, 0.0, n_rounds, seed ^ 0x7F4A7C15ULL, opts);
    rows.push_back(make_row("fock_j2_click", ch.loss_db,
                            physics::click_two_photon(dev, ch), f2.numerator,
                            f2.denominator));

    ZScoreRow c_errors;
    c_errors.quantity = "c_round_bit_errors";
    c_errors.loss_db = ch.loss_db;
    c_errors.expected = 0.0;
    c_errors.observed = static_cast<double>(mc.c_round_bit_errors);
    c_errors.z = mc.c_round_bit_errors == 0 ? 0.0 : INFINITY;
    c_errors.pass = mc.c_round_bit_errors == 0;
    rows.push_back(c_errors);
    return rows;
}

}  // namespace snsqkd
