#include "snsqkd/mcsim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "snsqkd/rng.hpp"

namespace snsqkd {
namespace {

struct Tally {
    std::uint64_t sifted_right = 0;
    std::uint64_t sifted_left = 0;
    std::uint64_t sifted_right_c = 0;
    std::uint64_t sifted_right_err = 0;
    std::uint64_t sifted_left_err = 0;
    std::uint64_t total_right = 0;
    std::uint64_t total_right_err = 0;
    std::uint64_t c_bit_errors = 0;
    std::uint64_t double_clicks = 0;

    void add(const Tally& o) {
        sifted_right += o.sifted_right;
        sifted_left += o.sifted_left;
        sifted_right_c += o.sifted_right_c;
        sifted_right_err += o.sifted_right_err;
        sifted_left_err += o.sifted_left_err;
        total_right += o.total_right;
        total_right_err += o.total_right_err;
        c_bit_errors += o.c_bit_errors;
        double_clicks += o.double_clicks;
    }
};

FreqEstimate ratio(std::uint64_t num, std::uint64_t den) {
    FreqEstimate f;
    f.numerator = num;
    f.denominator = den;
    if (den == 0) return f;
    f.rate = static_cast<double>(num) / static_cast<double>(den);
    f.std_err = std::sqrt(std::max(0.0, f.rate * (1.0 - f.rate)) /
                          static_cast<double>(den));
    return f;
}

const char* outcome_name(bool right, bool left) {
    if (right && left) return "both";
    if (right) return "right";
    if (left) return "left";
    return "none";
}

// Wraps an angle difference into [0, 2*pi).
double wrap_angle(double x) {
    x = std::fmod(x, 2.0 * M_PI);
    return x < 0.0 ? x + 2.0 * M_PI : x;
}

struct Window {
    // Right clicks keep near-zero phase differences, left clicks keep
    // near-pi ones.
    static bool right_kept(double diff, const ProtocolParams& proto) {
        if (proto.discrete()) return diff == 0.0;
        return diff <= proto.delta || diff >= 2.0 * M_PI - proto.delta;
    }
    static bool left_kept(double diff, const ProtocolParams& proto) {
        if (proto.discrete()) return std::fabs(diff - M_PI) < 1e-12;
        return std::fabs(diff - M_PI) <= proto.delta;
    }
};

void run_block(const DeviceParams& dev, const ChannelPoint& ch,
               const ProtocolParams& proto, std::uint64_t rounds, Xoshiro256 rng,
               Tally& tally, std::ofstream* dump) {
    const double p = proto.p_send;
    const double mu = proto.mu;
    const double sq = ch.arm_eta;
    const double d = dev.dark;
    const double vis = 1.0 - 2.0 * dev.misalign;
    const int m = proto.m_phases;

    for (std::uint64_t r = 0; r < rounds; ++r) {
        const bool alice_send = rng.bernoulli(p);
        const bool bob_send = rng.bernoulli(p);
        double theta_a, theta_b;
        if (m > 0) {
            theta_a = (2.0 * M_PI / m) * static_cast<double>(rng.below(m));
            theta_b = (2.0 * M_PI / m) * static_cast<double>(rng.below(m));
        } else {
            theta_a = rng.uniform() * 2.0 * M_PI;
            theta_b = rng.uniform() * 2.0 * M_PI;
        }
        const double diff = wrap_angle(theta_a - theta_b);

        // Mean photon numbers at the two output ports.
        double i_right, i_left;
        if (alice_send && bob_send) {
            i_right = sq * mu * (1.0 - vis * std::cos(diff));
            i_left = sq * mu * (1.0 + vis * std::cos(diff));
        } else if (alice_send || bob_send) {
            i_right = sq * mu / 2.0;
            i_left = sq * mu / 2.0;
        } else {
            i_right = 0.0;
            i_left = 0.0;
        }
        const bool click_right = rng.bernoulli(1.0 - (1.0 - d) * std::exp(-i_right));
        const bool click_left = rng.bernoulli(1.0 - (1.0 - d) * std::exp(-i_left));

        const bool c_round = alice_send != bob_send;
        const int alice_bit = alice_send ? 1 : 0;
        const int bob_bit = bob_send ? 0 : 1;

        bool sifted = false;
        if (click_right && click_left) {
            ++tally.double_clicks;
        } else if (click_right) {
            ++tally.total_right;
            if (!c_round) ++tally.total_right_err;
            if (Window::right_kept(diff, proto)) {
                sifted = true;
                ++tally.sifted_right;
                if (c_round) {
                    ++tally.sifted_right_c;
                    if (alice_bit != bob_bit) ++tally.c_bit_errors;
                } else {
                    ++tally.sifted_right_err;
                }
            }
        } else if (click_left) {
            if (Window::left_kept(diff, proto)) {
                sifted = true;
                ++tally.sifted_left;
                if (!c_round) ++tally.sifted_left_err;
            }
        }

        if (dump) {
            *dump << alice_send << ',' << bob_send << ',' << theta_a << ','
                  << theta_b << ',' << outcome_name(click_right, click_left) << ','
                  << sifted << ',' << (c_round ? 'C' : 'E') << '\n';
        }
    }
}

}  // namespace

MCSummary simulate(const DeviceParams& dev, const ChannelPoint& ch,
                   const ProtocolParams& proto, std::uint64_t n_rounds,
                   std::uint64_t seed, const MCOptions& opts) {
    dev.validate();
    proto.validate();
    if (n_rounds == 0) throw std::invalid_argument("n_rounds must be >= 1");

    const std::uint64_t block = std::max<std::uint64_t>(1, opts.block_size);
    const std::uint64_t n_blocks = (n_rounds + block - 1) / block;

    Tally total;
    if (opts.dump_path) {
        std::ofstream dump(*opts.dump_path);
        if (!dump) throw std::runtime_error("cannot open dump file: " + *opts.dump_path);
        dump << "alice_send,bob_send,theta_a,theta_b,outcome,sifted,round_class\n";
        for (std::uint64_t b = 0; b < n_blocks; ++b) {
            const std::uint64_t rounds = std::min(block, n_rounds - b * block);
            run_block(dev, ch, proto, rounds, Xoshiro256::for_block(seed, b), total,
                      &dump);
        }
    } else {
        int jobs = opts.jobs > 0
                       ? opts.jobs
                       : static_cast<int>(std::thread::hardware_concurrency());
        jobs = std::max(1, std::min<int>(jobs, static_cast<int>(n_blocks)));
        std::vector<Tally> partial(static_cast<std::size_t>(n_blocks));
        std::vector<std::thread> workers;
        // Static striping keeps the block -> tally mapping deterministic.
        for (int w = 0; w < jobs; ++w) {
            workers.emplace_back([&, w]() {
                for (std::uint64_t b = static_cast<std::uint64_t>(w); b < n_blocks;
                     b += static_cast<std::uint64_t>(jobs)) {
                    const std::uint64_t rounds = std::min(block, n_rounds - b * block);
                    run_block(dev, ch, proto, rounds, Xoshiro256::for_block(seed, b),
                              partial[b], nullptr);
                }
            });
        }
        for (auto& t : workers) t.join();
        for (const auto& t : partial) total.add(t);
    }

    MCSummary s;
    s.n_rounds = n_rounds;
    s.sifted_right_rate = ratio(total.sifted_right, n_rounds);
    s.sifted_left_rate = ratio(total.sifted_left, n_rounds);
    s.c_round_right_rate = ratio(total.sifted_right_c, n_rounds);
    s.qber_right = ratio(total.sifted_right_err, total.sifted_right);
    s.qber_left = ratio(total.sifted_left_err, total.sifted_left);
    s.total_right_rate = ratio(total.total_right, n_rounds);
    s.total_right_qber = ratio(total.total_right_err, total.total_right);
    s.c_round_bit_errors = total.c_bit_errors;
    s.double_clicks = total.double_clicks;
    return s;
}

FreqEstimate simulate_fock(const DeviceParams& dev, const ChannelPoint& ch, int j,
                           double delta_phase, std::uint64_t n_rounds,
                           std::uint64_t seed, const MCOptions& opts) {
    dev.validate();
    if (j != 1 && j != 2)
        throw std::invalid_argument("simulate_fock supports j = 1 or 2");
    if (n_rounds == 0) throw std::invalid_argument("n_rounds must be >= 1");

    const double sq = ch.arm_eta;
    const double d = dev.dark;
    const double e = dev.misalign;
    // Interference weight for the single-photon superposition; two photons
    // transmit independently with uniform ports.
    const double p_right_port =
        j == 1 ? (0.5 * (1.0 - std::cos(delta_phase)) * (1.0 - e) +
                  0.5 * (1.0 + std::cos(delta_phase)) * e)
               : 0.5;

    const std::uint64_t block = std::max<std::uint64_t>(1, opts.block_size);
    const std::uint64_t n_blocks = (n_rounds + block - 1) / block;
    int jobs = opts.jobs > 0 ? opts.jobs
                             : static_cast<int>(std::thread::hardware_concurrency());
    jobs = std::max(1, std::min<int>(jobs, static_cast<int>(n_blocks)));

    std::vector<std::uint64_t> partial(static_cast<std::size_t>(n_blocks), 0);
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w) {
        workers.emplace_back([&, w]() {
            for (std::uint64_t b = static_cast<std::uint64_t>(w); b < n_blocks;
                 b += static_cast<std::uint64_t>(jobs)) {
                const std::uint64_t rounds = std::min(block, n_rounds - b * block);
                Xoshiro256 rng = Xoshiro256::for_block(seed, b);
                std::uint64_t clicks = 0;
                for (std::uint64_t r = 0; r < rounds; ++r) {
                    bool photon_right = false;
                    for (int k = 0; k < j; ++k) {
                        if (!rng.bernoulli(sq)) continue;  // lost in the arm
                        if (rng.bernoulli(p_right_port)) photon_right = true;
                    }
                    if (photon_right || rng.bernoulli(d)) ++clicks;
                }
                partial[b] = clicks;
            }
        });
    }
    for (auto& t : workers) t.join();

    std::uint64_t clicks = 0;
    for (auto c : partial) clicks += c;
    return ratio(clicks, n_rounds);
}

}  // namespace snsqkd
