#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "snsqkd/config.hpp"
#include "snsqkd/csv.hpp"
#include "snsqkd/decoy.hpp"
#include "snsqkd/keyrate.hpp"
#include "snsqkd/optimize.hpp"
#include "snsqkd/phase_error.hpp"
#include "snsqkd/textio.hpp"
#include "snsqkd/validate.hpp"

namespace {

// Exit codes, also documented in the README.
constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kIoError = 3;
constexpr int kValidationFailure = 4;
constexpr int kInfeasibleLp = 5;

using namespace snsqkd;

struct CommonFlags {
    std::string config_path;
    std::optional<double> loss_db;
    std::vector<std::string> variants;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> rounds;
    int jobs = 0;
};

RunConfig load_config(const CommonFlags& flags) {
    RunConfig cfg = flags.config_path.empty() ? RunConfig{}
                                              : RunConfig::load(flags.config_path);
    if (flags.seed) cfg.mc.seed = *flags.seed;
    if (flags.rounds) cfg.mc.rounds = *flags.rounds;
    if (flags.out) cfg.output_path = *flags.out;
    if (!flags.variants.empty()) {
        cfg.variants.clear();
        for (const auto& name : flags.variants)
            cfg.variants.push_back(variant_from_name(name));
    }
    return cfg;
}

void print_breakdown(const RateBreakdown& b, const ProtocolParams& proto,
                     double loss_db) {
    std::cout << "variant " << variant_name(b.variant) << '\n'
              << "loss_db " << format_g12(loss_db) << '\n'
              << "p_send " << format_g12(proto.p_send) << '\n'
              << "mu " << format_g12(proto.mu) << '\n'
              << "delta " << format_g12(proto.delta) << '\n'
              << "sifting_efficiency " << format_g12(b.s) << '\n'
              << "p_c " << format_g12(b.p_c) << '\n'
              << "p_t " << format_g12(b.p_t) << '\n'
              << "e_bit " << format_g12(b.e_bit) << '\n'
              << "p_ph " << format_g12(b.p_ph) << '\n'
              << "r_per_detector " << format_g12(b.r_per_detector) << '\n'
              << "r_total " << format_g12(b.r_total) << '\n';
}

int cmd_rate(const CommonFlags& flags, double p, double mu, double delta,
             const std::string& variant_name_str) {
    const RunConfig cfg = load_config(flags);
    if (!flags.loss_db) throw std::invalid_argument("--loss is required for rate");
    const Variant variant = variant_from_name(variant_name_str);
    const ChannelPoint ch = ChannelPoint::from_loss_db(*flags.loss_db, cfg.device);
    ProtocolParams proto;
    proto.p_send = p;
    proto.mu = mu;
    proto.delta = delta;
    proto.m_phases = variant_m_phases(variant);
    if (p == 0.0) {
        // Boundary case: no pulses are ever sent, so everything is zero.
        RateBreakdown b;
        b.variant = variant;
        b.degenerate = true;
        print_breakdown(b, proto, *flags.loss_db);
        return kOk;
    }
    proto.validate();
    const RateBreakdown b = keyrate_for_variant(cfg.device, ch, proto, variant);
    print_breakdown(b, proto, *flags.loss_db);
    return kOk;
}

int cmd_sweep(const CommonFlags& flags) {
    const RunConfig cfg = load_config(flags);
    const std::vector<double> losses = cfg.loss.points();
    const auto rows =
        sweep(cfg.device, losses, cfg.variants, cfg.optimizer, true, flags.jobs);
    std::ofstream out(cfg.output_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write " << cfg.output_path << '\n';
        return kIoError;
    }
    write_sweep_csv(out, rows, cfg.variants, losses);
    std::cout << "wrote " << rows.size() << " rows to " << cfg.output_path << '\n';
    return kOk;
}

int cmd_optimize(const CommonFlags& flags, const std::string& variant_name_str) {
    const RunConfig cfg = load_config(flags);
    if (!flags.loss_db) throw std::invalid_argument("--loss is required for optimize");
    const Variant variant = variant_from_name(variant_name_str);
    const ChannelPoint ch = ChannelPoint::from_loss_db(*flags.loss_db, cfg.device);
    const OptimizationResult res = optimize_point(cfg.device, ch, variant, cfg.optimizer);
    std::cout << "variant " << variant_name(variant) << '\n'
              << "loss_db " << format_g12(*flags.loss_db) << '\n'
              << "converged " << (res.converged ? 1 : 0) << '\n'
              << "p_opt " << format_g12(res.best_params.p_send) << '\n'
              << "mu_opt " << format_g12(res.best_params.mu) << '\n'
              << "delta_opt " << format_g12(res.best_params.delta) << '\n'
              << "rate " << format_g12(res.best_rate) << '\n'
              << "trace_len " << res.trace.size() << '\n';
    const RateBreakdown b = keyrate_for_variant(cfg.device, ch, res.best_params, variant);
    print_breakdown(b, res.best_params, *flags.loss_db);
    return kOk;
}

int cmd_validate(const CommonFlags& flags, const std::string& dump_path) {
    const RunConfig cfg = load_config(flags);
    MCOptions opts;
    opts.jobs = flags.jobs;
    opts.block_size = cfg.mc.block_size;
    if (!dump_path.empty()) opts.dump_path = dump_path;

    ProtocolParams proto;
    proto.p_send = cfg.validation.p_send;
    proto.mu = cfg.validation.mu;
    proto.delta = cfg.validation.delta;
    proto.m_phases = cfg.validation.m_phases;
    proto.validate();

    bool all_pass = true;
    std::cout << "quantity loss_db expected observed z pass\n";
    for (double loss : cfg.validation.losses_db) {
        const ChannelPoint ch = ChannelPoint::from_loss_db(loss, cfg.device);
        const auto rows =
            validate_point(cfg.device, ch, proto, cfg.mc.rounds, cfg.mc.seed, opts);
        for (const auto& r : rows) {
            all_pass = all_pass && r.pass;
            std::cout << r.quantity << ' ' << format_g12(r.loss_db) << ' '
                      << format_g12(r.expected) << ' ' << format_g12(r.observed) << ' '
                      << format_g12(r.z) << ' ' << (r.pass ? "pass" : "FAIL") << '\n';
        }
    }
    std::cout << (all_pass ? "validation passed" : "validation FAILED") << '\n';
    return all_pass ? kOk : kValidationFailure;
}

int cmd_decoy(const CommonFlags& flags, const std::string& dataset_path) {
    const RunConfig cfg = load_config(flags);
    DecoyDataset ds;
    try {
        ds = DecoyDataset::load(dataset_path);
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIoError;
    }

    YieldBounds bounds;
    try {
        const DecoyConstraintSystem sys =
            build_constraints(ds, cfg.decoy.j_max, Detector::Right);
        bounds = solve_yield_bounds(sys);
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInfeasibleLp;
    }

    auto line = [](const std::string& name, const Interval& iv) {
        std::cout << name << ' ' << format_g12(iv.lo) << ' ' << format_g12(iv.hi)
                  << '\n';
    };
    std::cout << "target lower upper\n";
    line("y00", bounds.y00);
    line("y1_avg", bounds.y1);
    line("y2_plus", bounds.y2_plus);
    line("y2_minus", bounds.y2_minus);
    line("y11", bounds.y11);
    line("y2_symmetric",
         combine_two_photon(bounds.y2_plus, bounds.y2_minus, bounds.y11));
    for (int j = 3; j <= bounds.j_max; ++j) {
        line("y0" + std::to_string(j), bounds.y0j[static_cast<std::size_t>(j)]);
        line("y" + std::to_string(j) + "0", bounds.yj0[static_cast<std::size_t>(j)]);
    }

    // Conservative phase error from the bounds versus the closed-form value.
    const ChannelPoint ch = ChannelPoint::from_loss_db(cfg.decoy.loss_db, cfg.device);
    ProtocolParams proto;
    proto.p_send = cfg.decoy.p_send;
    proto.mu = cfg.decoy.mu;
    proto.delta = cfg.decoy.delta;
    proto.validate();
    const FockYieldSet lp_yields = yields_from_bounds(bounds);
    const FockYieldSet exact = analytic_yields(cfg.device, ch, proto);
    const double pph_lp =
        phase_error_continuous(cfg.device, ch, proto, lp_yields).value;
    const double pph_exact = phase_error_continuous(cfg.device, ch, proto, exact).value;
    std::cout << "p_ph_decoy " << format_g12(pph_lp) << '\n'
              << "p_ph_infinite_decoy " << format_g12(pph_exact) << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Asymptotic key rates for sending-or-not-sending twin-field QKD "
                 "with phase postselection"};
    app.require_subcommand(1);

    CommonFlags flags;
    auto add_shared = [&](CLI::App* sub) {
        sub->add_option("--config", flags.config_path, "JSON run configuration");
        sub->add_option("--jobs", flags.jobs, "worker threads (0 = all cores)");
        sub->add_option("--seed", flags.seed, "simulation seed");
        sub->add_option("--rounds", flags.rounds, "simulation rounds");
        sub->add_option("--out", flags.out, "output path");
    };
    auto add_loss = [&](CLI::App* sub) {
        sub->add_option("--loss", flags.loss_db, "channel loss in dB");
    };

    // rate
    auto* rate_cmd = app.add_subcommand("rate", "rate breakdown at explicit parameters");
    double p = 0.05, mu = 0.5, delta = 0.1;
    std::string variant_str = "continuous";
    add_loss(rate_cmd);
    add_shared(rate_cmd);
    rate_cmd->add_option("--p", p, "sending probability")->required();
    rate_cmd->add_option("--mu", mu, "pulse intensity")->required();
    rate_cmd->add_option("--delta", delta, "sifting half-width");
    rate_cmd->add_option("--variant", variant_str, "protocol variant")->required();

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "optimized rate curve to CSV");
    add_shared(sweep_cmd);
    sweep_cmd->add_option("--variant", flags.variants, "variant (repeatable)");

    // optimize
    auto* opt_cmd = app.add_subcommand("optimize", "optimize one channel point");
    std::string opt_variant = "continuous";
    add_loss(opt_cmd);
    add_shared(opt_cmd);
    opt_cmd->add_option("--variant", opt_variant, "protocol variant")->required();

    // validate
    auto* val_cmd = app.add_subcommand("validate", "simulation versus closed forms");
    std::string dump_path;
    add_shared(val_cmd);
    val_cmd->add_option("--dump-rounds", dump_path,
                        "write per-round records to this CSV (single threaded)");

    // decoy
    auto* decoy_cmd = app.add_subcommand("decoy", "yield bounds from a decoy dataset");
    std::string dataset_path;
    add_shared(decoy_cmd);
    decoy_cmd->add_option("dataset", dataset_path, "decoy observation file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kConfigError;
    }

    try {
        if (rate_cmd->parsed()) return cmd_rate(flags, p, mu, delta, variant_str);
        if (sweep_cmd->parsed()) return cmd_sweep(flags);
        if (opt_cmd->parsed()) return cmd_optimize(flags, opt_variant);
        if (val_cmd->parsed()) return cmd_validate(flags, dump_path);
        if (decoy_cmd->parsed()) return cmd_decoy(flags, dataset_path);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIoError;
    }
    return kConfigError;
}
