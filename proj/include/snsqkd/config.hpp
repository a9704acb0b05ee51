#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "snsqkd/optimize.hpp"
#include "snsqkd/params.hpp"

namespace snsqkd {

/// Monte Carlo settings of the validation runs.
struct McConfig {
    std::uint64_t rounds = 100000000;
    std::uint64_t seed = 20240901;
    std::uint64_t block_size = 1 << 20;
};

/// Grid and fixed protocol parameters of the validate command. The default
/// losses sit where double-click discards are negligible against the
/// binomial error at the default round count.
struct ValidationConfig {
    std::vector<double> losses_db = {35.0, 40.0, 50.0};
    double p_send = 0.3;
    double mu = 0.4;
    double delta = 0.4;
    int m_phases = 0;
};

struct DecoyConfig {
    int j_max = 10;
    double loss_db = 20.0;
    double p_send = 0.3;
    double mu = 0.4;
    double delta = 0.1;
};

struct LossGrid {
    double start_db = 0.0;
    double stop_db = 200.0;
    double step_db = 1.0;

    std::vector<double> points() const;
};

/// One reproducible run description: device, grids, variant list, search
/// box, simulation settings and output location. Loaded from a JSON file;
/// unknown keys are rejected. Defaults reproduce the reference device.
struct RunConfig {
    DeviceParams device;
    LossGrid loss;
    std::vector<Variant> variants = {Variant::SnsBaseline, Variant::Continuous};
    OptimizerBox optimizer;
    McConfig mc;
    ValidationConfig validation;
    DecoyConfig decoy;
    std::string output_path = "sweep.csv";

    static RunConfig load(const std::string& path);
    static RunConfig from_json_text(const std::string& text);
};

}  // namespace snsqkd
