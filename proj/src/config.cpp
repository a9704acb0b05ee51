#include "snsqkd/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace snsqkd {

std::vector<double> LossGrid::points() const {
    if (!(step_db > 0.0)) throw std::invalid_argument("loss.step_db must be > 0");
    if (stop_db < start_db)
        throw std::invalid_argument("loss.stop_db must be >= loss.start_db");
    std::vector<double> pts;
    const int n = static_cast<int>(std::floor((stop_db - start_db) / step_db + 1e-9));
    pts.reserve(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) pts.push_back(start_db + step_db * i);
    return pts;
}

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& section,
                  std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (key == a) {
                known = true;
                break;
            }
        if (!known)
            throw std::invalid_argument("config: unknown key '" + key + "' in " +
                                        section);
    }
}

template <typename T>
void maybe(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    if (!root.is_object()) throw std::invalid_argument("config: root must be an object");

    RunConfig cfg;
    require_keys(root, "root",
                 {"device", "loss", "variants", "optimizer", "mc", "validation",
                  "decoy", "output"});

    if (root.contains("device")) {
        const auto& d = root["device"];
        require_keys(d, "device", {"det_eff", "dark", "ec_eff", "misalign"});
        maybe(d, "det_eff", cfg.device.det_eff);
        maybe(d, "dark", cfg.device.dark);
        maybe(d, "ec_eff", cfg.device.ec_eff);
        maybe(d, "misalign", cfg.device.misalign);
    }
    cfg.device.validate();

    if (root.contains("loss")) {
        const auto& l = root["loss"];
        require_keys(l, "loss", {"start_db", "stop_db", "step_db"});
        maybe(l, "start_db", cfg.loss.start_db);
        maybe(l, "stop_db", cfg.loss.stop_db);
        maybe(l, "step_db", cfg.loss.step_db);
    }

    if (root.contains("variants")) {
        cfg.variants.clear();
        for (const auto& v : root["variants"])
            cfg.variants.push_back(variant_from_name(v.get<std::string>()));
    }

    if (root.contains("optimizer")) {
        const auto& o = root["optimizer"];
        require_keys(o, "optimizer",
                     {"p_min", "p_max", "mu_min", "mu_max", "delta_min", "delta_max"});
        maybe(o, "p_min", cfg.optimizer.p_min);
        maybe(o, "p_max", cfg.optimizer.p_max);
        maybe(o, "mu_min", cfg.optimizer.mu_min);
        maybe(o, "mu_max", cfg.optimizer.mu_max);
        maybe(o, "delta_min", cfg.optimizer.delta_min);
        maybe(o, "delta_max", cfg.optimizer.delta_max);
    }

    if (root.contains("mc")) {
        const auto& m = root["mc"];
        require_keys(m, "mc", {"rounds", "seed", "block_size"});
        maybe(m, "rounds", cfg.mc.rounds);
        maybe(m, "seed", cfg.mc.seed);
        maybe(m, "block_size", cfg.mc.block_size);
    }

    if (root.contains("validation")) {
        const auto& v = root["validation"];
        require_keys(v, "validation",
                     {"losses_db", "p_send", "mu", "delta", "m_phases"});
        maybe(v, "losses_db", cfg.validation.losses_db);
        maybe(v, "p_send", cfg.validation.p_send);
        maybe(v, "mu", cfg.validation.mu);
        maybe(v, "delta", cfg.validation.delta);
        maybe(v, "m_phases", cfg.validation.m_phases);
    }

    if (root.contains("decoy")) {
        const auto& d = root["decoy"];
        require_keys(d, "decoy", {"j_max", "loss_db", "p_send", "mu", "delta"});
        maybe(d, "j_max", cfg.decoy.j_max);
        maybe(d, "loss_db", cfg.decoy.loss_db);
        maybe(d, "p_send", cfg.decoy.p_send);
        maybe(d, "mu", cfg.decoy.mu);
        maybe(d, "delta", cfg.decoy.delta);
    }

    if (root.contains("output")) {
        const auto& o = root["output"];
        require_keys(o, "output", {"path"});
        maybe(o, "path", cfg.output_path);
    }
    return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

}  // namespace snsqkd
