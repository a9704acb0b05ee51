#pragma once

#include <cmath>
#include <string>

namespace snsqkd {

/// Detector and post-processing parameters of the receiving station.
struct DeviceParams {
    double det_eff = 1.0;    ///< detector efficiency, in [0,1]
    double dark = 1e-11;     ///< dark count probability per detector per round
    double ec_eff = 1.1;     ///< error-correction inefficiency, >= 1
    double misalign = 0.01;  ///< probability a photon exits the wrong interferometer port, <= 1/2

    /// Throws std::invalid_argument if any field is out of range.
    void validate() const;
};

/// Symmetric channel described by its total loss in dB. Each arm carries
/// half of the loss; detector efficiency is lumped into the arm
/// transmittance (arm_eta = sqrt(eta) * det_eff).
struct ChannelPoint {
    double loss_db = 0.0;
    double eta = 1.0;      ///< total transmittance, 10^(-loss_db/10)
    double arm_eta = 1.0;  ///< effective per-arm transmittance

    static ChannelPoint from_loss_db(double loss_db, const DeviceParams& dev);
};

/// Source-side protocol parameters.
struct ProtocolParams {
    double p_send = 0.05;  ///< probability of emitting a coherent pulse, in (0,1)
    double mu = 0.5;       ///< mean photon number of the pulse, > 0
    double delta = 0.1;    ///< phase-sifting half-width in radians, in (0, pi]
    int m_phases = 0;      ///< number of discrete phases; 0 means continuous

    void validate() const;

    bool discrete() const { return m_phases != 0; }
    /// Fraction of rounds surviving one detector's phase sifting.
    double sifting_efficiency() const {
        return discrete() ? 1.0 / m_phases : delta / M_PI;
    }
};

/// Protocol flavours exposed by the rate assembler, the optimizer and the CLI.
enum class Variant {
    SnsBaseline,
    Continuous,
    M2,
    M4,
    SnsBaselineAopp,
    ContinuousAopp,
    M2Aopp,
    M4Aopp,
};

std::string variant_name(Variant v);
Variant variant_from_name(const std::string& name);
bool variant_uses_aopp(Variant v);
/// Strips the AOPP flavour (ContinuousAopp -> Continuous, ...).
Variant variant_base(Variant v);
/// Discrete phase count for the variant (0 for continuous and baseline).
int variant_m_phases(Variant v);
/// Baseline SNS has no sifting window, so delta is not a free parameter.
bool variant_uses_delta(Variant v);

inline double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

}  // namespace snsqkd
