#include "snsqkd/params.hpp"

#include <cmath>
#include <stdexcept>

namespace snsqkd {

void DeviceParams::validate() const {
    if (!(det_eff >= 0.0 && det_eff <= 1.0))
        throw std::invalid_argument("det_eff must be in [0,1]");
    if (!(dark >= 0.0 && dark <= 1.0))
        throw std::invalid_argument("dark must be in [0,1]");
    if (!(ec_eff >= 1.0))
        throw std::invalid_argument("ec_eff must be >= 1");
    if (!(misalign >= 0.0 && misalign <= 0.5))
        throw std::invalid_argument("misalign must be in [0,1/2]");
}

ChannelPoint ChannelPoint::from_loss_db(double loss_db, const DeviceParams& dev) {
    if (!(loss_db >= 0.0))
        throw std::invalid_argument("loss_db must be >= 0");
    dev.validate();
    ChannelPoint ch;
    ch.loss_db = loss_db;
    ch.eta = std::pow(10.0, -loss_db / 10.0);
    ch.arm_eta = std::sqrt(ch.eta) * dev.det_eff;
    return ch;
}

void ProtocolParams::validate() const {
    if (!(p_send > 0.0 && p_send < 1.0))
        throw std::invalid_argument("p_send must be in (0,1)");
    if (!(mu > 0.0))
        throw std::invalid_argument("mu must be > 0");
    if (!(delta > 0.0 && delta <= M_PI))
        throw std::invalid_argument("delta must be in (0, pi]");
    if (m_phases != 0 && m_phases != 2 && m_phases != 4)
        throw std::invalid_argument("m_phases must be 0, 2 or 4");
}

std::string variant_name(Variant v) {
    switch (v) {
        case Variant::SnsBaseline: return "sns";
        case Variant::Continuous: return "continuous";
        case Variant::M2: return "m2";
        case Variant::M4: return "m4";
        case Variant::SnsBaselineAopp: return "sns-aopp";
        case Variant::ContinuousAopp: return "continuous-aopp";
        case Variant::M2Aopp: return "m2-aopp";
        case Variant::M4Aopp: return "m4-aopp";
    }
    throw std::logic_error("unknown variant");
}

Variant variant_from_name(const std::string& name) {
    if (name == "sns") return Variant::SnsBaseline;
    if (name == "continuous") return Variant::Continuous;
    if (name == "m2") return Variant::M2;
    if (name == "m4") return Variant::M4;
    if (name == "sns-aopp") return Variant::SnsBaselineAopp;
    if (name == "continuous-aopp") return Variant::ContinuousAopp;
    if (name == "m2-aopp") return Variant::M2Aopp;
    if (name == "m4-aopp") return Variant::M4Aopp;
    throw std::invalid_argument("unknown variant name: " + name);
}

bool variant_uses_aopp(Variant v) {
    switch (v) {
        case Variant::SnsBaselineAopp:
        case Variant::ContinuousAopp:
        case Variant::M2Aopp:
        case Variant::M4Aopp:
            return true;
        default:
            return false;
    }
}

Variant variant_base(Variant v) {
    switch (v) {
        case Variant::SnsBaselineAopp: return Variant::SnsBaseline;
        case Variant::ContinuousAopp: return Variant::Continuous;
        case Variant::M2Aopp: return Variant::M2;
        case Variant::M4Aopp: return Variant::M4;
        default: return v;
    }
}

int variant_m_phases(Variant v) {
    switch (variant_base(v)) {
        case Variant::M2: return 2;
        case Variant::M4: return 4;
        default: return 0;
    }
}

bool variant_uses_delta(Variant v) {
    return variant_base(v) == Variant::Continuous;
}

}  // namespace snsqkd
