#pragma once

#include <string>

namespace snsqkd {

/// Locale-independent general-format float with 12 significant digits.
/// All file and report output goes through this so that reruns are
/// byte-identical across platforms.
std::string format_g12(double v);

}  // namespace snsqkd
