#include "snsqkd/textio.hpp"

#include <charconv>
#include <cstdio>

namespace snsqkd {

std::string format_g12(double v) {
    char buf[64];
    const auto res =
        std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

}  // namespace snsqkd
