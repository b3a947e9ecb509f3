#include "semtex/dimension.hpp"

namespace semtex {

std::string print_scaled(std::int32_t sp) {
    std::string out;
    std::int64_t s = sp;
    if (s < 0) {
        out += '-';
        s = -s;
    }
    out += std::to_string(s / kUnity);
    out += '.';
    s = 10 * (s % kUnity) + 5;
    std::int64_t delta = 10;
    do {
        if (delta > kUnity) s = s + 0x8000 - 50000;  // round the last digit
        out += static_cast<char>('0' + s / kUnity);
        s = 10 * (s % kUnity);
        delta *= 10;
    } while (s > delta);
    return out;
}

std::int32_t round_decimals(const std::string& digits) {
    std::int64_t a = 0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        a = (a + (*it - '0') * 0x20000) / 10;
    }
    return static_cast<std::int32_t>((a + 1) / 2);
}

}  // namespace semtex
