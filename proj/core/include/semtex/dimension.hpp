// dimension.hpp - TeX lengths as exact integers in scaled points
#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace semtex {

inline constexpr std::int32_t kUnity = 65536;             // sp per pt
inline constexpr std::int32_t kMaxDimen = (1 << 30) - 1;  // largest legal |sp|

class Dimension {
public:
    constexpr Dimension() = default;
    static constexpr Dimension from_sp(std::int32_t sp) { return Dimension(sp); }
    static constexpr Dimension from_pt(std::int32_t pt) { return Dimension(pt * kUnity); }

    constexpr std::int32_t sp() const { return sp_; }
    constexpr double pt() const { return static_cast<double>(sp_) / kUnity; }

    friend constexpr auto operator<=>(Dimension, Dimension) = default;

private:
    constexpr explicit Dimension(std::int32_t sp) : sp_(sp) {}
    std::int32_t sp_ = 0;
};

// TeX's print_scaled: shortest decimal that reads back to the same sp
// value, e.g. 163840 -> "2.5", 65536 -> "1.0".
std::string print_scaled(std::int32_t sp);

// TeX's round_decimals over fraction digits d1 d2 ... (most significant
// first), giving the fraction in units of 2^-16.
std::int32_t round_decimals(const std::string& digits);

}  // namespace semtex
