// catcode.hpp - TeX category codes and the character -> category table
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string_view>

namespace semtex {

enum class Catcode : std::uint8_t {
    Escape = 0,
    BeginGroup = 1,
    EndGroup = 2,
    MathShift = 3,
    AlignTab = 4,
    EndOfLine = 5,
    Parameter = 6,
    Superscript = 7,
    Subscript = 8,
    Ignored = 9,
    Space = 10,
    Letter = 11,
    Other = 12,
    Active = 13,
    Comment = 14,
    Invalid = 15,
};

inline constexpr int kCatcodeCount = 16;

std::string_view catcode_name(Catcode cat);

// Total mapping from code points to categories. ASCII lives in a flat array;
// anything else defaults to Other unless explicitly overridden.
class CatcodeTable {
public:
    // The default table: \ { } $ & newline # ^ _ space/tab letters % set,
    // every other character Other.
    CatcodeTable();

    Catcode get(char32_t c) const {
        if (c < ascii_.size()) return ascii_[c];
        auto it = wide_.find(c);
        return it == wide_.end() ? Catcode::Other : it->second;
    }
    void set(char32_t c, Catcode cat);

    friend bool operator==(const CatcodeTable&, const CatcodeTable&) = default;

private:
    std::array<Catcode, 128> ascii_{};
    std::map<char32_t, Catcode> wide_;
};

}  // namespace semtex
