// tokenizer.hpp - TeX's reading rules: characters in, tokens out
//
// Input is split into lines (CR/LF normalized to LF). Each line is scanned
// under whatever catcode table is current when the line is reached, so an
// engine that pulls lines lazily sees catcode changes from the next line on.
//
// The end-of-line of the final input line produces no token; the input ends
// there.
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "semtex/catcode.hpp"
#include "semtex/token.hpp"

namespace semtex {

enum class ScannerState { LineStart, MidLine, SkippingBlanks };

class Tokenizer {
public:
    explicit Tokenizer(std::string_view source);

    bool at_end() const { return next_line_ >= lines_.size(); }

    // Scans the next line under `table`, appending its tokens to `out`.
    void next_line(const CatcodeTable& table, TokenList& out);

    // 1-based number of the line most recently scanned.
    int line_number() const { return static_cast<int>(next_line_); }

private:
    std::vector<std::u32string> lines_;
    std::size_t next_line_ = 0;
};

TokenList tokenize(std::string_view source, const CatcodeTable& table = CatcodeTable{});

// Control words as \name followed by one space, control symbols as \c,
// characters as themselves, parameters as #n.
std::string detokenize(const TokenList& tokens);

}  // namespace semtex
