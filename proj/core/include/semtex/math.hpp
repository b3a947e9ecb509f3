// math.hpp - math-mode token lists to presentation MathML
//
// Precedence from loosest to tightest: relations, additive operators,
// juxtaposition (including multiplicative operators), scripts. Each level
// that combines more than one operand yields an mrow; a lone operand is
// passed up unwrapped. Juxtaposition inserts no invisible operator.
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "semtex/doc.hpp"
#include "semtex/math_tree.hpp"
#include "semtex/token.hpp"

namespace semtex::math {

struct ParseOptions {
    // UnknownMathCommand is thrown instead of emitting mo(\name).
    bool strict = false;
};

MathTree parse_math(const TokenList& tokens, const ParseOptions& options = {},
                    std::vector<std::string>* warnings = nullptr);

// <math xmlns=MathML display="inline|block">...</math>
Element mathml_serialize(const MathTree& tree, MathDisplay display);

// Commands the grammar understands (Greek letters, named operators, \frac,
// \sqrt, \left, \right, function names).
bool is_math_command(std::string_view name);
// Unicode text for a Greek-letter command, empty when not Greek.
std::string greek_letter(std::string_view name);
// Every name accepted by is_math_command, sorted.
std::vector<std::string> math_command_names();

}  // namespace semtex::math
