#pragma once

#include <string>
#include <vector>

#include "semtex/error.hpp"

namespace semtex {

enum class Severity { Info, Warning, Error };

struct Diagnostic {
    Severity severity = Severity::Warning;
    std::string message;
    SourcePos pos;
};

std::string format_diagnostic(const Diagnostic& d);

inline bool has_warnings(const std::vector<Diagnostic>& ds) {
    for (const auto& d : ds) {
        if (d.severity != Severity::Info) return true;
    }
    return false;
}

}  // namespace semtex
