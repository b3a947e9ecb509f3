// error.hpp - error codes and the exception type shared by every stage
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace semtex {

enum class ErrorCode : std::uint8_t {
    // tokenizer
    InvalidCharacter,
    UnterminatedControlSequence,
    // engine
    BadParameterIndex,
    RunawayArgument,
    UnbalancedConditional,
    UndefinedControlSequence,
    MissingUnit,
    NumberTooLarge,
    ArithmeticOverflow,
    UnbalancedGroup,
    ExpansionDepthExceeded,
    MissingArgument,
    Timeout,
    FatalConversionError,
    ProfilerDisabled,
    // doc model
    SchemaViolation,
    // math
    UnbalancedScripts,
    UnknownMathCommand,
    // graphics
    NoCurrentPoint,
    EmptyPath,
    EmptyPicture,
    InvalidTransform,
    // postprocessor
    UnmappedElement,
    IoError,
    // epub
    MetadataInvalid,
    ManifestCollision,
    NotAZip,
    // frontend
    BindingParseError,
    ConstructorTemplateInvalid,
    InvalidArgument,
};

std::string_view error_code_name(ErrorCode code);

struct SourcePos {
    int line = 0;    // 1-based; 0 when unknown
    int column = 0;  // 1-based; 0 when unknown

    bool known() const { return line > 0; }
    friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, SourcePos pos = {});

    ErrorCode code() const { return code_; }
    const SourcePos& pos() const { return pos_; }
    // message without the "Code: " prefix or position suffix
    const std::string& detail() const { return detail_; }

    // FatalConversionError keeps the code of the engine error it wraps
    ErrorCode cause() const { return cause_; }
    static Error fatal(const Error& inner);

private:
    ErrorCode code_;
    ErrorCode cause_;
    SourcePos pos_;
    std::string detail_;
};

}  // namespace semtex
