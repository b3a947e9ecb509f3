#include "semtex/error.hpp"

namespace semtex {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidCharacter: return "InvalidCharacter";
    case ErrorCode::UnterminatedControlSequence: return "UnterminatedControlSequence";
    case ErrorCode::BadParameterIndex: return "BadParameterIndex";
    case ErrorCode::RunawayArgument: return "RunawayArgument";
    case ErrorCode::UnbalancedConditional: return "UnbalancedConditional";
    case ErrorCode::UndefinedControlSequence: return "UndefinedControlSequence";
    case ErrorCode::MissingUnit: return "MissingUnit";
    case ErrorCode::NumberTooLarge: return "NumberTooLarge";
    case ErrorCode::ArithmeticOverflow: return "ArithmeticOverflow";
    case ErrorCode::UnbalancedGroup: return "UnbalancedGroup";
    case ErrorCode::ExpansionDepthExceeded: return "ExpansionDepthExceeded";
    case ErrorCode::MissingArgument: return "MissingArgument";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::FatalConversionError: return "FatalConversionError";
    case ErrorCode::ProfilerDisabled: return "ProfilerDisabled";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::UnbalancedScripts: return "UnbalancedScripts";
    case ErrorCode::UnknownMathCommand: return "UnknownMathCommand";
    case ErrorCode::NoCurrentPoint: return "NoCurrentPoint";
    case ErrorCode::EmptyPath: return "EmptyPath";
    case ErrorCode::EmptyPicture: return "EmptyPicture";
    case ErrorCode::InvalidTransform: return "InvalidTransform";
    case ErrorCode::UnmappedElement: return "UnmappedElement";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::MetadataInvalid: return "MetadataInvalid";
    case ErrorCode::ManifestCollision: return "ManifestCollision";
    case ErrorCode::NotAZip: return "NotAZip";
    case ErrorCode::BindingParseError: return "BindingParseError";
    case ErrorCode::ConstructorTemplateInvalid: return "ConstructorTemplateInvalid";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

namespace {

std::string format_message(ErrorCode code, const std::string& message, SourcePos pos) {
    std::string out(error_code_name(code));
    out += ": ";
    out += message;
    if (pos.known()) {
        out += " (line " + std::to_string(pos.line) + ", column " + std::to_string(pos.column) + ")";
    }
    return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, SourcePos pos)
    : std::runtime_error(format_message(code, message, pos)),
      code_(code),
      cause_(code),
      pos_(pos),
      detail_(message) {}

Error Error::fatal(const Error& inner) {
    Error e(ErrorCode::FatalConversionError,
            std::string(error_code_name(inner.code_)) + ": " + inner.detail_, inner.pos_);
    e.cause_ = inner.code_;
    return e;
}

}  // namespace semtex
