// frontend.hpp - binding files, conversion jobs and the daemon protocol
#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semtex/binding.hpp"
#include "semtex/postprocess.hpp"

namespace semtex {

// The binding file loaded before any user file.
std::string_view standard_bindings_source();

// Primitives only, default catcodes.
std::shared_ptr<const Registry> primitive_registry();

// Runs one binding file on top of `base` and returns the extended registry.
// `name` is used in error messages. Nothing changes on failure: throws
// BindingParseError ("name:line: ...") or ConstructorTemplateInvalid.
std::shared_ptr<const Registry> extend_registry(const std::shared_ptr<const Registry>& base, std::string_view source,
                                                std::string_view name);

// Standard set (cached) followed by each file in order.
std::shared_ptr<const Registry> load_bindings(const std::vector<std::filesystem::path>& paths);

enum class OutputFormat { Xml, Html5, Epub };
OutputFormat parse_format(std::string_view text);  // throws InvalidArgument

struct ConversionJob {
    std::optional<std::filesystem::path> source_path;
    std::string source_text;  // used when source_path is empty
    OutputFormat format = OutputFormat::Xml;
    std::filesystem::path dest;  // empty: xml goes to the result's output
    SplitLevel splitat = SplitLevel::None;
    std::vector<std::filesystem::path> preloads;
    bool profile = false;
    bool strict = false;
    bool validate = false;
    double timeout_seconds = 60;
    std::optional<std::filesystem::path> profile_out;  // default: the log
    std::string language = "en";
    // EPUB dcterms:modified; SOURCE_DATE_EPOCH or the current time if unset.
    std::optional<std::string> modified;
};

// Throws InvalidArgument.
void validate_job(const ConversionJob& job);

enum ExitCode : int { kExitOk = 0, kExitWarnings = 1, kExitFatal = 2, kExitUsage = 3 };

struct JobResult {
    int exit_code = kExitOk;
    std::string log;     // one diagnostic per line
    std::string output;  // xml bytes when no dest was given
    std::vector<std::string> written;
};

// Never throws; failures are reported through exit_code and log.
JobResult run_job(const ConversionJob& job, const std::shared_ptr<const Registry>& registry);

// One-shot: loads the standard set and the job's preloads, then runs it.
JobResult run(const ConversionJob& job);

// "urn:semtex:" followed by the 64-bit FNV-1a hash of the source, in hex.
std::string book_identifier(std::string_view source);

// Daemon. Each line of `in` is a JSON request; one JSON response line is
// written per request, in order.
class Daemon {
public:
    explicit Daemon(std::shared_ptr<const Registry> registry);

    // Response line (without newline) for one request line.
    std::string handle(std::string_view request_line);
    void serve(std::istream& in, std::ostream& out);
    // Listens on a unix socket, one thread per connection. Returns only on
    // error (IoError).
    void serve_socket(const std::filesystem::path& socket_path);

private:
    std::shared_ptr<const Registry> registry_;
};

}  // namespace semtex
