// semtex - convert a TeX-subset document to XML, HTML5 or EPUB 3
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "semtex/frontend.hpp"

namespace {

struct Log {
    std::ofstream file;
    bool quiet = false;

    void write(const std::string& text) {
        if (text.empty()) return;
        if (file.is_open()) {
            file << text << std::flush;
        } else if (!quiet) {
            std::cerr << text;
        }
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Convert a TeX-subset document to semantic XML, HTML5 or EPUB 3"};
    std::string input;
    std::string format = "xml";
    std::string dest;
    std::string splitat = "none";
    std::vector<std::string> preloads;
    std::string profile_out;
    std::string socket;
    std::string log_path;
    std::string modified;
    bool profile = false;
    bool strict = false;
    bool validate = false;
    bool daemon = false;
    bool quiet = false;
    bool verbose = false;
    double timeout = 60;

    app.add_option("input", input, "Input .tex file");
    app.add_option("--format", format, "xml, html5 or epub")->capture_default_str();
    app.add_option("--dest", dest, "Output file (xml, epub) or directory (html5)");
    app.add_option("--splitat", splitat, "none or section")->capture_default_str();
    app.add_option("--preload", preloads, "Binding file loaded after the standard set (repeatable)");
    app.add_flag("--profile", profile, "Report per-binding time as TSV");
    app.add_option("--profile-out", profile_out, "Write the profile here instead of the log");
    app.add_flag("--strict", strict, "Treat undefined commands and recoverable errors as fatal");
    app.add_flag("--validate", validate, "Re-check the produced output");
    app.add_option("--timeout", timeout, "Seconds per job")->capture_default_str();
    app.add_option("--modified", modified, "EPUB modified timestamp, CCYY-MM-DDThh:mm:ssZ");
    app.add_flag("--daemon", daemon, "Serve newline-delimited JSON requests");
    app.add_option("--socket", socket, "Unix socket for --daemon (default: stdio)");
    app.add_option("--log", log_path, "Write diagnostics to this file");
    app.add_flag("-q,--quiet", quiet, "No diagnostics on stderr");
    app.add_flag("-v,--verbose", verbose, "List written files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return semtex::kExitUsage;
    }

    Log log;
    log.quiet = quiet;
    if (!log_path.empty()) {
        log.file.open(log_path, std::ios::app);
        if (!log.file) {
            std::cerr << "error: cannot open log " << log_path << "\n";
            return semtex::kExitUsage;
        }
    }

    if (daemon) {
        try {
            std::vector<std::filesystem::path> paths(preloads.begin(), preloads.end());
            semtex::Daemon d(semtex::load_bindings(paths));
            if (socket.empty()) {
                d.serve(std::cin, std::cout);
            } else {
                d.serve_socket(socket);
            }
            return semtex::kExitOk;
        } catch (const semtex::Error& e) {
            log.write(std::string("error: ") + e.what() + "\n");
            return semtex::kExitUsage;
        }
    }

    semtex::ConversionJob job;
    try {
        if (input.empty()) throw semtex::Error(semtex::ErrorCode::InvalidArgument, "no input file given");
        job.source_path = input;
        job.format = semtex::parse_format(format);
        job.dest = dest;
        job.splitat = semtex::parse_split_level(splitat);
        job.preloads.assign(preloads.begin(), preloads.end());
        job.profile = profile;
        job.strict = strict;
        job.validate = validate;
        job.timeout_seconds = timeout;
        if (!profile_out.empty()) job.profile_out = profile_out;
        if (!modified.empty()) job.modified = modified;
    } catch (const semtex::Error& e) {
        log.write(std::string("error: ") + e.what() + "\n");
        return semtex::kExitUsage;
    }

    const semtex::JobResult r = semtex::run(job);
    std::cout << r.output;
    log.write(r.log);
    if (verbose) {
        for (const auto& f : r.written) std::cerr << "wrote " << f << "\n";
    }
    return r.exit_code;
}
