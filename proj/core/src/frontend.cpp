#include "semtex/frontend.hpp"

#include <sys/socket.h>
#include <sys/un.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "semtex/engine.hpp"
#include "semtex/epub.hpp"
#include "semtex/profiler.hpp"
#include "semtex/xml.hpp"

namespace semtex {

namespace {

using json = nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

std::string modified_timestamp(const ConversionJob& job) {
    if (job.modified) return *job.modified;
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
        char* end = nullptr;
        const long long v = std::strtoll(epoch, &end, 10);
        if (end != epoch && *end == '\0') return format_timestamp(static_cast<std::time_t>(v));
    }
    return format_timestamp(std::time(nullptr));
}

std::string book_title(const Document& doc, const ConversionJob& job) {
    for (const auto& c : doc.root_element().children) {
        if (c.is_element("title")) {
            std::string t = text_content(c);
            if (!t.empty()) return t;
        }
    }
    if (job.source_path) return job.source_path->stem().string();
    return "Untitled";
}

void append_line(std::string& log, const std::string& line) {
    log += line;
    log += '\n';
}

int exit_for(const Error& e) {
    switch (e.code()) {
    case ErrorCode::IoError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::BindingParseError:
    case ErrorCode::ConstructorTemplateInvalid: return kExitUsage;
    default: return kExitFatal;
    }
}

std::mutex standard_mutex;

}  // namespace

std::shared_ptr<const Registry> primitive_registry() {
    Registry::Map map;
    for (const auto& [name, id] : Engine::primitive_bindings()) {
        map.emplace(name, std::make_shared<const Binding>(PrimitiveBinding{id}));
    }
    return std::make_shared<const Registry>(std::move(map), CatcodeTable());
}

std::shared_ptr<const Registry> extend_registry(const std::shared_ptr<const Registry>& base, std::string_view source,
                                                std::string_view name) {
    ConvertOptions opts;
    opts.strict = true;
    Engine engine(base, opts);
    auto where = [&](SourcePos pos) {
        if (!pos.known()) pos = engine.last_position();
        return std::string(name) + ":" + std::to_string(pos.line) + ": ";
    };
    Document doc;
    try {
        engine.set_source(source);
        engine.run();
        doc = engine.finish();
    } catch (const Error& e) {
        const ErrorCode code =
            e.code() == ErrorCode::ConstructorTemplateInvalid ? e.code() : ErrorCode::BindingParseError;
        throw Error(code, where(e.pos()) + std::string(error_code_name(e.code())) + ": " + e.detail(),
                    e.pos().known() ? e.pos() : engine.last_position());
    }
    if (!doc.root_element().children.empty()) {
        throw Error(ErrorCode::BindingParseError,
                    where({}) + "binding files may only contain definitions, not document content");
    }
    Registry::Map map = base->bindings();
    for (auto& [key, binding] : engine.state().changed_bindings()) {
        if (binding) {
            map[key] = binding;
        } else {
            map.erase(key);
        }
    }
    return std::make_shared<const Registry>(std::move(map), engine.state().catcodes());
}

std::shared_ptr<const Registry> load_bindings(const std::vector<std::filesystem::path>& paths) {
    static std::shared_ptr<const Registry> standard;
    std::shared_ptr<const Registry> reg;
    {
        std::lock_guard lock(standard_mutex);
        if (!standard) standard = extend_registry(primitive_registry(), standard_bindings_source(), "standard");
        reg = standard;
    }
    for (const auto& p : paths) reg = extend_registry(reg, read_file(p), p.string());
    return reg;
}

OutputFormat parse_format(std::string_view text) {
    if (text == "xml") return OutputFormat::Xml;
    if (text == "html5" || text == "html") return OutputFormat::Html5;
    if (text == "epub") return OutputFormat::Epub;
    throw Error(ErrorCode::InvalidArgument, "format must be xml, html5 or epub, not '" + std::string(text) + "'");
}

void validate_job(const ConversionJob& job) {
    if (!(job.timeout_seconds > 0)) throw Error(ErrorCode::InvalidArgument, "timeout must be positive");
    if (job.format != OutputFormat::Xml && job.dest.empty()) {
        throw Error(ErrorCode::InvalidArgument, "a destination is required for html5 and epub output");
    }
    if (job.modified) {
        validate_metadata({"x", "x", "en", *job.modified});
    }
}

std::string book_identifier(std::string_view source) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : source) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return "urn:semtex:" + std::string(buf);
}

JobResult run_job(const ConversionJob& job, const std::shared_ptr<const Registry>& registry) {
    JobResult r;
    std::string source;
    try {
        validate_job(job);
        source = job.source_path ? read_file(*job.source_path) : job.source_text;
    } catch (const Error& e) {
        r.exit_code = kExitUsage;
        append_line(r.log, std::string("error: ") + e.what());
        return r;
    }

    ConvertOptions opts;
    opts.strict = job.strict;
    opts.profile = job.profile;
    opts.deadline = std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(job.timeout_seconds));
    try {
        Document doc = resolve_refs(convert(source, registry, opts), job.splitat);
        bool violations = false;
        switch (job.format) {
        case OutputFormat::Xml: {
            std::string bytes = serialize_xml(doc);
            bytes += '\n';
            if (job.validate && !xml::parse(bytes)) {
                append_line(r.log, "error: intermediate XML does not re-parse");
                violations = true;
            }
            if (job.dest.empty()) {
                r.output = std::move(bytes);
            } else {
                write_file(job.dest, bytes);
                r.written.push_back(job.dest.string());
            }
            break;
        }
        case OutputFormat::Html5: {
            const auto pages = split_pages(doc, job.splitat);
            r.written = write_site(pages, job.dest, job.language);
            if (job.validate) {
                for (const auto& p : pages) {
                    std::string err;
                    if (!xml::parse(page_xhtml(p, job.language), &err)) {
                        append_line(r.log, "error: " + p.path + ": " + err);
                        violations = true;
                    }
                }
            }
            break;
        }
        case OutputFormat::Epub: {
            const auto pages = split_pages(doc, job.splitat);
            const EpubMetadata meta{book_identifier(source), book_title(doc, job), job.language,
                                    modified_timestamp(job)};
            const std::string archive = build_package(pages, {}, meta);
            write_file(job.dest, archive);
            r.written.push_back(job.dest.string());
            if (job.validate) {
                for (const auto& v : validate_structure(archive)) {
                    append_line(r.log, "error: epub rule " + v.rule + ": " + v.detail);
                    violations = true;
                }
            }
            break;
        }
        }
        for (const auto& d : doc.diagnostics) append_line(r.log, format_diagnostic(d));
        if (doc.profile) {
            const std::string tsv = profile_tsv(*doc.profile);
            if (job.profile_out) {
                write_file(*job.profile_out, tsv);
            } else {
                r.log += tsv;
            }
        }
        r.exit_code = violations ? kExitFatal : has_warnings(doc.diagnostics) ? kExitWarnings : kExitOk;
    } catch (const Error& e) {
        r.exit_code = exit_for(e);
        append_line(r.log, std::string("error: ") + e.what());
    } catch (const std::exception& e) {
        r.exit_code = kExitFatal;
        append_line(r.log, std::string("error: ") + e.what());
    }
    return r;
}

JobResult run(const ConversionJob& job) {
    std::shared_ptr<const Registry> registry;
    try {
        registry = load_bindings(job.preloads);
    } catch (const Error& e) {
        JobResult r;
        r.exit_code = kExitUsage;
        append_line(r.log, std::string("error: ") + e.what());
        return r;
    }
    return run_job(job, registry);
}

// --- daemon ----------------------------------------------------------------

Daemon::Daemon(std::shared_ptr<const Registry> registry) : registry_(std::move(registry)) {}

std::string Daemon::handle(std::string_view request_line) {
    json response;
    try {
        const json req = json::parse(request_line);
        if (!req.is_object()) throw Error(ErrorCode::InvalidArgument, "request must be a JSON object");
        ConversionJob job;
        if (req.contains("source")) {
            job.source_path = req.at("source").get<std::string>();
        } else if (req.contains("text")) {
            job.source_text = req.at("text").get<std::string>();
        } else {
            throw Error(ErrorCode::InvalidArgument, "request needs 'source' or 'text'");
        }
        job.format = parse_format(req.value("format", std::string("xml")));
        job.dest = req.value("dest", std::string());
        job.splitat = parse_split_level(req.value("splitat", std::string("none")));
        job.profile = req.value("profile", false);
        job.strict = req.value("strict", false);
        job.validate = req.value("validate", false);
        job.timeout_seconds = req.value("timeout", 60.0);
        job.language = req.value("language", std::string("en"));
        if (req.contains("modified")) job.modified = req.at("modified").get<std::string>();
        if (req.contains("profile_out")) job.profile_out = req.at("profile_out").get<std::string>();
        std::shared_ptr<const Registry> registry = registry_;
        if (req.contains("preload")) {
            for (const auto& p : req.at("preload")) {
                const std::filesystem::path path = p.get<std::string>();
                job.preloads.push_back(path);
                registry = extend_registry(registry, read_file(path), path.string());
            }
        }
        const JobResult r = run_job(job, registry);
        response["status"] = r.exit_code == kExitOk ? "ok" : r.exit_code == kExitWarnings ? "warn" : "error";
        if (!job.dest.empty() && r.exit_code <= kExitWarnings) response["dest"] = job.dest.string();
        if (!r.output.empty()) response["output"] = r.output;
        response["log"] = r.log;
    } catch (const std::exception& e) {
        response = json{{"status", "error"}, {"log", std::string("error: ") + e.what() + "\n"}};
    }
    return response.dump(-1, ' ', false, json::error_handler_t::replace);
}

void Daemon::serve(std::istream& in, std::ostream& out) {
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        out << handle(line) << '\n' << std::flush;
    }
}

namespace {

bool write_all(int fd, std::string_view data) {
    while (!data.empty()) {
        const ssize_t n = ::write(fd, data.data(), data.size());
        if (n <= 0) return false;
        data.remove_prefix(static_cast<std::size_t>(n));
    }
    return true;
}

void serve_connection(Daemon& d, int fd) {
    std::string pending;
    char buf[4096];
    for (;;) {
        const ssize_t n = ::read(fd, buf, sizeof buf);
        if (n <= 0) break;
        pending.append(buf, static_cast<std::size_t>(n));
        std::size_t nl;
        while ((nl = pending.find('\n')) != std::string::npos) {
            std::string line = pending.substr(0, nl);
            pending.erase(0, nl + 1);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            if (!write_all(fd, d.handle(line) + "\n")) {
                ::close(fd);
                return;
            }
        }
    }
    if (!pending.empty()) write_all(fd, d.handle(pending) + "\n");
    ::close(fd);
}

}  // namespace

void Daemon::serve_socket(const std::filesystem::path& socket_path) {
    const int srv = ::socket(AF_UNIX, SOCK_STREAM, 0);
    if (srv < 0) throw Error(ErrorCode::IoError, "cannot create socket");
    sockaddr_un addr{};
    addr.sun_family = AF_UNIX;
    const std::string p = socket_path.string();
    if (p.size() >= sizeof addr.sun_path) {
        ::close(srv);
        throw Error(ErrorCode::IoError, "socket path too long: " + p);
    }
    std::copy(p.begin(), p.end(), addr.sun_path);
    ::unlink(p.c_str());
    if (::bind(srv, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || ::listen(srv, 16) != 0) {
        ::close(srv);
        throw Error(ErrorCode::IoError, "cannot listen on " + p);
    }
    for (;;) {
        const int fd = ::accept(srv, nullptr, nullptr);
        if (fd < 0) {
            ::close(srv);
            throw Error(ErrorCode::IoError, "accept failed on " + p);
        }
        std::thread([this, fd] { serve_connection(*this, fd); }).detach();
    }
}

}  // namespace semtex
