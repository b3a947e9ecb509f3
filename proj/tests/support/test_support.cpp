#include "test_support.hpp"

#include <algorithm>
#include <cstdio>
#include <atomic>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "semtex/frontend.hpp"
#include "semtex/postprocess.hpp"
#include "semtex/xml.hpp"
#include "semtex/zip.hpp"

namespace semtex::test {

std::filesystem::path corpus_dir() { return SEMTEX_CORPUS_DIR; }
std::filesystem::path golden_dir() { return SEMTEX_GOLDEN_DIR; }
std::filesystem::path cli_path() { return SEMTEX_CLI_PATH; }

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& p, std::string_view bytes) {
    std::ofstream out(p, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::vector<std::filesystem::path> corpus_files() {
    std::vector<std::filesystem::path> out;
    for (const auto& e : std::filesystem::directory_iterator(corpus_dir())) {
        if (e.path().extension() == ".tex") out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::shared_ptr<const Registry> standard() {
    static const auto reg = load_bindings({});
    return reg;
}

Document convert_std(std::string_view source, ConvertOptions opts) { return convert(source, standard(), opts); }

std::vector<std::string> messages(std::string_view source) {
    Engine e(standard());
    e.set_source(source);
    e.run();
    e.finish();
    return e.messages();
}

std::vector<OracleCase> expansion_oracle_cases() {
    std::istringstream in(read_file(golden_dir() / "expansion_oracle.txt"));
    std::vector<OracleCase> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.starts_with("# ")) {
            out.push_back({line.substr(2), {}, {}});
        } else if (line.starts_with("> ")) {
            out.back().expected.push_back(line.substr(2));
        } else if (!line.empty() && !out.empty()) {
            if (!out.back().source.empty()) out.back().source += '\n';
            out.back().source += line;
        }
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> math_golden_cases() {
    std::istringstream in(read_file(golden_dir() / "math_golden.txt"));
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto tab = line.find('\t');
        if (line.empty() || line[0] == '#' || tab == std::string::npos) continue;
        out.emplace_back(line.substr(0, tab), line.substr(tab + 1));
    }
    return out;
}

namespace {

void collect_svgs(const DocNode& n, const std::string& where, std::vector<std::pair<std::string, std::string>>& out) {
    if (n.is_graphics()) {
        out.emplace_back(where + " svg " + std::to_string(out.size()), xml::to_string(n));
        return;
    }
    if (!n.is_element()) return;
    for (const DocNode& c : n.element().children) collect_svgs(c, where, out);
}

}  // namespace

std::vector<std::pair<std::string, std::string>> artifacts_for(std::string_view source) {
    std::vector<std::pair<std::string, std::string>> out;
    const Document doc = convert_std(source);
    out.emplace_back("document.xml", serialize_xml(resolve_refs(doc)));
    collect_svgs(doc.root, "document", out);
    for (SplitLevel level : {SplitLevel::None, SplitLevel::Section}) {
        const std::string tag = level == SplitLevel::None ? "none/" : "section/";
        for (const Page& p : split_pages(resolve_refs(doc, level), level)) {
            out.emplace_back(tag + p.path, page_xhtml(p));
        }
    }
    TempDir dir;
    ConversionJob job;
    job.source_text = std::string(source);
    job.format = OutputFormat::Epub;
    job.splitat = SplitLevel::Section;
    job.dest = dir.path() / "book.epub";
    job.modified = "2024-01-01T00:00:00Z";
    const JobResult r = run_job(job, standard());
    if (r.exit_code > kExitWarnings) throw std::runtime_error("epub job failed: " + r.log);
    for (const auto& e : zip::read(read_file(job.dest))) {
        if (e.name.ends_with(".xhtml") || e.name.ends_with(".xml") || e.name.ends_with(".opf")) {
            out.emplace_back("epub/" + e.name, e.data);
        }
    }
    return out;
}

ProcessResult run_command(const std::string& command_line) {
    ProcessResult r;
    FILE* pipe = ::popen(command_line.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = ::pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string shell_quote(std::string_view s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += "'\\''";
        else out += c;
    }
    return out + "'";
}

std::string well_formedness_error(std::string_view xml) {
    std::string err;
    if (xml::parse(xml, &err)) return {};
    return err.empty() ? "not well-formed" : err;
}

void collect_texts(const DocNode& node, std::vector<std::string>& out) {
    if (node.is_text()) {
        out.push_back(node.text());
    } else if (node.is_element()) {
        for (const auto& c : node.element().children) collect_texts(c, out);
    }
}

TempDir::TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("semtex-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

}  // namespace semtex::test
