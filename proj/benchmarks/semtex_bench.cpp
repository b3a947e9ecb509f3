// semtex_bench.cpp - throughput of the pipeline stages
#include <benchmark/benchmark.h>

#include <string>

#include "semtex/engine.hpp"
#include "semtex/frontend.hpp"
#include "semtex/math.hpp"
#include "semtex/postprocess.hpp"
#include "semtex/tokenizer.hpp"
#include "semtex/xml.hpp"

namespace {

std::string book(int sections) {
    std::string s = "\\documentclass{book}\n\\title{Bench}\n\\begin{document}\n\\maketitle\n";
    for (int i = 1; i <= sections; ++i) {
        const std::string n = std::to_string(i);
        s += "\\section{Part " + n + "}\\label{s" + n + "}\n";
        s += "Text with \\textbf{bold} and \\emph{emphasis}, see \\ref{s1}.\n\n";
        s += "Inline $a_" + n + " + \\frac{x^2}{1+y} = \\sqrt{z}$ math.\n\n";
        s += "\\begin{gpicture}\\gline{0pt}{0pt}{10pt}{5pt}\\grect{1pt}{1pt}{3pt}{2pt}\\gtext{2pt}{2pt}{label}\\end{gpicture}\n\n";
    }
    return s + "\\end{document}\n";
}

void BM_tokenize(benchmark::State& state) {
    const std::string src = book(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(semtex::tokenize(src));
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * src.size()));
}
BENCHMARK(BM_tokenize)->Arg(10)->Arg(100);

void BM_convert(benchmark::State& state) {
    const auto registry = semtex::load_bindings({});
    const std::string src = book(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(semtex::convert(src, registry));
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * src.size()));
}
BENCHMARK(BM_convert)->Arg(10)->Arg(100);

void BM_parse_math(benchmark::State& state) {
    const auto tokens = semtex::tokenize("\\frac{a^2+b_i}{\\sqrt{x+y}} - \\alpha(x+1) = \\sum_{i=1}^n i");
    for (auto _ : state) benchmark::DoNotOptimize(semtex::math::parse_math(tokens));
}
BENCHMARK(BM_parse_math);

void BM_html5(benchmark::State& state) {
    const auto registry = semtex::load_bindings({});
    const semtex::Document doc = semtex::convert(book(50), registry);
    for (auto _ : state) {
        for (const auto& page : semtex::split_pages(doc, semtex::SplitLevel::Section))
            benchmark::DoNotOptimize(semtex::page_xhtml(page));
    }
}
BENCHMARK(BM_html5);

void BM_epub_job(benchmark::State& state) {
    const auto registry = semtex::load_bindings({});
    semtex::ConversionJob job;
    job.source_text = book(20);
    job.format = semtex::OutputFormat::Epub;
    job.splitat = semtex::SplitLevel::Section;
    job.modified = "2024-01-01T00:00:00Z";
    for (auto _ : state) {
        job.dest = std::filesystem::temp_directory_path() / "semtex_bench.epub";
        benchmark::DoNotOptimize(semtex::run_job(job, registry));
    }
    std::filesystem::remove(std::filesystem::temp_directory_path() / "semtex_bench.epub");
}
BENCHMARK(BM_epub_job);

}  // namespace

BENCHMARK_MAIN();
