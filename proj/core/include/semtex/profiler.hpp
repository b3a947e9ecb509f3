// profiler.hpp - per-binding inclusive/exclusive time via a shadow stack
//
// A frame is pushed at each binding dispatch and popped when the dispatch
// completes (for macros: when the expansion has been read to its end). Time
// spent in a frame minus the time of frames opened above it is that
// binding's exclusive time. A frame that completes while frames above it are
// still open is closed together with the last of them.
#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "semtex/doc.hpp"

namespace semtex {

class Profiler {
public:
    using Clock = std::function<std::chrono::nanoseconds()>;
    using FrameId = std::uint64_t;

    // Name of the record that receives time spent outside any binding.
    static constexpr std::string_view kTopLevel = "(toplevel)";

    explicit Profiler(bool enabled, Clock clock = {});

    bool enabled() const { return enabled_; }

    FrameId enter(std::string_view name);
    void leave(FrameId id);
    // Closes every open frame.
    void finish();

    // One record per name, sorted by exclusive time descending (ties by
    // name). Throws ProfilerDisabled when profiling is off.
    std::vector<ProfileRecord> report() const;

private:
    struct Frame {
        FrameId id;
        std::size_t record;
        std::chrono::nanoseconds start;
        std::chrono::nanoseconds children{0};
        bool pending = false;
    };

    void close_top(std::chrono::nanoseconds now);

    bool enabled_;
    Clock clock_;
    FrameId next_id_ = 1;
    std::vector<Frame> stack_;
    std::vector<ProfileRecord> records_;
    std::vector<int> active_;
    std::unordered_map<std::string, std::size_t> index_;
};

// TSV: name, calls, inclusive-ms, exclusive-ms; with a header line.
std::string profile_tsv(const std::vector<ProfileRecord>& records);

}  // namespace semtex
