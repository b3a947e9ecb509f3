#include "semtex/profiler.hpp"

#include <algorithm>
#include <cstdio>

namespace semtex {

namespace {

std::chrono::nanoseconds steady_now() {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
        std::chrono::steady_clock::now().time_since_epoch());
}

}  // namespace

Profiler::Profiler(bool enabled, Clock clock) : enabled_(enabled), clock_(clock ? std::move(clock) : steady_now) {}

Profiler::FrameId Profiler::enter(std::string_view name) {
    if (!enabled_) return 0;
    auto it = index_.find(std::string(name));
    std::size_t rec;
    if (it == index_.end()) {
        rec = records_.size();
        records_.push_back({std::string(name), 0, {}, {}});
        active_.push_back(0);
        index_.emplace(std::string(name), rec);
    } else {
        rec = it->second;
    }
    ++records_[rec].calls;
    ++active_[rec];
    const FrameId id = next_id_++;
    stack_.push_back({id, rec, clock_()});
    return id;
}

void Profiler::close_top(std::chrono::nanoseconds now) {
    Frame f = stack_.back();
    stack_.pop_back();
    const auto elapsed = now - f.start;
    ProfileRecord& r = records_[f.record];
    r.exclusive += elapsed - f.children;
    // recursive activations are counted once in inclusive time
    if (--active_[f.record] == 0) r.inclusive += elapsed;
    if (!stack_.empty()) stack_.back().children += elapsed;
}

void Profiler::leave(FrameId id) {
    if (!enabled_ || stack_.empty()) return;
    if (stack_.back().id != id) {
        for (auto& f : stack_) {
            if (f.id == id) f.pending = true;
        }
        return;
    }
    const auto now = clock_();
    close_top(now);
    while (!stack_.empty() && stack_.back().pending) close_top(now);
}

void Profiler::finish() {
    if (!enabled_) return;
    const auto now = clock_();
    while (!stack_.empty()) close_top(now);
}

std::vector<ProfileRecord> Profiler::report() const {
    if (!enabled_) throw Error(ErrorCode::ProfilerDisabled, "profiling was not enabled for this conversion");
    std::vector<ProfileRecord> out = records_;
    std::sort(out.begin(), out.end(), [](const ProfileRecord& a, const ProfileRecord& b) {
        if (a.exclusive != b.exclusive) return a.exclusive > b.exclusive;
        return a.name < b.name;
    });
    return out;
}

std::string profile_tsv(const std::vector<ProfileRecord>& records) {
    std::string out = "name\tcalls\tinclusive-ms\texclusive-ms\n";
    char buf[64];
    for (const auto& r : records) {
        out += r.name;
        out += '\t';
        out += std::to_string(r.calls);
        std::snprintf(buf, sizeof buf, "\t%.3f\t%.3f\n", r.inclusive.count() / 1e6, r.exclusive.count() / 1e6);
        out += buf;
    }
    return out;
}

}  // namespace semtex
