#include "semtex/engine.hpp"

#include <algorithm>

namespace semtex {

namespace {

std::string_view group_name(GroupKind k) {
    switch (k) {
    case GroupKind::Bottom: return "bottom level";
    case GroupKind::Simple: return "simple group";
    case GroupKind::SemiSimple: return "semi simple group";
    case GroupKind::Environment: return "environment";
    }
    return "?";
}

}  // namespace

EngineState::EngineState(std::shared_ptr<const Registry> registry)
    : registry_(std::move(registry)), catcodes_(registry_->catcodes()) {
    count_levels_.fill(1);
    dimen_levels_.fill(1);
    frames_.push_back({GroupKind::Bottom, {}, {}, {}});
}

const BindingPtr& EngineState::lookup(const std::string& key) const {
    static const BindingPtr kUndefined;
    auto it = overlay_.find(key);
    if (it != overlay_.end()) return it->second.binding;
    if (const BindingPtr* p = registry_->find(key)) return *p;
    return kUndefined;
}

// TeX's eq_define: a local assignment saves the old value once per group
// level; a global one bypasses the save stack and marks the entry level one,
// which later restores leave alone.
void EngineState::set_binding(const std::string& key, BindingPtr binding, bool global) {
    auto it = overlay_.find(key);
    if (global) {
        overlay_[key] = {std::move(binding), 1};
        return;
    }
    const int lvl = level();
    const int cur = it == overlay_.end() ? 1 : it->second.level;
    if (lvl > 1 && cur != lvl) {
        Saved s{Saved::What::Binding, key};
        if (it != overlay_.end()) s.binding = it->second;
        frames_.back().saved.push_back(std::move(s));
    }
    overlay_[key] = {std::move(binding), lvl};
}

void EngineState::set_count(int index, std::int32_t value, bool global) {
    const auto i = static_cast<std::size_t>(index);
    if (global) {
        counts_.at(i) = value;
        count_levels_[i] = 1;
        return;
    }
    const int lvl = level();
    if (lvl > 1 && count_levels_.at(i) != lvl) {
        Saved s{Saved::What::Count};
        s.index = index;
        s.value = counts_[i];
        s.level = count_levels_[i];
        frames_.back().saved.push_back(std::move(s));
    }
    counts_.at(i) = value;
    count_levels_[i] = lvl;
}

void EngineState::set_dimen(int index, Dimension value, bool global) {
    const auto i = static_cast<std::size_t>(index);
    if (global) {
        dimens_.at(i) = value;
        dimen_levels_[i] = 1;
        return;
    }
    const int lvl = level();
    if (lvl > 1 && dimen_levels_.at(i) != lvl) {
        Saved s{Saved::What::Dimen};
        s.index = index;
        s.value = dimens_[i].sp();
        s.level = dimen_levels_[i];
        frames_.back().saved.push_back(std::move(s));
    }
    dimens_.at(i) = value;
    dimen_levels_[i] = lvl;
}

void EngineState::set_catcode(char32_t ch, Catcode cat, bool global) {
    auto it = catcode_levels_.find(ch);
    const int cur = it == catcode_levels_.end() ? 1 : it->second;
    if (global) {
        catcodes_.set(ch, cat);
        catcode_levels_[ch] = 1;
        return;
    }
    const int lvl = level();
    if (lvl > 1 && cur != lvl) {
        Saved s{Saved::What::Catcode};
        s.ch = ch;
        s.value = static_cast<std::int32_t>(catcodes_.get(ch));
        s.level = cur;
        frames_.back().saved.push_back(std::move(s));
    }
    catcodes_.set(ch, cat);
    catcode_levels_[ch] = lvl;
}

void EngineState::begin_group(GroupKind kind, std::string env, SourcePos pos) {
    frames_.push_back({kind, std::move(env), pos, {}});
}

void EngineState::restore(const Saved& s) {
    switch (s.what) {
    case Saved::What::Binding: {
        auto it = overlay_.find(s.key);
        if (it != overlay_.end() && it->second.level == 1) return;
        if (s.binding) {
            overlay_[s.key] = *s.binding;
        } else if (it != overlay_.end()) {
            overlay_.erase(it);
        }
        return;
    }
    case Saved::What::Count: {
        const auto i = static_cast<std::size_t>(s.index);
        if (count_levels_[i] == 1) return;
        counts_[i] = s.value;
        count_levels_[i] = s.level;
        return;
    }
    case Saved::What::Dimen: {
        const auto i = static_cast<std::size_t>(s.index);
        if (dimen_levels_[i] == 1) return;
        dimens_[i] = Dimension::from_sp(s.value);
        dimen_levels_[i] = s.level;
        return;
    }
    case Saved::What::Catcode: {
        auto it = catcode_levels_.find(s.ch);
        if (it == catcode_levels_.end() || it->second == 1) return;
        catcodes_.set(s.ch, static_cast<Catcode>(s.value));
        it->second = s.level;
        return;
    }
    }
}

void EngineState::end_group(GroupKind kind, std::string_view env) {
    const Frame& top = frames_.back();
    if (top.kind == GroupKind::Bottom) {
        throw Error(ErrorCode::UnbalancedGroup, std::string("too many closings: no ") +
                                                    std::string(group_name(kind)) + " is open");
    }
    if (top.kind != kind) {
        throw Error(ErrorCode::UnbalancedGroup, std::string(group_name(top.kind)) +
                                                    (top.env.empty() ? "" : " '" + top.env + "'") +
                                                    " ended by a closing for a " + std::string(group_name(kind)),
                    top.opened_at);
    }
    if (kind == GroupKind::Environment && top.env != env) {
        throw Error(ErrorCode::UnbalancedGroup,
                    "\\begin{" + top.env + "} ended by \\end{" + std::string(env) + "}", top.opened_at);
    }
    Frame frame = std::move(frames_.back());
    frames_.pop_back();
    for (auto it = frame.saved.rbegin(); it != frame.saved.rend(); ++it) restore(*it);
}

EngineState::Snapshot EngineState::snapshot() const {
    Snapshot s;
    for (const auto& [key, entry] : overlay_) {
        const BindingPtr* base = registry_->find(key);
        const Binding* mine = entry.binding.get();
        if (base ? base->get() == mine : mine == nullptr) continue;
        s.bindings.emplace(key, mine);
    }
    s.counts = counts_;
    for (std::size_t i = 0; i < dimens_.size(); ++i) s.dimens[i] = dimens_[i].sp();
    s.catcodes = catcodes_;
    return s;
}

std::vector<std::pair<std::string, BindingPtr>> EngineState::changed_bindings() const {
    std::vector<std::pair<std::string, BindingPtr>> out;
    for (const auto& [key, entry] : overlay_) {
        const BindingPtr* base = registry_->find(key);
        if (base ? *base == entry.binding : entry.binding == nullptr) continue;
        out.emplace_back(key, entry.binding);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

}  // namespace semtex
