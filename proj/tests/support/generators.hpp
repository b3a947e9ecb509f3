// generators.hpp - random program generators shared by property tests and acceptance
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>

#include "semtex/graphics.hpp"

namespace semtex::test {

// Random programs over a few registers, macros and catcodes. Groups nest
// up to four deep and use both {..} and \begingroup..\endgroup.
class ScopingGenerator {
public:
    explicit ScopingGenerator(std::uint32_t seed) : rng_(seed) {}

    // `allow_global` false produces only local assignments.
    std::string group(int depth, bool allow_global) {
        const bool braces = rng_() % 2;
        std::string s = braces ? "{" : "\\begingroup ";
        const int n = 1 + static_cast<int>(rng_() % 6);
        for (int i = 0; i < n; ++i) {
            if (depth < 4 && rng_() % 4 == 0) {
                s += group(depth + 1, allow_global);
            } else {
                s += assignment(allow_global && rng_() % 3 == 0);
            }
        }
        return s + (braces ? "}" : "\\endgroup ");
    }

    std::string assignment(bool global) {
        const std::string g = global ? "\\global" : "";
        const int v = static_cast<int>(rng_() % 1000);
        const std::string key = std::to_string(rng_() % 4);
        std::string s;
        switch (rng_() % 4) {
            case 0:
                s = g + "\\count" + key + "=" + std::to_string(v) + " ";
                finals_["count" + key] = global ? std::optional<int>(v) : finals_["count" + key];
                break;
            case 1:
                s = g + "\\dimen" + key + "=" + std::to_string(v) + "sp ";
                finals_["dimen" + key] = global ? std::optional<int>(v) : finals_["dimen" + key];
                break;
            case 2: {
                const std::string name = std::string("\\m") + static_cast<char>('a' + rng_() % 4);
                s = g + "\\def" + name + "{" + std::to_string(v) + "}";
                finals_[name] = global ? std::optional<int>(v) : finals_[name];
                break;
            }
            default: {
                const int cat = rng_() % 2 ? 11 : 12;
                const std::string ch = std::string(1, "!?@*"[rng_() % 4]);
                s = g + "\\catcode`\\" + ch + "=" + std::to_string(cat) + " ";
                finals_["cat" + ch] = global ? std::optional<int>(cat) : finals_["cat" + ch];
            }
        }
        return s;
    }

    // Key -> value of the last global assignment, if any.
    const std::map<std::string, std::optional<int>>& finals() const { return finals_; }
    void reset() { finals_.clear(); }

private:
    std::mt19937 rng_;
    std::map<std::string, std::optional<int>> finals_;
};

const char* const kPrelude =
    "\\count0=1 \\count1=2 \\count2=3 \\count3=4 \\dimen0=5sp \\dimen1=6sp \\dimen2=7sp \\dimen3=8sp "
    "\\def\\ma{a}\\def\\mb{b}\\def\\mc{c}\\def\\md{d}";

inline const char* const kScopingPrelude =
    "\\count0=1 \\count1=2 \\count2=3 \\count3=4 \\dimen0=5sp \\dimen1=6sp \\dimen2=7sp \\dimen3=8sp "
    "\\def\\ma{a}\\def\\mb{b}\\def\\mc{c}\\def\\md{d}";

// Runs one random group on top of the prelude and checks that the state
// afterwards holds exactly the prelude values overridden by the group's
// global assignments. Empty on success, otherwise a description naming the
// program.
std::string scoping_scenario_failure(ScopingGenerator& gen, bool allow_global);

// A random picture of 1-3 stroked polylines on a 1/8 pt grid with a line
// width in quarter points, plus its brute-force viewBox
// (min-x, min-y, width, height) in pt.
struct PolylinePicture {
    std::string source;
    std::array<double, 4> viewbox;
};
PolylinePicture random_polyline_picture(std::mt19937& rng);

// Empty when the picture's svg has exactly the expected viewBox and is
// well-formed.
std::string polyline_picture_failure(const PolylinePicture& pic);

// 3x3 product of affine maps in column form: the map p -> m(n(p)).
gfx::Affine compose(const gfx::Affine& m, const gfx::Affine& n);
// Entries in [-3, 3], translation in [-30, 30], |det| >= 0.1.
gfx::Affine random_affine(std::mt19937& rng);
// Largest coordinate difference, over `trials` random pairs and points,
// between T1.then(T2), the explicit product T2*T1 and a GraphicsState that
// concatenated T2 then T1.
double transform_composition_max_error(std::mt19937& rng, int trials);

}  // namespace semtex::test
