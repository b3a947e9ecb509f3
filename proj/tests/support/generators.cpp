// generators.cpp - random program generators shared by property tests and acceptance
#include "generators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "semtex/engine.hpp"
#include "semtex/xml.hpp"
#include "test_support.hpp"

namespace semtex::test {

std::string scoping_scenario_failure(ScopingGenerator& gen, bool allow_global) {
    gen.reset();
    Engine e(standard());
    e.set_source(kScopingPrelude);
    e.run();
    const auto before = e.state().snapshot();
    const std::string prog = gen.group(0, allow_global);
    e.set_source(prog + "\n\\message{\\ma\\mb\\mc\\md}");
    e.run();
    const auto after = e.state().snapshot();
    const auto& finals = gen.finals();
    auto final_of = [&](const std::string& key) -> std::optional<int> {
        const auto it = finals.find(key);
        return it != finals.end() ? it->second : std::nullopt;
    };
    auto fail = [&](const std::string& what) { return what + " after: " + prog; };

    if (e.state().depth() != 1) return fail("group depth");
    std::string expected_macros;
    for (char c : std::string("abcd")) {
        const auto v = final_of(std::string("\\m") + c);
        expected_macros += v ? std::to_string(*v) : std::string(1, c);
    }
    if (e.messages().size() != 1 || e.messages()[0] != expected_macros) return fail("macros");
    for (int i = 0; i < 4; ++i) {
        const std::string k = std::to_string(i);
        const auto c = final_of("count" + k);
        if (after.counts[i] != (c ? *c : before.counts[i])) return fail("\\count" + k);
        const auto d = final_of("dimen" + k);
        if (after.dimens[i] != (d ? *d : before.dimens[i])) return fail("\\dimen" + k);
    }
    for (char ch : std::string("!?@*")) {
        const auto v = final_of(std::string("cat") + ch);
        const auto code = static_cast<char32_t>(ch);
        const Catcode expected = v ? static_cast<Catcode>(*v) : before.catcodes.get(code);
        if (after.catcodes.get(code) != expected) return fail(std::string("catcode of ") + ch);
    }
    if (!allow_global && !(after == before)) return fail("snapshot");
    return {};
}

PolylinePicture random_polyline_picture(std::mt19937& rng) {
    // Multiples of 1/8 pt are exact in sp, in binary and in 3 decimals;
    // widths are quarter points so the half-width inflation is too.
    auto coord = [&] { return static_cast<long>(rng() % 1601) - 800; };
    const long width_quarters = 1 + static_cast<long>(rng() % 24);
    std::string src =
        "\\makeatletter\n\\begin{gpicture}\\glinewidth{" + std::to_string(width_quarters * 16384) + "sp}";
    double lo_x = 1e9, lo_y = 1e9, hi_x = -1e9, hi_y = -1e9;
    const int lines = 1 + static_cast<int>(rng() % 3);
    for (int l = 0; l < lines; ++l) {
        const int pts = 2 + static_cast<int>(rng() % 6);
        for (int i = 0; i < pts; ++i) {
            const long x = coord(), y = coord();
            src += std::string(i == 0 ? "\\gdv@moveto" : "\\gdv@lineto") + "{" + std::to_string(x * 8192) + "sp}{" +
                   std::to_string(y * 8192) + "sp}";
            lo_x = std::min(lo_x, x / 8.0);
            hi_x = std::max(hi_x, x / 8.0);
            lo_y = std::min(lo_y, y / 8.0);
            hi_y = std::max(hi_y, y / 8.0);
        }
        src += "\\gdv@stroke ";
    }
    src += "\\end{gpicture}";
    const double half = width_quarters / 8.0;
    return {src, {lo_x - half, lo_y - half, hi_x - lo_x + 2 * half, hi_y - lo_y + 2 * half}};
}

namespace {

const Element* find_svg(const DocNode& n) {
    if (n.is_graphics()) return &n.graphics().svg;
    if (!n.is_element()) return nullptr;
    for (const DocNode& c : n.element().children) {
        if (const Element* e = find_svg(c)) return e;
    }
    return nullptr;
}

}  // namespace

std::string polyline_picture_failure(const PolylinePicture& pic) {
    const Document d = convert_std(pic.source);
    const Element* svg = find_svg(d.root);
    if (!svg) return "no svg for " + pic.source;
    const auto vb_text = svg->attr("viewBox");
    if (!vb_text) return "no viewBox for " + pic.source;
    std::istringstream in{*vb_text};
    std::array<double, 4> vb{};
    for (double& x : vb) in >> x;
    if (vb != pic.viewbox) return "viewBox " + std::string(*vb_text) + " for " + pic.source;
    const std::string wf = well_formedness_error(xml::to_string(DocNode(*svg)));
    if (!wf.empty()) return wf;
    return {};
}

gfx::Affine compose(const gfx::Affine& m, const gfx::Affine& n) {
    return {m.a * n.a + m.c * n.b, m.b * n.a + m.d * n.b, m.a * n.c + m.c * n.d,
            m.b * n.c + m.d * n.d, m.a * n.e + m.c * n.f + m.e, m.b * n.e + m.d * n.f + m.f};
}

gfx::Affine random_affine(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-3, 3);
    gfx::Affine m;
    do {
        m = {u(rng), u(rng), u(rng), u(rng), 10 * u(rng), 10 * u(rng)};
    } while (std::abs(m.determinant()) < 0.1);
    return m;
}

double transform_composition_max_error(std::mt19937& rng, int trials) {
    using namespace gfx;
    std::uniform_real_distribution<double> u(-100, 100);
    double worst = 0;
    for (int n = 0; n < trials; ++n) {
        const Affine t1 = random_affine(rng), t2 = random_affine(rng);
        const Point p{u(rng), u(rng)};
        const Point want = compose(t2, t1).apply(p);
        const Point via_then = t1.then(t2).apply(p);
        GraphicsState gs;
        gs.concat(t2);
        gs.concat(t1);
        gs.path_extend(PathOp::move_to(p));
        const Point rec = gs.path().back().pts[0];
        worst = std::max({worst, std::abs(via_then.x - want.x), std::abs(via_then.y - want.y),
                          std::abs(rec.x - want.x), std::abs(rec.y - want.y)});
    }
    return worst;
}

}  // namespace semtex::test
