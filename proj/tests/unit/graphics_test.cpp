#include <doctest.h>

#include "semtex/error.hpp"
#include "semtex/graphics.hpp"
#include "semtex/math_tree.hpp"
#include "semtex/xml.hpp"
#include "test_support.hpp"

using namespace semtex;
using namespace semtex::gfx;

namespace {

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error");
    return ErrorCode::InvalidArgument;
}

std::string svg_of(const GraphicsNode& g) { return xml::to_string(DocNode(g.svg)); }

}  // namespace

TEST_CASE("path_extend records transformed points and tracks the bbox") {
    GraphicsState gs;
    gs.path_extend(PathOp::move_to({0, 0}));
    gs.path_extend(PathOp::line_to({10, 0}));
    CHECK(gs.path() == std::vector<PathOp>{PathOp::move_to({0, 0}), PathOp::line_to({10, 0})});
    CHECK(gs.path_bbox() == BBox::of({0, 0}, {10, 0}));

    GraphicsState scaled;
    scaled.concat(Affine::scale(2, 2));
    scaled.path_extend(PathOp::move_to({0, 0}));
    scaled.path_extend(PathOp::line_to({10, 0}));
    CHECK(scaled.path().back() == PathOp::line_to({20, 0}));

    GraphicsState empty;
    CHECK(code_of([&] { empty.path_extend(PathOp::line_to({1, 1})); }) == ErrorCode::NoCurrentPoint);
    CHECK(code_of([&] { empty.path_extend(PathOp::close()); }) == ErrorCode::NoCurrentPoint);
}

TEST_CASE("curves are bounded by their control points") {
    GraphicsState gs;
    gs.path_extend(PathOp::move_to({0, 0}));
    gs.path_extend(PathOp::curve_to({0, 10}, {10, 10}, {10, 0}));
    CHECK(gs.path_bbox() == BBox::of({0, 0}, {10, 10}));
}

TEST_CASE("stroke and fill") {
    GraphicsState gs;
    gs.set_line_width(Dimension::from_pt(1));
    gs.path_extend(PathOp::move_to({0, 0}));
    gs.path_extend(PathOp::line_to({10, 0}));
    CHECK(xml::to_string(DocNode(gs.stroke())) ==
          R"x(<path d="M 0 0 L 10 0" fill="none" stroke="rgb(0,0,0)" stroke-width="1"/>)x");
    CHECK(gs.path().empty());
    CHECK(code_of([&] { gs.stroke(); }) == ErrorCode::EmptyPath);

    GraphicsState tri;
    tri.set_fill_color({255, 0, 0});
    tri.path_extend(PathOp::move_to({0, 0}));
    tri.path_extend(PathOp::line_to({10, 0}));
    tri.path_extend(PathOp::line_to({0, 10}));
    tri.path_extend(PathOp::close());
    const Element f = tri.fill();
    CHECK(*f.attr("fill") == "rgb(255,0,0)");
    CHECK(*f.attr("stroke") == "none");
    CHECK(*f.attr("d") == "M 0 0 L 10 0 L 0 10 Z");
    CHECK(code_of([&] { tri.fill(); }) == ErrorCode::EmptyPath);
}

TEST_CASE("coordinates are rounded to three decimals") {
    CHECK(format_number(1.23456) == "1.235");
    CHECK(format_number(2.0) == "2");
    CHECK(format_number(-0.0001) == "0");
    CHECK(format_number(-1.5) == "-1.5");
}

TEST_CASE("estimate_size") {
    const FontModel font;
    const std::vector<DocNode> abc{DocNode::text("abc")};
    const BBox b = estimate_size(abc, font);
    CHECK(b.width() == 15);
    CHECK(b.height() == 10);
    CHECK(estimate_size(std::vector<DocNode>{}, font).is_empty());
    CHECK(estimate_size(std::vector<DocNode>{DocNode::text("")}, font).is_empty());

    MathNode m;
    m.content = math::MathTree::msup(math::MathTree::mi("x"), math::MathTree::mn("2"));
    const std::vector<DocNode> formula{DocNode(m)};
    CHECK(estimate_size(formula, font).width() == 10);

    // Exhaustive leaf walk: width counts every character of every leaf.
    m.content = math::MathTree::mrow({math::MathTree::mi("sin"), math::MathTree::mn("42"),
                                      math::MathTree::mfrac(math::MathTree::mi("a"), math::MathTree::mo("+"))});
    std::vector<const math::MathTree*> leaves;
    math::collect_leaves(m.content, leaves);
    std::size_t chars = 0;
    for (auto* l : leaves) chars += l->text().size();
    CHECK(estimate_size(std::vector<DocNode>{DocNode(m)}, font).width() == static_cast<double>(chars) * 5);
}

TEST_CASE("emit_picture") {
    GraphicsState gs;
    gs.set_line_width(Dimension::from_pt(1));
    gs.path_extend(PathOp::move_to({0, 0}));
    gs.path_extend(PathOp::line_to({10, 0}));
    gs.stroke();
    const Element svg = gs.finish().svg;
    CHECK(*svg.attr("viewBox") == "-0.5 -0.5 11 1");
    CHECK(*svg.attr("xmlns") == xml::kSvgNamespace);
    REQUIRE(svg.children.size() == 1);
    CHECK(*svg.children[0].element().attr("transform") == "matrix(1,0,0,-1,0,0)");

    std::vector<std::string> warnings;
    CHECK(svg_of(GraphicsState{}.finish(&warnings)) == R"(<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 0 0"/>)");
    CHECK(warnings.size() == 1);

    GraphicsState text;
    text.add_text({0, 0}, {DocNode::text("x")}, FontModel{});
    const Element t = text.finish().svg;
    REQUIRE(t.children.size() == 1);
    const Element& fo = t.children[0].element();
    CHECK(fo.name == "foreignObject");
    CHECK(*fo.attr("width") == "5");
    CHECK(*fo.attr("height") == "10");
    CHECK(test::well_formedness_error(svg_of(text.finish())).empty());
}

TEST_CASE("graphics through the standard bindings") {
    const Document d = test::convert_std(
        "\\begin{gpicture}\\glinewidth{1pt}\\gline{0pt}{0pt}{10pt}{0pt}\\gtext{0pt}{0pt}{$x^2$}\\end{gpicture}");
    const std::string s = xml::to_string(d.root);
    CHECK(s.find("<picture><svg") != std::string::npos);
    CHECK(s.find("<msup>") != std::string::npos);
    CHECK(test::well_formedness_error(s).empty());

    const Document bad = test::convert_std("\\makeatletter\n\\begin{gpicture}\\gdv@stroke\\end{gpicture}");
    CHECK(xml::to_string(bad.root).find("undefined") == std::string::npos);
    CHECK(has_warnings(bad.diagnostics));
}
