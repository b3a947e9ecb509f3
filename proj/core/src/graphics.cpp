#include "semtex/graphics.hpp"

#include <cmath>
#include <cstdlib>

#include "semtex/utf8.hpp"
#include "semtex/xml.hpp"

namespace semtex::gfx {

Affine Affine::then(const Affine& n) const {
    // n(this(p)): compose the linear parts and push the translation through n
    return {n.a * a + n.c * b, n.b * a + n.d * b, n.a * c + n.c * d,
            n.b * c + n.d * d, n.a * e + n.c * f + n.e, n.b * e + n.d * f + n.f};
}

BBox BBox::of(Point lo, Point hi) {
    BBox b;
    b.extend(lo);
    b.extend(hi);
    return b;
}

void BBox::extend(Point p) {
    if (empty_) {
        empty_ = false;
        min_ = max_ = p;
        return;
    }
    min_.x = std::min(min_.x, p.x);
    min_.y = std::min(min_.y, p.y);
    max_.x = std::max(max_.x, p.x);
    max_.y = std::max(max_.y, p.y);
}

void BBox::extend(const BBox& other) {
    if (other.empty_) return;
    extend(other.min_);
    extend(other.max_);
}

BBox BBox::inflated(double by) const {
    if (empty_) return *this;
    BBox b = *this;
    b.min_.x -= by;
    b.min_.y -= by;
    b.max_.x += by;
    b.max_.y += by;
    return b;
}

Dimension FontModel::ex_dimension() const {
    return Dimension::from_sp(static_cast<std::int32_t>(std::llround(size.sp() * 0.45)));
}

namespace {

std::size_t count_chars(const DocNode& node) {
    if (node.is_text()) return utf8::length(node.text());
    if (node.is_math()) {
        std::vector<const math::MathTree*> leaves;
        math::collect_leaves(node.math().content, leaves);
        std::size_t n = 0;
        for (const auto* leaf : leaves) n += utf8::length(leaf->text());
        return n;
    }
    if (node.is_element()) {
        std::size_t n = 0;
        for (const auto& c : node.element().children) n += count_chars(c);
        return n;
    }
    return 0;
}

}  // namespace

BBox estimate_size(std::span<const DocNode> nodes, const FontModel& font) {
    std::size_t chars = 0;
    for (const auto& n : nodes) chars += count_chars(n);
    if (chars == 0) return BBox::empty();
    const double width = static_cast<double>(chars) * font.advance();
    return BBox::of({0, -font.descent()}, {width, font.ascent()});
}

std::string format_number(double v) {
    long long milli = std::llround(v * 1000.0);
    std::string out;
    if (milli < 0) {
        out += '-';
        milli = -milli;
    }
    out += std::to_string(milli / 1000);
    long long frac = milli % 1000;
    if (frac != 0) {
        std::string digits = std::to_string(frac);
        digits.insert(0, 3 - digits.size(), '0');
        while (digits.back() == '0') digits.pop_back();
        out += '.';
        out += digits;
    }
    return out;
}

namespace {

std::string rgb(const Rgb& c) {
    return "rgb(" + std::to_string(c.r) + "," + std::to_string(c.g) + "," + std::to_string(c.b) + ")";
}

void append_point(std::string& d, Point p) {
    d += ' ';
    d += format_number(p.x);
    d += ' ';
    d += format_number(p.y);
}

}  // namespace

GraphicsNode emit_picture(std::span<const Element> shapes, std::span<const PlacedText> texts, const BBox& box,
                          std::vector<std::string>* warnings) {
    Element svg("svg", {{"xmlns", std::string(xml::kSvgNamespace)}});
    if (box.is_empty() || (shapes.empty() && texts.empty())) {
        if (warnings) warnings->push_back("EmptyPicture: picture has no content");
        svg.attrs.push_back({"viewBox", "0 0 0 0"});
        return GraphicsNode{std::move(svg)};
    }
    svg.attrs.push_back({"version", "1.1"});
    svg.attrs.push_back({"width", format_number(box.width()) + "pt"});
    svg.attrs.push_back({"height", format_number(box.height()) + "pt"});
    svg.attrs.push_back({"viewBox", format_number(box.min_x()) + " " + format_number(box.min_y()) + " " +
                                         format_number(box.width()) + " " + format_number(box.height())});
    const double flip = box.max_y() + box.min_y();
    if (!shapes.empty()) {
        Element g("g", {{"transform", "matrix(1,0,0,-1,0," + format_number(flip) + ")"}});
        for (const auto& s : shapes) g.children.emplace_back(s);
        svg.children.emplace_back(std::move(g));
    }
    for (const auto& t : texts) {
        if (t.box.is_empty()) continue;
        // foreignObject content is not flipped: place its top edge directly
        Element fo("foreignObject", {{"x", format_number(t.box.min_x())},
                                     {"y", format_number(flip - t.box.max_y())},
                                     {"width", format_number(t.box.width())},
                                     {"height", format_number(t.box.height())},
                                     {"requiredExtensions", "http://www.idpf.org/2007/ops"}});
        Element div("div", {{"xmlns", std::string(xml::kXhtmlNamespace)}}, t.content);
        fo.children.emplace_back(std::move(div));
        svg.children.emplace_back(std::move(fo));
    }
    return GraphicsNode{std::move(svg)};
}

void GraphicsState::concat(const Affine& m) {
    Affine next = m.then(transform_);
    if (std::abs(next.determinant()) <= 1e-9) {
        throw Error(ErrorCode::InvalidTransform, "transform is not invertible");
    }
    transform_ = next;
}

void GraphicsState::set_line_width(Dimension w) {
    if (w.sp() < 0) throw Error(ErrorCode::InvalidTransform, "negative line width");
    line_width_ = w;
}

void GraphicsState::path_extend(const PathOp& op) {
    PathOp rec = op;
    switch (op.kind) {
    case PathOp::Kind::MoveTo:
        rec.pts[0] = transform_.apply(op.pts[0]);
        current_ = subpath_start_ = rec.pts[0];
        path_bbox_.extend(rec.pts[0]);
        break;
    case PathOp::Kind::LineTo:
        if (!current_) throw Error(ErrorCode::NoCurrentPoint, "lineto without a current point");
        rec.pts[0] = transform_.apply(op.pts[0]);
        current_ = rec.pts[0];
        path_bbox_.extend(rec.pts[0]);
        break;
    case PathOp::Kind::CurveTo:
        if (!current_) throw Error(ErrorCode::NoCurrentPoint, "curveto without a current point");
        for (auto& p : rec.pts) {
            p = transform_.apply(p);
            path_bbox_.extend(p);
        }
        current_ = rec.pts[2];
        break;
    case PathOp::Kind::ClosePath:
        if (!current_) throw Error(ErrorCode::NoCurrentPoint, "closepath without a current point");
        current_ = subpath_start_;
        break;
    }
    path_.push_back(rec);
}

std::string GraphicsState::path_data() const {
    std::string d;
    for (const auto& op : path_) {
        if (!d.empty()) d += ' ';
        switch (op.kind) {
        case PathOp::Kind::MoveTo:
            d += 'M';
            append_point(d, op.pts[0]);
            break;
        case PathOp::Kind::LineTo:
            d += 'L';
            append_point(d, op.pts[0]);
            break;
        case PathOp::Kind::CurveTo:
            d += 'C';
            for (const auto& p : op.pts) append_point(d, p);
            break;
        case PathOp::Kind::ClosePath:
            d += 'Z';
            break;
        }
    }
    return d;
}

void GraphicsState::clear_path() {
    path_.clear();
    current_.reset();
    subpath_start_.reset();
    path_bbox_ = BBox::empty();
}

Element GraphicsState::stroke() {
    if (path_.empty()) throw Error(ErrorCode::EmptyPath, "stroke with an empty path");
    Element e("path", {{"d", path_data()},
                       {"fill", "none"},
                       {"stroke", rgb(stroke_color_)},
                       {"stroke-width", format_number(line_width_.pt())}});
    bbox_.extend(path_bbox_.inflated(line_width_.pt() / 2));
    shapes_.push_back(e);
    clear_path();
    return e;
}

Element GraphicsState::fill() {
    if (path_.empty()) throw Error(ErrorCode::EmptyPath, "fill with an empty path");
    Element e("path", {{"d", path_data()}, {"fill", rgb(fill_color_)}, {"stroke", "none"}});
    bbox_.extend(path_bbox_);
    shapes_.push_back(e);
    clear_path();
    return e;
}

void GraphicsState::add_text(Point user, std::vector<DocNode> content, const FontModel& font) {
    PlacedText t;
    t.anchor = transform_.apply(user);
    BBox size = estimate_size(content, font);
    if (!size.is_empty()) {
        t.box = BBox::of({t.anchor.x + size.min_x(), t.anchor.y + size.min_y()},
                         {t.anchor.x + size.max_x(), t.anchor.y + size.max_y()});
        bbox_.extend(t.box);
    }
    t.content = std::move(content);
    texts_.push_back(std::move(t));
}

GraphicsNode GraphicsState::finish(std::vector<std::string>* warnings) const {
    if (has_pending_path() && warnings) warnings->push_back("unpainted path discarded at end of picture");
    return emit_picture(shapes_, texts_, bbox_, warnings);
}

}  // namespace semtex::gfx
