// graphics.hpp - the SVG driver layer behind the \gdv@... primitives
//
// Coordinates are recorded in pt after the current transform is applied.
// TeX's y axis points up; the emitted <svg> flips it once at the top level.
// One SVG user unit is one pt.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semtex/dimension.hpp"
#include "semtex/doc.hpp"

namespace semtex::gfx {

struct Point {
    double x = 0;
    double y = 0;

    friend bool operator==(const Point&, const Point&) = default;
};

// x' = a x + c y + e,  y' = b x + d y + f
struct Affine {
    double a = 1, b = 0, c = 0, d = 1, e = 0, f = 0;

    Point apply(Point p) const { return {a * p.x + c * p.y + e, b * p.x + d * p.y + f}; }
    double determinant() const { return a * d - b * c; }
    // The map p -> next(this(p)).
    Affine then(const Affine& next) const;

    static Affine scale(double sx, double sy) { return {sx, 0, 0, sy, 0, 0}; }
    static Affine translate(double tx, double ty) { return {1, 0, 0, 1, tx, ty}; }
};

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct PathOp {
    enum class Kind { MoveTo, LineTo, CurveTo, ClosePath };
    Kind kind = Kind::MoveTo;
    // MoveTo/LineTo use pts[0]; CurveTo uses c1, c2, end.
    std::array<Point, 3> pts{};

    static PathOp move_to(Point p) { return {Kind::MoveTo, {p}}; }
    static PathOp line_to(Point p) { return {Kind::LineTo, {p}}; }
    static PathOp curve_to(Point c1, Point c2, Point end) { return {Kind::CurveTo, {c1, c2, end}}; }
    static PathOp close() { return {Kind::ClosePath, {}}; }

    friend bool operator==(const PathOp&, const PathOp&) = default;
};

// Axis-aligned box in pt. The empty box is a distinct state, never
// represented by inverted bounds.
class BBox {
public:
    static BBox empty() { return BBox(); }
    static BBox of(Point lo, Point hi);

    bool is_empty() const { return empty_; }
    double min_x() const { return min_.x; }
    double min_y() const { return min_.y; }
    double max_x() const { return max_.x; }
    double max_y() const { return max_.y; }
    double width() const { return empty_ ? 0 : max_.x - min_.x; }
    double height() const { return empty_ ? 0 : max_.y - min_.y; }

    void extend(Point p);
    void extend(const BBox& other);
    BBox inflated(double by) const;

    friend bool operator==(const BBox&, const BBox&) = default;

private:
    bool empty_ = true;
    Point min_{};
    Point max_{};
};

struct FontModel {
    Dimension size = Dimension::from_pt(10);

    double em() const { return size.pt(); }
    double ex() const { return 0.45 * em(); }
    double advance() const { return 0.5 * em(); }
    double ascent() const { return 0.7 * em(); }
    double descent() const { return 0.3 * em(); }
    Dimension em_dimension() const { return size; }
    // 0.45 em, rounded to sp
    Dimension ex_dimension() const;
};

// width = characters x 0.5 em (Math counts its leaf characters),
// height = ascent + descent; box runs from (0, -descent) to (width, ascent).
BBox estimate_size(std::span<const DocNode> nodes, const FontModel& font);

struct PlacedText {
    Point anchor;  // baseline start, pt, after transform
    std::vector<DocNode> content;
    BBox box;      // anchor-relative extent from estimate_size, translated
};

// Three decimals, trailing zeros dropped, no negative zero.
std::string format_number(double v);

// Assembles the picture: viewBox from `box`, paths under a y-flipping
// group, text in foreignObjects sized by estimate_size.
GraphicsNode emit_picture(std::span<const Element> shapes, std::span<const PlacedText> texts, const BBox& box,
                          std::vector<std::string>* warnings = nullptr);

class GraphicsState {
public:
    GraphicsState() = default;

    const Affine& transform() const { return transform_; }
    // Subsequent coordinates pass through `m` first, then the current transform.
    void concat(const Affine& m);

    Dimension line_width() const { return line_width_; }
    void set_line_width(Dimension w);
    void set_stroke_color(Rgb c) { stroke_color_ = c; }
    void set_fill_color(Rgb c) { fill_color_ = c; }
    void set_color(Rgb c) { stroke_color_ = fill_color_ = c; }

    // Coordinates in user space (pt); throws NoCurrentPoint for LineTo,
    // CurveTo and ClosePath without a current point.
    void path_extend(const PathOp& op);
    const std::vector<PathOp>& path() const { return path_; }
    const std::optional<Point>& current_point() const { return current_; }
    const BBox& path_bbox() const { return path_bbox_; }

    // Paint and clear the current path; throw EmptyPath when there is none.
    Element stroke();
    Element fill();

    void add_text(Point user, std::vector<DocNode> content, const FontModel& font);

    const BBox& bbox() const { return bbox_; }
    const std::vector<Element>& shapes() const { return shapes_; }
    const std::vector<PlacedText>& texts() const { return texts_; }
    // A path left unpainted when the picture ends is dropped.
    bool has_pending_path() const { return !path_.empty(); }

    GraphicsNode finish(std::vector<std::string>* warnings = nullptr) const;

private:
    std::string path_data() const;
    void clear_path();

    Affine transform_;
    Dimension line_width_ = Dimension::from_sp(26214);  // 0.4pt
    Rgb stroke_color_{};
    Rgb fill_color_{};
    std::vector<PathOp> path_;
    std::optional<Point> current_;
    std::optional<Point> subpath_start_;
    BBox path_bbox_;
    BBox bbox_;
    std::vector<Element> shapes_;
    std::vector<PlacedText> texts_;
};

}  // namespace semtex::gfx
