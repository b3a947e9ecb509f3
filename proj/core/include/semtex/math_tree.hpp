// math_tree.hpp - presentation MathML trees
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace semtex::math {

enum class Kind : std::uint8_t { Mi, Mn, Mo, Mrow, Msup, Msub, Msubsup, Mfrac, Msqrt };

std::string_view kind_name(Kind kind);

// Arity is fixed by construction: the only way to build a node is through
// the named factories.
class MathTree {
public:
    static MathTree mi(std::string text);
    static MathTree mn(std::string text);
    static MathTree mo(std::string text, bool stretchy = false);
    static MathTree mrow(std::vector<MathTree> children = {});
    static MathTree msup(MathTree base, MathTree script);
    static MathTree msub(MathTree base, MathTree script);
    static MathTree msubsup(MathTree base, MathTree sub, MathTree sup);
    static MathTree mfrac(MathTree num, MathTree den);
    static MathTree msqrt(MathTree child);

    Kind kind() const { return kind_; }
    bool is_leaf() const { return kind_ == Kind::Mi || kind_ == Kind::Mn || kind_ == Kind::Mo; }
    const std::string& text() const { return text_; }
    bool stretchy() const { return stretchy_; }
    const std::vector<MathTree>& children() const { return children_; }

    friend bool operator==(const MathTree& a, const MathTree& b);

private:
    MathTree(Kind kind, std::string text, std::vector<MathTree> children)
        : kind_(kind), text_(std::move(text)), children_(std::move(children)) {}

    Kind kind_;
    bool stretchy_ = false;
    std::string text_;
    std::vector<MathTree> children_;
};

// Compact s-expression, e.g. mrow(mi x, mo +, mn 1).
std::string to_sexpr(const MathTree& tree);

// Leaves in document order.
void collect_leaves(const MathTree& tree, std::vector<const MathTree*>& out);

}  // namespace semtex::math
