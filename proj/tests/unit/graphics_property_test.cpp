#include <doctest.h>

#include <cmath>
#include <random>

#include "semtex/graphics.hpp"
#include "generators.hpp"

using namespace semtex;
using namespace semtex::gfx;

using test::compose;
using test::random_affine;

TEST_CASE("property: picture viewBox equals the brute-force bbox plus stroke inflation") {
    std::mt19937 rng(31);
    for (int n = 0; n < 100; ++n) CHECK(test::polyline_picture_failure(test::random_polyline_picture(rng)) == "");
}

TEST_CASE("property: transform composition matches the matrix product") {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> u(-100, 100);
    for (int n = 0; n < 1000; ++n) {
        const Affine t1 = random_affine(rng), t2 = random_affine(rng);
        const Point p{u(rng), u(rng)};
        const Affine product = compose(t2, t1);  // T1 first, then T2

        const Point via_then = t1.then(t2).apply(p);
        const Point via_product = product.apply(p);
        CHECK(std::abs(via_then.x - via_product.x) < 1e-9);
        CHECK(std::abs(via_then.y - via_product.y) < 1e-9);

        // concat(T2) then concat(T1): coordinates go through T1, then T2.
        GraphicsState gs;
        gs.concat(t2);
        gs.concat(t1);
        gs.path_extend(PathOp::move_to(p));
        const Point rec = gs.path().back().pts[0];
        CHECK(std::abs(rec.x - via_product.x) < 1e-9);
        CHECK(std::abs(rec.y - via_product.y) < 1e-9);
    }
}

TEST_CASE("property: bbox of random points via GraphicsState") {
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> u(-1000, 1000);
    for (int n = 0; n < 200; ++n) {
        GraphicsState gs;
        BBox expect = BBox::empty();
        const int k = 1 + static_cast<int>(rng() % 20);
        double lx = 1e18, ly = 1e18, hx = -1e18, hy = -1e18;
        for (int i = 0; i < k; ++i) {
            const Point p{u(rng), u(rng)};
            gs.path_extend(i == 0 ? PathOp::move_to(p) : PathOp::line_to(p));
            lx = std::min(lx, p.x);
            ly = std::min(ly, p.y);
            hx = std::max(hx, p.x);
            hy = std::max(hy, p.y);
        }
        CHECK(gs.path_bbox() == BBox::of({lx, ly}, {hx, hy}));
        CHECK(gs.path_bbox().min_x() <= gs.path_bbox().max_x());
    }
}
