#include <random>
#include <sstream>

#include "catch_amalgamated.hpp"

#include "alh/grid.hpp"

using namespace alh;

TEST_CASE("grid text format round-trips bit-exactly") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ud(0.5, 2.0);
    auto fn = [&](const Vec& y, double r) {
        Mat g = Mat::Identity(2, 2);
        g(0, 0) = ud(rng) + y[0] * y[0] + r;
        g(1, 1) = ud(rng) + y[1] * y[1] + 2.0 * r;
        g(0, 1) = g(1, 0) = 0.1 * ud(rng);
        return g;
    };
    std::vector<double> ys{-0.2, -0.1, 0.0, 0.1, 0.2};
    std::vector<double> rs{1.0, 1.25, 1.5, 1.75};
    auto grid = FermiGrid::sample(fn, ys, rs, 2);

    std::ostringstream out;
    grid.save(out);
    std::istringstream in(out.str());
    auto back = FermiGrid::load(in);

    REQUIRE(back.n() == grid.n());
    REQUIRE(back.y_nodes() == grid.y_nodes());
    REQUIRE(back.r_nodes() == grid.r_nodes());
    std::vector<int> iy(2, 0);
    do {
        for (int ir = 0; ir < 4; ++ir)
            for (int a = 0; a < 2; ++a)
                for (int b = a; b < 2; ++b)
                    REQUIRE(back.g_at(iy, ir, a, b) == grid.g_at(iy, ir, a, b));
    } while (grid.advance(iy));

    // and the serialized form itself is stable
    std::ostringstream again;
    back.save(again);
    CHECK(again.str() == out.str());
}

TEST_CASE("grid invariants") {
    SECTION("nonuniform r spacing is rejected") {
        CHECK_THROWS_AS(FermiGrid({0.0, 0.1}, {0.0, 0.1, 0.3}, 1),
                        configuration_error);
    }
    SECTION("decreasing nodes are rejected") {
        CHECK_THROWS_AS(FermiGrid({0.1, 0.0}, {0.0, 0.1}, 1),
                        configuration_error);
    }
    SECTION("negative radii are rejected") {
        CHECK_THROWS_AS(FermiGrid({0.0, 0.1}, {-0.2, -0.1}, 1),
                        configuration_error);
    }
    SECTION("malformed files are rejected") {
        std::istringstream bad1("nonsense header\n1 2 3\n");
        CHECK_THROWS_AS(FermiGrid::load(bad1), configuration_error);
        std::istringstream bad2("y1 r g_1_1\n0 1\n");
        CHECK_THROWS_AS(FermiGrid::load(bad2), configuration_error);
        // missing one node of the tensor product
        std::istringstream bad3(
            "y1 r g_1_1\n0 1 1\n0 2 1\n1 1 1\n");
        CHECK_THROWS_AS(FermiGrid::load(bad3), configuration_error);
    }
}
