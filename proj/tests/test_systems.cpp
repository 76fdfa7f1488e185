#include <doctest.h>

#include <cmath>
#include <vector>

#include "ergolab/errors.hpp"
#include "ergolab/rng.hpp"
#include "ergolab/systems.hpp"

using namespace ergolab;

TEST_CASE("evaluate on the zoo maps") {
    CHECK(SystemDescriptor::doubling().evaluate({0.25, 0.0}).x == 0.5);
    CHECK(SystemDescriptor::logistic(1.0).evaluate({0.5, 0.0}).x == 1.0);

    const auto cat = SystemDescriptor::cat_map();
    const Point img = cat.evaluate({0.5, 0.5});
    CHECK(img.x == 0.5);  // (1.5, 1.0) mod 1
    CHECK(img.y == 0.0);

    const auto mp = SystemDescriptor::manneville_pomeau(1.0);
    CHECK(mp.evaluate({0.0, 0.0}).x == 0.0);

    const auto tent = SystemDescriptor::tent();
    CHECK(tent.evaluate({0.25, 0.0}).x == 0.5);
    CHECK(tent.evaluate({0.75, 0.0}).x == 0.5);
}

TEST_CASE("parameters outside documented ranges are refused") {
    CHECK_THROWS_AS(SystemDescriptor::logistic(0.0), ConfigError);
    CHECK_THROWS_AS(SystemDescriptor::logistic(1.5), ConfigError);
    CHECK_THROWS_AS(SystemDescriptor::manneville_pomeau(0.5), ConfigError);
    CHECK_THROWS_AS(SystemDescriptor::skew_tent({1.2, 0.5}), ConfigError);
}

TEST_CASE("orbit: rational period two under doubling") {
    const auto orb = orbit(SystemDescriptor::doubling(), {1.0 / 3.0, 0.0}, 4);
    REQUIRE(orb.points.size() == 4);
    CHECK(orb.points[0].x == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(orb.points[1].x == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(orb.points[2].x == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(orb.points[3].x == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("orbit: Manneville-Pomeau fixes the neutral point") {
    const auto orb = orbit(SystemDescriptor::manneville_pomeau(1.0), {0.0, 0.0}, 3);
    REQUIRE(orb.points.size() == 3);
    for (const auto& p : orb.points) CHECK(p.x == 0.0);
}

TEST_CASE("symbolic doubling orbit equals the bit-shift oracle") {
    const auto prog = BlockProgram::parse("(0)x4;(01)x2");
    const auto sys = SystemDescriptor::symbolic_doubling(prog);
    const auto orb = orbit(sys, symbolic_initial_point(sys), 8);
    REQUIRE(orb.points.size() == 8);

    // independent oracle: materialize the bit sequence directly and sum
    // the 53-bit dyadic values
    std::vector<int> bits;
    for (int i = 0; i < 4; ++i) bits.push_back(0);
    for (int i = 0; i < 2; ++i) { bits.push_back(0); bits.push_back(1); }
    while (bits.size() < 8 + 53) { bits.push_back(0); bits.push_back(1); }  // tail repeats "01"
    for (int j = 0; j < 8; ++j) {
        double expected = 0.0;
        for (int k = 0; k < 53; ++k)
            expected += bits[static_cast<std::size_t>(j + k)] * std::ldexp(1.0, -(k + 1));
        CHECK(orb.points[static_cast<std::size_t>(j)].x == expected);
    }
}

TEST_CASE("derivative log norms") {
    CHECK(SystemDescriptor::doubling().derivative_log_norm({0.77, 0.0}) == std::log(2.0));
    CHECK_THROWS_AS(SystemDescriptor::logistic(1.0).derivative_log_norm({0.5, 0.0}),
                    SingularityError);
    CHECK(SystemDescriptor::cat_map().derivative_log_norm({0.1, 0.9}) ==
          doctest::Approx(std::log(0.5 * (3.0 + std::sqrt(5.0)))).epsilon(1e-15));
    CHECK(SystemDescriptor::tent().derivative_log_norm({0.2, 0.0}) == std::log(2.0));
    // neutral fixed point: f'(0) = 1
    CHECK(SystemDescriptor::manneville_pomeau(1.0).derivative_log_norm({0.0, 0.0}) == 0.0);
}

TEST_CASE("critical sets") {
    CHECK(SystemDescriptor::doubling().critical_set().empty());
    CHECK(SystemDescriptor::logistic(0.8).critical_set() == std::vector<double>{0.5});
    CHECK(SystemDescriptor::tent().critical_set() == std::vector<double>{0.5});
    CHECK(SystemDescriptor::manneville_pomeau(1.0).critical_set().empty());
}

TEST_CASE("membership: evaluate maps the space into itself") {
    std::vector<SystemDescriptor> zoo;
    zoo.push_back(SystemDescriptor::doubling());
    zoo.push_back(SystemDescriptor::logistic(1.0));
    zoo.push_back(SystemDescriptor::logistic(0.37));
    zoo.push_back(SystemDescriptor::manneville_pomeau(1.0));
    zoo.push_back(SystemDescriptor::manneville_pomeau(2.5));
    zoo.push_back(SystemDescriptor::tent());
    zoo.push_back(SystemDescriptor::cat_map());
    zoo.push_back(SystemDescriptor::contraction());
    std::vector<double> table;
    for (int i = 0; i < 64; ++i) table.push_back(0.5 + 0.4 * std::sin(i * 0.3));
    zoo.push_back(SystemDescriptor::skew_tent(table));
    zoo.push_back(SystemDescriptor::skew_logistic(table));

    for (const auto& sys : zoo) {
        for (std::uint64_t i = 0; i < 10000; ++i) {
            const std::uint64_t h = mix64(42, i);
            Point p{u01(h), u01(splitmix64(h))};
            if (sys.space().dimension() == 1) p.y = 0.0;
            const Point img = sys.space().reduce(sys.evaluate(p));
            CAPTURE(sys.describe());
            REQUIRE(sys.space().contains(img));
        }
    }
}

TEST_CASE("symbolic evaluation agrees with the doubling formula to 2^-(B-1)") {
    for (int b : {20, 40, 53}) {
        const auto prog = BlockProgram::parse("(0110)x3;(10)x5;(011)x2", b);
        const auto sys = SystemDescriptor::symbolic_doubling(prog);
        const auto orb = orbit(sys, symbolic_initial_point(sys), 200);
        const double tol = std::ldexp(1.0, -(b - 1));
        for (std::size_t j = 0; j + 1 < orb.points.size(); ++j) {
            const double via_formula = wrap_unit(2.0 * orb.points[j].x);
            const double via_shift = orb.points[j + 1].x;
            CHECK(std::fabs(via_formula - via_shift) <= tol);
        }
    }
}

TEST_CASE("orbit determinism: identical inputs give bit-identical outputs") {
    const auto sys = SystemDescriptor::logistic(0.913);
    const auto a = orbit(sys, {0.1234, 0.0}, 5000);
    const auto b = orbit(sys, {0.1234, 0.0}, 5000);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(a.points[i].x == b.points[i].x);
}

TEST_CASE("block program: parse/serialize round trip and shift identity") {
    const std::string text = "(0)x4;(01)x2";
    const auto prog = BlockProgram::parse(text);
    CHECK(prog.serialize() == text);

    // shift-of-sequence equals sequence-of-shifted-program
    for (std::int64_t k : {1, 3, 7, 12, 40}) {
        const auto shifted = prog.shifted(k);
        for (std::int64_t i = 0; i < 64; ++i) CHECK(shifted.bit(i) == prog.bit(i + k));
    }
}

TEST_CASE("block program: prefix reproducibility") {
    const auto prog = BlockProgram::parse("(101)x7;(0)x9");
    const auto a = prog.materialize(300);
    const auto b = prog.materialize(300);
    CHECK(a == b);
    for (std::int64_t i = 0; i < 300; ++i)
        CHECK(static_cast<int>(a[static_cast<std::size_t>(i)]) == prog.bit(i));
}

TEST_CASE("space distances wrap") {
    SpaceDescriptor circle{SpaceKind::Circle};
    CHECK(circle.distance({0.95, 0.0}, {0.05, 0.0}) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(circle.diameter() == 0.5);
    SpaceDescriptor torus{SpaceKind::Torus};
    CHECK(torus.distance({0.9, 0.9}, {0.1, 0.1}) ==
          doctest::Approx(std::sqrt(0.08)).epsilon(1e-12));
    SpaceDescriptor cyl{SpaceKind::CircleInterval};
    CHECK(cyl.distance({0.95, 0.2}, {0.05, 0.6}) ==
          doctest::Approx(std::sqrt(0.01 + 0.16)).epsilon(1e-12));
}

TEST_CASE("critical set is exactly the zero set of the derivative") {
    for (double t : {0.5, 1.0}) {
        const auto sys = SystemDescriptor::logistic(t);
        for (int i = 1; i <= 9; ++i) {
            const double x = i / 10.0;
            if (x == 0.5) continue;
            // |f'(x)| = 4t|1-2x|, nonzero away from the critical point
            const double expected = std::log(4.0 * t * std::fabs(1.0 - 2.0 * x));
            CHECK(sys.derivative_log_norm({x, 0.0}) == doctest::Approx(expected).epsilon(1e-12));
        }
        CHECK_THROWS_AS(sys.derivative_log_norm({0.5, 0.0}), SingularityError);
    }
}

TEST_CASE("block program: shift identity on randomized programs") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        std::vector<BlockRun> runs;
        std::uint64_t h = splitmix64(seed);
        const int nruns = 1 + static_cast<int>(h % 4);
        for (int r = 0; r < nruns; ++r) {
            h = splitmix64(h);
            std::string word;
            const int wlen = 1 + static_cast<int>(h % 5);
            for (int b = 0; b < wlen; ++b) word.push_back(((h >> (b + 8)) & 1) ? '1' : '0');
            runs.push_back(BlockRun{word, 1 + static_cast<std::int64_t>((h >> 20) % 6)});
        }
        const BlockProgram prog(runs);
        for (std::int64_t k : {1, 2, 5, 9, 23, 57}) {
            const auto shifted = prog.shifted(k);
            for (std::int64_t i = 0; i < 80; ++i) {
                CAPTURE(seed);
                CAPTURE(k);
                REQUIRE(shifted.bit(i) == prog.bit(i + k));
            }
        }
    }
}
