#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "ergolab/errors.hpp"
#include "ergolab/growing.hpp"
#include "ergolab/rng.hpp"

using namespace ergolab;
using namespace ergolab::grow;

TEST_CASE("doubling: every n is a growing time, pre-balls halve exactly") {
    const auto sys = SystemDescriptor::doubling();
    const double delta = 0.1;
    const auto rec = growing_times(sys, 0.3923, delta, 200);
    CHECK(rec.density() == 1.0);
    REQUIRE(rec.times.size() == 200);
    for (const auto& gt : rec.times) {
        if (gt.n > 40) break;  // beyond ~50 halvings the diameters underflow
        const double expected = 2.0 * delta * std::ldexp(1.0, -static_cast<int>(gt.n));
        CHECK(gt.diameter == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("doubling: recorded witnesses satisfy the pre-ball conditions") {
    // re-check independently of the tracker: forward endpoint arithmetic
    const auto sys = SystemDescriptor::doubling();
    const double delta = 0.1;
    const auto rec = growing_times(sys, u01(splitmix64(3)), delta, 30);
    const auto orb = orbit(sys, {u01(splitmix64(3)), 0.0}, 31);
    for (const auto& gt : rec.times) {
        // d(f^n(x), q) < delta/2
        const double xn = orb.points[static_cast<std::size_t>(gt.n)].x;
        CHECK(circle_dist(xn, wrap_unit(gt.q)) < delta / 2.0 + 1e-12);
        // f^n maps the recovered endpoints onto the ball boundary
        Point lo{wrap_unit(gt.v_lo), 0.0}, hi{wrap_unit(gt.v_hi), 0.0};
        for (std::int64_t j = 0; j < gt.n; ++j) {
            lo = sys.evaluate(lo);
            hi = sys.evaluate(hi);
        }
        CHECK(circle_dist(lo.x, wrap_unit(gt.q - delta)) < 1e-7);
        CHECK(circle_dist(hi.x, wrap_unit(gt.q + delta)) < 1e-7);
    }
}

TEST_CASE("growing time monotonicity in delta") {
    const auto sys = SystemDescriptor::logistic(1.0);
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const double x = u01(splitmix64(seed));
        const auto big = growing_times(sys, x, 0.1, 2000, false);
        const auto small = growing_times(sys, x, 0.05, 2000, false);
        std::set<std::int64_t> small_times;
        for (const auto& gt : small.times) small_times.insert(gt.n);
        for (const auto& gt : big.times) {
            CAPTURE(seed);
            CHECK(small_times.count(gt.n) == 1);
        }
    }
}

TEST_CASE("logistic t=1: growing-time density at least 0.1 for ten fixed seeds") {
    const auto sys = SystemDescriptor::logistic(1.0);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto rec = growing_times(sys, u01(splitmix64(seed)), 0.05, 10000, false);
        CAPTURE(seed);
        CHECK(rec.density() >= 0.1);
    }
}

TEST_CASE("Manneville-Pomeau near 0: no growing time until the orbit escapes") {
    const auto sys = SystemDescriptor::manneville_pomeau(1.0);
    const double delta = 0.05;
    const double x0 = 1e-4;
    const auto rec = growing_times(sys, x0, delta, 20000, false);

    // branch-image oracle: the laminar branch is pinned at the neutral fixed
    // point, so a witness ball fits only once the orbit passes delta/2
    std::vector<double> xs{x0};
    for (int j = 0; j < 20000; ++j) xs.push_back(sys.evaluate({xs.back(), 0.0}).x);
    std::int64_t first_escape = -1;
    for (std::size_t n = 1; n < xs.size(); ++n)
        if (xs[n] > delta / 2.0) { first_escape = static_cast<std::int64_t>(n); break; }
    REQUIRE(first_escape > 1000);  // deep in the neutral cell

    REQUIRE(!rec.times.empty());
    CHECK(rec.times.front().n >= first_escape);
    for (const auto& gt : rec.times) {
        if (gt.n < static_cast<std::int64_t>(xs.size()))
            CHECK(xs[static_cast<std::size_t>(gt.n)] > delta / 2.0 * 0.99);
    }
}

TEST_CASE("pre-ball: doubling and tent contract at sigma = 1/2 exactly") {
    for (const auto& sys : {SystemDescriptor::doubling(), SystemDescriptor::tent()}) {
        const auto pb = pre_ball(sys, 0.3923, 5, 0.1, 0.5);
        REQUIRE(pb.has_value());
        CAPTURE(family_name(sys.family()));
        CHECK(pb->sigma_verified);
        CHECK(pb->diameter == doctest::Approx(0.2 * std::ldexp(1.0, -5)).epsilon(1e-9));
        CHECK(pb->worst_ratio <= 1.0 + 1e-9);
    }
}

TEST_CASE("pre-ball: logistic growing times verify sigma = 0.9") {
    const auto sys = SystemDescriptor::logistic(1.0);
    const double x = u01(splitmix64(2));
    const auto rec = growing_times(sys, x, 0.05, 400);
    REQUIRE(!rec.times.empty());
    // growing times are not all hyperbolic times: orbits passing near the
    // critical point lose backward contraction, so most but not every sampled
    // time verifies sigma = 0.9
    int verified = 0, tried = 0;
    for (const auto& gt : rec.times) {
        if (gt.n < 3) continue;
        if (tried >= 10) break;
        ++tried;
        const auto pb = pre_ball(sys, x, gt.n, 0.05, 0.9);
        REQUIRE(pb.has_value());
        if (pb->sigma_verified) ++verified;
    }
    CHECK(verified >= (tried * 8) / 10);
    CHECK(verified >= 1);
}

TEST_CASE("pre-ball: absent when n is not a growing time") {
    const auto sys = SystemDescriptor::manneville_pomeau(1.0);
    CHECK(!pre_ball(sys, 1e-4, 5, 0.05, 0.9).has_value());
    CHECK_THROWS_AS(pre_ball(SystemDescriptor::doubling(), 0.3, 5, 0.1, 1.5), ContractViolation);
}

TEST_CASE("nue averages: doubling is exactly log 2 with zero slow recurrence") {
    const auto diag = nue_averages(SystemDescriptor::doubling(), 0.3923, 100000, 1e-3);
    CHECK(std::fabs(diag.expansion_average - std::log(2.0)) <= 1e-12);
    CHECK(diag.slow_recurrence_average == 0.0);
    for (const auto& c : diag.slow_recurrence_checkpoints) CHECK(c.average >= 0.0);
}

TEST_CASE("nue averages: laminar Manneville-Pomeau expansion collapses") {
    const auto diag = nue_averages(SystemDescriptor::manneville_pomeau(1.0), 1e-5, 100000, 1e-3);
    CHECK(diag.expansion_average <= 0.05);
    CHECK(diag.slow_recurrence_average == 0.0);  // no critical set
}

TEST_CASE("nue averages: logistic t=1 Lyapunov exponent is log 2") {
    const auto diag =
        nue_averages(SystemDescriptor::logistic(1.0), u01(splitmix64(17)), 100000, 1e-3);
    CHECK(std::fabs(diag.expansion_average - std::log(2.0)) <= 0.05);
    CHECK(!diag.truncated);
    for (const auto& c : diag.slow_recurrence_checkpoints) CHECK(c.average >= 0.0);
}

TEST_CASE("nue averages: exact critical hit truncates with a flag") {
    const auto diag = nue_averages(SystemDescriptor::logistic(1.0), 0.5, 1000, 1e-3);
    CHECK(diag.truncated);
}

TEST_CASE("branch tracker: exact critical hit flags a collision") {
    BranchTracker tracker(SystemDescriptor::logistic(1.0), 0.5, 0.05);
    CHECK(tracker.flag() == OrbitFlag::CriticalCollision);
    CHECK(!tracker.step());
}

TEST_CASE("horseshoe search: doubling finds the exact order-2 pair") {
    const auto hs = horseshoe_search(SystemDescriptor::doubling(), 0.5, 0.2, 4);
    REQUIRE(hs.has_value());
    CHECK(hs->n0 == 2);
    CHECK(hs->n1 == 2);
    CHECK(hs->u0_lo == doctest::Approx(0.325).epsilon(1e-12));
    CHECK(hs->u0_hi == doctest::Approx(0.425).epsilon(1e-12));
    CHECK(hs->u1_lo == doctest::Approx(0.575).epsilon(1e-12));
    CHECK(hs->u1_hi == doctest::Approx(0.675).epsilon(1e-12));
    // closed-image condition f^{n_j}(closure U_j) = closure B at endpoints
    const auto sys = SystemDescriptor::doubling();
    Point a{hs->u0_lo, 0.0}, b{hs->u0_hi, 0.0};
    for (int j = 0; j < hs->n0; ++j) { a = sys.evaluate(a); b = sys.evaluate(b); }
    CHECK(a.x == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(b.x == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("horseshoe search: tent pair at order 2, contraction absent") {
    const auto pair = horseshoe_search(SystemDescriptor::tent(), 0.5, 0.2, 4);
    REQUIRE(pair.has_value());
    CHECK(pair->n0 == 2);
    CHECK(pair->n1 == 2);
    CHECK(pair->u0_hi < pair->u1_lo);  // disjoint closures
    CHECK(pair->u0_lo > 0.3);
    CHECK(pair->u1_hi < 0.7);

    CHECK(!horseshoe_search(SystemDescriptor::contraction(), 0.5, 0.2, 6).has_value());
}

TEST_CASE("growing budget ceiling") {
    const auto sys = SystemDescriptor::doubling();
    CHECK_THROWS_AS(growing_times(sys, 0.3, 0.1, 60000), BudgetError);
    CHECK_NOTHROW(growing_times(sys, 0.3, 0.1, 60000, false));
}

TEST_CASE("entropy lower bound") {
    CHECK(entropy_lower_bound(2, 2) == std::log(2.0) / 2.0);
    CHECK(entropy_lower_bound(1, 1) == std::log(2.0));
    CHECK(entropy_lower_bound(2, 3) == std::log(2.0) / 3.0);
    CHECK_THROWS_AS(entropy_lower_bound(0, 1), ContractViolation);
}
