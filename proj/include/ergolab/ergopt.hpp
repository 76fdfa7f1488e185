#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ergolab/blockprog.hpp"
#include "ergolab/systems.hpp"

namespace ergolab::opt {

// Exact rational with overflow-checked arithmetic. Enumeration caps keep
// denominators far below the int64 range; an overflow trips a budget error.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d);

    static Rational from_int(std::int64_t n) { return Rational(n, 1); }

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational mod1() const;  // representative in [0,1)

    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator<(const Rational& o) const;

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct RatPoint {
    Rational x;
    Rational y;
    bool operator==(const RatPoint& o) const { return x == o.x && y == o.y; }
    bool operator<(const RatPoint& o) const {
        if (!(x == o.x)) return x < o.x;
        return y < o.y;
    }
};

struct PeriodicOrbit {
    int period = 0;
    int dimension = 1;
    std::vector<RatPoint> points;  // orbit order, starting at the lexicographic minimum
    std::string itinerary;         // binary word (doubling only)

    double orbit_average(const std::function<double(const Point&)>& phi) const;
};

// All periodic orbits of minimal period <= P, deduplicated by orbit
// equivalence. Supports the doubling map (P <= 20) and the cat map (P <= 12).
std::vector<PeriodicOrbit> enumerate_periodic_orbits(const SystemDescriptor& sys, int P);

struct MaximizationResult {
    double best_value = 0.0;
    PeriodicOrbit witness;
    int max_period_scanned = 0;
    std::vector<double> per_period_best;  // per_period_best[p-1] = best over periods <= p
};

// Brute-force ergodic-optimization oracle: maximize the orbit average of phi
// over all enumerated periodic orbits. Ties break by smaller period, then by
// lexicographically smallest point.
MaximizationResult max_birkhoff_over_periodic(const SystemDescriptor& sys,
                                              const std::function<double(const Point&)>& phi,
                                              int P);

// Block program cycling through the target orbits (given by their binary
// itineraries) with escalating block lengths L_{k+1} = ceil(rho_b^k sum_{j<=k} L_j),
// truncated once the cumulative length reaches total_bits. The running Birkhoff
// average at the end of block k is within range(phi)/rho_b + p_max/L_k of the
// block's target orbit average.
BlockProgram construct_oscillating_orbit(const std::vector<PeriodicOrbit>& targets,
                                         double rho_b, std::int64_t total_bits,
                                         int bit_budget = 53);

// Same construction from raw itinerary words.
BlockProgram construct_oscillating_orbit_words(const std::vector<std::string>& target_words,
                                               double rho_b, std::int64_t total_bits,
                                               int bit_budget = 53);

}  // namespace ergolab::opt
