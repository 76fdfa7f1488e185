#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ergolab/grid.hpp"
#include "ergolab/systems.hpp"

namespace ergolab::stats {

// Neumaier-compensated accumulation; running Birkhoff sums at orbit budgets of
// 10^6+ must not drift.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double v) {
        double t = sum + v;
        if (std::fabs(sum) >= std::fabs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

// Geometric checkpoint sequence n_k = ceil(growth^k) within N, deduplicated,
// with N itself appended. The tail used for limsup/liminf estimates starts at
// ceil(sqrt(N)).
struct CheckpointSchedule {
    double growth = 1.05;

    std::vector<std::int64_t> points(std::int64_t N) const;
    static std::int64_t tail_start(std::int64_t N);
};

// Rescaled harmonics (1+cos 2pi k x)/2, (1+sin 2pi k x)/2 per coordinate,
// interleaved, with weights 2^-n. Every member has range within [0,1].
struct TestFunctionFamily {
    int dimension = 1;
    int truncation = 16;  // M

    double weight(int n) const { return std::ldexp(1.0, -n); }  // 2^-n, n >= 1
    double eval(int n, const Point& p) const;
};

// Histogram measure on a uniform grid: the computational stand-in for the
// Cesaro measures (1/n) sum delta_{f^j(x)}.
struct EmpiricalMeasure {
    GridPartition grid;
    std::vector<double> mass;
    std::int64_t samples = 0;

    double total_mass() const;
    // Integral of the n-th family member against the histogram (cell midpoints).
    double integral(const TestFunctionFamily& family, int n) const;
};

// Truncated weak-* distance sum_{n<=M} 2^-n |int phi_n dmu - int phi_n dnu|.
double measure_distance(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                        const TestFunctionFamily& family);

struct CheckpointAverage {
    std::int64_t n = 0;
    double average = 0.0;
};

struct OscillationReport {
    double limsup = 0.0;
    double liminf = 0.0;
    double gap = 0.0;
    std::int64_t budget = 0;
    std::int64_t tail_start = 0;
    std::vector<CheckpointAverage> checkpoints;
    bool truncated = false;
};

OscillationReport birkhoff_series(const SystemDescriptor& sys, Point x0,
                                  const std::function<double(const Point&)>& phi,
                                  std::int64_t N,
                                  const CheckpointSchedule& schedule = {});

// A measurable region: an interval/arc on coordinate 0 (lo > hi wraps through
// 0 on circle spaces, half-open [lo,hi)), or an explicit union of grid cells.
struct Region {
    enum class Kind { Interval, Cells };
    Kind kind = Kind::Interval;
    double lo = 0.0;
    double hi = 0.0;
    GridPartition grid;
    std::vector<std::int64_t> cells;

    static Region interval(double lo, double hi);
    static Region cell_set(GridPartition grid, std::vector<std::int64_t> cells);
    bool contains(const SpaceDescriptor& space, const Point& p) const;
};

// Finite-budget stand-in for the limsup visiting frequency: the max over tail
// checkpoints of (1/n) #{j < n : f^j(x) in U}.
double visiting_frequency(const SystemDescriptor& sys, Point x0, const Region& U,
                          std::int64_t N, const CheckpointSchedule& schedule = {});

EmpiricalMeasure empirical_measure(const SystemDescriptor& sys, Point x0, std::int64_t N,
                                   int m, std::int64_t burn_in = 0);

struct SpectrumEstimate {
    std::vector<EmpiricalMeasure> representatives;
    std::vector<std::int64_t> hits;  // tail checkpoints within eps_c of each rep
    double eps_c = 0.05;
    double schedule_growth = 1.05;
    std::int64_t tail_checkpoints = 0;
    std::int64_t budget = 0;
};

// Greedy first-seen clustering of tail checkpoint measures at tolerance eps_c.
SpectrumEstimate statistical_spectrum(const SystemDescriptor& sys, Point x0, std::int64_t N,
                                      int m, const CheckpointSchedule& schedule = {},
                                      double eps_c = 0.05,
                                      const TestFunctionFamily* family = nullptr);

// Grid proxy for the union of supports over the spectrum: cells with mass at
// least mass_floor, over representatives hit at least min_hits times.
std::vector<std::int64_t> statistical_omega_limit(const SpectrumEstimate& spectrum,
                                                  double mass_floor = 1e-6,
                                                  std::int64_t min_hits = 1);

// Grid proxy for the omega-limit: cells visited by the last tail_fraction*N
// orbit points.
std::vector<std::int64_t> omega_limit_estimate(const SystemDescriptor& sys, Point x0,
                                               std::int64_t N, int m,
                                               double tail_fraction = 0.5);

}  // namespace ergolab::stats
