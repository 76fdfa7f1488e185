#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ergolab/orbitstats.hpp"
#include "ergolab/systems.hpp"

namespace ergolab::grow {

// Tracks the monotone branch piece J_n of f^n around a seed point x, seeded
// with the delta-window B_delta(x) and split at the family's declared branch
// cuts. The image interval f^n(J_n) is carried as margins (u,v) around the
// orbit point; the doubling covering has no declared cuts, so its image
// margins double until the circle is covered and the tracker stays in the
// covered state.
class BranchTracker {
public:
    BranchTracker(const SystemDescriptor& sys, double x, double delta);

    bool step();  // advance one iterate; false once truncated
    OrbitFlag flag() const { return flag_; }

    std::int64_t order() const { return n_; }
    double point() const { return x_; }
    double image_lo() const { return x_ - u_; }  // local coordinates around point()
    double image_hi() const { return x_ + v_; }
    bool covers_circle() const { return full_; }

    // Witness ball center per the sliding rule: q = f^n(x) clipped so that
    // B_delta(q) fits inside the image, accepted only if d(f^n(x), q) < delta/2.
    std::optional<double> witness_center() const;

    // Component of f^{-n}((t_lo, t_hi)) along the tracked branch, in local
    // coordinates around the seed point.
    std::pair<double, double> pull_back(double t_lo, double t_hi) const;

private:
    struct StepInfo {
        double wrap = 0.0;   // lift offset: F_ext(x_k) - x_{k+1}
        std::int8_t side = 0;  // monotone piece id for interval families
    };

    const SystemDescriptor* sys_;
    double delta_ = 0.0;
    double x_ = 0.0;     // f^n(seed), reduced
    double u_ = 0.0, v_ = 0.0;  // image margins
    bool full_ = false;
    bool interval_semantics_ = false;  // cuts + [0,1] boundaries (incl. Manneville-Pomeau)
    bool clip_balls_ = false;          // balls clip at 0/1 (interval spaces only)
    std::int64_t n_ = 0;
    OrbitFlag flag_ = OrbitFlag::Complete;
    std::vector<StepInfo> steps_;
    std::vector<double> orbit_;

    void apply_cuts();
    double invert_step(std::size_t k, double y) const;
};

struct GrowingTime {
    std::int64_t n = 0;
    double q = 0.0;
    double v_lo = 0.0;  // pre-ball endpoints around the seed point
    double v_hi = 0.0;
    double diameter = 0.0;
    bool circle_covered = false;
};

struct GrowingTimeRecord {
    double x0 = 0.0;
    double delta = 0.0;
    std::int64_t budget = 0;
    std::vector<GrowingTime> times;
    OrbitFlag flag = OrbitFlag::Complete;

    double density() const {
        return budget > 0 ? static_cast<double>(times.size()) / static_cast<double>(budget) : 0.0;
    }
};

// with_preballs = false skips the O(n) backward endpoint recovery per record
// (density-only surveys); the witness centers are still recorded.
GrowingTimeRecord growing_times(const SystemDescriptor& sys, double x, double delta,
                                std::int64_t N, bool with_preballs = true);

struct PreBall {
    std::int64_t n = 0;
    double q = 0.0;
    double v_lo = 0.0;
    double v_hi = 0.0;
    double diameter = 0.0;
    bool sigma_verified = false;
    double worst_ratio = 0.0;  // max over j of d(f^{n-j}y, f^{n-j}z) / (sigma^j d(f^n y, f^n z))
};

// Growing time check at order n plus the backward-contraction verification at
// endpoint and midpoint pairs.
std::optional<PreBall> pre_ball(const SystemDescriptor& sys, double x, std::int64_t n,
                                double delta, double sigma);

struct NueDiagnostics {
    double delta_t = 0.0;
    std::int64_t budget = 0;
    double slow_recurrence_average = 0.0;
    double expansion_average = 0.0;
    std::vector<stats::CheckpointAverage> slow_recurrence_checkpoints;
    std::vector<stats::CheckpointAverage> expansion_checkpoints;
    bool truncated = false;
};

// Running averages of -log dist_{delta_t}(f^j x, C) (truncated distance) and
// log|f'(f^j x)|, with geometric checkpoints.
NueDiagnostics nue_averages(const SystemDescriptor& sys, double x, std::int64_t N,
                            double delta_t, const stats::CheckpointSchedule& schedule = {});

struct HorseshoePair {
    double u0_lo = 0.0, u0_hi = 0.0;
    std::int64_t n0 = 0;
    double u1_lo = 0.0, u1_hi = 0.0;
    std::int64_t n1 = 0;
};

// Searches branch preimages of B_eps(p) up to order n_max for two disjoint
// full components inside the ball; first pair in (order, leftmost) order.
std::optional<HorseshoePair> horseshoe_search(const SystemDescriptor& sys, double p,
                                              double eps, int n_max);

// log 2 / max(n0, n1): a conservative positive bound from a two-branch
// full-return structure.
double entropy_lower_bound(std::int64_t n0, std::int64_t n1);

}  // namespace ergolab::grow
