#include "ergolab/growing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ergolab/errors.hpp"

namespace ergolab::grow {

namespace {

constexpr double kCollisionGuard = 4.0 * std::numeric_limits<double>::epsilon();

bool tracker_supported(Family f) {
    switch (f) {
        case Family::Doubling:
        case Family::Tent:
        case Family::Logistic:
        case Family::MannevillePomeau:
        case Family::Contraction:
            return true;
        default:
            return false;
    }
}

// Degree-2 monotone lift extended over the real line (doubling and
// Manneville-Pomeau): F(x + k) = F(x) + 2k.
double lift_ext(const SystemDescriptor& sys, double x) {
    double fl = std::floor(x);
    return sys.lift(x - fl) + fl * 2.0;
}

// Solve F_ext(x) = Y for the increasing Manneville-Pomeau lift, Newton from a
// seed with a bisection-safe clamp.
double mp_lift_inverse(const SystemDescriptor& sys, double Y, double seed) {
    const double gamma = sys.param();
    double x = seed;
    double lo = seed - 1.5, hi = seed + 1.5;
    for (int it = 0; it < 60; ++it) {
        double fl = std::floor(x);
        double frac = x - fl;
        double val = frac + std::pow(frac, 1.0 + gamma) + 2.0 * fl - Y;
        if (std::fabs(val) < 1e-15) break;
        if (val > 0.0) hi = std::min(hi, x);
        else lo = std::max(lo, x);
        double deriv = 1.0 + (1.0 + gamma) * std::pow(frac, gamma);
        double nx = x - val / deriv;
        if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
        if (nx == x) break;
        x = nx;
    }
    return x;
}

}  // namespace

BranchTracker::BranchTracker(const SystemDescriptor& sys, double x, double delta)
    : sys_(&sys), delta_(delta) {
    if (!sys.is_one_dimensional() || !tracker_supported(sys.family()))
        throw UnsupportedFamilyError("branch tracking: unsupported family");
    if (!(delta > 0.0 && delta < 0.25))
        throw ContractViolation("branch tracking: need 0 < delta < 1/4 of the coordinate extent");
    x_ = sys.space().coord_wraps(0) ? wrap_unit(x) : x;
    if (x_ < 0.0 || x_ > 1.0) throw ConfigError("branch tracking: x outside the space");
    u_ = v_ = delta;
    // Interval semantics: branch cuts plus hard boundaries at 0 and 1. This
    // covers the interval families and Manneville-Pomeau, whose declared
    // branch boundary is the mod-1 reduction point. The doubling covering has
    // no cuts and tracks pure margin growth.
    interval_semantics_ = !sys.branch_cuts().empty() || sys.family() == Family::Contraction;
    clip_balls_ = sys.space().kind == SpaceKind::Interval;
    orbit_.push_back(x_);
    apply_cuts();
}

void BranchTracker::apply_cuts() {
    if (!interval_semantics_) return;
    double lo = x_ - u_, hi = x_ + v_;
    lo = std::max(lo, 0.0);
    hi = std::min(hi, 1.0);
    for (double c : sys_->branch_cuts()) {
        if (std::fabs(x_ - c) < kCollisionGuard) {
            flag_ = OrbitFlag::CriticalCollision;
            return;
        }
        if (c > lo && c < hi) {
            if (x_ < c)
                hi = c;
            else
                lo = c;
        }
    }
    u_ = std::max(0.0, x_ - lo);
    v_ = std::max(0.0, hi - x_);
}

bool BranchTracker::step() {
    if (flag_ != OrbitFlag::Complete) return false;
    StepInfo info;
    double nx;
    if (!interval_semantics_) {
        // covering semantics (doubling): margins scale by the constant slope
        nx = sys_->evaluate({x_, 0.0}).x;
        info.wrap = std::round(2.0 * x_ - nx);
        if (!full_) {
            u_ *= 2.0;
            v_ *= 2.0;
            if (u_ + v_ >= 1.0) full_ = true;
        }
    } else {
        const double lo = x_ - u_, hi = x_ + v_;
        const Family fam = sys_->family();
        info.side = (fam == Family::Tent || fam == Family::Logistic) ? (x_ < 0.5 ? 0 : 1) : 0;
        nx = sys_->evaluate({x_, 0.0}).x;
        double img_a, img_b;
        if (fam == Family::MannevillePomeau) {
            // lift values keep the order across the mod-1 reduction
            info.wrap = std::round(sys_->lift(x_) - nx);
            img_a = sys_->lift(lo) - info.wrap;
            img_b = sys_->lift(hi) - info.wrap;
        } else {
            img_a = sys_->evaluate({lo, 0.0}).x;
            img_b = sys_->evaluate({hi, 0.0}).x;
        }
        const double img_lo = std::min(img_a, img_b);
        const double img_hi = std::max(img_a, img_b);
        u_ = std::max(0.0, nx - img_lo);
        v_ = std::max(0.0, img_hi - nx);
    }
    x_ = nx;
    ++n_;
    steps_.push_back(info);
    orbit_.push_back(x_);
    apply_cuts();
    return flag_ == OrbitFlag::Complete;
}

std::optional<double> BranchTracker::witness_center() const {
    if (flag_ != OrbitFlag::Complete) return std::nullopt;
    if (full_) return x_;
    const double lo = x_ - u_, hi = x_ + v_;
    double q_min, q_max;
    if (clip_balls_) {
        q_min = lo <= 0.0 ? 0.0 : lo + delta_;
        q_max = hi >= 1.0 ? 1.0 : hi - delta_;
    } else {
        q_min = lo + delta_;
        q_max = hi - delta_;
    }
    if (q_min > q_max) return std::nullopt;
    const double q = std::clamp(x_, q_min, q_max);
    if (std::fabs(q - x_) >= delta_ / 2.0) return std::nullopt;
    return q;
}

double BranchTracker::invert_step(std::size_t k, double y) const {
    const double Y = y + steps_[k].wrap;
    switch (sys_->family()) {
        case Family::Doubling:
            return Y / 2.0;
        case Family::Contraction:
            return 2.0 * Y;
        case Family::Tent:
            return steps_[k].side == 0 ? Y / 2.0 : 1.0 - Y / 2.0;
        case Family::Logistic: {
            const double t = sys_->param();
            const double r = std::sqrt(std::max(0.0, 1.0 - Y / t));
            return steps_[k].side == 0 ? 0.5 * (1.0 - r) : 0.5 * (1.0 + r);
        }
        case Family::MannevillePomeau:
            return mp_lift_inverse(*sys_, Y, orbit_[k]);
        default:
            throw UnsupportedFamilyError("invert_step");
    }
}

std::pair<double, double> BranchTracker::pull_back(double t_lo, double t_hi) const {
    double lo = t_lo, hi = t_hi;
    for (std::size_t k = steps_.size(); k-- > 0;) {
        double a = invert_step(k, lo);
        double b = invert_step(k, hi);
        lo = std::min(a, b);
        hi = std::max(a, b);
    }
    return {lo, hi};
}

GrowingTimeRecord growing_times(const SystemDescriptor& sys, double x, double delta,
                                std::int64_t N, bool with_preballs) {
    if (N > 50000 && with_preballs)
        throw BudgetError("growing_times: N above the 5*10^4 ceiling (pre-ball recovery is O(N^2))");
    if (N > 2000000)
        throw BudgetError("growing_times: N above the 2*10^6 ceiling");
    GrowingTimeRecord rec;
    rec.x0 = x;
    rec.delta = delta;
    rec.budget = N;
    BranchTracker tracker(sys, x, delta);
    for (std::int64_t n = 1; n <= N; ++n) {
        if (!tracker.step()) {
            rec.flag = tracker.flag();
            break;
        }
        auto q = tracker.witness_center();
        if (!q) continue;
        GrowingTime gt;
        gt.n = n;
        gt.q = *q;
        gt.circle_covered = tracker.covers_circle();
        if (with_preballs) {
            double b_lo = *q - delta, b_hi = *q + delta;
            if (sys.space().kind == SpaceKind::Interval) {
                b_lo = std::max(b_lo, 0.0);
                b_hi = std::min(b_hi, 1.0);
            }
            auto [v_lo, v_hi] = tracker.pull_back(b_lo, b_hi);
            gt.v_lo = v_lo;
            gt.v_hi = v_hi;
            gt.diameter = v_hi - v_lo;
        }
        rec.times.push_back(gt);
    }
    return rec;
}

std::optional<PreBall> pre_ball(const SystemDescriptor& sys, double x, std::int64_t n,
                                double delta, double sigma) {
    if (!(sigma > 0.0 && sigma < 1.0))
        throw ContractViolation("pre_ball: sigma must be in (0,1)");
    if (!sys.has_derivative())
        throw UnsupportedFamilyError("pre_ball: family has no derivative");
    BranchTracker tracker(sys, x, delta);
    for (std::int64_t k = 1; k <= n; ++k)
        if (!tracker.step()) return std::nullopt;
    auto q = tracker.witness_center();
    if (!q) return std::nullopt;

    PreBall pb;
    pb.n = n;
    pb.q = *q;
    double b_lo = *q - delta, b_hi = *q + delta;
    if (sys.space().kind == SpaceKind::Interval) {
        b_lo = std::max(b_lo, 0.0);
        b_hi = std::min(b_hi, 1.0);
    }
    auto [v_lo, v_hi] = tracker.pull_back(b_lo, b_hi);
    pb.v_lo = v_lo;
    pb.v_hi = v_hi;
    pb.diameter = v_hi - v_lo;

    // Backward contraction at endpoint and midpoint pairs: for monotone 1-D
    // branches the extremal distortion sits near the endpoints. A heuristic
    // check, not a proof.
    const double mid = 0.5 * (v_lo + v_hi);
    const std::pair<double, double> pairs[3] = {{v_lo, v_hi}, {v_lo, mid}, {mid, v_hi}};
    pb.sigma_verified = true;
    pb.worst_ratio = 0.0;
    for (const auto& [ya, yb] : pairs) {
        std::vector<Point> ya_orb(static_cast<std::size_t>(n) + 1);
        std::vector<Point> yb_orb(static_cast<std::size_t>(n) + 1);
        ya_orb[0] = sys.space().reduce({ya, 0.0});
        yb_orb[0] = sys.space().reduce({yb, 0.0});
        for (std::int64_t k = 0; k < n; ++k) {
            ya_orb[static_cast<std::size_t>(k + 1)] = sys.evaluate(ya_orb[static_cast<std::size_t>(k)]);
            yb_orb[static_cast<std::size_t>(k + 1)] = sys.evaluate(yb_orb[static_cast<std::size_t>(k)]);
        }
        const double dn = sys.space().distance(ya_orb[static_cast<std::size_t>(n)],
                                               yb_orb[static_cast<std::size_t>(n)]);
        if (dn <= 0.0) continue;
        double sj = 1.0;
        for (std::int64_t j = 1; j < n; ++j) {
            sj *= sigma;
            const double dj = sys.space().distance(ya_orb[static_cast<std::size_t>(n - j)],
                                                   yb_orb[static_cast<std::size_t>(n - j)]);
            const double bound = sj * dn;
            if (bound > 0.0) pb.worst_ratio = std::max(pb.worst_ratio, dj / bound);
            if (dj > bound * (1.0 + 1e-9)) pb.sigma_verified = false;
        }
    }
    return pb;  // absent only when n is not a growing time; sigma result is flagged
}

NueDiagnostics nue_averages(const SystemDescriptor& sys, double x, std::int64_t N,
                            double delta_t, const stats::CheckpointSchedule& schedule) {
    if (!(delta_t > 0.0 && delta_t < 1.0))
        throw ContractViolation("nue_averages: need 0 < delta_t < 1");
    if (!sys.has_derivative())
        throw UnsupportedFamilyError("nue_averages: family has no derivative");
    NueDiagnostics diag;
    diag.delta_t = delta_t;
    diag.budget = N;

    auto cps = schedule.points(N);
    OrbitStream stream(sys, {x, 0.0});
    stats::KahanSum slow, expansion;
    std::size_t ci = 0;
    for (std::int64_t j = 0; j < N; ++j) {
        const Point& p = stream.current();
        double dist = sys.dist_to_critical(p.x);
        double truncated_dist = dist <= delta_t ? dist : 1.0;
        if (truncated_dist <= 0.0) {
            diag.truncated = true;
            break;
        }
        slow.add(-std::log(truncated_dist));
        double dln;
        try {
            dln = sys.derivative_log_norm(p);
        } catch (const SingularityError&) {
            diag.truncated = true;
            break;
        }
        expansion.add(dln);
        const std::int64_t n = j + 1;
        if (ci < cps.size() && n == cps[ci]) {
            diag.slow_recurrence_checkpoints.push_back({n, slow.value() / static_cast<double>(n)});
            diag.expansion_checkpoints.push_back({n, expansion.value() / static_cast<double>(n)});
            ++ci;
        }
        if (n < N && !stream.advance()) {
            diag.truncated = true;
            break;
        }
    }
    if (!diag.slow_recurrence_checkpoints.empty()) {
        diag.slow_recurrence_average = diag.slow_recurrence_checkpoints.back().average;
        diag.expansion_average = diag.expansion_checkpoints.back().average;
    }
    return diag;
}

namespace {

struct Component {
    double lo = 0.0, hi = 0.0;
    std::int64_t order = 0;
};

// Full one-step preimage components of [u,v]: intervals mapping monotonically
// onto [u,v] under f.
std::vector<std::pair<double, double>> full_preimages(const SystemDescriptor& sys, double u,
                                                      double v) {
    std::vector<std::pair<double, double>> out;
    switch (sys.family()) {
        case Family::Doubling:
            out.push_back({u / 2.0, v / 2.0});
            out.push_back({u / 2.0 + 0.5, v / 2.0 + 0.5});
            break;
        case Family::Tent:
            out.push_back({u / 2.0, v / 2.0});
            out.push_back({1.0 - v / 2.0, 1.0 - u / 2.0});
            break;
        case Family::Logistic: {
            const double t = sys.param();
            if (v <= t) {
                auto g = [t](double y) { return 0.5 * (1.0 - std::sqrt(std::max(0.0, 1.0 - y / t))); };
                out.push_back({g(u), g(v)});
                out.push_back({1.0 - g(v), 1.0 - g(u)});
            }
            break;
        }
        case Family::MannevillePomeau: {
            auto finv = [&sys](double Y) {
                double a = -1.0, b = 2.0;
                for (int it = 0; it < 90; ++it) {
                    double mid = 0.5 * (a + b);
                    (lift_ext(sys, mid) < Y ? a : b) = mid;
                }
                return 0.5 * (a + b);
            };
            for (int k = 0; k <= 1; ++k) {
                double a = finv(u + k), b = finv(v + k);
                if (b >= 0.0 && a <= 1.0) out.push_back({a, b});
            }
            break;
        }
        case Family::Contraction:
            if (v <= 0.5) out.push_back({2.0 * u, 2.0 * v});
            break;
        default:
            throw UnsupportedFamilyError("horseshoe_search: unsupported family");
    }
    return out;
}

}  // namespace

std::optional<HorseshoePair> horseshoe_search(const SystemDescriptor& sys, double p, double eps,
                                              int n_max) {
    if (!sys.is_one_dimensional())
        throw UnsupportedFamilyError("horseshoe_search: one-dimensional families only");
    if (!(eps > 0.0 && eps < 0.25))
        throw ContractViolation("horseshoe_search: need 0 < eps < 1/4 of the coordinate extent");
    if (n_max < 1 || n_max > 24) throw BudgetError("horseshoe_search: n_max must be in [1,24]");

    double b_lo = p - eps, b_hi = p + eps;
    if (sys.space().kind == SpaceKind::Interval) {
        b_lo = std::max(b_lo, 0.0);
        b_hi = std::min(b_hi, 1.0);
    }
    const bool wraps = sys.space().coord_wraps(0);

    std::vector<Component> candidates;  // inside-ball components in (order, leftmost) order
    std::vector<std::pair<double, double>> level = {{b_lo, b_hi}};
    for (int n = 1; n <= n_max; ++n) {
        std::vector<std::pair<double, double>> next;
        for (const auto& [u, v] : level) {
            auto pres = full_preimages(sys, u, v);
            next.insert(next.end(), pres.begin(), pres.end());
        }
        std::sort(next.begin(), next.end());
        std::vector<Component> found;
        for (auto& [a, b] : next) {
            double lo = a, hi = b;
            if (wraps) {
                // shift by an integer to land inside the ball when possible
                while (hi > b_hi + 0.5) { lo -= 1.0; hi -= 1.0; }
                while (lo < b_lo - 0.5) { lo += 1.0; hi += 1.0; }
            }
            if (lo > b_lo && hi < b_hi) found.push_back({lo, hi, n});
        }
        std::sort(found.begin(), found.end(),
                  [](const Component& x, const Component& y) { return x.lo < y.lo; });
        for (const auto& c : found) {
            for (const auto& prev : candidates) {
                if (c.hi < prev.lo || prev.hi < c.lo) {
                    const Component& left = prev.lo < c.lo ? prev : c;
                    const Component& right = prev.lo < c.lo ? c : prev;
                    HorseshoePair hp;
                    hp.u0_lo = left.lo;
                    hp.u0_hi = left.hi;
                    hp.n0 = left.order;
                    hp.u1_lo = right.lo;
                    hp.u1_hi = right.hi;
                    hp.n1 = right.order;
                    return hp;
                }
            }
            candidates.push_back(c);
        }
        level = std::move(next);
        if (level.size() > (1u << 22))
            throw BudgetError("horseshoe_search: preimage count exceeded the budget");
    }
    return std::nullopt;
}

double entropy_lower_bound(std::int64_t n0, std::int64_t n1) {
    if (n0 < 1 || n1 < 1) throw ContractViolation("entropy_lower_bound: orders must be >= 1");
    return std::log(2.0) / static_cast<double>(std::max(n0, n1));
}

}  // namespace ergolab::grow
