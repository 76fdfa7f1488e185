#include "ergolab/systems.hpp"

#include <cmath>
#include <limits>

#include "ergolab/errors.hpp"

namespace ergolab {

namespace {

constexpr double kSingularityGuard = 4.0 * std::numeric_limits<double>::epsilon();

// Root of x + x^{1+gamma} = 1 in (0,1), the wrap point of Manneville-Pomeau.
double solve_mp_wrap(double gamma) {
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        double v = mid + std::pow(mid, 1.0 + gamma);
        (v < 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

const char* family_name(Family f) {
    switch (f) {
        case Family::Doubling: return "doubling";
        case Family::Logistic: return "logistic";
        case Family::MannevillePomeau: return "manneville_pomeau";
        case Family::Tent: return "tent";
        case Family::CatMap: return "cat_map";
        case Family::SkewTent: return "skew_tent";
        case Family::SkewLogistic: return "skew_logistic";
        case Family::SymbolicDoubling: return "symbolic_doubling";
        case Family::Contraction: return "contraction";
    }
    return "?";
}

Family family_from_name(const std::string& name) {
    if (name == "doubling") return Family::Doubling;
    if (name == "logistic") return Family::Logistic;
    if (name == "manneville_pomeau") return Family::MannevillePomeau;
    if (name == "tent") return Family::Tent;
    if (name == "cat_map") return Family::CatMap;
    if (name == "skew_tent") return Family::SkewTent;
    if (name == "skew_logistic") return Family::SkewLogistic;
    if (name == "symbolic_doubling") return Family::SymbolicDoubling;
    if (name == "contraction") return Family::Contraction;
    throw ConfigError("unknown family: " + name);
}

SystemDescriptor SystemDescriptor::doubling() {
    SystemDescriptor s;
    s.family_ = Family::Doubling;
    s.space_.kind = SpaceKind::Circle;
    return s;
}

SystemDescriptor SystemDescriptor::logistic(double t) {
    if (!(t > 0.0 && t <= 1.0)) throw ConfigError("logistic: t must be in (0,1]");
    SystemDescriptor s;
    s.family_ = Family::Logistic;
    s.space_.kind = SpaceKind::Interval;
    s.param_ = t;
    return s;
}

SystemDescriptor SystemDescriptor::manneville_pomeau(double gamma) {
    if (!(gamma >= 1.0)) throw ConfigError("manneville_pomeau: gamma must be >= 1");
    SystemDescriptor s;
    s.family_ = Family::MannevillePomeau;
    s.space_.kind = SpaceKind::Circle;
    s.param_ = gamma;
    s.mp_wrap_ = solve_mp_wrap(gamma);
    return s;
}

SystemDescriptor SystemDescriptor::tent() {
    SystemDescriptor s;
    s.family_ = Family::Tent;
    s.space_.kind = SpaceKind::Interval;
    return s;
}

SystemDescriptor SystemDescriptor::cat_map() {
    SystemDescriptor s;
    s.family_ = Family::CatMap;
    s.space_.kind = SpaceKind::Torus;
    return s;
}

SystemDescriptor SystemDescriptor::skew_tent(std::vector<double> phi_table) {
    if (phi_table.size() < 2) throw ConfigError("skew_tent: phi table needs >= 2 knots");
    for (double v : phi_table)
        if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("skew_tent: phi values must be in [0,1]");
    SystemDescriptor s;
    s.family_ = Family::SkewTent;
    s.space_.kind = SpaceKind::CircleInterval;
    s.phi_table_ = std::move(phi_table);
    return s;
}

SystemDescriptor SystemDescriptor::skew_logistic(std::vector<double> phi_table) {
    if (phi_table.size() < 2) throw ConfigError("skew_logistic: phi table needs >= 2 knots");
    for (double v : phi_table)
        if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("skew_logistic: phi values must be in [0,1]");
    SystemDescriptor s;
    s.family_ = Family::SkewLogistic;
    s.space_.kind = SpaceKind::CircleInterval;
    s.phi_table_ = std::move(phi_table);
    return s;
}

SystemDescriptor SystemDescriptor::symbolic_doubling(BlockProgram program) {
    SystemDescriptor s;
    s.family_ = Family::SymbolicDoubling;
    s.space_.kind = SpaceKind::Circle;
    s.program_ = std::move(program);
    return s;
}

SystemDescriptor SystemDescriptor::contraction() {
    SystemDescriptor s;
    s.family_ = Family::Contraction;
    s.space_.kind = SpaceKind::Interval;
    return s;
}

const BlockProgram& SystemDescriptor::program() const {
    if (!program_) throw ContractViolation("system has no block program");
    return *program_;
}

double SystemDescriptor::phi_at(double base_x) const {
    const auto& tab = phi_table_;
    const std::size_t k = tab.size();
    double u = wrap_unit(base_x) * static_cast<double>(k);
    auto i = static_cast<std::size_t>(u);
    if (i >= k) i = k - 1;
    double frac = u - static_cast<double>(i);
    return tab[i] * (1.0 - frac) + tab[(i + 1) % k] * frac;
}

Point SystemDescriptor::evaluate(const Point& p) const {
    switch (family_) {
        case Family::Doubling:
        case Family::SymbolicDoubling:
            return {wrap_unit(2.0 * p.x), 0.0};
        case Family::Logistic: {
            double y = 4.0 * param_ * p.x * (1.0 - p.x);
            if (y < 0.0) y = 0.0;
            if (y > 1.0) y = 1.0;  // rounding guard; image is [0,t]
            return {y, 0.0};
        }
        case Family::MannevillePomeau:
            return {wrap_unit(p.x + std::pow(p.x, 1.0 + param_)), 0.0};
        case Family::Tent:
            return {1.0 - std::fabs(2.0 * p.x - 1.0), 0.0};
        case Family::CatMap:
            return {wrap_unit(2.0 * p.x + p.y), wrap_unit(p.x + p.y)};
        case Family::SkewTent: {
            double h = phi_at(p.x) * (1.0 - std::fabs(2.0 * p.y - 1.0));
            return {wrap_unit(2.0 * p.x), h};
        }
        case Family::SkewLogistic: {
            double h = 4.0 * phi_at(p.x) * p.y * (1.0 - p.y);
            if (h > 1.0) h = 1.0;
            return {wrap_unit(2.0 * p.x), h};
        }
        case Family::Contraction:
            return {0.5 * p.x, 0.0};
    }
    return p;
}

bool SystemDescriptor::has_derivative() const {
    switch (family_) {
        case Family::Doubling:
        case Family::Logistic:
        case Family::MannevillePomeau:
        case Family::Tent:
        case Family::CatMap:
        case Family::Contraction:
            return true;
        default:
            return false;
    }
}

double SystemDescriptor::derivative_log_norm(const Point& p) const {
    switch (family_) {
        case Family::Doubling:
            return std::log(2.0);
        case Family::Logistic: {
            double d = std::fabs(p.x - 0.5);
            if (d < kSingularityGuard)
                throw SingularityError("logistic derivative at the critical point");
            return std::log(8.0 * param_ * d);  // |f'| = 4t|1-2x| = 8t|x-1/2|
        }
        case Family::MannevillePomeau:
            return std::log(1.0 + (1.0 + param_) * std::pow(p.x, param_));
        case Family::Tent: {
            if (std::fabs(p.x - 0.5) < kSingularityGuard)
                throw SingularityError("tent derivative at the kink");
            return std::log(2.0);
        }
        case Family::CatMap:
            return std::log(0.5 * (3.0 + std::sqrt(5.0)));
        case Family::Contraction:
            return std::log(0.5);
        default:
            throw UnsupportedFamilyError(std::string("no derivative for ") + family_name(family_));
    }
}

std::vector<double> SystemDescriptor::critical_set() const {
    if (!is_one_dimensional())
        throw UnsupportedFamilyError("critical_set: one-dimensional families only");
    switch (family_) {
        case Family::Logistic:
        case Family::Tent:
            return {0.5};
        default:
            return {};
    }
}

double SystemDescriptor::dist_to_critical(double x) const {
    auto c = critical_set();
    double best = std::numeric_limits<double>::infinity();
    for (double v : c) {
        double d = space_.coord_wraps(0) ? circle_dist(x, v) : std::fabs(x - v);
        best = std::min(best, d);
    }
    return best;
}

std::vector<double> SystemDescriptor::branch_cuts() const {
    switch (family_) {
        case Family::Logistic:
        case Family::Tent:
            return {0.5};
        case Family::MannevillePomeau:
            return {mp_wrap_};
        default:
            return {};
    }
}

double SystemDescriptor::lift(double x) const {
    switch (family_) {
        case Family::Doubling:
        case Family::SymbolicDoubling:
            return 2.0 * x;
        case Family::MannevillePomeau:
            return x + std::pow(x, 1.0 + param_);
        default:
            return evaluate({x, 0.0}).x;
    }
}

std::string SystemDescriptor::describe() const {
    std::string s = family_name(family_);
    switch (family_) {
        case Family::Logistic: s += "(t=" + std::to_string(param_) + ")"; break;
        case Family::MannevillePomeau: s += "(gamma=" + std::to_string(param_) + ")"; break;
        case Family::SkewTent:
        case Family::SkewLogistic:
            s += "(knots=" + std::to_string(phi_table_.size()) + ")";
            break;
        case Family::SymbolicDoubling:
            s += "[" + program_->serialize() + "]";
            break;
        default: break;
    }
    return s;
}

Point symbolic_initial_point(const SystemDescriptor& sys) {
    return {sys.program().value_at(0), 0.0};
}

// ---------------------------------------------------------------------------
// Orbits
// ---------------------------------------------------------------------------

OrbitStream::OrbitStream(const SystemDescriptor& sys, Point x0) : sys_(&sys) {
    if (sys.is_symbolic()) {
        const auto& prog = sys.program();
        double v0 = prog.value_at(0);
        if (std::fabs(x0.x - v0) > 1e-15 && x0.x != 0.0)
            throw ConfigError("symbolic orbit: x0 does not match the program's initial point");
        refill(1024);
        const int b = prog.bit_budget();
        window_ = 0;
        for (int k = 0; k < b; ++k) window_ = (window_ << 1) | bits_[static_cast<std::size_t>(k)];
        scale_ = std::ldexp(1.0, -b);
        cur_ = {static_cast<double>(window_) * scale_, 0.0};
        pos_ = 0;
    } else {
        if (!sys.space().contains(x0, 1e-12))
            throw ConfigError("orbit: x0 outside the phase space");
        cur_ = sys.space().reduce(x0);
        if (sys.space().kind == SpaceKind::Interval || sys.space().kind == SpaceKind::CircleInterval) {
            if (cur_.y < 0.0) cur_.y = 0.0;
            if (cur_.y > 1.0) cur_.y = 1.0;
            if (sys.space().kind == SpaceKind::Interval) {
                if (cur_.x < 0.0) cur_.x = 0.0;
                if (cur_.x > 1.0) cur_.x = 1.0;
            }
        }
    }
}

void OrbitStream::refill(std::int64_t upto) {
    const auto& prog = sys_->program();
    std::int64_t want = upto + prog.bit_budget() + 1;
    if (static_cast<std::int64_t>(bits_.size()) >= want) return;
    std::int64_t grown = std::max<std::int64_t>(want, static_cast<std::int64_t>(bits_.size()) * 2);
    bits_ = prog.materialize(grown);
}

bool OrbitStream::advance() {
    if (flag_ != OrbitFlag::Complete) return false;
    if (sys_->is_symbolic()) {
        const int b = sys_->program().bit_budget();
        ++pos_;
        refill(pos_);
        const std::uint64_t mask = (b >= 64) ? ~0ull : ((1ull << b) - 1ull);
        window_ = ((window_ << 1) & mask) |
                  bits_[static_cast<std::size_t>(pos_ + b - 1)];
        cur_ = {static_cast<double>(window_) * scale_, 0.0};
        return true;
    }
    Point next = sys_->evaluate(cur_);
    if (!std::isfinite(next.x) || !std::isfinite(next.y) || !sys_->space().contains(next, 1e-9)) {
        flag_ = OrbitFlag::LeftDomain;
        return false;
    }
    cur_ = sys_->space().reduce(next);
    return true;
}

Orbit orbit(const SystemDescriptor& sys, Point x0, std::int64_t n) {
    Orbit out;
    if (n <= 0) return out;
    OrbitStream stream(sys, x0);
    out.points.reserve(static_cast<std::size_t>(n));
    out.points.push_back(stream.current());
    for (std::int64_t j = 1; j < n; ++j) {
        if (!stream.advance()) {
            out.flag = stream.flag();
            break;
        }
        out.points.push_back(stream.current());
    }
    return out;
}

}  // namespace ergolab
