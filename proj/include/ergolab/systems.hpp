#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ergolab/blockprog.hpp"
#include "ergolab/space.hpp"

namespace ergolab {

enum class Family {
    Doubling,          // x -> 2x mod 1 on the circle
    Logistic,          // x -> 4 t x (1-x) on [0,1], t in (0,1]
    MannevillePomeau,  // x -> x + x^{1+gamma} mod 1 on the circle, gamma >= 1
    Tent,              // x -> 1 - |2x-1| on [0,1]
    CatMap,            // (x,y) -> (2x+y, x+y) mod 1 on the torus
    SkewTent,          // ([x],t) -> (2x mod 1, phi([x]) (1-|2t-1|)) on circle x [0,1]
    SkewLogistic,      // ([x],t) -> (2x mod 1, 4 phi([x]) t (1-t)) on circle x [0,1]
    SymbolicDoubling,  // exact doubling via bit-shift of a block program
    Contraction,       // x -> x/2 on [0,1]
};

const char* family_name(Family f);
Family family_from_name(const std::string& name);

// A map of the zoo together with its phase space, parameters and, where the
// dynamics is symbolic, its exact variant. Immutable after construction.
class SystemDescriptor {
public:
    static SystemDescriptor doubling();
    static SystemDescriptor logistic(double t);
    static SystemDescriptor manneville_pomeau(double gamma);
    static SystemDescriptor tent();
    static SystemDescriptor cat_map();
    static SystemDescriptor skew_tent(std::vector<double> phi_table);
    static SystemDescriptor skew_logistic(std::vector<double> phi_table);
    static SystemDescriptor symbolic_doubling(BlockProgram program);
    static SystemDescriptor contraction();

    Family family() const { return family_; }
    const SpaceDescriptor& space() const { return space_; }
    double param() const { return param_; }
    const std::vector<double>& phi_table() const { return phi_table_; }
    const BlockProgram& program() const;

    Point evaluate(const Point& p) const;

    // log|f'(x)| for one-dimensional families; for the cat map the log expansion
    // rate along the unstable eigendirection (constant).
    double derivative_log_norm(const Point& p) const;
    bool has_derivative() const;

    // Critical set of one-dimensional families (zero set of the derivative).
    std::vector<double> critical_set() const;

    double dist_to_critical(double x) const;

    // Piecewise-linear table lookup on the uniform base grid (skew families).
    double phi_at(double base_x) const;

    // Interior points of [0,1) where the one-dimensional branch tracking must
    // split (critical points plus, for Manneville-Pomeau, the point where the
    // +x^{1+gamma} term first wraps). Empty for the doubling covering.
    std::vector<double> branch_cuts() const;

    bool is_symbolic() const { return family_ == Family::SymbolicDoubling; }
    bool is_one_dimensional() const { return space_.dimension() == 1; }

    // Lift of a circle endomorphism to [0, degree); identity semantics for
    // interval families. Used by branch tracking and preimage enumeration.
    double lift(double x) const;

    std::string describe() const;

private:
    SystemDescriptor() = default;

    Family family_ = Family::Doubling;
    SpaceDescriptor space_;
    double param_ = 0.0;
    std::vector<double> phi_table_;
    std::optional<BlockProgram> program_;
    double mp_wrap_ = 0.0;  // root of x + x^{1+gamma} = 1 (Manneville-Pomeau)
};

// Orbit truncation reasons. Truncation happens only at exact critical
// collisions or when evaluation leaves the space at machine precision.
enum class OrbitFlag { Complete, CriticalCollision, LeftDomain };

struct Orbit {
    std::vector<Point> points;
    OrbitFlag flag = OrbitFlag::Complete;
};

// (x0, f(x0), ..., f^{n-1}(x0)); deterministic, bit-identical across runs.
// Symbolic systems iterate the program by exact shift; x0 must then match the
// program's induced initial point.
Orbit orbit(const SystemDescriptor& sys, Point x0, std::int64_t n);

// Streaming orbit access, one point at a time (no storage).
class OrbitStream {
public:
    OrbitStream(const SystemDescriptor& sys, Point x0);

    const Point& current() const { return cur_; }
    bool advance();  // returns false once truncated
    OrbitFlag flag() const { return flag_; }

private:
    const SystemDescriptor* sys_;
    Point cur_;
    OrbitFlag flag_ = OrbitFlag::Complete;
    // symbolic fast path: materialized bits and a sliding window
    std::vector<std::uint8_t> bits_;
    std::int64_t pos_ = 0;
    std::uint64_t window_ = 0;
    double scale_ = 0.0;
    void refill(std::int64_t upto);
};

Point symbolic_initial_point(const SystemDescriptor& sys);

}  // namespace ergolab
