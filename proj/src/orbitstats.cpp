#include "ergolab/orbitstats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "ergolab/errors.hpp"

namespace ergolab::stats {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

std::vector<std::int64_t> CheckpointSchedule::points(std::int64_t N) const {
    if (growth <= 1.0) throw ContractViolation("checkpoint schedule: growth must be > 1");
    std::vector<std::int64_t> out;
    double v = growth;
    std::int64_t prev = 0;
    while (true) {
        auto n = static_cast<std::int64_t>(std::ceil(v));
        if (n > N) break;
        if (n > prev) {
            out.push_back(n);
            prev = n;
        }
        v *= growth;
        if (v > 4.0e18) break;
    }
    if (out.empty() || out.back() != N) out.push_back(N);
    return out;
}

std::int64_t CheckpointSchedule::tail_start(std::int64_t N) {
    return static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(N))));
}

double TestFunctionFamily::eval(int n, const Point& p) const {
    const int idx = n - 1;
    const int per_freq = 2 * dimension;
    const int k = idx / per_freq + 1;
    const int within = idx % per_freq;
    const double v = (within / 2 == 0) ? p.x : p.y;
    const double a = kTwoPi * static_cast<double>(k) * v;
    return (within % 2 == 0) ? 0.5 * (1.0 + std::cos(a)) : 0.5 * (1.0 + std::sin(a));
}

double EmpiricalMeasure::total_mass() const {
    KahanSum s;
    for (double v : mass) s.add(v);
    return s.value();
}

double EmpiricalMeasure::integral(const TestFunctionFamily& family, int n) const {
    KahanSum s;
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(mass.size()); ++c) {
        if (mass[static_cast<std::size_t>(c)] == 0.0) continue;
        s.add(mass[static_cast<std::size_t>(c)] * family.eval(n, grid.cell_center(c)));
    }
    return s.value();
}

double measure_distance(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                        const TestFunctionFamily& family) {
    if (!mu.grid.compatible(nu.grid))
        throw ContractViolation("measure_distance: measures live on different grids");
    if (family.truncation < 1)
        throw ContractViolation("measure_distance: family truncation must be >= 1");
    double d = 0.0;
    for (int n = 1; n <= family.truncation; ++n)
        d += family.weight(n) * std::fabs(mu.integral(family, n) - nu.integral(family, n));
    return d;
}

OscillationReport birkhoff_series(const SystemDescriptor& sys, Point x0,
                                  const std::function<double(const Point&)>& phi,
                                  std::int64_t N, const CheckpointSchedule& schedule) {
    if (N < 2) throw ContractViolation("birkhoff_series: N must be >= 2");
    auto cps = schedule.points(N);
    OscillationReport rep;
    rep.budget = N;
    rep.tail_start = CheckpointSchedule::tail_start(N);

    OrbitStream stream(sys, x0);
    KahanSum sum;
    std::size_t ci = 0;
    for (std::int64_t j = 0; j < N; ++j) {
        sum.add(phi(stream.current()));
        const std::int64_t n = j + 1;
        if (ci < cps.size() && n == cps[ci]) {
            rep.checkpoints.push_back({n, sum.value() / static_cast<double>(n)});
            ++ci;
        }
        if (n < N && !stream.advance()) {
            rep.truncated = true;
            break;
        }
    }

    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    std::int64_t effective_tail = rep.tail_start;
    if (!rep.checkpoints.empty())
        effective_tail = std::min(effective_tail, rep.checkpoints.back().n);
    for (const auto& c : rep.checkpoints) {
        if (c.n < effective_tail) continue;
        hi = std::max(hi, c.average);
        lo = std::min(lo, c.average);
    }
    if (hi < lo) { hi = lo = rep.checkpoints.empty() ? 0.0 : rep.checkpoints.back().average; }
    rep.limsup = hi;
    rep.liminf = lo;
    rep.gap = hi - lo;
    return rep;
}

Region Region::interval(double lo, double hi) {
    Region r;
    r.kind = Kind::Interval;
    r.lo = lo;
    r.hi = hi;
    return r;
}

Region Region::cell_set(GridPartition grid, std::vector<std::int64_t> cells) {
    Region r;
    r.kind = Kind::Cells;
    r.grid = grid;
    std::sort(cells.begin(), cells.end());
    r.cells = std::move(cells);
    return r;
}

bool Region::contains(const SpaceDescriptor& space, const Point& p) const {
    if (kind == Kind::Cells)
        return std::binary_search(cells.begin(), cells.end(), grid.cell_of(p));
    double x = space.coord_wraps(0) ? wrap_unit(p.x) : p.x;
    if (lo <= hi) return x >= lo && x < hi;
    if (!space.coord_wraps(0))
        throw ContractViolation("region: wrapped interval on a non-wrapping space");
    return x >= lo || x < hi;
}

double visiting_frequency(const SystemDescriptor& sys, Point x0, const Region& U,
                          std::int64_t N, const CheckpointSchedule& schedule) {
    if (N < 1) throw ContractViolation("visiting_frequency: N must be >= 1");
    auto cps = schedule.points(N);
    const std::int64_t tail = CheckpointSchedule::tail_start(N);
    OrbitStream stream(sys, x0);
    std::int64_t inside = 0;
    double best = 0.0;
    bool any_tail = false;
    std::size_t ci = 0;
    for (std::int64_t j = 0; j < N; ++j) {
        if (U.contains(sys.space(), stream.current())) ++inside;
        const std::int64_t n = j + 1;
        if (ci < cps.size() && n == cps[ci]) {
            if (n >= tail) {
                best = std::max(best, static_cast<double>(inside) / static_cast<double>(n));
                any_tail = true;
            }
            ++ci;
        }
        if (n < N && !stream.advance()) break;
    }
    if (!any_tail && N > 0)
        best = static_cast<double>(inside) / static_cast<double>(N);
    return best;
}

EmpiricalMeasure empirical_measure(const SystemDescriptor& sys, Point x0, std::int64_t N,
                                   int m, std::int64_t burn_in) {
    if (!(N > burn_in && burn_in >= 0))
        throw ContractViolation("empirical_measure: need N > burn_in >= 0");
    if (m < 1) throw ContractViolation("empirical_measure: m must be >= 1");
    EmpiricalMeasure mu;
    mu.grid = GridPartition{sys.space(), m};
    std::vector<std::int64_t> counts(static_cast<std::size_t>(mu.grid.cell_count()), 0);
    OrbitStream stream(sys, x0);
    std::int64_t used = 0;
    for (std::int64_t j = 0; j < N; ++j) {
        if (j >= burn_in) {
            ++counts[static_cast<std::size_t>(mu.grid.cell_of(stream.current()))];
            ++used;
        }
        if (j + 1 < N && !stream.advance()) break;
    }
    mu.samples = used;
    mu.mass.resize(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
        mu.mass[i] = static_cast<double>(counts[i]) / static_cast<double>(used);
    return mu;
}

SpectrumEstimate statistical_spectrum(const SystemDescriptor& sys, Point x0, std::int64_t N,
                                      int m, const CheckpointSchedule& schedule, double eps_c,
                                      const TestFunctionFamily* family_in) {
    TestFunctionFamily family;
    family.dimension = sys.space().dimension();
    if (family_in) family = *family_in;

    auto cps = schedule.points(N);
    const std::int64_t tail = CheckpointSchedule::tail_start(N);
    std::int64_t tail_count = 0;
    for (auto n : cps)
        if (n >= tail) ++tail_count;
    if (tail_count < 20)
        throw BudgetError("statistical_spectrum: schedule yields fewer than 20 tail checkpoints");

    SpectrumEstimate est;
    est.eps_c = eps_c;
    est.schedule_growth = schedule.growth;
    est.budget = N;
    est.tail_checkpoints = tail_count;

    GridPartition grid{sys.space(), m};
    std::vector<std::int64_t> counts(static_cast<std::size_t>(grid.cell_count()), 0);
    std::vector<std::vector<double>> rep_integrals;

    OrbitStream stream(sys, x0);
    std::size_t ci = 0;
    for (std::int64_t j = 0; j < N; ++j) {
        ++counts[static_cast<std::size_t>(grid.cell_of(stream.current()))];
        const std::int64_t n = j + 1;
        if (ci < cps.size() && n == cps[ci]) {
            ++ci;
            if (n >= tail) {
                EmpiricalMeasure snap;
                snap.grid = grid;
                snap.samples = n;
                snap.mass.resize(counts.size());
                for (std::size_t i = 0; i < counts.size(); ++i)
                    snap.mass[i] = static_cast<double>(counts[i]) / static_cast<double>(n);
                std::vector<double> ints(static_cast<std::size_t>(family.truncation));
                for (int t = 1; t <= family.truncation; ++t)
                    ints[static_cast<std::size_t>(t - 1)] = snap.integral(family, t);

                double best = std::numeric_limits<double>::infinity();
                std::size_t best_rep = 0;
                for (std::size_t r = 0; r < rep_integrals.size(); ++r) {
                    double d = 0.0;
                    for (int t = 1; t <= family.truncation; ++t)
                        d += family.weight(t) *
                             std::fabs(ints[static_cast<std::size_t>(t - 1)] -
                                       rep_integrals[r][static_cast<std::size_t>(t - 1)]);
                    if (d < best) {
                        best = d;
                        best_rep = r;
                    }
                }
                if (best <= eps_c) {
                    ++est.hits[best_rep];
                } else {
                    est.representatives.push_back(std::move(snap));
                    est.hits.push_back(1);
                    rep_integrals.push_back(std::move(ints));
                }
            }
        }
        if (n < N && !stream.advance()) break;
    }
    return est;
}

std::vector<std::int64_t> statistical_omega_limit(const SpectrumEstimate& spectrum,
                                                  double mass_floor, std::int64_t min_hits) {
    if (!(mass_floor > 0.0))
        throw ContractViolation("statistical_omega_limit: mass_floor must be > 0");
    std::set<std::int64_t> cells;
    for (std::size_t r = 0; r < spectrum.representatives.size(); ++r) {
        if (spectrum.hits[r] < min_hits) continue;
        const auto& mu = spectrum.representatives[r];
        for (std::int64_t c = 0; c < static_cast<std::int64_t>(mu.mass.size()); ++c)
            if (mu.mass[static_cast<std::size_t>(c)] >= mass_floor) cells.insert(c);
    }
    return {cells.begin(), cells.end()};
}

std::vector<std::int64_t> omega_limit_estimate(const SystemDescriptor& sys, Point x0,
                                               std::int64_t N, int m, double tail_fraction) {
    if (!(tail_fraction > 0.0 && tail_fraction < 1.0))
        throw ContractViolation("omega_limit_estimate: need 0 < tail_fraction < 1");
    GridPartition grid{sys.space(), m};
    const std::int64_t start =
        N - static_cast<std::int64_t>(std::floor(tail_fraction * static_cast<double>(N)));
    std::vector<char> seen(static_cast<std::size_t>(grid.cell_count()), 0);
    OrbitStream stream(sys, x0);
    for (std::int64_t j = 0; j < N; ++j) {
        if (j >= start) seen[static_cast<std::size_t>(grid.cell_of(stream.current()))] = 1;
        if (j + 1 < N && !stream.advance()) break;
    }
    std::vector<std::int64_t> cells;
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(seen.size()); ++c)
        if (seen[static_cast<std::size_t>(c)]) cells.push_back(c);
    return cells;
}

}  // namespace ergolab::stats
