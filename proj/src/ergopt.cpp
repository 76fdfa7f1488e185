#include "ergolab/ergopt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "ergolab/errors.hpp"

namespace ergolab::opt {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    __int128 r = static_cast<__int128>(a) * b;
    if (r > INT64_MAX || r < INT64_MIN)
        throw BudgetError("rational arithmetic overflow; reduce the period budget");
    return static_cast<std::int64_t>(r);
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den == 0) throw ContractViolation("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

Rational Rational::operator+(const Rational& o) const {
    return Rational(checked_mul(num, o.den) + checked_mul(o.num, den), checked_mul(den, o.den));
}

Rational Rational::operator-(const Rational& o) const {
    return Rational(checked_mul(num, o.den) - checked_mul(o.num, den), checked_mul(den, o.den));
}

Rational Rational::operator*(const Rational& o) const {
    return Rational(checked_mul(num, o.num), checked_mul(den, o.den));
}

Rational Rational::mod1() const {
    std::int64_t r = num % den;
    if (r < 0) r += den;
    return Rational(r, den);
}

bool Rational::operator<(const Rational& o) const {
    return static_cast<__int128>(num) * o.den < static_cast<__int128>(o.num) * den;
}

double PeriodicOrbit::orbit_average(const std::function<double(const Point&)>& phi) const {
    double sum = 0.0;
    for (const auto& pt : points) sum += phi({pt.x.to_double(), pt.y.to_double()});
    return sum / static_cast<double>(points.size());
}

namespace {

// Doubling: fixed points of f^p are k/(2^p - 1). The p-bit expansion of k is
// the orbit's itinerary.
std::vector<PeriodicOrbit> enumerate_doubling(int P) {
    if (P < 1 || P > 20) throw BudgetError("doubling enumeration: P must be in [1,20]");
    std::vector<PeriodicOrbit> orbits;
    for (int p = 1; p <= P; ++p) {
        const std::int64_t den = (1ll << p) - 1;
        std::vector<char> seen(static_cast<std::size_t>(den), 0);
        for (std::int64_t k = 0; k < den; ++k) {
            if (seen[static_cast<std::size_t>(k)]) continue;
            std::vector<std::int64_t> idx;
            std::int64_t j = k;
            do {
                idx.push_back(j);
                seen[static_cast<std::size_t>(j)] = 1;
                j = (2 * j) % den;
            } while (j != k);
            if (static_cast<int>(idx.size()) != p) continue;  // minimal period only

            auto mn = std::min_element(idx.begin(), idx.end());
            std::rotate(idx.begin(), mn, idx.end());

            PeriodicOrbit orb;
            orb.period = p;
            orb.dimension = 1;
            for (std::int64_t v : idx) orb.points.push_back({Rational(v, den), Rational(0, 1)});
            // itinerary: bit j of the starting point's p-bit expansion
            std::int64_t k0 = idx.front();
            for (int b = p - 1; b >= 0; --b)
                orb.itinerary.push_back(((k0 >> b) & 1) ? '1' : '0');
            orbits.push_back(std::move(orb));
        }
    }
    return orbits;
}

struct Mat2 {
    std::int64_t a = 1, b = 0, c = 0, d = 1;
    Mat2 operator*(const Mat2& o) const {
        return {checked_mul(a, o.a) + checked_mul(b, o.c), checked_mul(a, o.b) + checked_mul(b, o.d),
                checked_mul(c, o.a) + checked_mul(d, o.c), checked_mul(c, o.b) + checked_mul(d, o.d)};
    }
};

RatPoint cat_apply(const RatPoint& p) {
    return {(p.x * Rational::from_int(2) + p.y).mod1(), (p.x + p.y).mod1()};
}

// Cat map: solutions of (M^p - I) x in Z^2 within [0,1)^2. They form the
// kernel of the torus endomorphism induced by A = M^p - I, a subgroup of
// order |det A| generated by the columns of A^{-1} = adj(A)/det.
std::vector<PeriodicOrbit> enumerate_cat(int P) {
    if (P < 1 || P > 12) throw BudgetError("cat map enumeration: P must be in [1,12]");
    const Mat2 M{2, 1, 1, 1};
    std::vector<PeriodicOrbit> orbits;
    std::set<RatPoint> taken;

    Mat2 Mp{1, 0, 0, 1};
    for (int p = 1; p <= P; ++p) {
        Mp = Mp * M;
        // A = M^p - I, adj(A) = [d -b; -c a]
        const std::int64_t a = Mp.a - 1, b = Mp.b, c = Mp.c, d = Mp.d - 1;
        const std::int64_t det = checked_mul(a, d) - checked_mul(b, c);
        const std::int64_t D = det < 0 ? -det : det;
        if (D == 0) continue;
        const std::int64_t sign = det < 0 ? -1 : 1;
        auto modD = [D](std::int64_t v) {
            std::int64_t r = v % D;
            return r < 0 ? r + D : r;
        };
        // g1 = adj(A) e0 / det = (d, -c)/det, order D/gcd(D,|d|,|c|)
        const std::int64_t g1x = modD(sign * d), g1y = modD(-sign * c);
        const std::int64_t g2x = modD(-sign * b), g2y = modD(sign * a);
        const std::int64_t ord1 = D / std::gcd(D, std::gcd(g1x, g1y));
        const std::int64_t m2 = D / ord1;

        std::set<std::pair<std::int64_t, std::int64_t>> numerators;
        for (std::int64_t k2 = 0; k2 < m2; ++k2) {
            const std::int64_t bx = modD(checked_mul(k2, g2x));
            const std::int64_t by = modD(checked_mul(k2, g2y));
            std::int64_t nx = bx, ny = by;
            for (std::int64_t k1 = 0; k1 < ord1; ++k1) {
                numerators.insert({nx, ny});
                nx += g1x; if (nx >= D) nx -= D;
                ny += g1y; if (ny >= D) ny -= D;
            }
        }
        if (static_cast<std::int64_t>(numerators.size()) != D)
            throw ContractViolation("cat map kernel enumeration does not match |det|");
        std::vector<RatPoint> pts;
        pts.reserve(numerators.size());
        for (const auto& [nx, ny] : numerators)
            pts.push_back({Rational(nx, D), Rational(ny, D)});
        std::sort(pts.begin(), pts.end());

        for (const auto& start : pts) {
            if (taken.count(start)) continue;
            std::vector<RatPoint> cyc;
            RatPoint cur = start;
            do {
                cyc.push_back(cur);
                cur = cat_apply(cur);
            } while (!(cur == start));
            if (static_cast<int>(cyc.size()) != p) {
                // minimal period divides p and was found at the smaller p
                for (const auto& q : cyc) taken.insert(q);
                continue;
            }
            auto mn = std::min_element(cyc.begin(), cyc.end());
            std::rotate(cyc.begin(), mn, cyc.end());
            for (const auto& q : cyc) taken.insert(q);

            PeriodicOrbit orb;
            orb.period = p;
            orb.dimension = 2;
            orb.points = std::move(cyc);
            orbits.push_back(std::move(orb));
        }
    }
    return orbits;
}

}  // namespace

std::vector<PeriodicOrbit> enumerate_periodic_orbits(const SystemDescriptor& sys, int P) {
    switch (sys.family()) {
        case Family::Doubling:
        case Family::SymbolicDoubling:
            return enumerate_doubling(P);
        case Family::CatMap:
            return enumerate_cat(P);
        default:
            throw UnsupportedFamilyError("periodic-orbit enumeration supports doubling and cat_map");
    }
}

MaximizationResult max_birkhoff_over_periodic(const SystemDescriptor& sys,
                                              const std::function<double(const Point&)>& phi,
                                              int P) {
    auto orbits = enumerate_periodic_orbits(sys, P);
    MaximizationResult res;
    res.max_period_scanned = P;
    res.per_period_best.assign(static_cast<std::size_t>(P), -std::numeric_limits<double>::infinity());

    bool have = false;
    for (const auto& orb : orbits) {
        const double avg = orb.orbit_average(phi);
        for (int p = orb.period; p <= P; ++p) {
            auto& slot = res.per_period_best[static_cast<std::size_t>(p - 1)];
            slot = std::max(slot, avg);
        }
        bool better = false;
        if (!have || avg > res.best_value + 1e-15) {
            better = true;
        } else if (std::fabs(avg - res.best_value) <= 1e-15) {
            if (orb.period < res.witness.period)
                better = true;
            else if (orb.period == res.witness.period && orb.points.front() < res.witness.points.front())
                better = true;
        }
        if (better) {
            res.best_value = avg;
            res.witness = orb;
            have = true;
        }
    }
    if (!have) throw BudgetError("max_birkhoff_over_periodic: no orbits enumerated");
    return res;
}

BlockProgram construct_oscillating_orbit_words(const std::vector<std::string>& target_words,
                                               double rho_b, std::int64_t total_bits,
                                               int bit_budget) {
    if (target_words.empty())
        throw ContractViolation("construct_oscillating_orbit: targets must be nonempty");
    if (!(rho_b > 1.0))
        throw ContractViolation("construct_oscillating_orbit: rho_b must be > 1");
    for (const auto& w : target_words) {
        if (w.empty()) throw ContractViolation("construct_oscillating_orbit: empty target word");
        for (char ch : w)
            if (ch != '0' && ch != '1')
                throw ContractViolation("construct_oscillating_orbit: itineraries must be binary");
    }

    std::vector<BlockRun> runs;
    std::int64_t cumulative = 0;
    std::int64_t k = 0;  // block index, 0-based
    double ratio = 1.0;  // rho_b^k
    while (cumulative < total_bits) {
        const std::string& word = target_words[static_cast<std::size_t>(k) % target_words.size()];
        const auto wlen = static_cast<std::int64_t>(word.size());
        std::int64_t len;
        if (k == 0) {
            len = wlen;
        } else {
            double want = ratio * static_cast<double>(cumulative);
            if (want > 9.0e18) want = 9.0e18;
            len = static_cast<std::int64_t>(std::ceil(want));
        }
        len = std::min(len, total_bits - cumulative);
        std::int64_t reps = (len + wlen - 1) / wlen;  // round the block up to whole words
        if (reps < 1) reps = 1;
        runs.push_back(BlockRun{word, reps});
        cumulative += reps * wlen;
        ++k;
        ratio *= rho_b;
    }
    if (k < static_cast<std::int64_t>(target_words.size()))
        throw BudgetError("construct_oscillating_orbit: total bits too small for one full target cycle");
    return BlockProgram(std::move(runs), bit_budget);
}

BlockProgram construct_oscillating_orbit(const std::vector<PeriodicOrbit>& targets,
                                         double rho_b, std::int64_t total_bits, int bit_budget) {
    std::vector<std::string> words;
    for (const auto& t : targets) {
        if (t.itinerary.empty())
            throw UnsupportedFamilyError(
                "construct_oscillating_orbit: targets need binary itineraries (doubling only)");
        words.push_back(t.itinerary);
    }
    return construct_oscillating_orbit_words(words, rho_b, total_bits, bit_budget);
}

}  // namespace ergolab::opt
