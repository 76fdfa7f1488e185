#pragma once

#include <cstdint>
#include <vector>

namespace ergolab::bowen {

// Saddle data for the two-saddle heteroclinic cycle: alpha_minus < 0 < alpha_plus
// are the eigenvalues at saddle A, beta_minus < 0 < beta_plus at saddle B.
struct SaddleParams {
    double alpha_minus = -2.0;
    double alpha_plus = 1.0;
    double beta_minus = -2.0;
    double beta_plus = 1.0;
    double entry_log_distance = 1.0;  // s_1 > 0
    std::int64_t passes = 200;        // cap K
    double t_global = 0.0;            // per-pass global-transition time, >= 0

    void validate() const;
};

struct SojournPass {
    std::int64_t index = 0;  // k, 1-based
    char saddle = 'A';       // A for odd k, B for even k
    double log_distance = 0.0;  // s_k
    double sojourn_time = 0.0;  // tau_k
    double fraction_near_a = 0.0;  // running fraction after this pass
};

struct SojournTrace {
    std::vector<SojournPass> passes;
    double time_near_a = 0.0;  // cumulative, possibly rescaled
    double total_time = 0.0;
    int rescales = 0;  // power-of-two rescalings applied past 1e300
};

// Linearized passage law: s_{k+1} = r s_k with r = |alpha_-|/beta_+ after an
// A-pass and r = |beta_-|/alpha_+ after a B-pass; tau_k = s_k/beta_+ at A and
// s_k/alpha_+ at B. Rescaling by powers of two keeps the running fraction
// exact when times pass 1e300.
SojournTrace simulate(const SaddleParams& params);

struct FractionLimits {
    double limsup = 0.0;
    double liminf = 0.0;
};

// Extrema of the running fraction near A over passes in [K/2, K].
FractionLimits fraction_limit_points(const SaddleParams& params, std::int64_t K);

struct EtaMeasure {
    double c_a = 0.0;  // |alpha_-| / (|alpha_-| + beta_+)
    double c_b = 0.0;  // |beta_-| / (|beta_-| + alpha_+)
    double mass() const { return c_a + c_b; }
};

EtaMeasure eta_measure(const SaddleParams& params);

struct TakensReport {
    bool diverges = false;   // rho > 1
    double rho = 0.0;        // (|alpha_-| |beta_-|) / (alpha_+ beta_+)
    double printed_product = 0.0;  // c_a * c_b, the footnote's literal quantity
    double coefficient_sum = 0.0;  // c_a + c_b
    bool sum_in_range = false;     // 1 < c_a + c_b < 2, evaluated when rho > 1
};

// Divergence criterion: the printed product condition is unsatisfiable (both
// factors are < 1), so rho > 1 is the operative test; the printed quantity is
// reported alongside.
TakensReport takens_condition(const SaddleParams& params);

}  // namespace ergolab::bowen
