#include "ergolab/boweneye.hpp"

#include <algorithm>
#include <cmath>

#include "ergolab/errors.hpp"

namespace ergolab::bowen {

void SaddleParams::validate() const {
    if (!(alpha_minus < 0.0 && beta_minus < 0.0))
        throw ConfigError("bowen eye: alpha_minus and beta_minus must be negative");
    if (!(alpha_plus > 0.0 && beta_plus > 0.0))
        throw ConfigError("bowen eye: alpha_plus and beta_plus must be positive");
    if (!(entry_log_distance > 0.0)) throw ConfigError("bowen eye: s_1 must be positive");
    if (t_global < 0.0) throw ConfigError("bowen eye: t_global must be >= 0");
}

SojournTrace simulate(const SaddleParams& params) {
    params.validate();
    if (params.passes < 4) throw ContractViolation("bowen eye: need K >= 4");
    const double r_after_a = -params.alpha_minus / params.beta_plus;
    const double r_after_b = -params.beta_minus / params.alpha_plus;

    SojournTrace trace;
    trace.passes.reserve(static_cast<std::size_t>(params.passes));
    double s = params.entry_log_distance;
    double near_a = 0.0, total = 0.0;
    for (std::int64_t k = 1; k <= params.passes; ++k) {
        const bool at_a = (k % 2 == 1);
        const double tau = at_a ? s / params.beta_plus : s / params.alpha_plus;
        if (at_a) near_a += tau;
        total += tau + params.t_global;

        SojournPass pass;
        pass.index = k;
        pass.saddle = at_a ? 'A' : 'B';
        pass.log_distance = s;
        pass.sojourn_time = tau;
        pass.fraction_near_a = near_a / total;
        trace.passes.push_back(pass);

        s *= at_a ? r_after_a : r_after_b;
        if (s > 1e300 || total > 1e300) {
            // exact power-of-two rescaling: the running fraction is a ratio,
            // so scaling s and both accumulators together preserves it
            const double scale = 0x1p-512;
            s *= scale;
            near_a *= scale;
            total *= scale;
            ++trace.rescales;
        }
    }
    trace.time_near_a = near_a;
    trace.total_time = total;
    return trace;
}

FractionLimits fraction_limit_points(const SaddleParams& params, std::int64_t K) {
    if (K < 40) throw ContractViolation("fraction_limit_points: need K >= 40");
    SaddleParams p = params;
    p.passes = K;
    const auto trace = simulate(p);
    FractionLimits lims;
    lims.limsup = -1.0;
    lims.liminf = 2.0;
    for (const auto& pass : trace.passes) {
        if (pass.index < K / 2) continue;
        lims.limsup = std::max(lims.limsup, pass.fraction_near_a);
        lims.liminf = std::min(lims.liminf, pass.fraction_near_a);
    }
    return lims;
}

EtaMeasure eta_measure(const SaddleParams& params) {
    params.validate();
    EtaMeasure eta;
    eta.c_a = -params.alpha_minus / (-params.alpha_minus + params.beta_plus);
    eta.c_b = -params.beta_minus / (-params.beta_minus + params.alpha_plus);
    return eta;
}

TakensReport takens_condition(const SaddleParams& params) {
    const auto eta = eta_measure(params);
    TakensReport rep;
    rep.rho = (-params.alpha_minus * -params.beta_minus) / (params.alpha_plus * params.beta_plus);
    rep.diverges = rep.rho > 1.0;
    rep.printed_product = eta.c_a * eta.c_b;
    rep.coefficient_sum = eta.mass();
    rep.sum_in_range = rep.diverges && rep.coefficient_sum > 1.0 && rep.coefficient_sum < 2.0;
    return rep;
}

}  // namespace ergolab::bowen
