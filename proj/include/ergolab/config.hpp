#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ergolab/systems.hpp"

namespace ergolab::harness {

// One experiment per file. Structured text: [section] headers, key = value
// lines, '#' comments. Unknown keys are rejected with a line diagnostic.
struct ExperimentConfig {
    // [experiment]
    std::string kind = "orbit-stats";
    std::uint64_t seed = 0;
    std::string out_dir;

    // [system]
    std::string family = "doubling";
    double t = 1.0;
    double gamma = 1.0;
    std::vector<double> phi_table;
    double phi_const = -1.0;  // convenience: constant table when >= 0
    int phi_knots = 64;
    std::string program;  // block program text for symbolic_doubling
    int bits = 53;
    double x0 = 0.0;
    double y0 = 0.0;
    bool has_x0 = false;

    // [budgets]
    std::int64_t N = 100000;
    int m = 64;
    int P = 12;
    std::int64_t K = 200;
    int n_max = 10;

    // [params]
    double gamma_s = 1.05;
    double eps_c = 0.05;
    std::int64_t burn_in = 0;
    double tail_fraction = 0.5;
    double mass_floor = 1e-6;
    double delta = 0.05;
    double sigma = 0.9;
    double delta_t = 1e-3;
    int M = 16;
    std::string phi = "cos1";  // test function: cos<k> or sin<k> on coordinate 0
    double rho_b = 4.0;
    std::string targets;  // itinerary words separated by ';'
    double alpha_minus = -2.0, alpha_plus = 1.0, beta_minus = -2.0, beta_plus = 1.0;
    double s1 = 1.0;
    double t_global = 0.0;
    double u_lo = 0.0, u_hi = 0.0;
    bool has_u = false;
    int padding = 1;
    int samples = 0;  // 0 = default layout
    double eps = 0.2;
    double p_center = 0.5;

    static ExperimentConfig parse(const std::string& text);
    static ExperimentConfig load(const std::string& path);
    std::string serialize() const;

    // Documented per-kind ceilings; violation is a refusal that names the cap.
    void validate() const;

    SystemDescriptor make_system() const;
    Point initial_point(std::uint64_t stream = 0) const;  // x0 if given, else seeded
    std::function<double(const Point&)> test_function() const;
    bool is_symbolic() const { return family == "symbolic_doubling"; }
};

}  // namespace ergolab::harness
