#include "ergolab/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "ergolab/errors.hpp"
#include "ergolab/rng.hpp"

namespace ergolab::harness {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, int line) {
    try {
        std::size_t used = 0;
        double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (...) {
        throw ConfigError("line " + std::to_string(line) + ": expected a number, got '" + v + "'");
    }
}

std::int64_t parse_int(const std::string& v, int line) {
    try {
        std::size_t used = 0;
        std::int64_t d = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (...) {
        throw ConfigError("line " + std::to_string(line) + ": expected an integer, got '" + v + "'");
    }
}

std::vector<double> parse_list(const std::string& v, int line) {
    std::vector<double> out;
    std::istringstream ss(v);
    std::string tok;
    while (ss >> tok) out.push_back(parse_double(tok, line));
    return out;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
    ExperimentConfig c;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(ln) + ": unterminated section header");
            section = line.substr(1, line.size() - 2);
            if (section != "experiment" && section != "system" && section != "budgets" &&
                section != "params")
                throw ConfigError("line " + std::to_string(ln) + ": unknown section [" + section + "]");
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(ln) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));

        if (section == "experiment") {
            if (key == "kind") c.kind = val;
            else if (key == "seed") c.seed = static_cast<std::uint64_t>(parse_int(val, ln));
            else if (key == "out") c.out_dir = val;
            else throw ConfigError("line " + std::to_string(ln) + ": unknown key '" + key + "' in [experiment]");
        } else if (section == "system") {
            if (key == "family") c.family = val;
            else if (key == "t") c.t = parse_double(val, ln);
            else if (key == "gamma") c.gamma = parse_double(val, ln);
            else if (key == "phi_table") c.phi_table = parse_list(val, ln);
            else if (key == "phi_const") c.phi_const = parse_double(val, ln);
            else if (key == "phi_knots") c.phi_knots = static_cast<int>(parse_int(val, ln));
            else if (key == "program") c.program = val;
            else if (key == "bits") c.bits = static_cast<int>(parse_int(val, ln));
            else if (key == "x0") { c.x0 = parse_double(val, ln); c.has_x0 = true; }
            else if (key == "y0") c.y0 = parse_double(val, ln);
            else throw ConfigError("line " + std::to_string(ln) + ": unknown key '" + key + "' in [system]");
        } else if (section == "budgets") {
            if (key == "N") c.N = parse_int(val, ln);
            else if (key == "m") c.m = static_cast<int>(parse_int(val, ln));
            else if (key == "P") c.P = static_cast<int>(parse_int(val, ln));
            else if (key == "K") c.K = parse_int(val, ln);
            else if (key == "n_max") c.n_max = static_cast<int>(parse_int(val, ln));
            else throw ConfigError("line " + std::to_string(ln) + ": unknown key '" + key + "' in [budgets]");
        } else if (section == "params") {
            if (key == "gamma_s") c.gamma_s = parse_double(val, ln);
            else if (key == "eps_c") c.eps_c = parse_double(val, ln);
            else if (key == "burn_in") c.burn_in = parse_int(val, ln);
            else if (key == "tail_fraction") c.tail_fraction = parse_double(val, ln);
            else if (key == "mass_floor") c.mass_floor = parse_double(val, ln);
            else if (key == "delta") c.delta = parse_double(val, ln);
            else if (key == "sigma") c.sigma = parse_double(val, ln);
            else if (key == "delta_t") c.delta_t = parse_double(val, ln);
            else if (key == "M") c.M = static_cast<int>(parse_int(val, ln));
            else if (key == "phi") c.phi = val;
            else if (key == "rho_b") c.rho_b = parse_double(val, ln);
            else if (key == "targets") c.targets = val;
            else if (key == "alpha_minus") c.alpha_minus = parse_double(val, ln);
            else if (key == "alpha_plus") c.alpha_plus = parse_double(val, ln);
            else if (key == "beta_minus") c.beta_minus = parse_double(val, ln);
            else if (key == "beta_plus") c.beta_plus = parse_double(val, ln);
            else if (key == "s1") c.s1 = parse_double(val, ln);
            else if (key == "t_global") c.t_global = parse_double(val, ln);
            else if (key == "U_lo") { c.u_lo = parse_double(val, ln); c.has_u = true; }
            else if (key == "U_hi") { c.u_hi = parse_double(val, ln); c.has_u = true; }
            else if (key == "padding") c.padding = static_cast<int>(parse_int(val, ln));
            else if (key == "samples") c.samples = static_cast<int>(parse_int(val, ln));
            else if (key == "eps") c.eps = parse_double(val, ln);
            else if (key == "p_center") c.p_center = parse_double(val, ln);
            else throw ConfigError("line " + std::to_string(ln) + ": unknown key '" + key + "' in [params]");
        } else {
            throw ConfigError("line " + std::to_string(ln) + ": key outside any section");
        }
    }
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

std::string ExperimentConfig::serialize() const {
    std::ostringstream o;
    o << "[experiment]\n";
    o << "kind = " << kind << "\n";
    o << "seed = " << seed << "\n";
    if (!out_dir.empty()) o << "out = " << out_dir << "\n";
    o << "\n[system]\n";
    o << "family = " << family << "\n";
    o << "t = " << fmt(t) << "\n";
    o << "gamma = " << fmt(gamma) << "\n";
    if (!phi_table.empty()) {
        o << "phi_table =";
        for (double v : phi_table) o << " " << fmt(v);
        o << "\n";
    }
    if (phi_const >= 0.0) o << "phi_const = " << fmt(phi_const) << "\n";
    o << "phi_knots = " << phi_knots << "\n";
    if (!program.empty()) o << "program = " << program << "\n";
    o << "bits = " << bits << "\n";
    if (has_x0) {
        o << "x0 = " << fmt(x0) << "\n";
        o << "y0 = " << fmt(y0) << "\n";
    }
    o << "\n[budgets]\n";
    o << "N = " << N << "\n";
    o << "m = " << m << "\n";
    o << "P = " << P << "\n";
    o << "K = " << K << "\n";
    o << "n_max = " << n_max << "\n";
    o << "\n[params]\n";
    o << "gamma_s = " << fmt(gamma_s) << "\n";
    o << "eps_c = " << fmt(eps_c) << "\n";
    o << "burn_in = " << burn_in << "\n";
    o << "tail_fraction = " << fmt(tail_fraction) << "\n";
    o << "mass_floor = " << fmt(mass_floor) << "\n";
    o << "delta = " << fmt(delta) << "\n";
    o << "sigma = " << fmt(sigma) << "\n";
    o << "delta_t = " << fmt(delta_t) << "\n";
    o << "M = " << M << "\n";
    o << "phi = " << phi << "\n";
    o << "rho_b = " << fmt(rho_b) << "\n";
    if (!targets.empty()) o << "targets = " << targets << "\n";
    o << "alpha_minus = " << fmt(alpha_minus) << "\n";
    o << "alpha_plus = " << fmt(alpha_plus) << "\n";
    o << "beta_minus = " << fmt(beta_minus) << "\n";
    o << "beta_plus = " << fmt(beta_plus) << "\n";
    o << "s1 = " << fmt(s1) << "\n";
    o << "t_global = " << fmt(t_global) << "\n";
    if (has_u) {
        o << "U_lo = " << fmt(u_lo) << "\n";
        o << "U_hi = " << fmt(u_hi) << "\n";
    }
    o << "padding = " << padding << "\n";
    o << "samples = " << samples << "\n";
    o << "eps = " << fmt(eps) << "\n";
    o << "p_center = " << fmt(p_center) << "\n";
    return o.str();
}

void ExperimentConfig::validate() const {
    if (kind != "orbit-stats" && kind != "spectrum" && kind != "optimize" && kind != "decompose" &&
        kind != "growing" && kind != "boweneye" && kind != "acceptance")
        throw ConfigError("unknown experiment kind: " + kind);
    if (N < 1 || N > 200000000)
        throw BudgetError("budget N exceeds the documented ceiling of 2*10^8");
    if (m < 1 || m > 4096) throw BudgetError("budget m exceeds the documented ceiling of 4096");
    if (P < 1 || P > 20) throw BudgetError("budget P exceeds the documented ceiling of 20");
    if (K < 1 || K > 1000000) throw BudgetError("budget K exceeds the documented ceiling of 10^6");
    if (n_max < 1 || n_max > 24) throw BudgetError("budget n_max exceeds the documented ceiling of 24");
    if (M < 1 || M > 32) throw BudgetError("family truncation M exceeds the documented ceiling of 32");
}

SystemDescriptor ExperimentConfig::make_system() const {
    const Family fam = family_from_name(family);
    switch (fam) {
        case Family::Doubling: return SystemDescriptor::doubling();
        case Family::Logistic: return SystemDescriptor::logistic(t);
        case Family::MannevillePomeau: return SystemDescriptor::manneville_pomeau(gamma);
        case Family::Tent: return SystemDescriptor::tent();
        case Family::CatMap: return SystemDescriptor::cat_map();
        case Family::Contraction: return SystemDescriptor::contraction();
        case Family::SkewTent:
        case Family::SkewLogistic: {
            std::vector<double> table = phi_table;
            if (table.empty() && phi_const >= 0.0)
                table.assign(static_cast<std::size_t>(phi_knots), phi_const);
            if (table.empty())
                throw ConfigError("skew families need phi_table or phi_const");
            return fam == Family::SkewTent ? SystemDescriptor::skew_tent(std::move(table))
                                           : SystemDescriptor::skew_logistic(std::move(table));
        }
        case Family::SymbolicDoubling: {
            if (program.empty()) throw ConfigError("symbolic_doubling needs a program");
            return SystemDescriptor::symbolic_doubling(BlockProgram::parse(program, bits));
        }
    }
    throw ConfigError("unknown family");
}

Point ExperimentConfig::initial_point(std::uint64_t stream) const {
    if (has_x0) return {x0, y0};
    const std::uint64_t h = mix64(seed, stream);
    return {u01(h), u01(splitmix64(h))};
}

std::function<double(const Point&)> ExperimentConfig::test_function() const {
    const std::string& id = phi;
    bool is_cos = id.rfind("cos", 0) == 0;
    bool is_sin = id.rfind("sin", 0) == 0;
    if (!is_cos && !is_sin)
        throw ConfigError("test function must be cos<k> or sin<k>, got '" + id + "'");
    int k = std::stoi(id.substr(3));
    if (k < 1 || k > 64) throw ConfigError("test function order must be in [1,64]");
    const double w = 6.283185307179586476925286766559 * k;
    if (is_cos)
        return [w](const Point& p) { return 0.5 * (1.0 + std::cos(w * p.x)); };
    return [w](const Point& p) { return 0.5 * (1.0 + std::sin(w * p.x)); };
}

}  // namespace ergolab::harness
