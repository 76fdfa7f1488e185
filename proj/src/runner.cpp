#include "ergolab/runner.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ergolab/acceptance.hpp"
#include "ergolab/boweneye.hpp"
#include "ergolab/decompose.hpp"
#include "ergolab/ergopt.hpp"
#include "ergolab/errors.hpp"
#include "ergolab/growing.hpp"
#include "ergolab/orbitstats.hpp"

namespace ergolab::harness {

using nlohmann::json;

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

json RunReport::to_json() const {
    json j;
    j["config"] = config_echo;
    j["results"] = results;
    j["meta"] = {{"wall_seconds", wall_seconds}, {"version", version}, {"exit_code", exit_code}};
    return j;
}

std::uint64_t RunReport::results_hash() const { return fnv1a64(results.dump()); }

namespace {

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
    if (dir.empty()) return;
    std::filesystem::create_directories(dir);
    std::ofstream f(std::filesystem::path(dir) / name);
    f << content;
}

json checkpoint_json(const std::vector<stats::CheckpointAverage>& cps) {
    json arr = json::array();
    for (const auto& c : cps) arr.push_back({{"n", c.n}, {"average", c.average}});
    return arr;
}

// orbit-stats: oscillation report, optional visiting frequency, omega estimate,
// and the per-checkpoint CSV (n, average, d-to-first-checkpoint).
json run_orbit_stats(const ExperimentConfig& cfg, std::string* csv_out) {
    const auto sys = cfg.make_system();
    const Point x0 = cfg.is_symbolic() ? symbolic_initial_point(sys) : cfg.initial_point();
    const stats::CheckpointSchedule schedule{cfg.gamma_s};
    const auto phi = cfg.test_function();

    auto report = stats::birkhoff_series(sys, x0, phi, cfg.N, schedule);

    json res;
    res["limsup"] = report.limsup;
    res["liminf"] = report.liminf;
    res["gap"] = report.gap;
    res["budget"] = report.budget;
    res["tail_start"] = report.tail_start;
    res["truncated"] = report.truncated;
    res["checkpoints"] = checkpoint_json(report.checkpoints);

    if (cfg.has_u) {
        const auto region = stats::Region::interval(wrap_unit(cfg.u_lo), wrap_unit(cfg.u_hi));
        res["visiting_frequency"] = stats::visiting_frequency(sys, x0, region, cfg.N, schedule);
    }
    const auto omega = stats::omega_limit_estimate(sys, x0, cfg.N, cfg.m, cfg.tail_fraction);
    res["omega_cells"] = omega;
    res["omega_cell_count"] = omega.size();

    if (csv_out) {
        // distances of each checkpoint measure to the first checkpoint measure
        stats::TestFunctionFamily family;
        family.dimension = sys.space().dimension();
        family.truncation = cfg.M;
        GridPartition grid{sys.space(), cfg.m};
        std::vector<std::int64_t> counts(static_cast<std::size_t>(grid.cell_count()), 0);
        auto cps = schedule.points(cfg.N);
        std::vector<double> first_ints;
        std::ostringstream csv;
        csv << "n,average,dist_to_first_checkpoint\n";
        OrbitStream stream(sys, x0);
        stats::KahanSum sum;
        std::size_t ci = 0;
        for (std::int64_t j = 0; j < cfg.N; ++j) {
            sum.add(phi(stream.current()));
            ++counts[static_cast<std::size_t>(grid.cell_of(stream.current()))];
            const std::int64_t n = j + 1;
            if (ci < cps.size() && n == cps[ci]) {
                ++ci;
                stats::EmpiricalMeasure snap;
                snap.grid = grid;
                snap.samples = n;
                snap.mass.resize(counts.size());
                for (std::size_t i = 0; i < counts.size(); ++i)
                    snap.mass[i] = static_cast<double>(counts[i]) / static_cast<double>(n);
                std::vector<double> ints(static_cast<std::size_t>(family.truncation));
                for (int t = 1; t <= family.truncation; ++t)
                    ints[static_cast<std::size_t>(t - 1)] = snap.integral(family, t);
                if (first_ints.empty()) first_ints = ints;
                double d = 0.0;
                for (int t = 1; t <= family.truncation; ++t)
                    d += family.weight(t) * std::fabs(ints[static_cast<std::size_t>(t - 1)] -
                                                      first_ints[static_cast<std::size_t>(t - 1)]);
                csv << n << "," << sum.value() / static_cast<double>(n) << "," << d << "\n";
            }
            if (n < cfg.N && !stream.advance()) break;
        }
        *csv_out = csv.str();
    }
    return res;
}

json run_spectrum(const ExperimentConfig& cfg, std::string* csv_out) {
    const auto sys = cfg.make_system();
    const Point x0 = cfg.is_symbolic() ? symbolic_initial_point(sys) : cfg.initial_point();
    const stats::CheckpointSchedule schedule{cfg.gamma_s};
    stats::TestFunctionFamily family;
    family.dimension = sys.space().dimension();
    family.truncation = cfg.M;

    const auto spectrum =
        stats::statistical_spectrum(sys, x0, cfg.N, cfg.m, schedule, cfg.eps_c, &family);
    const auto omega_star = stats::statistical_omega_limit(spectrum, cfg.mass_floor);

    json res;
    res["representative_count"] = spectrum.representatives.size();
    res["tail_checkpoints"] = spectrum.tail_checkpoints;
    res["eps_c"] = spectrum.eps_c;
    json reps = json::array();
    for (std::size_t r = 0; r < spectrum.representatives.size(); ++r) {
        const auto& mu = spectrum.representatives[r];
        json cells = json::object();
        for (std::size_t c = 0; c < mu.mass.size(); ++c)
            if (mu.mass[c] > 0.0) cells[std::to_string(c)] = mu.mass[c];
        reps.push_back({{"hits", spectrum.hits[r]}, {"samples", mu.samples}, {"mass", cells}});
    }
    res["representatives"] = reps;
    res["omega_star_cells"] = omega_star;

    double max_sep = 0.0;
    for (std::size_t a = 0; a < spectrum.representatives.size(); ++a)
        for (std::size_t b = a + 1; b < spectrum.representatives.size(); ++b)
            max_sep = std::max(max_sep, stats::measure_distance(spectrum.representatives[a],
                                                                spectrum.representatives[b], family));
    res["max_pairwise_distance"] = max_sep;

    if (csv_out) {
        std::ostringstream csv;
        csv << "representative,hits,samples\n";
        for (std::size_t r = 0; r < spectrum.representatives.size(); ++r)
            csv << r << "," << spectrum.hits[r] << "," << spectrum.representatives[r].samples << "\n";
        *csv_out = csv.str();
    }
    return res;
}

json rational_json(const opt::Rational& r) {
    return std::to_string(r.num) + "/" + std::to_string(r.den);
}

json run_optimize(const ExperimentConfig& cfg) {
    const auto sys = cfg.make_system();
    const auto phi = cfg.test_function();
    const auto result = opt::max_birkhoff_over_periodic(sys, phi, cfg.P);

    json res;
    res["best_value"] = result.best_value;
    res["max_period_scanned"] = result.max_period_scanned;
    res["per_period_best"] = result.per_period_best;
    json witness;
    witness["period"] = result.witness.period;
    witness["itinerary"] = result.witness.itinerary;
    json pts = json::array();
    for (const auto& p : result.witness.points) {
        if (result.witness.dimension == 1)
            pts.push_back(rational_json(p.x));
        else
            pts.push_back(json::array({rational_json(p.x), rational_json(p.y)}));
    }
    witness["points"] = pts;
    res["witness"] = witness;

    if (!cfg.targets.empty()) {
        std::vector<std::string> words;
        std::string tok;
        std::istringstream ss(cfg.targets);
        while (std::getline(ss, tok, ';'))
            if (!tok.empty()) words.push_back(tok);
        const auto program = opt::construct_oscillating_orbit_words(words, cfg.rho_b, cfg.N, cfg.bits);
        res["oscillating_program"] = program.serialize();
    }
    return res;
}

json run_decompose(const ExperimentConfig& cfg, std::string* edges_csv, std::string* raster_csv) {
    const auto sys = cfg.make_system();
    const auto graph = decomp::build_transition_graph(sys, cfg.m, cfg.samples, cfg.padding, cfg.seed);
    const auto report = decomp::attractors_and_basins(graph);
    const auto [transitive, witness] = decomp::strong_transitivity_check(graph);

    json res;
    res["cells"] = graph.cell_count();
    res["attractor_count"] = report.attractor_count;
    json atts = json::array();
    for (const auto& a : report.attractors) {
        atts.push_back({{"cells", a.cells},
                        {"basin_size", a.basin.size()},
                        {"fat", a.fat},
                        {"inscribed_radius", a.inscribed_radius}});
    }
    res["attractors"] = atts;
    res["undecided_cells"] = report.undecided.size();
    res["omega_estimate_cells"] = report.omega_estimate.size();
    {
        std::vector<std::int32_t> labels(static_cast<std::size_t>(graph.cell_count()), -1);
        for (std::size_t k = 0; k < report.attractors.size(); ++k)
            for (auto v : report.attractors[k].basin)
                labels[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(k);
        res["basin_labels"] = labels;
    }
    res["strongly_transitive"] = transitive;
    if (witness) res["transitivity_witness"] = {{"source", witness->source}, {"unreached", witness->unreached}};

    if (edges_csv) {
        std::ostringstream csv;
        csv << "src,dst\n";
        for (std::size_t v = 0; v < graph.edges.size(); ++v)
            for (auto to : graph.edges[v]) csv << v << "," << to << "\n";
        *edges_csv = csv.str();
    }
    if (raster_csv) {
        std::vector<std::int32_t> label(static_cast<std::size_t>(graph.cell_count()), -1);
        for (std::size_t k = 0; k < report.attractors.size(); ++k)
            for (auto v : report.attractors[k].basin) label[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(k);
        std::ostringstream csv;
        csv << "cell,label\n";
        for (std::size_t v = 0; v < label.size(); ++v) csv << v << "," << label[v] << "\n";
        *raster_csv = csv.str();
    }
    return res;
}

json run_growing(const ExperimentConfig& cfg, std::string* csv_out) {
    const auto sys = cfg.make_system();
    const Point x0 = cfg.initial_point();
    const auto record = grow::growing_times(sys, x0.x, cfg.delta, cfg.N);
    const auto diag = grow::nue_averages(sys, x0.x, std::max<std::int64_t>(cfg.N, 2), cfg.delta_t,
                                         stats::CheckpointSchedule{cfg.gamma_s});

    json res;
    res["x0"] = record.x0;
    res["delta"] = record.delta;
    res["budget"] = record.budget;
    res["growing_time_count"] = record.times.size();
    res["density"] = record.density();
    res["truncated"] = record.flag != OrbitFlag::Complete;
    res["slow_recurrence_average"] = diag.slow_recurrence_average;
    res["expansion_average"] = diag.expansion_average;
    res["nue_truncated"] = diag.truncated;

    const auto pair = grow::horseshoe_search(sys, cfg.p_center, cfg.eps, cfg.n_max);
    if (pair) {
        res["horseshoe"] = {{"u0", {pair->u0_lo, pair->u0_hi}},
                            {"n0", pair->n0},
                            {"u1", {pair->u1_lo, pair->u1_hi}},
                            {"n1", pair->n1},
                            {"entropy_lower_bound", grow::entropy_lower_bound(pair->n0, pair->n1)}};
    } else {
        res["horseshoe"] = nullptr;
    }

    if (csv_out) {
        std::ostringstream csv;
        csv << "n,q,left,right,diameter\n";
        for (const auto& gt : record.times)
            csv << gt.n << "," << gt.q << "," << gt.v_lo << "," << gt.v_hi << "," << gt.diameter
                << "\n";
        *csv_out = csv.str();
    }
    return res;
}

json run_boweneye(const ExperimentConfig& cfg, std::string* csv_out) {
    bowen::SaddleParams params;
    params.alpha_minus = cfg.alpha_minus;
    params.alpha_plus = cfg.alpha_plus;
    params.beta_minus = cfg.beta_minus;
    params.beta_plus = cfg.beta_plus;
    params.entry_log_distance = cfg.s1;
    params.passes = cfg.K;
    params.t_global = cfg.t_global;

    const auto trace = bowen::simulate(params);
    const auto limits = bowen::fraction_limit_points(params, cfg.K);
    const auto takens = bowen::takens_condition(params);
    const auto eta = bowen::eta_measure(params);

    json res;
    res["limsup"] = limits.limsup;
    res["liminf"] = limits.liminf;
    res["rho"] = takens.rho;
    res["diverges"] = takens.diverges;
    res["printed_product"] = takens.printed_product;
    res["coefficient_sum"] = takens.coefficient_sum;
    res["c_a"] = eta.c_a;
    res["c_b"] = eta.c_b;
    res["eta_mass"] = eta.mass();
    res["rescales"] = trace.rescales;

    if (csv_out) {
        std::ostringstream csv;
        csv << "pass,saddle,log_distance,sojourn_time,fraction_near_a\n";
        for (const auto& p : trace.passes)
            csv << p.index << "," << p.saddle << "," << p.log_distance << "," << p.sojourn_time
                << "," << p.fraction_near_a << "\n";
        *csv_out = csv.str();
    }
    return res;
}

}  // namespace

RunReport run(const ExperimentConfig& cfg) {
    cfg.validate();
    RunReport report;
    report.config_echo = cfg.serialize();

    const auto start = std::chrono::steady_clock::now();
    std::string csv_a, csv_b;
    {
        if (cfg.kind == "orbit-stats") {
            report.results = run_orbit_stats(cfg, &csv_a);
            write_file(cfg.out_dir, "checkpoints.csv", csv_a);
        } else if (cfg.kind == "spectrum") {
            report.results = run_spectrum(cfg, &csv_a);
            write_file(cfg.out_dir, "representatives.csv", csv_a);
        } else if (cfg.kind == "optimize") {
            report.results = run_optimize(cfg);
        } else if (cfg.kind == "decompose") {
            report.results = run_decompose(cfg, &csv_a, &csv_b);
            write_file(cfg.out_dir, "edges.csv", csv_a);
            write_file(cfg.out_dir, "raster.csv", csv_b);
        } else if (cfg.kind == "growing") {
            report.results = run_growing(cfg, &csv_a);
            write_file(cfg.out_dir, "growing_times.csv", csv_a);
        } else if (cfg.kind == "boweneye") {
            report.results = run_boweneye(cfg, &csv_a);
            write_file(cfg.out_dir, "trace.csv", csv_a);
        } else if (cfg.kind == "acceptance") {
            std::ostringstream log;
            const auto criteria = run_acceptance_suite(log);
            json arr = json::array();
            bool all_pass = true;
            for (const auto& c : criteria) {
                arr.push_back({{"id", c.id},
                               {"name", c.name},
                               {"pass", c.pass},
                               {"detail", c.detail}});
                all_pass = all_pass && c.pass;
            }
            report.results["criteria"] = arr;
            report.results["all_pass"] = all_pass;
            report.results["log"] = log.str();
            if (!all_pass) report.exit_code = 1;
        }
    }
    const auto end = std::chrono::steady_clock::now();
    report.wall_seconds = std::chrono::duration<double>(end - start).count();

    if (!cfg.out_dir.empty()) write_file(cfg.out_dir, "report.json", report.to_json().dump(2) + "\n");
    return report;
}

}  // namespace ergolab::harness
