#include "ergolab/decompose.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <queue>
#include <utility>

#include "ergolab/errors.hpp"
#include "ergolab/rng.hpp"

namespace ergolab::decomp {

namespace {

double prev_below(double v) { return std::nextafter(v, -1.0); }

}  // namespace

TransitionGraph build_transition_graph(const SystemDescriptor& sys, int m, int s, int padding,
                                       std::uint64_t seed) {
    if (m < 8) throw ContractViolation("build_transition_graph: m must be >= 8");
    if (padding != 0 && padding != 1)
        throw ContractViolation("build_transition_graph: padding must be 0 or 1");
    const int dim = sys.space().dimension();
    const int default_s = dim == 1 ? 5 : 9;  // corners + center + 2^dim jitters
    if (s == 0) s = default_s;
    if (s < 4) throw ContractViolation("build_transition_graph: s must be >= 4");
    if (static_cast<std::int64_t>(m) * (dim == 1 ? 1 : m) > 4096 * 4096)
        throw BudgetError("build_transition_graph: grid exceeds the cell budget");

    TransitionGraph g;
    g.grid = GridPartition{sys.space(), m};
    g.samples_per_cell = s;
    g.padding = padding;
    g.seed = seed;
    const std::int64_t cells = g.grid.cell_count();
    g.edges.assign(static_cast<std::size_t>(cells), {});

    const double w = g.grid.width();
    const bool wrap0 = sys.space().coord_wraps(0);
    const bool wrap1 = dim > 1 && sys.space().coord_wraps(1);

    std::vector<Point> samples;
    std::vector<std::int32_t> targets;
    for (std::int64_t c = 0; c < cells; ++c) {
        samples.clear();
        const Point corner = g.grid.cell_corner(c);
        const double x0 = corner.x, y0 = corner.y;
        // closed corners stay inside the half-open cell via prev_below; the
        // top interval cell keeps its closed end at 1
        const double x1 = (!wrap0 && std::fabs(x0 + w - 1.0) < 1e-12) ? 1.0 : prev_below(x0 + w);
        if (dim == 1) {
            samples.push_back({x0, 0.0});
            samples.push_back({x1, 0.0});
            samples.push_back({x0 + 0.5 * w, 0.0});
        } else {
            const double y1 = (!wrap1 && std::fabs(y0 + w - 1.0) < 1e-12) ? 1.0 : prev_below(y0 + w);
            samples.push_back({x0, y0});
            samples.push_back({x0, y1});
            samples.push_back({x1, y0});
            samples.push_back({x1, y1});
            samples.push_back({x0 + 0.5 * w, y0 + 0.5 * w});
        }
        int jitters = s - static_cast<int>(samples.size());
        for (int j = 0; j < jitters; ++j) {
            const std::uint64_t h = mix64(seed, static_cast<std::uint64_t>(c) * 131 + static_cast<std::uint64_t>(j));
            const double jx = x0 + u01(h) * w;
            const double jy = dim == 1 ? 0.0 : y0 + u01(splitmix64(h)) * w;
            samples.push_back({jx, jy});
        }

        targets.clear();
        for (const Point& p : samples) {
            const Point img = sys.space().reduce(sys.evaluate(p));
            const auto tc = g.grid.coords(g.grid.cell_of(img));
            for (int dx = -padding; dx <= padding; ++dx) {
                int cx = tc[0] + dx;
                if (wrap0)
                    cx = (cx % m + m) % m;
                else if (cx < 0 || cx >= m)
                    continue;
                if (dim == 1) {
                    targets.push_back(cx);
                    continue;
                }
                for (int dy = -padding; dy <= padding; ++dy) {
                    int cy = tc[1] + dy;
                    if (wrap1)
                        cy = (cy % m + m) % m;
                    else if (cy < 0 || cy >= m)
                        continue;
                    targets.push_back(cx * m + cy);
                }
            }
        }
        std::sort(targets.begin(), targets.end());
        targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
        g.edges[static_cast<std::size_t>(c)] = targets;
    }
    return g;
}

// Iterative Tarjan; component ids come out in reverse topological order
// (every edge goes from a higher id to a lower or equal id).
SccDecomposition strongly_connected_components(const TransitionGraph& graph) {
    const auto n = static_cast<std::int32_t>(graph.edges.size());
    SccDecomposition scc;
    scc.component.assign(static_cast<std::size_t>(n), -1);

    std::vector<std::int32_t> index(static_cast<std::size_t>(n), -1);
    std::vector<std::int32_t> low(static_cast<std::size_t>(n), 0);
    std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
    std::vector<std::int32_t> stack;
    struct Frame {
        std::int32_t v;
        std::size_t edge;
    };
    std::vector<Frame> call;
    std::int32_t next_index = 0;

    for (std::int32_t root = 0; root < n; ++root) {
        if (index[static_cast<std::size_t>(root)] != -1) continue;
        call.push_back({root, 0});
        while (!call.empty()) {
            auto& fr = call.back();
            const std::int32_t v = fr.v;
            if (fr.edge == 0) {
                index[static_cast<std::size_t>(v)] = low[static_cast<std::size_t>(v)] = next_index++;
                stack.push_back(v);
                on_stack[static_cast<std::size_t>(v)] = 1;
            }
            const auto& adj = graph.edges[static_cast<std::size_t>(v)];
            bool descended = false;
            while (fr.edge < adj.size()) {
                const std::int32_t to = adj[fr.edge++];
                if (index[static_cast<std::size_t>(to)] == -1) {
                    call.push_back({to, 0});
                    descended = true;
                    break;
                }
                if (on_stack[static_cast<std::size_t>(to)])
                    low[static_cast<std::size_t>(v)] =
                        std::min(low[static_cast<std::size_t>(v)], index[static_cast<std::size_t>(to)]);
            }
            if (descended) continue;
            if (low[static_cast<std::size_t>(v)] == index[static_cast<std::size_t>(v)]) {
                scc.members.emplace_back();
                auto& mem = scc.members.back();
                while (true) {
                    const std::int32_t w = stack.back();
                    stack.pop_back();
                    on_stack[static_cast<std::size_t>(w)] = 0;
                    scc.component[static_cast<std::size_t>(w)] = scc.count;
                    mem.push_back(w);
                    if (w == v) break;
                }
                std::sort(mem.begin(), mem.end());
                ++scc.count;
            }
            call.pop_back();
            if (!call.empty()) {
                auto& parent = call.back();
                low[static_cast<std::size_t>(parent.v)] =
                    std::min(low[static_cast<std::size_t>(parent.v)], low[static_cast<std::size_t>(v)]);
            }
        }
    }

    scc.nontrivial.assign(static_cast<std::size_t>(scc.count), 0);
    scc.dag.assign(static_cast<std::size_t>(scc.count), {});
    for (std::int32_t v = 0; v < n; ++v) {
        const std::int32_t cv = scc.component[static_cast<std::size_t>(v)];
        for (const std::int32_t to : graph.edges[static_cast<std::size_t>(v)]) {
            const std::int32_t ct = scc.component[static_cast<std::size_t>(to)];
            if (cv == ct) {
                scc.nontrivial[static_cast<std::size_t>(cv)] = 1;  // self-loop or size >= 2
            } else {
                scc.dag[static_cast<std::size_t>(cv)].push_back(ct);
            }
        }
    }
    for (auto& adj : scc.dag) {
        std::sort(adj.begin(), adj.end());
        adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    }
    for (std::int32_t cid = 0; cid < scc.count; ++cid)
        if (scc.members[static_cast<std::size_t>(cid)].size() >= 2)
            scc.nontrivial[static_cast<std::size_t>(cid)] = 1;
    return scc;
}

namespace {

// Largest inscribed cell block: longest run of consecutive cells (1-D,
// wrap-aware) or the largest square block (2-D). Returns the block side in cells.
int largest_block(const GridPartition& grid, const std::vector<std::int32_t>& cells) {
    const int m = grid.m;
    if (grid.dim() == 1) {
        std::vector<char> in(static_cast<std::size_t>(m), 0);
        for (auto c : cells) in[static_cast<std::size_t>(c)] = 1;
        if (static_cast<int>(cells.size()) == m) return m;
        int best = 0, run = 0;
        const int total = grid.space.coord_wraps(0) ? 2 * m : m;  // doubled scan for wrap runs
        for (int i = 0; i < total; ++i) {
            if (in[static_cast<std::size_t>(i % m)]) {
                ++run;
                best = std::max(best, std::min(run, m));
            } else {
                run = 0;
            }
        }
        return best;
    }
    std::vector<char> in(static_cast<std::size_t>(grid.cell_count()), 0);
    for (auto c : cells) in[static_cast<std::size_t>(c)] = 1;
    const bool wrap0 = grid.space.coord_wraps(0);
    const bool wrap1 = grid.space.coord_wraps(1);
    auto has = [&](int i, int j) {
        if (wrap0) i = (i % m + m) % m;
        else if (i < 0 || i >= m) return false;
        if (wrap1) j = (j % m + m) % m;
        else if (j < 0 || j >= m) return false;
        return in[static_cast<std::size_t>(i) * static_cast<std::size_t>(m) +
                  static_cast<std::size_t>(j)] != 0;
    };
    int best = 0;
    for (auto c : cells) {
        const auto [ci, cj] = std::pair{static_cast<int>(c / m), static_cast<int>(c % m)};
        int k = best + 1;
        while (k <= m) {
            bool ok = true;
            for (int a = 0; a < k && ok; ++a)
                for (int b = 0; b < k && ok; ++b)
                    if (!has(ci + a, cj + b)) ok = false;
            if (!ok) break;
            best = k;
            ++k;
        }
    }
    return best;
}

}  // namespace

AttractorReport attractors_and_basins(const TransitionGraph& graph) {
    const auto scc = strongly_connected_components(graph);
    AttractorReport report;

    std::vector<std::int32_t> terminal_id(static_cast<std::size_t>(scc.count), -1);
    std::vector<std::int32_t> terminals;
    for (std::int32_t cid = 0; cid < scc.count; ++cid) {
        if (scc.dag[static_cast<std::size_t>(cid)].empty()) {
            terminal_id[static_cast<std::size_t>(cid)] = static_cast<std::int32_t>(terminals.size());
            terminals.push_back(cid);
        }
    }
    const auto t = static_cast<std::int32_t>(terminals.size());
    if (t > 64) throw BudgetError("attractors_and_basins: more than 64 terminal components");

    // reachable-terminal bitmask per SCC; ids are reverse topological, so a
    // single ascending pass sees all successors first
    std::vector<std::uint64_t> reach(static_cast<std::size_t>(scc.count), 0);
    for (std::int32_t cid = 0; cid < scc.count; ++cid) {
        std::uint64_t bits = 0;
        if (terminal_id[static_cast<std::size_t>(cid)] >= 0)
            bits |= 1ull << terminal_id[static_cast<std::size_t>(cid)];
        for (const auto to : scc.dag[static_cast<std::size_t>(cid)]) bits |= reach[static_cast<std::size_t>(to)];
        reach[static_cast<std::size_t>(cid)] = bits;
    }

    report.attractor_count = t;
    report.attractors.resize(static_cast<std::size_t>(t));
    for (std::int32_t k = 0; k < t; ++k)
        report.attractors[static_cast<std::size_t>(k)].cells =
            scc.members[static_cast<std::size_t>(terminals[static_cast<std::size_t>(k)])];

    const auto n = static_cast<std::int32_t>(graph.cell_count());
    for (std::int32_t v = 0; v < n; ++v) {
        const std::uint64_t bits = reach[static_cast<std::size_t>(scc.component[static_cast<std::size_t>(v)])];
        if (bits == 0)
            throw ContractViolation("attractors_and_basins: a cell reaches no terminal component");
        if ((bits & (bits - 1)) == 0) {
            const auto k = static_cast<std::int32_t>(std::countr_zero(bits));
            report.attractors[static_cast<std::size_t>(k)].basin.push_back(v);
        } else {
            report.undecided.push_back(v);
        }
    }

    for (std::int32_t cid = 0; cid < scc.count; ++cid)
        if (scc.nontrivial[static_cast<std::size_t>(cid)])
            for (const auto v : scc.members[static_cast<std::size_t>(cid)])
                report.omega_estimate.push_back(v);
    std::sort(report.omega_estimate.begin(), report.omega_estimate.end());

    const int fat_side = 1 << 1;  // 2 cells per dimension
    for (auto& att : report.attractors) {
        const int side = largest_block(graph.grid, att.cells);
        att.fat = side >= fat_side;
        att.inscribed_radius =
            std::min(0.5 * side * graph.grid.width(), 0.5 * graph.grid.space.diameter());
    }
    return report;
}

std::pair<bool, std::optional<TransitivityWitness>> strong_transitivity_check(
    const TransitionGraph& graph) {
    const auto scc = strongly_connected_components(graph);
    const auto n = static_cast<std::int64_t>(graph.cell_count());
    if (scc.count == 1 && static_cast<std::int64_t>(scc.members[0].size()) == n)
        return {true, std::nullopt};
    // witness: first cell in a terminal SCC (its reachable set is that SCC),
    // paired with the last cell outside it
    std::int32_t terminal = -1;
    for (std::int32_t cid = 0; cid < scc.count && terminal < 0; ++cid)
        if (scc.dag[static_cast<std::size_t>(cid)].empty()) terminal = cid;
    TransitivityWitness w;
    w.source = scc.members[static_cast<std::size_t>(terminal)].front();
    for (std::int64_t v = n - 1; v >= 0; --v) {
        if (scc.component[static_cast<std::size_t>(v)] != terminal) {
            w.unreached = static_cast<std::int32_t>(v);
            break;
        }
    }
    return {false, w};
}

double sensitive_dependence_estimate(const SystemDescriptor& sys, const GridPartition& grid,
                                     const std::vector<std::int32_t>& cells, int n_max,
                                     double eps_grid, int max_centers) {
    if (cells.empty())
        throw ContractViolation("sensitive_dependence_estimate: empty cell set");
    std::vector<char> in(static_cast<std::size_t>(grid.cell_count()), 0);
    for (auto c : cells) in[static_cast<std::size_t>(c)] = 1;

    const std::size_t stride = std::max<std::size_t>(1, cells.size() / static_cast<std::size_t>(max_centers));
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t ci = 0; ci < cells.size(); ci += stride) {
        const Point center = grid.cell_center(cells[ci]);
        std::vector<Point> pts;
        const double offs[5] = {0.0, -eps_grid, eps_grid, -0.5 * eps_grid, 0.5 * eps_grid};
        if (grid.dim() == 1) {
            for (double o : offs) {
                Point p = grid.space.reduce({center.x + o, 0.0});
                if (grid.space.kind == SpaceKind::Interval) p.x = std::clamp(p.x, 0.0, 1.0);
                if (in[static_cast<std::size_t>(grid.cell_of(p))]) pts.push_back(p);
            }
        } else {
            for (double ox : offs)
                for (double oy : offs) {
                    if (ox != 0.0 && oy != 0.0) continue;  // axis stencil
                    Point p = grid.space.reduce({center.x + ox, center.y + oy});
                    if (grid.space.kind == SpaceKind::CircleInterval) p.y = std::clamp(p.y, 0.0, 1.0);
                    if (in[static_cast<std::size_t>(grid.cell_of(p))]) pts.push_back(p);
                }
        }
        if (pts.size() < 2) continue;
        double spread = 0.0;
        for (int n = 1; n <= n_max; ++n) {
            for (auto& p : pts) p = grid.space.reduce(sys.evaluate(p));
            for (std::size_t a = 0; a < pts.size(); ++a)
                for (std::size_t b = a + 1; b < pts.size(); ++b)
                    spread = std::max(spread, grid.space.distance(pts[a], pts[b]));
        }
        worst = std::min(worst, spread);
    }
    return std::isfinite(worst) ? worst : 0.0;
}

std::vector<std::int32_t> large_omega_estimate(const TransitionGraph& graph, std::int64_t cell) {
    const auto n = static_cast<std::int64_t>(graph.cell_count());
    if (cell < 0 || cell >= n) throw ContractViolation("large_omega_estimate: cell out of range");
    std::vector<char> visited(static_cast<std::size_t>(n), 0);
    std::queue<std::int32_t> q;
    q.push(static_cast<std::int32_t>(cell));
    visited[static_cast<std::size_t>(cell)] = 1;
    std::vector<std::int32_t> reach;
    while (!q.empty()) {
        const auto v = q.front();
        q.pop();
        reach.push_back(v);
        for (const auto to : graph.edges[static_cast<std::size_t>(v)]) {
            if (!visited[static_cast<std::size_t>(to)]) {
                visited[static_cast<std::size_t>(to)] = 1;
                q.push(to);
            }
        }
    }
    // restrict the graph to the reachable set and keep its cycle cells
    std::sort(reach.begin(), reach.end());
    TransitionGraph sub;
    sub.grid = graph.grid;
    std::vector<std::int32_t> remap(static_cast<std::size_t>(n), -1);
    for (std::size_t i = 0; i < reach.size(); ++i) remap[static_cast<std::size_t>(reach[i])] = static_cast<std::int32_t>(i);
    sub.edges.resize(reach.size());
    for (std::size_t i = 0; i < reach.size(); ++i) {
        for (const auto to : graph.edges[static_cast<std::size_t>(reach[i])])
            if (remap[static_cast<std::size_t>(to)] >= 0)
                sub.edges[i].push_back(remap[static_cast<std::size_t>(to)]);
        std::sort(sub.edges[i].begin(), sub.edges[i].end());
    }
    const auto scc = strongly_connected_components(sub);
    std::vector<std::int32_t> out;
    for (std::size_t i = 0; i < reach.size(); ++i)
        if (scc.nontrivial[static_cast<std::size_t>(scc.component[i])]) out.push_back(reach[i]);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace ergolab::decomp
