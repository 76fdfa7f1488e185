#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ergolab/grid.hpp"
#include "ergolab/systems.hpp"

namespace ergolab::decomp {

// Outer approximation of the map on a uniform grid: edges from each cell to
// the cells hit by images of its sample points, dilated by the padding radius
// in every coordinate (wrap-aware).
struct TransitionGraph {
    GridPartition grid;
    int samples_per_cell = 5;
    int padding = 1;
    std::uint64_t seed = 0;
    std::vector<std::vector<std::int32_t>> edges;  // sorted adjacency per cell

    std::int64_t cell_count() const { return grid.cell_count(); }
};

// Samples: cell corners + center + 2^dim jittered points (deterministic
// per-cell jitter derived from hash(cell, seed)); extra jitter when s exceeds
// the default layout.
TransitionGraph build_transition_graph(const SystemDescriptor& sys, int m, int s = 0,
                                       int padding = 1, std::uint64_t seed = 0);

struct SccDecomposition {
    std::vector<std::int32_t> component;       // cell -> SCC id (reverse topological: edges go to lower ids)
    std::int32_t count = 0;
    std::vector<std::vector<std::int32_t>> members;
    std::vector<char> nontrivial;              // size >= 2 or self-loop
    std::vector<std::vector<std::int32_t>> dag;  // condensation adjacency (deduped)
};

SccDecomposition strongly_connected_components(const TransitionGraph& graph);

struct AttractorInfo {
    std::vector<std::int32_t> cells;      // terminal SCC, sorted
    std::vector<std::int32_t> basin;      // cells whose only reachable terminal SCC is this one
    bool fat = false;                     // contains a full 2^dim cell block
    double inscribed_radius = 0.0;        // delta_grid: radius of the largest inscribed cell ball
};

struct AttractorReport {
    std::vector<AttractorInfo> attractors;
    std::vector<std::int32_t> undecided;      // cells reaching >= 2 terminal SCCs
    std::vector<std::int32_t> omega_estimate;  // cells in nontrivial SCCs or with self-loops
    int attractor_count = 0;                   // ell
};

AttractorReport attractors_and_basins(const TransitionGraph& graph);

struct TransitivityWitness {
    std::int32_t source = 0;
    std::int32_t unreached = 0;
};

// True iff every cell reaches every cell; otherwise a failing (source,
// unreached) pair.
std::pair<bool, std::optional<TransitivityWitness>> strong_transitivity_check(
    const TransitionGraph& graph);

// Lower estimate of the sensitivity radius: min over sampled x in A of
// max_{n <= n_max} diameter(f^n(samples of B_eps(x) cap A)).
double sensitive_dependence_estimate(const SystemDescriptor& sys, const GridPartition& grid,
                                     const std::vector<std::int32_t>& cells, int n_max,
                                     double eps_grid, int max_centers = 64);

// Cells belonging to cycles reachable from the given cell (graph proxy for
// the large omega-limit).
std::vector<std::int32_t> large_omega_estimate(const TransitionGraph& graph, std::int64_t cell);

}  // namespace ergolab::decomp
