#pragma once

#include <cstdint>
#include <vector>

#include "projmerge/grid.hpp"

namespace projmerge {

enum class SearchMode { exhaustive, anneal };

/// Symmetry reductions applied during exhaustive enumeration.  All group
/// elements preserve every projection size, so reductions never change the
/// certified minimum.
struct SymmetryOptions {
    bool fix_first_cell = true;   // pin cell 0 to part 0
    bool part_relabel = false;    // only first-appearance-ordered label strings
};

struct AnnealSchedule {
    double initial_temperature = 2.0;
    double cooling = 0.999;
    std::uint64_t steps = 100000;
};

struct SearchConfig {
    GridDims dims;
    std::uint32_t parts = 2;
    std::uint32_t s = 2;
    SearchMode mode = SearchMode::exhaustive;
    SymmetryOptions symmetry;
    std::uint64_t rng_seed = 0;
    AnnealSchedule schedule;
    std::uint32_t shards = 1;
    std::uint32_t threads = 0;  // 0: one per shard, capped at hardware
};

struct SearchResult {
    std::uint64_t minmax_value = 0;
    PartLabeling witness;
    std::uint64_t states_visited = 0;
    bool certified = false;
};

/// Certified global minimum of the max s-dimensional projection over all
/// c-part labelings, modulo the enabled symmetries.  The witness is the
/// canonical form of the lexicographically first optimum encountered in the
/// fixed depth-first order, so results are shard-count independent.
SearchResult exhaustive_minmax(const SearchConfig& cfg);

/// Simulated annealing over single-cell relabels; value >= the true minimum,
/// deterministic for a fixed rng_seed.
SearchResult local_search_minmax(const SearchConfig& cfg);

/// Lexicographically least label string over the group generated by part
/// relabelings, coordinate permutations, and per-axis index reversals.
PartLabeling canonicalize(const PartLabeling& p);

/// Max projection size plus the sum-of-squares tie-break used as the local
/// search objective.
std::pair<std::uint64_t, std::uint64_t> search_objective(const PartLabeling& p,
                                                         std::uint32_t s);

}  // namespace projmerge
