#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "projmerge/grid.hpp"
#include "projmerge/rational.hpp"

namespace projmerge {

/// Raised when an enumeration would exceed its state budget; carries the
/// estimated state count so callers can report it.
class BudgetError : public std::runtime_error {
  public:
    BudgetError(std::string what, double estimated_states)
        : std::runtime_error(std::move(what)), estimated_states(estimated_states) {}
    double estimated_states;
};

/// Enumeration cap, overridable through the PROJMERGE_BUDGET environment
/// variable (integer state count).
std::uint64_t enumeration_budget(std::uint64_t default_cap);

/// Exhaustive truth table of E : [N]^t x [D] -> [M].
/// Entries row-major: index = cell_index([N]^t) * D + seed.
struct MergerTable {
    std::uint64_t n_vals = 0;  // N
    std::uint32_t t = 0;
    std::uint64_t d_vals = 1;  // D
    std::uint32_t m_vals = 2;  // M
    std::vector<std::uint8_t> table;

    MergerTable() = default;
    MergerTable(std::uint64_t n, std::uint32_t t, std::uint64_t d, std::uint32_t m,
                std::vector<std::uint8_t> entries);

    GridDims input_dims() const { return GridDims(t, n_vals); }
    std::uint8_t at(std::uint64_t cell, std::uint64_t seed) const {
        return table[cell * d_vals + seed];
    }
    bool operator==(const MergerTable& o) const = default;
};

/// Finite distribution with exact rational weights summing to 1.
struct Distribution {
    std::vector<Rat> weights;

    explicit Distribution(std::vector<Rat> w);
    static Distribution uniform(std::uint64_t outcomes);
    static Distribution point_mass(std::uint64_t outcomes, std::uint64_t at);
    std::size_t outcomes() const { return weights.size(); }
};

Rat statistical_distance(const Distribution& p, const Distribution& q);

/// Deterministic completion of the non-uniform coordinates from the uniform
/// ones: completion[rank of uniform assignment] = rank of the remaining
/// coordinates (row-major within each block).
struct AdversaryStrategy {
    AxisSubset uniform_axes;
    std::vector<std::uint64_t> completion;

    /// Full cell index for a given uniform-assignment rank, for a t-axis grid.
    std::uint64_t cell_for(const GridDims& dims, std::uint64_t uniform_rank) const;
};

/// Output distribution of E under the source induced by the adversary,
/// conditioned on seed j.
Distribution adversary_output_distribution(const MergerTable& e,
                                           const AdversaryStrategy& adv,
                                           std::uint64_t seed);

struct SdExactResult {
    Rat sd;
    std::uint32_t part;
    AxisSubset axes;
    AdversaryStrategy adversary;
};

/// Exact worst-case statistical distance of a seedless binary multimerger
/// over s-where random sources, with an adversary achieving it.
SdExactResult multimerger_sd_exact(const MergerTable& e, std::uint32_t s);

/// c=2 labeling  <->  seedless binary multimerger (E(x) = label of x).
MergerTable multimerger_from_partition(const PartLabeling& p);
PartLabeling partition_from_multimerger(const MergerTable& e);

/// The impossibility adversary for t=2, D=1, M=2: always achieves sd = 1/2
/// with a point-mass output.
AdversaryStrategy seedless_counterexample(const MergerTable& m);

struct MergerVerdict {
    bool is_merger;
    AdversaryStrategy worst_adversary;
    Rat worst_bad_seed_fraction;
    std::uint64_t adversaries_checked;
};

/// Strong-form check: true iff for every choice of s jointly-uniform
/// coordinates and every deterministic adversary, at most an eps fraction of
/// seeds yields an output distribution more than eps-far from uniform.
MergerVerdict is_eps_merger_exhaustive(const MergerTable& e, const Rat& eps,
                                       std::uint32_t s = 1);

/// Weak-form companion metric: worst statistical distance of the joint
/// (seed, output) distribution from (uniform seed, uniform output).
Rat weak_merger_sd(const MergerTable& e, std::uint32_t s = 1);

/// Wrap an extractor on [2^m]^t x [D] into a table on [2^n]^t x [D] by
/// truncating each coordinate to its m most significant bits.
MergerTable truncate_and_extract(const MergerTable& ext, std::uint32_t n_bits);

struct ExtractorSearchResult {
    std::optional<MergerTable> extractor;
    std::uint64_t candidates_tried;
    bool exhausted;  // whole candidate space covered
};

/// Search for a strong (m, eps)-extractor Ext : [2^(m*t)] x [2^d] -> [2^m],
/// checked against every flat min-entropy-m source.  Enumerates the whole
/// candidate space in canonical order when it fits within `trials`, otherwise
/// samples tables pseudorandomly from rng_seed.
ExtractorSearchResult find_extractor(std::uint32_t m, std::uint32_t t, std::uint32_t d,
                                     const Rat& eps, std::uint64_t trials,
                                     std::uint64_t rng_seed);

/// Exact worst-case error of the seedless majority multimerger on [2]^t at
/// s = t-1, for odd t.
Rat majority_multimerger_error(std::uint32_t t);

/// Majority-of-high-bits table on [2]^t (D=1, M=2).
MergerTable majority_table(std::uint32_t t);

}  // namespace projmerge
