#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "projmerge/mergers.hpp"
#include "projmerge/rational.hpp"

namespace projmerge {

/// A map C : [N] x [D] -> [M], viewed as a bipartite multigraph with D
/// labelled edges per left vertex.
struct Conductor {
    std::uint64_t n_vals = 0;
    std::uint64_t d_vals = 0;
    std::uint32_t m_vals = 0;
    std::vector<std::uint8_t> table;  // index = x * D + j

    Conductor(std::uint64_t n, std::uint64_t d, std::uint32_t m,
              std::vector<std::uint8_t> entries);

    std::uint8_t at(std::uint64_t x, std::uint64_t j) const {
        return table[x * d_vals + j];
    }
};

struct MissProfile {
    std::vector<std::uint64_t> hit_counts;  // per left vertex x
    std::vector<bool> totally_misses;
    std::vector<bool> mostly_misses;
};

/// Hit counts of every left vertex into S, with totally/mostly flags.
/// "mostly" uses the strict threshold count < (1/2)(|S|/M)D, compared exactly.
MissProfile miss_profile(const Conductor& c, const std::vector<bool>& s_subset);

struct AbnormalityResult {
    bool exact;
    Rat probability;          // exact when `exact`, otherwise the MC estimate
    std::uint64_t samples;    // 0 for exact enumeration
    double ci_low = 0.0;      // two-sided 99% bound, Monte Carlo only
    double ci_high = 0.0;
    std::uint64_t subsets_with_mostly_miss = 0;
    std::uint64_t subsets_total = 0;
};

/// Pr over uniform S of size lambda*M that some x mostly misses S.
/// lambda*M must be integral.  Enumerates all subsets when the count fits the
/// budget; falls back to seeded Monte Carlo otherwise.
AbnormalityResult abnormality_probability(const Conductor& c, const Rat& lambda,
                                          std::uint64_t mc_samples = 100000,
                                          std::uint64_t mc_seed = 1);

/// Verdict: C is (gamma, lambda)-abnormal iff the probability above is < 1 - gamma.
bool is_abnormal(const Conductor& c, const Rat& gamma, const Rat& lambda);

/// Slice conductor E_y = E(. , y, .) of a t=2 merger table.
Conductor slice_conductor(const MergerTable& e, std::uint64_t y);

/// First y whose slice conductor is (gamma, lambda)-abnormal.
/// Requires 0 < gamma < lambda/2 - eps, the regime in which a verified
/// eps-merger is guaranteed to contain one.
std::optional<std::uint64_t> find_abnormal_slice(const MergerTable& e, const Rat& gamma,
                                                 const Rat& lambda, const Rat& eps);

struct NonexistenceResult {
    bool none_exists;
    std::uint64_t tables_checked;
    std::uint64_t tables_passing;
};

/// True iff no table E : [N]^2 x [D] -> [M] passes the strong merger check at
/// eps.  Hard-capped micro-scale enumeration.
NonexistenceResult exhaustive_merger_nonexistence(std::uint64_t n, std::uint64_t d,
                                                  std::uint32_t m, const Rat& eps);

}  // namespace projmerge
