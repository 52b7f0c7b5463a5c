#pragma once

#include <cstdint>
#include <vector>

#include "projmerge/grid.hpp"

namespace projmerge {

/// The golden-ratio scheme exists in two printed forms that disagree; both
/// are available so the toolkit can exhibit the difference.
enum class GrVariant { figure, literal };

/// 2-part labeling of [N]^3 by the majority of the three half-space bits.
/// N must be even: the half split is only exact then.
PartLabeling maj3_partition(std::uint64_t n);

/// 3-part labeling of [N]^3 with thresholds at u = (sqrt(5)-1)/2.
PartLabeling gr3_partition(std::uint64_t n, GrVariant variant);

/// c = k^t parts labeled by the tuple of floor(coord*k/N) digits; requires k | N.
PartLabeling product_partition(std::uint64_t n, std::uint32_t t, std::uint64_t k);

/// Parts by which cutoff band contains the count of coordinates >= N/2.
/// cutoffs: strictly increasing, one fewer than the part count.
PartLabeling threshold_partition(std::uint64_t n, std::uint32_t t,
                                 const std::vector<std::uint32_t>& cutoffs);

/// Threshold index for a continuous threshold theta in [0,1]: round(theta * N).
std::uint64_t discretize_threshold(double theta, std::uint64_t n);

}  // namespace projmerge
