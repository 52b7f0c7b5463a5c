#include "projmerge/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace projmerge {

std::uint64_t discretize_threshold(double theta, std::uint64_t n) {
    if (!(theta >= 0.0) || !(theta <= 1.0))
        throw std::domain_error("threshold must lie in [0, 1]");
    return static_cast<std::uint64_t>(std::llround(theta * static_cast<double>(n)));
}

PartLabeling maj3_partition(std::uint64_t n) {
    if (n % 2 != 0)
        throw std::invalid_argument("maj3 requires even N: the half split is exact only then");
    GridDims dims(3, n);
    const std::uint64_t half = n / 2;
    std::vector<std::uint8_t> labels(dims.cell_count());
    for (std::uint64_t x = 0; x < n; ++x)
        for (std::uint64_t y = 0; y < n; ++y) {
            // whole z-columns share a prefix: majority decided by x and y
            // except when exactly one of them is high
            std::uint8_t* col = labels.data() + (x * n + y) * n;
            const int high2 = (x >= half) + (y >= half);
            if (high2 == 2) {
                std::fill(col, col + n, std::uint8_t{1});
            } else if (high2 == 0) {
                std::fill(col, col + n, std::uint8_t{0});
            } else {
                std::fill(col, col + half, std::uint8_t{0});
                std::fill(col + half, col + n, std::uint8_t{1});
            }
        }
    return PartLabeling(dims, 2, std::move(labels));
}

PartLabeling gr3_partition(std::uint64_t n, GrVariant variant) {
    if (n < 2) throw std::invalid_argument("gr3 requires N >= 2");
    GridDims dims(3, n);
    const double u = (std::sqrt(5.0) - 1.0) / 2.0;
    const std::uint64_t k = discretize_threshold(u, n);
    const std::uint64_t half = discretize_threshold(0.5, n);
    std::vector<std::uint8_t> labels(dims.cell_count());
    if (variant == GrVariant::figure) {
        for (std::uint64_t x = 0; x < n; ++x)
            for (std::uint64_t y = 0; y < n; ++y) {
                std::uint8_t* col = labels.data() + (x * n + y) * n;
                const std::uint8_t rest = y < half ? 1 : 2;
                if (x >= n - k) {
                    std::fill(col, col + k, std::uint8_t{0});
                    std::fill(col + k, col + n, rest);
                } else {
                    std::fill(col, col + n, rest);
                }
            }
    } else {
        for (std::uint64_t x = 0; x < n; ++x)
            for (std::uint64_t y = 0; y < n; ++y) {
                std::uint8_t* col = labels.data() + (x * n + y) * n;
                if (x >= k && y >= k) {
                    std::fill(col, col + n, std::uint8_t{0});
                } else if (x < k && y < k) {
                    std::fill(col, col + half, std::uint8_t{1});
                    std::fill(col + half, col + n, std::uint8_t{2});
                } else {
                    std::fill(col, col + n, std::uint8_t{2});
                }
            }
    }
    return PartLabeling(dims, 3, std::move(labels));
}

PartLabeling product_partition(std::uint64_t n, std::uint32_t t, std::uint64_t k) {
    if (k == 0 || n % k != 0)
        throw std::invalid_argument("product partition requires k to divide N");
    GridDims dims(t, n);
    std::uint64_t c = 1;
    for (std::uint32_t i = 0; i < t; ++i) {
        c *= k;
        if (c > 255) throw std::invalid_argument("part count k^t exceeds 255");
    }
    std::vector<std::uint8_t> labels(dims.cell_count());
    std::vector<std::uint64_t> coords(t, 0);
    for (std::uint64_t cell = 0; cell < dims.cell_count(); ++cell) {
        std::uint64_t part = 0;
        for (std::uint32_t a = 0; a < t; ++a) part = part * k + coords[a] * k / n;
        labels[cell] = static_cast<std::uint8_t>(part);
        for (std::uint32_t a = t; a-- > 0;) {
            if (++coords[a] < n) break;
            coords[a] = 0;
        }
    }
    return PartLabeling(dims, static_cast<std::uint32_t>(c), std::move(labels));
}

PartLabeling threshold_partition(std::uint64_t n, std::uint32_t t,
                                 const std::vector<std::uint32_t>& cutoffs) {
    for (std::size_t i = 0; i < cutoffs.size(); ++i) {
        if (cutoffs[i] > t) throw std::invalid_argument("cutoff exceeds axis count");
        if (i > 0 && cutoffs[i] <= cutoffs[i - 1])
            throw std::invalid_argument("cutoffs must be strictly increasing");
    }
    GridDims dims(t, n);
    const std::uint32_t c = static_cast<std::uint32_t>(cutoffs.size()) + 1;
    std::vector<std::uint8_t> labels(dims.cell_count());
    std::vector<std::uint64_t> coords(t, 0);
    for (std::uint64_t cell = 0; cell < dims.cell_count(); ++cell) {
        std::uint32_t high = 0;
        for (std::uint32_t a = 0; a < t; ++a)
            if (2 * coords[a] >= n) ++high;
        std::uint8_t band = 0;
        while (band < cutoffs.size() && high >= cutoffs[band]) ++band;
        labels[cell] = band;
        for (std::uint32_t a = t; a-- > 0;) {
            if (++coords[a] < n) break;
            coords[a] = 0;
        }
    }
    return PartLabeling(dims, c, std::move(labels));
}

}  // namespace projmerge
