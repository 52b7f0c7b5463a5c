#include "projmerge/grid.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <stdexcept>

namespace projmerge {

namespace {

std::uint64_t checked_pow(std::uint64_t base, std::uint32_t exp) {
    std::uint64_t result = 1;
    for (std::uint32_t i = 0; i < exp; ++i) {
        if (base != 0 && result > std::numeric_limits<std::uint64_t>::max() / base)
            throw std::overflow_error("grid cell count overflows 64 bits");
        result *= base;
    }
    return result;
}

}  // namespace

GridDims::GridDims(std::uint32_t t_, std::uint64_t side_) : t(t_), side(side_) {
    if (t == 0) throw std::invalid_argument("grid needs at least one axis");
    if (side == 0) throw std::invalid_argument("grid side must be positive");
    cells_ = checked_pow(side, t);
}

std::uint64_t GridDims::index_of(const std::vector<std::uint64_t>& coords) const {
    if (coords.size() != t) throw std::invalid_argument("coordinate arity mismatch");
    std::uint64_t idx = 0;
    for (std::uint32_t a = 0; a < t; ++a) {
        if (coords[a] >= side) throw std::out_of_range("coordinate out of range");
        idx = idx * side + coords[a];
    }
    return idx;
}

std::vector<std::uint64_t> GridDims::coords_of(std::uint64_t index) const {
    if (index >= cells_) throw std::out_of_range("cell index out of range");
    std::vector<std::uint64_t> coords(t);
    for (std::uint32_t a = t; a-- > 0;) {
        coords[a] = index % side;
        index /= side;
    }
    return coords;
}

AxisSubset::AxisSubset(std::vector<std::uint32_t> idx) : indices(std::move(idx)) {
    if (indices.empty()) throw std::invalid_argument("axis subset must be nonempty");
    for (std::size_t i = 1; i < indices.size(); ++i)
        if (indices[i] <= indices[i - 1])
            throw std::invalid_argument("axis subset must be strictly increasing");
}

void AxisSubset::validate_for(const GridDims& dims) const {
    if (indices.size() > dims.t || indices.back() >= dims.t)
        throw std::out_of_range("axis index out of range for grid");
}

std::vector<AxisSubset> axis_subsets(std::uint32_t t, std::uint32_t s) {
    if (s == 0 || s > t) throw std::invalid_argument("need 1 <= s <= t");
    std::vector<AxisSubset> out;
    std::vector<std::uint32_t> cur(s);
    for (std::uint32_t i = 0; i < s; ++i) cur[i] = i;
    while (true) {
        out.emplace_back(cur);
        // next lexicographic combination
        std::int64_t i = s - 1;
        while (i >= 0 && cur[i] == t - s + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (std::uint32_t j = i + 1; j < s; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

CellMask::CellMask(GridDims dims)
    : dims_(dims), words_((dims.cell_count() + 63) / 64, 0) {}

void CellMask::set(std::uint64_t cell, bool value) {
    if (cell >= dims_.cell_count()) throw std::out_of_range("cell index out of range");
    if (value)
        words_[cell >> 6] |= std::uint64_t{1} << (cell & 63);
    else
        words_[cell >> 6] &= ~(std::uint64_t{1} << (cell & 63));
}

std::uint64_t CellMask::popcount() const {
    std::uint64_t n = 0;
    for (auto w : words_) n += std::popcount(w);
    return n;
}

CellMask CellMask::operator|(const CellMask& o) const {
    if (!(dims_ == o.dims_)) throw std::invalid_argument("mask dimension mismatch");
    CellMask r(dims_);
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] | o.words_[i];
    return r;
}

CellMask CellMask::operator&(const CellMask& o) const {
    if (!(dims_ == o.dims_)) throw std::invalid_argument("mask dimension mismatch");
    CellMask r(dims_);
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] & o.words_[i];
    return r;
}

bool CellMask::is_subset_of(const CellMask& o) const {
    if (!(dims_ == o.dims_)) throw std::invalid_argument("mask dimension mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i] & ~o.words_[i]) return false;
    return true;
}

ProjectionImage::ProjectionImage(GridDims dims, AxisSubset axes)
    : pdims_(static_cast<std::uint32_t>(axes.size()), dims.side), axes_(std::move(axes)) {
    axes_.validate_for(dims);
    words_.assign((pdims_.cell_count() + 63) / 64, 0);
}

void ProjectionImage::set(std::uint64_t point) {
    if (point >= pdims_.cell_count()) throw std::out_of_range("point out of range");
    words_[point >> 6] |= std::uint64_t{1} << (point & 63);
}

std::uint64_t ProjectionImage::size() const {
    std::uint64_t n = 0;
    for (auto w : words_) n += std::popcount(w);
    return n;
}

bool ProjectionImage::is_subset_of(const ProjectionImage& o) const {
    if (!(pdims_ == o.pdims_) || !(axes_ == o.axes_))
        throw std::invalid_argument("projection shape mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i] & ~o.words_[i]) return false;
    return true;
}

ProjectionImage ProjectionImage::operator|(const ProjectionImage& o) const {
    if (!(pdims_ == o.pdims_) || !(axes_ == o.axes_))
        throw std::invalid_argument("projection shape mismatch");
    ProjectionImage r = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] |= o.words_[i];
    return r;
}

PartLabeling::PartLabeling(GridDims dims, std::uint32_t parts,
                           std::vector<std::uint8_t> labels)
    : dims_(dims), parts_(parts), labels_(std::move(labels)) {
    if (parts_ == 0 || parts_ > 255) throw std::invalid_argument("part count out of range");
    if (labels_.size() != dims_.cell_count())
        throw std::invalid_argument("label count must equal cell count");
    for (auto l : labels_)
        if (l >= parts_) throw std::invalid_argument("label exceeds part count");
}

CellMask PartLabeling::part_mask(std::uint32_t part) const {
    if (part >= parts_) throw std::out_of_range("part id out of range");
    CellMask m(dims_);
    for (std::uint64_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == part) m.set(i);
    return m;
}

ProjectionImage project(const CellMask& mask, const AxisSubset& axes) {
    axes.validate_for(mask.dims());
    const GridDims& dims = mask.dims();
    ProjectionImage img(dims, axes);
    const std::uint64_t n = dims.cell_count();
    // strides of each retained axis in the projected index
    std::vector<std::uint64_t> coords(dims.t, 0);
    for (std::uint64_t cell = 0; cell < n; ++cell) {
        if (mask.test(cell)) {
            std::uint64_t point = 0;
            for (auto a : axes.indices) point = point * dims.side + coords[a];
            img.set(point);
        }
        for (std::uint32_t a = dims.t; a-- > 0;) {
            if (++coords[a] < dims.side) break;
            coords[a] = 0;
        }
    }
    return img;
}

namespace {

// Single pass over all cells, filling one part-bitmask array per axis subset.
// Requires parts <= 64 so a part set fits one word per projected point.
void fill_part_masks(const PartLabeling& p, const std::vector<AxisSubset>& subsets,
                     std::vector<std::vector<std::uint64_t>>& arrays) {
    const GridDims& dims = p.dims();
    const std::uint64_t N = dims.side;
    const std::uint32_t t = dims.t;
    const std::uint32_t last = t - 1;
    const auto& labels = p.labels();

    // Per subset: does it retain the last axis, and the stride layout for the rest.
    struct SubsetPlan {
        bool has_last;
        std::vector<std::pair<std::uint32_t, std::uint64_t>> axis_strides;  // axis -> stride
    };
    std::vector<SubsetPlan> plans(subsets.size());
    for (std::size_t si = 0; si < subsets.size(); ++si) {
        const auto& idx = subsets[si].indices;
        plans[si].has_last = !idx.empty() && idx.back() == last;
        std::uint64_t stride = 1;
        std::size_t upto = idx.size() - (plans[si].has_last ? 1 : 0);
        // strides for retained axes excluding the last grid axis
        std::vector<std::pair<std::uint32_t, std::uint64_t>> rev;
        if (plans[si].has_last) stride = N;
        for (std::size_t k = upto; k-- > 0;) {
            rev.emplace_back(idx[k], stride);
            stride *= N;
        }
        plans[si].axis_strides = std::move(rev);
    }

    // dominant case: t=3, s=2 with subsets {0,1},{0,2},{1,2} — tight loop
    if (t == 3 && subsets.size() == 3 && plans[0].axis_strides.size() == 2 &&
        plans[1].has_last && plans[2].has_last) {
        std::uint64_t* a01 = arrays[0].data();
        std::uint64_t* a02 = arrays[1].data();
        std::uint64_t* a12 = arrays[2].data();
        const std::uint8_t* lab = labels.data();
        std::uint64_t cell = 0;
        for (std::uint64_t x = 0; x < N; ++x) {
            for (std::uint64_t y = 0; y < N; ++y) {
                std::uint64_t* row02 = a02 + x * N;
                std::uint64_t* row12 = a12 + y * N;
                std::uint64_t colmask = 0;
                for (std::uint64_t z = 0; z < N; ++z, ++cell) {
                    const std::uint64_t bit = std::uint64_t{1} << lab[cell];
                    colmask |= bit;
                    row02[z] |= bit;
                    row12[z] |= bit;
                }
                a01[x * N + y] |= colmask;
            }
        }
        return;
    }

    std::vector<std::uint64_t> coords(t, 0);
    std::vector<std::uint64_t> bases(subsets.size(), 0);
    const std::uint64_t columns = dims.cell_count() / N;
    std::uint64_t cell = 0;
    for (std::uint64_t col = 0; col < columns; ++col) {
        for (std::size_t si = 0; si < subsets.size(); ++si) {
            std::uint64_t base = 0;
            for (auto [axis, stride] : plans[si].axis_strides)
                base += coords[axis] * stride;
            bases[si] = base;
        }
        std::uint64_t colmask = 0;
        for (std::uint64_t z = 0; z < N; ++z, ++cell) {
            const std::uint64_t bit = std::uint64_t{1} << labels[cell];
            colmask |= bit;
            for (std::size_t si = 0; si < subsets.size(); ++si)
                if (plans[si].has_last) arrays[si][bases[si] + z] |= bit;
        }
        for (std::size_t si = 0; si < subsets.size(); ++si)
            if (!plans[si].has_last) arrays[si][bases[si]] |= colmask;
        // advance odometer over axes 0..t-2
        for (std::uint32_t a = last; a-- > 0;) {
            if (++coords[a] < N) break;
            coords[a] = 0;
        }
    }
}

}  // namespace

std::vector<ProjectionEntry> projection_fraction_table(const PartLabeling& p,
                                                       std::uint32_t s) {
    const GridDims& dims = p.dims();
    if (s == 0 || s > dims.t) throw std::invalid_argument("need 1 <= s <= t");
    const auto subsets = axis_subsets(dims.t, s);
    const std::uint64_t points = GridDims(s, dims.side).cell_count();
    const std::uint32_t c = p.parts();

    std::vector<std::vector<std::uint64_t>> sizes(subsets.size(),
                                                  std::vector<std::uint64_t>(c, 0));
    if (c <= 64) {
        std::vector<std::vector<std::uint64_t>> arrays(
            subsets.size(), std::vector<std::uint64_t>(points, 0));
        fill_part_masks(p, subsets, arrays);
        for (std::size_t si = 0; si < subsets.size(); ++si)
            for (std::uint64_t pt = 0; pt < points; ++pt) {
                std::uint64_t m = arrays[si][pt];
                while (m) {
                    sizes[si][std::countr_zero(m)]++;
                    m &= m - 1;
                }
            }
    } else {
        for (std::uint32_t part = 0; part < c; ++part) {
            CellMask mask = p.part_mask(part);
            for (std::size_t si = 0; si < subsets.size(); ++si)
                sizes[si][part] = project(mask, subsets[si]).size();
        }
    }

    std::vector<ProjectionEntry> out;
    out.reserve(static_cast<std::size_t>(c) * subsets.size());
    const long long denom = static_cast<long long>(points);
    for (std::uint32_t part = 0; part < c; ++part)
        for (std::size_t si = 0; si < subsets.size(); ++si)
            out.push_back({part, subsets[si], sizes[si][part],
                           Rat(static_cast<long long>(sizes[si][part]), denom)});
    return out;
}

MaxProjection max_projection(const PartLabeling& p, std::uint32_t s) {
    auto table = projection_fraction_table(p, s);
    const ProjectionEntry* best = nullptr;
    for (const auto& e : table) {
        if (!best || e.size > best->size) best = &e;
        // table order is (part asc, axes lex), so strict > keeps the tie-break
    }
    return {best->size, best->part, best->axes, best->fraction};
}

}  // namespace projmerge
