#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "projmerge/rational.hpp"

namespace projmerge {

/// Dimensions of the discrete grid [N]^t.  Cells are ordered row-major with
/// axis 0 slowest; this order is shared by every module and by serialization.
struct GridDims {
    std::uint32_t t = 0;
    std::uint64_t side = 0;

    GridDims() = default;
    GridDims(std::uint32_t t_, std::uint64_t side_);

    std::uint64_t cell_count() const { return cells_; }

    std::uint64_t index_of(const std::vector<std::uint64_t>& coords) const;
    std::vector<std::uint64_t> coords_of(std::uint64_t index) const;

    bool operator==(const GridDims& o) const { return t == o.t && side == o.side; }

  private:
    std::uint64_t cells_ = 0;
};

/// Strictly increasing subset of axis indices, all < t.
struct AxisSubset {
    std::vector<std::uint32_t> indices;

    AxisSubset() = default;
    explicit AxisSubset(std::vector<std::uint32_t> idx);

    std::size_t size() const { return indices.size(); }
    void validate_for(const GridDims& dims) const;
    bool operator==(const AxisSubset& o) const { return indices == o.indices; }
    bool operator<(const AxisSubset& o) const { return indices < o.indices; }
};

/// All size-s subsets of [t] in lexicographic order.
std::vector<AxisSubset> axis_subsets(std::uint32_t t, std::uint32_t s);

/// One bit per cell of [N]^t, row-major.
class CellMask {
  public:
    explicit CellMask(GridDims dims);

    const GridDims& dims() const { return dims_; }
    bool test(std::uint64_t cell) const {
        return (words_[cell >> 6] >> (cell & 63)) & 1u;
    }
    void set(std::uint64_t cell, bool value = true);
    std::uint64_t popcount() const;

    CellMask operator|(const CellMask& o) const;
    CellMask operator&(const CellMask& o) const;
    bool is_subset_of(const CellMask& o) const;
    bool operator==(const CellMask& o) const {
        return dims_ == o.dims_ && words_ == o.words_;
    }

  private:
    GridDims dims_;
    std::vector<std::uint64_t> words_;
};

/// Bit set over the projected grid [N]^s.
class ProjectionImage {
  public:
    ProjectionImage(GridDims dims, AxisSubset axes);

    const GridDims& projected_dims() const { return pdims_; }
    const AxisSubset& axes() const { return axes_; }
    bool test(std::uint64_t point) const {
        return (words_[point >> 6] >> (point & 63)) & 1u;
    }
    void set(std::uint64_t point);
    std::uint64_t size() const;
    bool is_subset_of(const ProjectionImage& o) const;
    bool operator==(const ProjectionImage& o) const {
        return pdims_ == o.pdims_ && axes_ == o.axes_ && words_ == o.words_;
    }
    ProjectionImage operator|(const ProjectionImage& o) const;

  private:
    GridDims pdims_;
    AxisSubset axes_;
    std::vector<std::uint64_t> words_;
};

/// A c-part labeling of [N]^t: one part id per cell, row-major.
class PartLabeling {
  public:
    PartLabeling(GridDims dims, std::uint32_t parts, std::vector<std::uint8_t> labels);

    const GridDims& dims() const { return dims_; }
    std::uint32_t parts() const { return parts_; }
    std::uint8_t label(std::uint64_t cell) const { return labels_[cell]; }
    const std::vector<std::uint8_t>& labels() const { return labels_; }

    CellMask part_mask(std::uint32_t part) const;
    bool operator==(const PartLabeling& o) const {
        return dims_ == o.dims_ && parts_ == o.parts_ && labels_ == o.labels_;
    }

  private:
    GridDims dims_;
    std::uint32_t parts_;
    std::vector<std::uint8_t> labels_;
};

ProjectionImage project(const CellMask& mask, const AxisSubset& axes);

struct ProjectionEntry {
    std::uint32_t part;
    AxisSubset axes;
    std::uint64_t size;
    Rat fraction;  // size / N^s, exact
};

/// One entry per (part, size-s axis subset) pair; parts ascending, axes lex.
std::vector<ProjectionEntry> projection_fraction_table(const PartLabeling& p,
                                                       std::uint32_t s);

struct MaxProjection {
    std::uint64_t size;
    std::uint32_t part;
    AxisSubset axes;
    Rat fraction;
};

/// Maximum of the table; ties broken by smallest part id, then lex-least axes.
MaxProjection max_projection(const PartLabeling& p, std::uint32_t s);

}  // namespace projmerge
