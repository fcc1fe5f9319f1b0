#pragma once

// Uniform lattices on a truncated box, interior/exterior partitions and grid
// functions with the quadrature-weighted inner product h^dim * sum(u_i v_i).

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fraccal/errors.hpp"

namespace fraccal {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Sorted list of flat node indices.
using IndexSet = std::vector<Index>;

using Point = std::array<double, 2>;

/// Closed axis-aligned box; only the first `dim` components are used.
struct Box {
    Point lo{0.0, 0.0};
    Point hi{0.0, 0.0};
};

class Grid {
public:
    Grid() = default;

    Grid(int dim, std::vector<Index> counts, double spacing, Point origin = {0.0, 0.0})
        : dim_(dim), counts_(std::move(counts)), spacing_(spacing), origin_(origin) {
        if (dim_ != 1 && dim_ != 2)
            throw InvalidGeometry("grid dimension must be 1 or 2, got " + std::to_string(dim_));
        if (static_cast<int>(counts_.size()) != dim_)
            throw InvalidGeometry("grid needs one node count per axis");
        for (Index c : counts_)
            if (c < 3) throw InvalidGeometry("every axis needs at least 3 nodes, got " + std::to_string(c));
        if (!(spacing_ > 0.0) || !std::isfinite(spacing_))
            throw InvalidGeometry("grid spacing must be positive");
        size_ = 1;
        for (Index c : counts_) size_ *= c;
    }

    int dim() const noexcept { return dim_; }
    const std::vector<Index>& counts() const noexcept { return counts_; }
    Index count(int axis) const { return counts_[static_cast<std::size_t>(axis)]; }
    double spacing() const noexcept { return spacing_; }
    const Point& origin() const noexcept { return origin_; }
    Index size() const noexcept { return size_; }

    /// Quadrature weight h^dim of one node.
    double weight() const { return std::pow(spacing_, dim_); }

    /// Axis 0 varies fastest.
    Index flat(Index i, Index j = 0) const { return i + counts_[0] * j; }

    std::array<Index, 2> multi(Index flat_index) const {
        if (dim_ == 1) return {flat_index, 0};
        return {flat_index % counts_[0], flat_index / counts_[0]};
    }

    Point coord(Index flat_index) const {
        auto m = multi(flat_index);
        Point p{origin_[0] + spacing_ * static_cast<double>(m[0]), 0.0};
        if (dim_ == 2) p[1] = origin_[1] + spacing_ * static_cast<double>(m[1]);
        return p;
    }

    Box bounds() const {
        Box b;
        for (int a = 0; a < dim_; ++a) {
            b.lo[a] = origin_[a];
            b.hi[a] = origin_[a] + spacing_ * static_cast<double>(counts_[a] - 1);
        }
        return b;
    }

    bool operator==(const Grid& other) const = default;

private:
    int dim_ = 1;
    std::vector<Index> counts_{3};
    double spacing_ = 1.0;
    Point origin_{0.0, 0.0};
    Index size_ = 3;
};

inline Grid build_grid(int dim, std::vector<Index> counts, double spacing, Point origin = {0.0, 0.0}) {
    return Grid(dim, std::move(counts), spacing, origin);
}

/// Inclusive membership with a tolerance of 1e-9 h so nodes on the box faces count.
inline bool contains(const Grid& grid, const Box& box, Index node) {
    const double tol = 1e-9 * grid.spacing();
    const Point p = grid.coord(node);
    for (int a = 0; a < grid.dim(); ++a)
        if (p[a] < box.lo[a] - tol || p[a] > box.hi[a] + tol) return false;
    return true;
}

inline IndexSet rasterize(const Grid& grid, const Box& box) {
    IndexSet out;
    for (Index n = 0; n < grid.size(); ++n)
        if (contains(grid, box, n)) out.push_back(n);
    return out;
}

inline bool disjoint(const IndexSet& a, const IndexSet& b) {
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia == *ib) return false;
        if (*ia < *ib) ++ia; else ++ib;
    }
    return true;
}

inline bool subset(const IndexSet& a, const IndexSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

struct RegionPartition {
    Grid grid;
    IndexSet omega;
    IndexSet exterior;
    IndexSet w1;
    IndexSet w2;
};

/// Checks every partition invariant; throws InvalidGeometry naming the first violation.
inline void validate(const RegionPartition& p) {
    const Grid& g = p.grid;
    if (p.omega.empty()) throw InvalidGeometry("omega contains no grid nodes");
    if (p.w1.empty()) throw InvalidGeometry("window w1 contains no grid nodes");
    if (p.w2.empty()) throw InvalidGeometry("window w2 contains no grid nodes");
    for (const IndexSet* s : {&p.omega, &p.exterior, &p.w1, &p.w2}) {
        if (!std::is_sorted(s->begin(), s->end()) || std::adjacent_find(s->begin(), s->end()) != s->end())
            throw InvalidGeometry("index sets must be sorted and duplicate free");
        if (!s->empty() && (s->front() < 0 || s->back() >= g.size()))
            throw InvalidGeometry("index set exceeds the grid");
    }
    if (!disjoint(p.omega, p.exterior) || static_cast<Index>(p.omega.size() + p.exterior.size()) != g.size())
        throw InvalidGeometry("omega and exterior must partition the grid");
    if (!disjoint(p.w1, p.omega)) throw InvalidGeometry("window w1 overlaps omega");
    if (!disjoint(p.w2, p.omega)) throw InvalidGeometry("window w2 overlaps omega");
    if (!subset(p.w1, p.exterior) || !subset(p.w2, p.exterior))
        throw InvalidGeometry("windows must lie in the exterior");
    for (Index n : p.omega) {
        auto m = g.multi(n);
        for (int a = 0; a < g.dim(); ++a)
            if (m[a] == 0 || m[a] == g.count(a) - 1)
                throw InvalidGeometry("omega touches the grid boundary layer");
    }
}

inline RegionPartition partition_box(const Grid& grid, const Box& omega_box, const Box& w1_box, const Box& w2_box) {
    RegionPartition p;
    p.grid = grid;
    p.omega = rasterize(grid, omega_box);
    for (Index n = 0; n < grid.size(); ++n)
        if (!std::binary_search(p.omega.begin(), p.omega.end(), n)) p.exterior.push_back(n);
    p.w1 = rasterize(grid, w1_box);
    p.w2 = rasterize(grid, w2_box);
    validate(p);
    return p;
}

/// Partition whose windows are both the whole truncated exterior.
inline RegionPartition partition_full_exterior(const Grid& grid, const Box& omega_box) {
    RegionPartition p;
    p.grid = grid;
    p.omega = rasterize(grid, omega_box);
    for (Index n = 0; n < grid.size(); ++n)
        if (!std::binary_search(p.omega.begin(), p.omega.end(), n)) p.exterior.push_back(n);
    p.w1 = p.exterior;
    p.w2 = p.exterior;
    validate(p);
    return p;
}

/// Positions of `sub` inside the sorted superset `super`.
inline std::vector<Index> positions_in(const IndexSet& sub, const IndexSet& super) {
    std::vector<Index> pos;
    pos.reserve(sub.size());
    for (Index n : sub) {
        auto it = std::lower_bound(super.begin(), super.end(), n);
        if (it == super.end() || *it != n) throw IndexMismatch("node " + std::to_string(n) + " not in region");
        pos.push_back(static_cast<Index>(it - super.begin()));
    }
    return pos;
}

class GridFunction {
public:
    GridFunction() = default;
    explicit GridFunction(Grid grid) : grid_(std::move(grid)), values_(Vector::Zero(grid_.size())) {}
    GridFunction(Grid grid, Vector values) : grid_(std::move(grid)), values_(std::move(values)) {
        if (values_.size() != grid_.size())
            throw IndexMismatch("grid function has " + std::to_string(values_.size()) + " values for " +
                                std::to_string(grid_.size()) + " nodes");
    }

    const Grid& grid() const noexcept { return grid_; }
    const Vector& values() const noexcept { return values_; }
    Vector& values() noexcept { return values_; }
    double operator[](Index i) const { return values_[i]; }

private:
    Grid grid_;
    Vector values_;
};

inline double inner(const GridFunction& u, const GridFunction& v) {
    if (!(u.grid() == v.grid())) throw IndexMismatch("inner product of grid functions on different grids");
    return u.grid().weight() * u.values().dot(v.values());
}

inline double norm(const GridFunction& u) { return std::sqrt(inner(u, u)); }

inline void check_region(const IndexSet& region, Index size) {
    for (Index n : region)
        if (n < 0 || n >= size) throw IndexMismatch("region index " + std::to_string(n) + " out of range");
}

inline Vector restrict_to(const Vector& u, const IndexSet& region) {
    check_region(region, u.size());
    Vector out(static_cast<Index>(region.size()));
    for (std::size_t k = 0; k < region.size(); ++k) out[static_cast<Index>(k)] = u[region[k]];
    return out;
}

inline Vector restrict_to(const GridFunction& u, const IndexSet& region) { return restrict_to(u.values(), region); }

inline GridFunction extend_by_zero(const Vector& values, const IndexSet& region, const Grid& grid) {
    if (values.size() != static_cast<Index>(region.size()))
        throw IndexMismatch("extend_by_zero: " + std::to_string(values.size()) + " values for a region of " +
                            std::to_string(region.size()) + " nodes");
    check_region(region, grid.size());
    Vector full = Vector::Zero(grid.size());
    for (std::size_t k = 0; k < region.size(); ++k) full[region[k]] = values[static_cast<Index>(k)];
    return GridFunction(grid, std::move(full));
}

/// Node coordinates of a region, one row per node.
inline Matrix coordinates(const Grid& grid, const IndexSet& region) {
    Matrix xy(static_cast<Index>(region.size()), grid.dim());
    for (std::size_t k = 0; k < region.size(); ++k) {
        Point p = grid.coord(region[k]);
        for (int a = 0; a < grid.dim(); ++a) xy(static_cast<Index>(k), a) = p[a];
    }
    return xy;
}

} // namespace fraccal
