#pragma once

// Degenerate extension div(y^{1-2s} grad w) = 0 on the half-strip over a 1D base
// grid, w = u at y = 0, zero on the lateral sides and the top cap.
//
// Finite volumes with cell-averaged weights: the vertical flux between levels j
// and j+1 uses int_{y_j}^{y_{j+1}} y^a dy / (dy_j)^2 and the horizontal coupling at
// level j uses int over [y_{j-1/2}, y_{j+1/2}] of y^a (clipped to [0, y_{1/2}] on the
// base), with a = 1 - 2s. Both integrals are taken with the exact antiderivative,
// so y = 0 is never evaluated.
//
// The unknown is the deviation w - u from the datum extended constantly in y. On
// strongly graded meshes w barely moves across the first cell, and storing the
// deviation keeps that difference at full relative precision.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "fraccal/fracop.hpp"

namespace fraccal {

struct ExtensionProblem {
    Grid base_grid;         // 1D, lateral zero Dirichlet beyond the first and last node
    double s = 0.5;
    std::vector<double> y;  // y[0] = 0 < y[1] < ... < y[M] = cap
    Vector datum;           // boundary value u on y = 0

    Index levels() const { return static_cast<Index>(y.size()) - 1; }
    double exponent() const { return 1.0 - 2.0 * s; }
};

/// Default grading exponent max(1, 1/(2-2s)).
inline double default_grading(double s) { return std::max(1.0, 1.0 / (2.0 - 2.0 * s)); }

/// Default cap: four widths of the base interval (lateral boundary to lateral boundary).
inline double default_cap(const Grid& base) {
    return 4.0 * base.spacing() * static_cast<double>(base.count(0) + 1);
}

inline ExtensionProblem make_extension(const Grid& base, double s, Index levels, Vector datum, double grading = 0.0,
                                       double cap = 0.0) {
    if (base.dim() != 1) throw InvalidGeometry("the extension solver needs a one-dimensional base grid");
    if (!(s > 0.0 && s < 1.0)) throw InvalidParameter("extension exponent s must lie in (0,1)");
    if (levels < 2) throw InvalidParameter("extension needs at least 2 y-levels");
    if (datum.size() != base.size()) throw IndexMismatch("extension datum does not match the base grid");
    if (!datum.allFinite()) throw InvalidParameter("extension datum must be finite");
    if (grading == 0.0) grading = default_grading(s);
    if (cap == 0.0) cap = default_cap(base);
    if (grading < 1.0) throw InvalidParameter("grading exponent must be >= 1");
    ExtensionProblem p;
    p.base_grid = base;
    p.s = s;
    p.datum = std::move(datum);
    p.y.resize(static_cast<std::size_t>(levels) + 1);
    for (Index j = 0; j <= levels; ++j)
        p.y[static_cast<std::size_t>(j)] = cap * std::pow(static_cast<double>(j) / static_cast<double>(levels), grading);
    return p;
}

namespace detail {

/// int_lo^hi y^a dy for a = 1 - 2s > -1.
inline double weight_integral(double lo, double hi, double a) {
    return (std::pow(hi, a + 1.0) - std::pow(lo, a + 1.0)) / (a + 1.0);
}

struct StripCoefficients {
    std::vector<double> vertical;    // per gap j -> j+1, multiplies (w_{j+1} - w_j)^2 h
    std::vector<double> horizontal;  // per level, multiplies (w_{i+1} - w_i)^2 / h
};

inline StripCoefficients strip_coefficients(const ExtensionProblem& p) {
    const double a = p.exponent();
    const Index m = p.levels();
    StripCoefficients c;
    c.vertical.resize(static_cast<std::size_t>(m));
    c.horizontal.assign(static_cast<std::size_t>(m) + 1, 0.0);
    for (Index j = 0; j < m; ++j) {
        const double lo = p.y[static_cast<std::size_t>(j)];
        const double hi = p.y[static_cast<std::size_t>(j) + 1];
        if (!(hi > lo)) throw SingularWeight("y-levels must be strictly increasing");
        c.vertical[static_cast<std::size_t>(j)] = weight_integral(lo, hi, a) / ((hi - lo) * (hi - lo));
    }
    c.horizontal[0] = weight_integral(0.0, 0.5 * p.y[1], a);
    for (Index j = 1; j < m; ++j) {
        const double lo = 0.5 * (p.y[static_cast<std::size_t>(j) - 1] + p.y[static_cast<std::size_t>(j)]);
        const double hi = 0.5 * (p.y[static_cast<std::size_t>(j)] + p.y[static_cast<std::size_t>(j) + 1]);
        c.horizontal[static_cast<std::size_t>(j)] = weight_integral(lo, hi, a);
    }
    return c;
}

} // namespace detail

/// Solution values, w(i, j) at base node i and level j (column 0 is the datum, column M the cap),
/// and the deviation lift = w - datum computed directly by the solver.
struct ExtensionSolution {
    Matrix w;
    Matrix lift;
};

namespace detail {

/// (2u_i - u_{i-1} - u_{i+1}) / h^2 with zero lateral values.
inline Vector base_laplacian_apply(const Vector& u, double h) {
    const Index n = u.size();
    Vector out(n);
    for (Index i = 0; i < n; ++i)
        out[i] = (2.0 * u[i] - (i > 0 ? u[i - 1] : 0.0) - (i + 1 < n ? u[i + 1] : 0.0)) / (h * h);
    return out;
}

} // namespace detail

inline ExtensionSolution solve_extension(const ExtensionProblem& p) {
    const Index n = p.base_grid.size();
    const Index m = p.levels();
    const double h = p.base_grid.spacing();
    const auto c = detail::strip_coefficients(p);
    const Index unknowns = n * (m - 1);
    auto id = [n](Index i, Index j) { return i + n * (j - 1); };

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(unknowns) * 5);
    Vector rhs = Vector::Zero(unknowns);
    const Vector lu = detail::base_laplacian_apply(p.datum, h);
    for (Index j = 1; j < m; ++j) {
        const double mu = c.horizontal[static_cast<std::size_t>(j)] / h;
        const double below = c.vertical[static_cast<std::size_t>(j) - 1] * h;
        const double above = c.vertical[static_cast<std::size_t>(j)] * h;
        for (Index i = 0; i < n; ++i) {
            const Index r = id(i, j);
            trip.emplace_back(r, r, 2.0 * mu + below + above);
            if (i > 0) trip.emplace_back(r, id(i - 1, j), -mu);
            if (i + 1 < n) trip.emplace_back(r, id(i + 1, j), -mu);
            rhs[r] -= mu * h * h * lu[i];
            if (j > 1) trip.emplace_back(r, id(i, j - 1), -below);
            if (j + 1 < m) trip.emplace_back(r, id(i, j + 1), -above);
            else rhs[r] -= above * p.datum[i];
        }
    }
    Eigen::SparseMatrix<double> s(unknowns, unknowns);
    s.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(s);
    if (ldlt.info() != Eigen::Success) throw NumericalFailure("extension system factorization failed");
    const Vector x = ldlt.solve(rhs);

    ExtensionSolution sol;
    sol.lift = Matrix::Zero(n, m + 1);
    for (Index j = 1; j < m; ++j) sol.lift.col(j) = x.segment(n * (j - 1), n);
    sol.lift.col(m) = -p.datum;
    sol.w = sol.lift.colwise() + p.datum;
    sol.w.col(m).setZero();
    return sol;
}

/// Max relative residual of the discrete weighted equation at the interior strip nodes.
inline double extension_residual(const ExtensionProblem& p, const ExtensionSolution& sol) {
    const Index n = p.base_grid.size();
    const Index m = p.levels();
    const double h = p.base_grid.spacing();
    const auto c = detail::strip_coefficients(p);
    auto at = [&](Index i, Index j) { return (i < 0 || i >= n) ? 0.0 : sol.w(i, j); };
    double worst = 0.0;
    double scale = 0.0;
    for (Index j = 1; j < m; ++j) {
        const double mu = c.horizontal[static_cast<std::size_t>(j)] / h;
        const double below = c.vertical[static_cast<std::size_t>(j) - 1] * h;
        const double above = c.vertical[static_cast<std::size_t>(j)] * h;
        for (Index i = 0; i < n; ++i) {
            const double r = mu * (2.0 * at(i, j) - at(i - 1, j) - at(i + 1, j)) + below * (at(i, j) - at(i, j - 1)) +
                             above * (at(i, j) - at(i, j + 1));
            worst = std::max(worst, std::abs(r));
            scale = std::max(scale, (2.0 * mu + below + above) * std::abs(at(i, j)));
        }
    }
    return scale == 0.0 ? worst : worst / scale;
}

/// Outward conormal flux -y^{1-2s} dw/dy at y = 0 from the balance of the boundary
/// half cell: vertical flux through the first cell plus the horizontal exchange
/// inside [0, y_{1/2}]. With it the energy identity is exact.
inline Vector conormal_flux(const ExtensionProblem& p, const ExtensionSolution& sol) {
    const auto c = detail::strip_coefficients(p);
    return -c.vertical[0] * sol.lift.col(1) +
           c.horizontal[0] * detail::base_laplacian_apply(p.datum, p.base_grid.spacing());
}

/// Uncalibrated trace: the conormal flux, a fixed multiple of A^s u as the mesh is refined.
inline Vector raw_trace(const ExtensionProblem& p, const ExtensionSolution& sol) { return conormal_flux(p, sol); }

/// Weighted Dirichlet energy sum h c_v (dw_y)^2 + sum c_h (dw_x)^2 / h of a strip function.
inline double dirichlet_energy(const ExtensionProblem& p, const ExtensionSolution& sol) {
    const Index n = p.base_grid.size();
    const Index m = p.levels();
    const double h = p.base_grid.spacing();
    const auto c = detail::strip_coefficients(p);
    double e = 0.0;
    for (Index j = 0; j < m; ++j)
        for (Index i = 0; i < n; ++i) {
            const double d = sol.lift(i, j + 1) - sol.lift(i, j);
            e += h * c.vertical[static_cast<std::size_t>(j)] * d * d;
        }
    // the cap row is identically zero, so its horizontal term vanishes
    for (Index j = 0; j < m; ++j)
        for (Index i = -1; i < n; ++i) {
            const double left = i < 0 ? 0.0 : p.datum[i] + sol.lift(i, j);
            const double right = i + 1 >= n ? 0.0 : p.datum[i + 1] + sol.lift(i + 1, j);
            e += c.horizontal[static_cast<std::size_t>(j)] * (right - left) * (right - left) / h;
        }
    return e;
}

/// Multiplicative constant mapping the raw trace onto A^s for the first stencil eigenmode.
inline double calibrate_trace(const Grid& base, double s, Index levels, double grading = 0.0, double cap = 0.0) {
    const SpectralDecomposition spec(assemble_base_laplacian(base));
    const Vector mode = spec.eigenvectors().col(0);
    const double lambda = spec.eigenvalues()[0];
    const ExtensionProblem p = make_extension(base, s, levels, mode, grading, cap);
    const Vector raw = raw_trace(p, solve_extension(p));
    const double projected = raw.dot(mode) / mode.squaredNorm();
    if (projected == 0.0) throw NumericalFailure("calibration mode has a vanishing trace");
    return std::pow(lambda, s) / projected;
}

inline Vector weighted_neumann_trace(const ExtensionProblem& p, const ExtensionSolution& sol, double calibration) {
    return calibration * raw_trace(p, sol);
}

/// Norms over the three regions of the propagation-of-smallness argument.
struct SmallnessRow {
    double cauchy_window = 0.0;    // |u|_W + |trace|_W
    double strip_window = 0.0;     // |w| on W x (0, 1)
    double strip_interior = 0.0;   // |w| on omega x (h_level, 1)
    double boundary_interior = 0.0;// |u| on omega x {0}
};

inline SmallnessRow smallness_norms(const ExtensionProblem& p, const ExtensionSolution& sol, double calibration,
                                    const IndexSet& window, const IndexSet& omega, double h_level) {
    const double h = p.base_grid.spacing();
    const Vector trace = weighted_neumann_trace(p, sol, calibration);
    SmallnessRow r;
    r.cauchy_window = std::sqrt(h) * (restrict_to(p.datum, window).norm() + restrict_to(trace, window).norm());
    r.boundary_interior = std::sqrt(h) * restrict_to(p.datum, omega).norm();
    auto strip_norm = [&](const IndexSet& cols, double ylo) {
        double acc = 0.0;
        for (Index j = 1; j < p.levels(); ++j) {
            const double y = p.y[static_cast<std::size_t>(j)];
            if (y <= ylo || y >= 1.0) continue;
            const double dy = 0.5 * (p.y[static_cast<std::size_t>(j) + 1] - p.y[static_cast<std::size_t>(j) - 1]);
            for (Index i : cols) acc += h * dy * sol.w(i, j) * sol.w(i, j);
        }
        return std::sqrt(acc);
    };
    r.strip_window = strip_norm(window, 0.0);
    r.strip_interior = strip_norm(omega, h_level);
    return r;
}

/// Runs the smallness table over a family of boundary data.
inline std::vector<SmallnessRow> smallness_propagation_demo(const ExtensionProblem& templ,
                                                            const std::vector<Vector>& family, double calibration,
                                                            const IndexSet& window, const IndexSet& omega,
                                                            double h_level) {
    std::vector<SmallnessRow> rows;
    rows.reserve(family.size());
    for (const Vector& u : family) {
        ExtensionProblem p = templ;
        if (u.size() != p.base_grid.size()) throw IndexMismatch("family member does not match the base grid");
        p.datum = u;
        rows.push_back(smallness_norms(p, solve_extension(p), calibration, window, omega, h_level));
    }
    return rows;
}

/// Oscillations sin(k pi t / (|S| + 1)) over the consecutive nodes of `support`, zero
/// elsewhere, for odd k = 1, 3, ..., 2 count - 1, each scaled to unit weighted Dirichlet
/// energy. Their Cauchy data on a window away from the support shrinks as k grows.
inline std::vector<Vector> localized_unit_energy_family(const ExtensionProblem& templ, const IndexSet& support,
                                                        Index count) {
    check_region(support, templ.base_grid.size());
    const double len = static_cast<double>(support.size()) + 1.0;
    std::vector<Vector> out;
    for (Index m = 0; m < count; ++m) {
        const double k = static_cast<double>(2 * m + 1);
        Vector u = Vector::Zero(templ.base_grid.size());
        for (std::size_t t = 0; t < support.size(); ++t)
            u[support[t]] = std::sin(std::numbers::pi * k * static_cast<double>(t + 1) / len);
        ExtensionProblem p = templ;
        p.datum = u;
        const double e = dirichlet_energy(p, solve_extension(p));
        out.push_back(u / std::sqrt(e));
    }
    return out;
}

} // namespace fraccal
