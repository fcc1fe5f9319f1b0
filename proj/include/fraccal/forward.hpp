#pragma once

// Exterior-value problem ((-Delta)^s + q) u = 0 in omega, u = f on the exterior.
//
// With u = (u_O, f) the interior equations read (A_OO + Q) u_O = -A_OE f, so the
// Poisson operator is -(A_OO + Q)^{-1} A_OE restricted to window columns.

#include <algorithm>
#include <memory>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "fraccal/fracop.hpp"

namespace fraccal {

/// Bounded potential on the omega nodes of a partition.
class Potential {
public:
    Potential() = default;
    Potential(IndexSet region, Vector values) : region_(std::move(region)), values_(std::move(values)) {
        if (values_.size() != static_cast<Index>(region_.size()))
            throw IndexMismatch("potential has " + std::to_string(values_.size()) + " values for " +
                                std::to_string(region_.size()) + " omega nodes");
        if (!values_.allFinite()) throw InvalidParameter("potential values must be finite");
    }

    static Potential zero(const IndexSet& region) {
        return Potential(region, Vector::Zero(static_cast<Index>(region.size())));
    }

    const IndexSet& region() const noexcept { return region_; }
    const Vector& values() const noexcept { return values_; }
    Index size() const noexcept { return values_.size(); }
    double bound() const { return values_.size() == 0 ? 0.0 : values_.cwiseAbs().maxCoeff(); }

private:
    IndexSet region_;
    Vector values_;
};

/// Relative threshold on sigma_min of the interior matrix, scaled by its max-abs entry.
inline constexpr double kWellPosedTolerance = 1e-10;

class ForwardProblem {
public:
    ForwardProblem(std::shared_ptr<const FracOperator> op, RegionPartition partition, Potential q)
        : op_(std::move(op)), partition_(std::move(partition)), q_(std::move(q)) {
        if (!op_) throw InvalidParameter("forward problem needs an operator");
        if (!(op_->grid() == partition_.grid)) throw IndexMismatch("operator and partition live on different grids");
        if (q_.region() != partition_.omega) throw IndexMismatch("potential is not defined on omega");
        const Matrix& a = op_->matrix();
        interior_ = a(partition_.omega, partition_.omega);
        interior_.diagonal() += q_.values();
        coupling_ = a(partition_.omega, partition_.exterior);

        Eigen::SelfAdjointEigenSolver<Matrix> eig(interior_, Eigen::EigenvaluesOnly);
        if (eig.info() != Eigen::Success) throw EigendecompositionFailure("interior eigensolve did not converge");
        sigma_min_ = eig.eigenvalues().cwiseAbs().minCoeff();
        threshold_ = kWellPosedTolerance * interior_.cwiseAbs().maxCoeff();
        lu_.compute(interior_);
    }

    const FracOperator& op() const noexcept { return *op_; }
    const std::shared_ptr<const FracOperator>& op_ptr() const noexcept { return op_; }
    const RegionPartition& partition() const noexcept { return partition_; }
    const Grid& grid() const noexcept { return partition_.grid; }
    const Potential& q() const noexcept { return q_; }
    const Matrix& interior_matrix() const noexcept { return interior_; }

    double sigma_min() const noexcept { return sigma_min_; }
    double tolerance() const noexcept { return threshold_; }
    bool well_posed() const noexcept { return sigma_min_ > threshold_; }

    void require_well_posed() const {
        if (!well_posed()) throw IllPosed("0 is an exterior Dirichlet eigenvalue of the discrete problem", sigma_min_);
    }

    /// Interior values for exterior data given on every exterior node.
    Vector interior_response(const Vector& f_exterior) const {
        require_well_posed();
        if (f_exterior.size() != static_cast<Index>(partition_.exterior.size()))
            throw IndexMismatch("exterior data has " + std::to_string(f_exterior.size()) + " values for " +
                                std::to_string(partition_.exterior.size()) + " exterior nodes");
        return -lu_.solve(coupling_ * f_exterior);
    }

    /// Solves (A_OO + Q) x = rhs.
    Matrix solve_interior(const Matrix& rhs) const {
        require_well_posed();
        if (rhs.rows() != interior_.rows()) throw IndexMismatch("interior right-hand side has the wrong size");
        return lu_.solve(rhs);
    }

    /// Coupling block A(omega, exterior columns at `window`).
    Matrix coupling(const IndexSet& window) const {
        return op_->matrix()(partition_.omega, window);
    }

private:
    std::shared_ptr<const FracOperator> op_;
    RegionPartition partition_;
    Potential q_;
    Matrix interior_;
    Matrix coupling_;
    Eigen::PartialPivLU<Matrix> lu_;
    double sigma_min_ = 0.0;
    double threshold_ = 0.0;
};

inline double check_wellposed(const ForwardProblem& problem) { return problem.sigma_min(); }

/// u with u|exterior = f and (A u + q u)|omega = 0.
inline GridFunction solve(const ForwardProblem& problem, const Vector& f_exterior) {
    const auto& part = problem.partition();
    Vector u_omega = problem.interior_response(f_exterior);
    Vector full(problem.grid().size());
    for (std::size_t k = 0; k < part.exterior.size(); ++k) full[part.exterior[k]] = f_exterior[static_cast<Index>(k)];
    for (std::size_t k = 0; k < part.omega.size(); ++k) full[part.omega[k]] = u_omega[static_cast<Index>(k)];
    return GridFunction(problem.grid(), std::move(full));
}

/// Exterior data supported in `window` (zero elsewhere in the exterior).
inline GridFunction solve_window(const ForwardProblem& problem, const IndexSet& window, const Vector& f_window) {
    const auto& part = problem.partition();
    if (!subset(window, part.exterior)) throw IndexMismatch("window is not contained in the exterior");
    if (f_window.size() != static_cast<Index>(window.size())) throw IndexMismatch("window data has the wrong size");
    Vector f = Vector::Zero(static_cast<Index>(part.exterior.size()));
    auto pos = positions_in(window, part.exterior);
    for (std::size_t k = 0; k < pos.size(); ++k) f[pos[k]] = f_window[static_cast<Index>(k)];
    return solve(problem, f);
}

/// Matrix (|omega| x |window|): column j is solve(e_j)|omega.
inline Matrix poisson_operator(const ForwardProblem& problem, const IndexSet& window) {
    problem.require_well_posed();
    if (!subset(window, problem.partition().exterior)) throw IndexMismatch("window is not contained in the exterior");
    return -problem.solve_interior(problem.coupling(window));
}

/// Interior residual |(A u + q u)|omega| / (|A| |u|), the quantity solve drives to zero.
inline double interior_residual(const ForwardProblem& problem, const GridFunction& u) {
    const auto& part = problem.partition();
    Vector au = problem.op().matrix() * u.values();
    Vector r = restrict_to(au, part.omega) + problem.q().values().cwiseProduct(restrict_to(u, part.omega));
    const double scale = problem.op().matrix().cwiseAbs().maxCoeff() * std::max(u.values().cwiseAbs().maxCoeff(), 1e-300);
    return r.cwiseAbs().maxCoeff() / scale;
}

} // namespace fraccal
