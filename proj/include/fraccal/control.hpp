#pragma once

// Runge approximation as regularized control: exterior data f on a window whose
// solution restricted to omega approximates a target v, f = argmin |Pf - v|^2 + alpha |f|^2.

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Cholesky>

#include "fraccal/dnmap.hpp"

namespace fraccal {

struct ControlResult {
    Vector f;
    double alpha = 0.0;
    double achieved_error = 0.0;  // weighted L2 |P f - v|
    double control_cost = 0.0;    // weighted L2 |f|
    Vector target;
    double relative_error = 0.0;  // achieved_error / |v|, or achieved_error when v = 0
};

namespace detail {

/// Solves (P^T P + alpha I) f = P^T v by Cholesky with residual-based refinement
/// (the residual is evaluated in unsquared form, which recovers the accuracy lost
/// by forming P^T P).
inline Vector tikhonov_normal_solve(const Matrix& p, const Vector& v, double alpha, int refinement_steps = 3) {
    Matrix normal = p.transpose() * p;
    normal.diagonal().array() += alpha;
    Eigen::LLT<Matrix> llt(normal);
    if (llt.info() != Eigen::Success) throw NumericalFailure("normal equations are not positive definite");
    const double rcond = llt.rcond();
    if (!(rcond > std::numeric_limits<double>::epsilon()))
        throw NumericalFailure("normal equations are numerically singular (rcond = " + std::to_string(rcond) + ")");
    Vector f = llt.solve(p.transpose() * v);
    for (int k = 0; k < refinement_steps; ++k) {
        const Vector r = p.transpose() * (v - p * f) - alpha * f;
        f += llt.solve(r);
    }
    return f;
}

} // namespace detail

inline ControlResult compute_control(const ForwardProblem& problem, const IndexSet& window, const Vector& v,
                                     double alpha) {
    if (!(alpha > 0.0)) throw InvalidParameter("regularization weight alpha must be positive");
    if (v.size() != static_cast<Index>(problem.partition().omega.size()))
        throw IndexMismatch("control target must have one value per omega node");
    const Matrix p = poisson_operator(problem, window);
    const double w = problem.grid().weight();
    ControlResult r;
    r.alpha = alpha;
    r.target = v;
    r.f = detail::tikhonov_normal_solve(p, v, alpha);
    r.achieved_error = std::sqrt(w) * (p * r.f - v).norm();
    r.control_cost = std::sqrt(w) * r.f.norm();
    const double vn = std::sqrt(w) * v.norm();
    r.relative_error = vn == 0.0 ? r.achieved_error : r.achieved_error / vn;
    return r;
}

struct CostPoint {
    double alpha;
    double achieved_error;
    double control_cost;
};

inline std::vector<CostPoint> cost_curve(const ForwardProblem& problem, const IndexSet& window, const Vector& v,
                                         const std::vector<double>& alphas) {
    for (std::size_t k = 0; k < alphas.size(); ++k) {
        if (!(alphas[k] > 0.0)) throw InvalidParameter("cost curve alphas must be positive");
        if (k > 0 && !(alphas[k] < alphas[k - 1])) throw InvalidParameter("cost curve alphas must be decreasing");
    }
    const Matrix p = poisson_operator(problem, window);
    const double w = problem.grid().weight();
    std::vector<CostPoint> out;
    out.reserve(alphas.size());
    for (double a : alphas) {
        const Vector f = detail::tikhonov_normal_solve(p, v, a);
        out.push_back({a, std::sqrt(w) * (p * f - v).norm(), std::sqrt(w) * f.norm()});
    }
    return out;
}

/// Norm of the gradient of |Pf - v|^2 + alpha |f|^2 at f, and its reference scale.
inline std::pair<double, double> tikhonov_gradient(const Matrix& p, const Vector& v, const Vector& f, double alpha) {
    const Vector ptv = p.transpose() * v;
    const Vector g = p.transpose() * (p * f) - ptv + alpha * f;
    return {g.norm(), ptv.norm() + alpha * f.norm()};
}

struct DualCertificate {
    GridFunction phi;    // ((-Delta)^s + q) phi = F in omega, phi = 0 outside
    Vector window_trace; // ((-Delta)^s phi)|window
};

inline DualCertificate dual_certificate(const ForwardProblem& problem, const IndexSet& window, const Vector& source) {
    const auto& part = problem.partition();
    if (source.size() != static_cast<Index>(part.omega.size()))
        throw IndexMismatch("interior source must have one value per omega node");
    if (!subset(window, part.exterior)) throw IndexMismatch("window is not contained in the exterior");
    const Vector phi_omega = problem.solve_interior(source);
    DualCertificate d{extend_by_zero(phi_omega, part.omega, problem.grid()), Vector()};
    d.window_trace = problem.op().matrix()(window, part.omega) * phi_omega;
    return d;
}

} // namespace fraccal
