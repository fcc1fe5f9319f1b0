#pragma once

// Exterior Dirichlet-to-Neumann map Lambda_q f = (A u)|target for data f on a
// source window, and the weighted exterior pairing <g, f> = h^dim g.f.

#include <cmath>

#include <Eigen/SVD>

#include "fraccal/forward.hpp"

namespace fraccal {

struct DnMap {
    IndexSet source;
    IndexSet target;
    Matrix matrix;  // |target| x |source|
    double pairing_weight = 1.0;

    /// Weighted pairing <Lambda f, g>.
    double pairing(const Vector& f_source, const Vector& g_target) const {
        if (f_source.size() != matrix.cols() || g_target.size() != matrix.rows())
            throw IndexMismatch("pairing vectors do not match the DN map shape");
        return pairing_weight * g_target.dot(matrix * f_source);
    }
};

/// Column j is (A u_j)|target with u_j the solution for data e_j on the source window.
inline DnMap assemble_dn(const ForwardProblem& problem, const IndexSet& source, const IndexSet& target) {
    const auto& part = problem.partition();
    if (!subset(source, part.exterior) || !subset(target, part.exterior))
        throw IndexMismatch("DN windows must lie in the exterior");
    const Matrix& a = problem.op().matrix();
    const Matrix p = poisson_operator(problem, source);
    DnMap dn;
    dn.source = source;
    dn.target = target;
    dn.matrix = a(target, source) + a(target, part.omega) * p;
    dn.pairing_weight = problem.grid().weight();
    return dn;
}

inline DnMap assemble_dn(const ForwardProblem& problem) {
    return assemble_dn(problem, problem.partition().w1, problem.partition().w2);
}

inline DnMap assemble_full_dn(const ForwardProblem& problem) {
    return assemble_dn(problem, problem.partition().exterior, problem.partition().exterior);
}

inline DnMap operator-(const DnMap& a, const DnMap& b) {
    if (a.source != b.source || a.target != b.target) throw IndexMismatch("DN maps have different windows");
    return DnMap{a.source, a.target, a.matrix - b.matrix, a.pairing_weight};
}

inline DnMap operator*(double c, const DnMap& a) { return DnMap{a.source, a.target, c * a.matrix, a.pairing_weight}; }

/// Lambda_{q1} - Lambda_{q2} on (source, target) as U2^T diag(q1 - q2) U1.
///
/// Algebraically identical to subtracting two assembled maps, but free of the
/// cancellation that dominates when the difference is tiny.
inline DnMap dn_difference(const ForwardProblem& p1, const ForwardProblem& p2, const IndexSet& source,
                           const IndexSet& target) {
    if (!(p1.partition().omega == p2.partition().omega)) throw IndexMismatch("problems have different omega");
    const Matrix u1 = poisson_operator(p1, source);
    const Matrix u2 = poisson_operator(p2, target);
    const Vector dq = p1.q().values() - p2.q().values();
    return DnMap{source, target, u2.transpose() * dq.asDiagonal() * u1, p1.grid().weight()};
}

/// Largest singular value of the map with h^{dim/2} weights on both sides.
inline double dn_norm(const DnMap& dn) {
    if (dn.matrix.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(dn.matrix);
    return dn.pairing_weight * svd.singularValues()[0];
}

struct IdentityResidual {
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
};

/// Both sides of ((Lambda_1 - Lambda_2) f1, f2)_ext = int_omega (q1 - q2) u1 u2.
///
/// The left side goes through the assembled (Schur complement) DN maps, the right
/// side through the two forward solves.
inline IdentityResidual integral_identity_residual(const ForwardProblem& p1, const ForwardProblem& p2,
                                                   const Vector& f1, const Vector& f2) {
    const auto& part = p1.partition();
    if (!(part.omega == p2.partition().omega) || part.w1 != p2.partition().w1 || part.w2 != p2.partition().w2)
        throw IndexMismatch("identity needs two problems on the same partition");
    const DnMap diff = assemble_dn(p1) - assemble_dn(p2);
    IdentityResidual r;
    r.lhs = diff.pairing(f1, f2);
    const GridFunction u1 = solve_window(p1, part.w1, f1);
    const GridFunction u2 = solve_window(p2, part.w2, f2);
    const Vector dq = p1.q().values() - p2.q().values();
    r.rhs = part.grid.weight() * (dq.array() * restrict_to(u1, part.omega).array() *
                                  restrict_to(u2, part.omega).array()).sum();
    r.gap = std::abs(r.lhs - r.rhs);
    return r;
}

} // namespace fraccal
