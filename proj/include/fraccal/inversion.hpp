#pragma once

// Potential recovery from exterior DN data.
//
// The exact identity h^d <(L_1 - L_2) e_i, e_j> = h^d sum_omega (q1 - q2) u1^(i) u2^(j)
// needs solutions for the unknown potential; replacing them by reference
// solutions gives the Born (linearized) map, which is also the exact Frechet
// derivative of q -> Lambda_q. Newton re-centers the reference at the current
// estimate; output least squares uses a finite-difference Jacobian instead.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "fraccal/dnmap.hpp"

namespace fraccal {

struct MeasuredData {
    std::shared_ptr<const FracOperator> op;
    RegionPartition geometry;
    DnMap dn;                  // W1 -> W2
    double noise_level = 0.0;  // relative level used at synthesis
    double noise_sigma = 0.0;  // absolute per-entry standard deviation actually added

    double s() const { return op->s(); }

    /// Expected weighted Frobenius norm of the added noise.
    double noise_norm() const {
        return geometry.grid.weight() * noise_sigma * std::sqrt(static_cast<double>(dn.matrix.size()));
    }
};

enum class RegKind { none, tsvd, tikhonov };

inline std::string to_string(RegKind k) {
    switch (k) {
    case RegKind::none: return "none";
    case RegKind::tsvd: return "tsvd";
    case RegKind::tikhonov: return "tikhonov";
    }
    return "?";
}

/// tsvd: keep sigma >= weight * sigma_max. tikhonov: penalty weight * sigma_max^2.
struct Regularization {
    RegKind kind = RegKind::tsvd;
    double weight = 1e-8;
};

struct ReconstructionResult {
    Potential q_estimate;
    std::vector<double> residual_history;
    Regularization regularization;
    int iterations = 0;
};

inline ForwardProblem make_problem(const MeasuredData& data, const Potential& q) {
    return ForwardProblem(data.op, data.geometry, q);
}

/// Weighted Frobenius misfit h^d |Lambda_meas - Lambda_q|.
inline double misfit(const MeasuredData& data, const ForwardProblem& problem) {
    const DnMap model = assemble_dn(problem, data.dn.source, data.dn.target);
    return data.geometry.grid.weight() * (data.dn.matrix - model.matrix).norm();
}

inline double misfit(const MeasuredData& data, const Potential& q) { return misfit(data, make_problem(data, q)); }

/// h^d vec(Lambda_meas - Lambda_q), column-major over (target, source).
inline Vector data_residual(const MeasuredData& data, const ForwardProblem& problem) {
    const DnMap model = assemble_dn(problem, data.dn.source, data.dn.target);
    const Matrix d = data.geometry.grid.weight() * (data.dn.matrix - model.matrix);
    return d.reshaped();
}

/// Linearized forward map: row (t, i) is h^d u^(t) * u^(i) on omega.
inline Matrix born_matrix(const ForwardProblem& ref, const IndexSet& source, const IndexSet& target) {
    const Matrix u1 = poisson_operator(ref, source);
    const Matrix u2 = poisson_operator(ref, target);
    const Index nt = u2.cols();
    const Index ns = u1.cols();
    const double w = ref.grid().weight();
    Matrix l(nt * ns, u1.rows());
    for (Index i = 0; i < ns; ++i)
        for (Index t = 0; t < nt; ++t) l.row(t + nt * i) = w * u2.col(t).cwiseProduct(u1.col(i)).transpose();
    return l;
}

inline Matrix born_matrix(const MeasuredData& data, const ForwardProblem& ref) {
    return born_matrix(ref, data.dn.source, data.dn.target);
}

/// Forward-difference Jacobian of q -> h^dim vec(Lambda_q), the map born_matrix linearizes.
inline Matrix fd_jacobian(const MeasuredData& data, const Potential& q, double step = 1e-6) {
    const ForwardProblem base = make_problem(data, q);
    const Matrix lam0 = assemble_dn(base, data.dn.source, data.dn.target).matrix;
    const double w = data.geometry.grid.weight();
    Matrix j(lam0.size(), q.size());
    for (Index k = 0; k < q.size(); ++k) {
        Vector qv = q.values();
        qv[k] += step;
        const ForwardProblem pert = make_problem(data, Potential(q.region(), qv));
        const Matrix lam = assemble_dn(pert, data.dn.source, data.dn.target).matrix;
        j.col(k) = (w / step) * (lam - lam0).reshaped();
    }
    return j;
}

/// Regularized solution of L x = d.
inline Vector regularized_solve(const Matrix& l, const Vector& d, const Regularization& reg) {
    Eigen::BDCSVD<Matrix> svd(l, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& sv = svd.singularValues();
    const double smax = sv.size() ? sv[0] : 0.0;
    if (smax == 0.0) return Vector::Zero(l.cols());
    const Vector utd = svd.matrixU().transpose() * d;
    Vector coeff = Vector::Zero(sv.size());
    switch (reg.kind) {
    case RegKind::none: {
        const double tol = std::max(l.rows(), l.cols()) * std::numeric_limits<double>::epsilon() * smax;
        const Index rank = (sv.array() > tol).count();
        if (rank < l.cols())
            throw InsufficientData("linearized map has rank " + std::to_string(rank) + " below " +
                                   std::to_string(l.cols()) + " unknowns and no regularization was requested");
        coeff = utd.cwiseQuotient(sv);
        break;
    }
    case RegKind::tsvd:
        for (Index k = 0; k < sv.size(); ++k)
            if (sv[k] >= reg.weight * smax) coeff[k] = utd[k] / sv[k];
        break;
    case RegKind::tikhonov: {
        const double a = reg.weight * smax * smax;
        for (Index k = 0; k < sv.size(); ++k) coeff[k] = sv[k] * utd[k] / (sv[k] * sv[k] + a);
        break;
    }
    }
    return svd.matrixV() * coeff;
}

inline void check_compatible(const MeasuredData& data, const Potential& q) {
    if (!data.op) throw InvalidParameter("measured data carries no operator");
    if (q.region() != data.geometry.omega) throw IndexMismatch("potential is not defined on the data's omega");
    if (data.dn.matrix.rows() != static_cast<Index>(data.dn.target.size()) ||
        data.dn.matrix.cols() != static_cast<Index>(data.dn.source.size()))
        throw IndexMismatch("DN data shape does not match its windows");
}

inline ReconstructionResult born_reconstruct(const MeasuredData& data, const Potential& q_ref,
                                             const Regularization& reg = {RegKind::tsvd, 1e-8}) {
    check_compatible(data, q_ref);
    const ForwardProblem ref = make_problem(data, q_ref);
    ref.require_well_posed();
    const Matrix l = born_matrix(data, ref);
    const Vector d = data_residual(data, ref);
    const Vector dq = regularized_solve(l, d, reg);
    ReconstructionResult r;
    r.q_estimate = Potential(q_ref.region(), q_ref.values() + dq);
    r.regularization = reg;
    r.iterations = 1;
    r.residual_history = {d.norm(), misfit(data, r.q_estimate)};
    return r;
}

namespace detail {

enum class JacobianKind { exact, finite_difference };

inline ReconstructionResult gauss_newton(const MeasuredData& data, const Potential& q_init, double reg_weight,
                                         int max_iter, JacobianKind kind) {
    check_compatible(data, q_init);
    const Regularization reg{RegKind::tikhonov, reg_weight};
    ForwardProblem current = make_problem(data, q_init);
    current.require_well_posed();
    Potential q = q_init;
    double m = misfit(data, current);
    const double scale = data.geometry.grid.weight() * data.dn.matrix.norm();

    ReconstructionResult r;
    r.regularization = reg;
    r.residual_history.push_back(m);
    for (int it = 0; it < max_iter; ++it) {
        if (m <= 1e-15 * scale) break;
        const Matrix j = kind == JacobianKind::exact ? born_matrix(data, current) : fd_jacobian(data, q);
        const Vector step = regularized_solve(j, data_residual(data, current), reg);

        double t = 1.0;
        std::optional<ForwardProblem> trial;
        double trial_misfit = m;
        bool accepted = false;
        for (int halving = 0; halving <= 10; ++halving, t *= 0.5) {
            Potential qt(q.region(), q.values() + t * step);
            ForwardProblem p = make_problem(data, qt);
            if (!p.well_posed()) {
                if (halving == 10) throw IllPosedAtIterate("iterate violates the well-posedness tolerance", p.sigma_min(), it);
                continue;
            }
            const double mt = misfit(data, p);
            if (mt < m) {
                trial.emplace(std::move(p));
                trial_misfit = mt;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
        const double improvement = (m - trial_misfit) / m;
        q = trial->q();
        current = std::move(*trial);
        m = trial_misfit;
        r.residual_history.push_back(m);
        ++r.iterations;
        if (improvement < 1e-10) break;
    }
    r.q_estimate = q;
    return r;
}

} // namespace detail

/// Iterated Born steps with exact Jacobian and Tikhonov-regularized updates.
inline ReconstructionResult newton_refine(const MeasuredData& data, const Potential& q_init, double reg_weight,
                                          int max_iter) {
    return detail::gauss_newton(data, q_init, reg_weight, max_iter, detail::JacobianKind::exact);
}

/// Gauss-Newton on h^d |Lambda_q - Lambda_meas|_F with a finite-difference Jacobian.
inline ReconstructionResult output_least_squares(const MeasuredData& data, const Potential& q_init, double reg_weight,
                                                 int max_iter) {
    return detail::gauss_newton(data, q_init, reg_weight, max_iter, detail::JacobianKind::finite_difference);
}

/// Morozov discrepancy principle over a decreasing ladder of Tikhonov weights: returns
/// the first (most regularized) Newton result whose final misfit is <= tau * noise norm,
/// or the last one if none is.
inline ReconstructionResult newton_discrepancy(const MeasuredData& data, const Potential& q_init,
                                               const std::vector<double>& ladder, double tau, int max_iter) {
    if (ladder.empty()) throw InvalidParameter("discrepancy ladder is empty");
    const double target = tau * data.noise_norm();
    ReconstructionResult last;
    for (double w : ladder) {
        last = newton_refine(data, q_init, w, max_iter);
        if (last.residual_history.back() <= target) break;
    }
    return last;
}

/// Default ladder 10^{-1}, 10^{-1.5}, ..., 10^{-10}.
inline std::vector<double> default_discrepancy_ladder() {
    std::vector<double> out;
    for (int k = 2; k <= 20; ++k) out.push_back(std::pow(10.0, -0.5 * k));
    return out;
}

/// Adds i.i.d. Gaussian noise with standard deviation level * rms(signal) to `dn`,
/// filled column by column from mt19937_64(seed). Returns the standard deviation.
inline double add_measurement_noise(Matrix& dn, const Matrix& signal, double level, std::uint64_t seed) {
    if (level < 0.0) throw InvalidParameter("noise level must be nonnegative");
    if (level == 0.0 || dn.size() == 0) return 0.0;
    const double sigma = level * signal.norm() / std::sqrt(static_cast<double>(signal.size()));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Index j = 0; j < dn.cols(); ++j)
        for (Index i = 0; i < dn.rows(); ++i) dn(i, j) += sigma * normal(rng);
    return sigma;
}

/// Exterior data synthesized from q_true; noise is i.i.d. Gaussian with standard
/// deviation noise_level * rms(Lambda_true - Lambda_background).
inline MeasuredData synthesize_data(std::shared_ptr<const FracOperator> op, const RegionPartition& geometry,
                                    const Potential& q_true, double noise_level = 0.0, std::uint64_t seed = 0,
                                    const std::optional<Potential>& background = std::nullopt) {
    if (noise_level < 0.0) throw InvalidParameter("noise level must be nonnegative");
    MeasuredData data;
    data.op = op;
    data.geometry = geometry;
    const ForwardProblem truth(op, geometry, q_true);
    truth.require_well_posed();
    data.dn = assemble_dn(truth);
    data.noise_level = noise_level;
    if (noise_level > 0.0) {
        const ForwardProblem ref(op, geometry, background ? *background : Potential::zero(geometry.omega));
        const Matrix diff = dn_difference(truth, ref, geometry.w1, geometry.w2).matrix;
        data.noise_sigma = add_measurement_noise(data.dn.matrix, diff, noise_level, seed);
    }
    return data;
}

struct UniquenessCertificate {
    double max_gap = 0.0;      // max over window basis pairs of |h^d sum (q1-q2) u1 u2|
    double dn_gap = 0.0;        // max-abs entry of h^d (Lambda_1 - Lambda_2) on W1 -> W2
    Matrix gaps;               // |W2| x |W1|
};

inline UniquenessCertificate uniqueness_certificate(const RegionPartition& geometry,
                                                    std::shared_ptr<const FracOperator> op, const Potential& q1,
                                                    const Potential& q2) {
    const ForwardProblem p1(op, geometry, q1);
    const ForwardProblem p2(op, geometry, q2);
    p1.require_well_posed();
    p2.require_well_posed();
    const Matrix u1 = poisson_operator(p1, geometry.w1);
    const Matrix u2 = poisson_operator(p2, geometry.w2);
    const double w = geometry.grid.weight();
    UniquenessCertificate c;
    c.gaps = w * (u2.transpose() * (q1.values() - q2.values()).asDiagonal() * u1);
    c.max_gap = c.gaps.cwiseAbs().maxCoeff();
    c.dn_gap = w * (assemble_dn(p1).matrix - assemble_dn(p2).matrix).cwiseAbs().maxCoeff();
    return c;
}

/// Weighted L2 distance between two potentials on the same region.
inline double weighted_l2(const Potential& a, const Potential& b, double weight) {
    return std::sqrt(weight) * (a.values() - b.values()).norm();
}

} // namespace fraccal
