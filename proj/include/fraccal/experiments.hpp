#pragma once

// Desk-scale studies: discrete antilocality, singular-value decay of the
// linearized data map, the stability curve of oscillatory potential families,
// and discretization refinement ladders.

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "fraccal/control.hpp"
#include "fraccal/csext.hpp"
#include "fraccal/inversion.hpp"

namespace fraccal {

enum class StudyKind { antilocality, sv_decay, stability_curve, refinement };

inline std::string to_string(StudyKind k) {
    switch (k) {
    case StudyKind::antilocality: return "antilocality";
    case StudyKind::sv_decay: return "sv_decay";
    case StudyKind::stability_curve: return "stability_curve";
    case StudyKind::refinement: return "refinement";
    }
    return "?";
}

struct StudyReport {
    StudyKind kind = StudyKind::antilocality;
    std::map<std::string, double> parameters;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::map<std::string, double> summary;
    std::vector<std::string> warnings;

    void add_row(std::vector<double> row) {
        if (row.size() != columns.size()) throw IndexMismatch("study row does not match the column count");
        rows.push_back(std::move(row));
    }

    std::vector<double> column(const std::string& name) const {
        std::size_t c = 0;
        while (c < columns.size() && columns[c] != name) ++c;
        if (c == columns.size()) throw IndexMismatch("study has no column " + name);
        std::vector<double> out;
        for (const auto& r : rows) out.push_back(r[c]);
        return out;
    }
};

// ---------------------------------------------------------------------------
// Antilocality

/// Cauchy-data map T u = (u|_W, (A u)|_W / max|A|) on all grid functions.
///
/// T has full row rank exactly when no nonzero b supported in W has A b supported
/// in W; for A = (-Delta)^s, s < 1, that is the discrete form of antilocality, and
/// for the local stencil (s = 1) it fails as soon as W has an interior node.
inline Matrix cauchy_data_map(const Matrix& op, const IndexSet& window) {
    const Index n = op.rows();
    const Index w = static_cast<Index>(window.size());
    const double scale = op.cwiseAbs().maxCoeff();
    Matrix t = Matrix::Zero(2 * w, n);
    for (Index k = 0; k < w; ++k) {
        t(k, window[static_cast<std::size_t>(k)]) = 1.0;
        t.row(w + k) = op.row(window[static_cast<std::size_t>(k)]) / scale;
    }
    return t;
}

inline StudyReport antilocality_study(const Grid& grid, double s, const IndexSet& window) {
    if (window.empty() || static_cast<Index>(window.size()) >= grid.size())
        throw InvalidParameter("antilocality window must be a nonempty proper subset of the nodes");
    check_region(window, grid.size());
    const FracOperator op = fractional_power(grid, s);
    Eigen::JacobiSVD<Matrix> svd(cauchy_data_map(op.matrix(), window));
    const Vector& sv = svd.singularValues();

    StudyReport r;
    r.kind = StudyKind::antilocality;
    r.parameters = {{"s", s}, {"nodes", static_cast<double>(grid.size())},
                    {"window_nodes", static_cast<double>(window.size())}, {"spacing", grid.spacing()}};
    r.columns = {"index", "sigma", "sigma_rel"};
    for (Index k = 0; k < sv.size(); ++k) r.add_row({static_cast<double>(k), sv[k], sv[k] / sv[0]});
    r.summary["sigma_max"] = sv[0];
    r.summary["sigma_min"] = sv[sv.size() - 1];
    r.summary["sigma_min_rel"] = sv[sv.size() - 1] / sv[0];
    return r;
}

/// Leftmost fraction of the nodes of a 1D grid (at least one node).
inline IndexSet leftmost_window(const Grid& grid, double fraction) {
    IndexSet w;
    const Index count = std::max<Index>(1, static_cast<Index>(std::floor(fraction * static_cast<double>(grid.size()))));
    for (Index k = 0; k < count; ++k) w.push_back(k);
    return w;
}

// ---------------------------------------------------------------------------
// Singular-value decay of the Born map

inline StudyReport sv_decay_study(const ForwardProblem& ref, const IndexSet& source, const IndexSet& target,
                                  double threshold = 1e-8) {
    Eigen::JacobiSVD<Matrix> svd(born_matrix(ref, source, target));
    const Vector& sv = svd.singularValues();
    StudyReport r;
    r.kind = StudyKind::sv_decay;
    r.parameters = {{"s", ref.op().s()}, {"omega_nodes", static_cast<double>(ref.partition().omega.size())},
                    {"threshold", threshold}};
    r.columns = {"index", "sigma", "sigma_rel"};
    double first_below = -1.0;
    for (Index k = 0; k < sv.size(); ++k) {
        r.add_row({static_cast<double>(k), sv[k], sv[k] / sv[0]});
        if (first_below < 0.0 && sv[k] < threshold * sv[0]) first_below = static_cast<double>(k);
    }
    r.summary["first_index_below_threshold"] = first_below;
    r.summary["sigma_min_rel"] = sv[sv.size() - 1] / sv[0];
    return r;
}

// ---------------------------------------------------------------------------
// Stability curve

struct PotentialPair {
    Potential q1;
    Potential q2;
};

enum class OscillatoryTaper { indicator, gaussian };

/// q_k = eps cos(k pi (x - a) / L) on omega, x the first coordinate and [a, a + L] the
/// extent of omega along it. The Gaussian variant uses cos(k pi (x - c) / L) exp(-(x - c)^2 / (2 sigma^2))
/// with c the centre of omega and sigma = L / 11, rescaled to weighted norm eps.
inline std::vector<PotentialPair> oscillatory_family(const RegionPartition& part, double eps,
                                                     const std::vector<int>& frequencies,
                                                     OscillatoryTaper taper = OscillatoryTaper::indicator) {
    const Matrix xy = coordinates(part.grid, part.omega);
    const double a = xy.col(0).minCoeff();
    const double len = xy.col(0).maxCoeff() - a;
    const double c = a + 0.5 * len;
    const double sigma = len / 11.0;
    const double w = part.grid.weight();
    std::vector<PotentialPair> out;
    for (int k : frequencies) {
        Vector q(xy.rows());
        for (Index i = 0; i < q.size(); ++i) {
            const double x = xy(i, 0);
            if (taper == OscillatoryTaper::gaussian)
                q[i] = std::cos(k * std::numbers::pi * (x - c) / len) * std::exp(-(x - c) * (x - c) / (2.0 * sigma * sigma));
            else
                q[i] = std::cos(k * std::numbers::pi * (x - a) / len);
        }
        if (taper == OscillatoryTaper::gaussian) q *= eps / (std::sqrt(w) * q.norm());
        else q *= eps;
        out.push_back({Potential(part.omega, q), Potential::zero(part.omega)});
    }
    return out;
}

/// Least-squares fit log|dq| = log C - sigma log|log dn| over rows with 0 < dn < 1.
struct LogFit {
    double log_c = 0.0;
    double exponent = 0.0;
    double r_squared = 0.0;
    int points = 0;
};

inline LogFit fit_log_modulus(const std::vector<double>& dq, const std::vector<double>& dn) {
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < dq.size(); ++k)
        if (dn[k] > 0.0 && dn[k] < 1.0 && dq[k] > 0.0) {
            xs.push_back(std::log(std::abs(std::log(dn[k]))));
            ys.push_back(std::log(dq[k]));
        }
    LogFit f;
    f.points = static_cast<int>(xs.size());
    if (xs.size() < 2) return f;
    Matrix a(static_cast<Index>(xs.size()), 2);
    Vector b(static_cast<Index>(xs.size()));
    for (std::size_t k = 0; k < xs.size(); ++k) {
        a(static_cast<Index>(k), 0) = 1.0;
        a(static_cast<Index>(k), 1) = xs[k];
        b[static_cast<Index>(k)] = ys[k];
    }
    const Vector coef = a.colPivHouseholderQr().solve(b);
    f.log_c = coef[0];
    f.exponent = -coef[1];
    const Vector res = b - a * coef;
    const double ss_tot = (b.array() - b.mean()).square().sum();
    f.r_squared = ss_tot > 0.0 ? 1.0 - res.squaredNorm() / ss_tot : 1.0;
    return f;
}

/// Table of (|q1 - q2| weighted L2, dn_norm of Lambda_1 - Lambda_2 on W1 -> W2).
inline StudyReport stability_curve(const RegionPartition& part, std::shared_ptr<const FracOperator> op,
                                   const std::vector<PotentialPair>& family) {
    StudyReport r;
    r.kind = StudyKind::stability_curve;
    r.parameters = {{"s", op->s()}, {"members", static_cast<double>(family.size())},
                    {"nodes", static_cast<double>(part.grid.size())}};
    r.columns = {"member", "q_diff_norm", "dn_norm"};
    const double w = part.grid.weight();
    std::vector<double> dqs, dns;
    for (std::size_t k = 0; k < family.size(); ++k) {
        const ForwardProblem p1(op, part, family[k].q1);
        const ForwardProblem p2(op, part, family[k].q2);
        p1.require_well_posed();
        p2.require_well_posed();
        const double dq = weighted_l2(family[k].q1, family[k].q2, w);
        if (dq == 0.0) {
            r.warnings.push_back("member " + std::to_string(k) + " has q1 = q2; row excluded");
            continue;
        }
        const double dn = dn_norm(dn_difference(p1, p2, part.w1, part.w2));
        r.add_row({static_cast<double>(k), dq, dn});
        dqs.push_back(dq);
        dns.push_back(dn);
    }
    if (!dns.empty()) {
        const auto [dn_lo, dn_hi] = std::minmax_element(dns.begin(), dns.end());
        const auto [dq_lo, dq_hi] = std::minmax_element(dqs.begin(), dqs.end());
        r.summary["dn_decay_orders"] = std::log10(*dn_hi / *dn_lo);
        r.summary["q_diff_ratio"] = *dq_lo / *dq_hi;
        if (*dq_lo < (1.0 - 1e-9) * *dq_hi) {
            const LogFit fit = fit_log_modulus(dqs, dns);
            r.summary["fit_log_c"] = fit.log_c;
            r.summary["fit_exponent"] = fit.exponent;
            r.summary["fit_r_squared"] = fit.r_squared;
            r.summary["fit_points"] = fit.points;
        } else {
            r.warnings.push_back("|q1 - q2| is constant over the family; the log-modulus fit is not identifiable");
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Refinement ladders

/// exp(1 - 1/(1 - t^2)) for |t| < 1, peak value 1.
inline double smooth_bump(double t) { return std::abs(t) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - t * t)) : 0.0; }

/// Relative L2 gap between the spectral and Fourier-symbol operators on a bump of
/// radius `radius` centred in a box of `length` with spacing h.
inline double cross_oracle_gap(double length, double h, double s, double radius = 0.15) {
    const Index n = static_cast<Index>(std::llround(length / h)) + 1;
    const Grid g(1, {n}, h);
    Vector u(n);
    for (Index i = 0; i < n; ++i) u[i] = smooth_bump((g.coord(i)[0] - 0.5 * length) / radius);
    const Vector a = fractional_power(g, s).matrix() * u;
    const Vector b = assemble_fourier_symbol(g, s).matrix() * u;
    return (a - b).norm() / b.norm();
}

/// Calibrated extension trace vs the spectral operator on a centred bump.
inline double extension_trace_gap(const Grid& base, double s, Index levels, double radius = 0.25) {
    const Index n = base.size();
    const double width = base.spacing() * static_cast<double>(n + 1);
    Vector u(n);
    for (Index i = 0; i < n; ++i) u[i] = smooth_bump((base.spacing() * static_cast<double>(i + 1) - 0.5 * width) / (radius * width));
    const double calib = calibrate_trace(base, s, levels);
    const ExtensionProblem p = make_extension(base, s, levels, u);
    const Vector trace = weighted_neumann_trace(p, solve_extension(p), calib);
    const Vector ref = fractional_power(base, s).matrix() * u;
    return (trace - ref).norm() / ref.norm();
}

struct RefinementConfig {
    double s = 0.5;
    std::vector<std::pair<double, double>> box_ladder{{1.0, 1.0 / 32}, {2.0, 1.0 / 64}, {4.0, 1.0 / 128}};
    Index extension_nodes = 32;
    std::vector<Index> extension_levels{32, 64, 128, 256};
    std::vector<Index> identity_nodes{16, 24, 32, 48};
    Index margin_nodes = 24;            // base grid for the margin pair
    std::vector<Index> margins{2, 4, 8}; // extra nodes added on both sides
    std::uint64_t seed = 7;
};

/// Identity residual |lhs - rhs| / (|lhs| + |rhs| + 1) for one random draw on the unit interval.
inline double identity_residual_1d(Index n, double s, std::mt19937_64& rng) {
    const double h = 1.0 / static_cast<double>(n - 1);
    const Grid g(1, {n}, h);
    const auto part = partition_box(g, Box{{0.25, 0}, {0.75, 0}}, Box{{0.0, 0}, {0.2, 0}}, Box{{0.8, 0}, {1.0, 0}});
    auto op = std::make_shared<const FracOperator>(fractional_power(g, s));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto draw = [&](Index m, bool gaussian) {
        Vector v(m);
        for (Index k = 0; k < m; ++k) v[k] = gaussian ? normal(rng) : unit(rng);
        return v;
    };
    const Index no = static_cast<Index>(part.omega.size());
    const ForwardProblem p1(op, part, Potential(part.omega, draw(no, false)));
    const ForwardProblem p2(op, part, Potential(part.omega, draw(no, false)));
    const auto r = integral_identity_residual(p1, p2, draw(static_cast<Index>(part.w1.size()), true),
                                              draw(static_cast<Index>(part.w2.size()), true));
    return r.gap / (std::abs(r.lhs) + std::abs(r.rhs) + 1.0);
}

/// Interior solution change when the truncation box gains `extra` nodes per side.
inline double margin_change(Index n, Index extra, double s) {
    const double h = 1.0 / static_cast<double>(n - 1);
    auto interior = [&](Index pad) {
        const Grid g(1, {n + 2 * pad}, h, {-static_cast<double>(pad) * h, 0.0});
        const auto part = partition_box(g, Box{{0.25, 0}, {0.75, 0}}, Box{{0.0, 0}, {0.2, 0}}, Box{{0.8, 0}, {1.0, 0}});
        auto op = std::make_shared<const FracOperator>(fractional_power(g, s));
        const ForwardProblem p(op, part, Potential::zero(part.omega));
        return restrict_to(solve_window(p, part.w1, Vector::Ones(static_cast<Index>(part.w1.size()))), part.omega);
    };
    const Vector a = interior(extra);
    const Vector b = interior(2 * extra);
    return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
}

/// Series codes in column "series": 0 cross-oracle gap (parameter = level), 1 extension
/// trace gap (parameter = y-levels), 2 identity residual (parameter = nodes), 3 margin
/// doubling change (parameter = margin nodes).
inline StudyReport refinement_study(const RefinementConfig& cfg) {
    StudyReport r;
    r.kind = StudyKind::refinement;
    r.parameters = {{"s", cfg.s}, {"seed", static_cast<double>(cfg.seed)}};
    r.columns = {"series", "parameter", "value"};
    for (std::size_t k = 0; k < cfg.box_ladder.size(); ++k)
        r.add_row({0.0, static_cast<double>(k), cross_oracle_gap(cfg.box_ladder[k].first, cfg.box_ladder[k].second, cfg.s)});
    const Grid base(1, {cfg.extension_nodes}, 1.0 / static_cast<double>(cfg.extension_nodes + 1));
    if (cfg.s < 1.0)
        for (Index m : cfg.extension_levels) r.add_row({1.0, static_cast<double>(m), extension_trace_gap(base, cfg.s, m)});
    std::mt19937_64 rng(cfg.seed);
    double worst_identity = 0.0;
    for (Index n : cfg.identity_nodes) {
        const double v = identity_residual_1d(n, cfg.s, rng);
        worst_identity = std::max(worst_identity, v);
        r.add_row({2.0, static_cast<double>(n), v});
    }
    for (Index m : cfg.margins) r.add_row({3.0, static_cast<double>(m), margin_change(cfg.margin_nodes, m, cfg.s)});
    r.summary["worst_identity_residual"] = worst_identity;
    return r;
}

} // namespace fraccal
