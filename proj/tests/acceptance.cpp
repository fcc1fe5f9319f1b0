// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <cstring>
#include <iostream>
#include <sstream>

#include "fraccal/run.hpp"
#include "oracles.hpp"

using namespace fraccal;
using namespace fraccal::testing;

namespace {

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [violated: " << what << "]";
        }
    }
};

double rel(const Matrix& a, const Matrix& b) { return (a - b).norm() / b.norm(); }

Verdict integral_identity() {
    Verdict v;
    double worst = 0.0;
    int draws = 0;
    for (const RegionPartition& part : {separated_1d(32), separated_2d()}) {
        const auto op = std::make_shared<const FracOperator>(fractional_power(part.grid, 0.5));
        std::mt19937_64 rng(2024);
        const Index no = static_cast<Index>(part.omega.size());
        for (int t = 0; t < 100; ++t, ++draws) {
            const ForwardProblem p1(op, part, Potential(part.omega, uniform(rng, no)));
            const ForwardProblem p2(op, part, Potential(part.omega, uniform(rng, no)));
            const auto r = integral_identity_residual(p1, p2, gaussian(rng, static_cast<Index>(part.w1.size())),
                                                      gaussian(rng, static_cast<Index>(part.w2.size())));
            worst = std::max(worst, r.gap / (std::abs(r.lhs) + std::abs(r.rhs)));
        }
    }
    v.require(worst <= 1e-8, "relative identity gap <= 1e-8");
    v.detail << draws << " draws (1D N=32, 2D 12x12), worst relative gap " << worst;
    return v;
}

Verdict spectral_calculus() {
    Verdict v;
    double mapping = 0.0;
    for (const Grid& g : {Grid(1, {40}, 1.0 / 41.0), Grid(2, {10, 10}, 1.0 / 11.0)}) {
        const Matrix base = assemble_base_laplacian(g);
        for (double s : {0.25, 0.5, 0.75}) {
            const Matrix a = fractional_power(g, s).matrix();
            Eigen::SelfAdjointEigenSolver<Matrix> eig(base);
            for (Index k = 0; k < base.rows(); ++k) {
                const Vector e = eig.eigenvectors().col(k);
                const double ls = std::pow(eig.eigenvalues()[k], s);
                mapping = std::max(mapping, (a * e - ls * e).norm() / ls);
            }
        }
    }
    const Grid g(1, {48}, 1.0 / 49.0);
    const Matrix base = assemble_base_laplacian(g);
    const SpectralDecomposition sd(base);
    const double endpoint = rel(sd.power(1.0), base);
    const double semigroup = rel(sd.power(0.3) * sd.power(0.4), sd.power(0.7));
    const double closed_form = (sd.eigenvalues() - dirichlet_eigenvalues(48, 1.0 / 49.0)).cwiseAbs().maxCoeff() /
                               sd.eigenvalues().maxCoeff();
    v.require(mapping <= 1e-9, "spectral mapping <= 1e-9");
    v.require(endpoint <= 1e-10, "s = 1 reproduces the stencil within 1e-10");
    v.require(semigroup <= 1e-8, "semigroup <= 1e-8");
    v.require(closed_form <= 1e-12, "eigenvalues match the closed form");
    v.detail << "mapping " << mapping << ", s=1 " << endpoint << ", semigroup " << semigroup;
    return v;
}

Verdict antilocality() {
    Verdict v;
    double smallest = std::numeric_limits<double>::infinity();
    for (double s : {0.25, 0.5, 0.75})
        for (Index n : {16, 32, 64}) {
            const Grid g = unit_grid(n);
            const double r = antilocality_study(g, s, leftmost_window(g, 0.125)).summary.at("sigma_min_rel");
            const double floor = 10.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon();
            v.require(r > floor, "sigma_min above rounding for s = " + std::to_string(s) + ", N = " + std::to_string(n));
            smallest = std::min(smallest, r);
        }
    const Grid g = unit_grid(32);
    const double local = antilocality_study(g, 1.0, leftmost_window(g, 0.125)).summary.at("sigma_min_rel");
    v.require(local <= 1e-12, "s = 1 has a numerical kernel");
    v.detail << "smallest fractional sigma_min_rel " << smallest << ", s=1 " << local;
    return v;
}

Verdict runge() {
    Verdict v;
    const auto part = benchmark_partition(32);
    const auto op = std::make_shared<const FracOperator>(fractional_power(part.grid, 0.5));
    const ForwardProblem p(op, part, Potential::zero(part.omega));
    const Vector target = Vector::Ones(static_cast<Index>(part.omega.size()));
    std::vector<double> alphas;
    for (int k = 2; k <= 12; ++k) alphas.push_back(std::pow(10.0, -k));
    const auto curve = cost_curve(p, part.exterior, target, alphas);
    const double scale = std::sqrt(part.grid.weight()) * target.norm();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < curve.size(); ++k) {
        best = std::min(best, curve[k].achieved_error / scale);
        if (k > 0) v.require(curve[k].achieved_error < curve[k - 1].achieved_error, "error decreases with alpha");
    }
    v.require(best <= 0.05, "relative error <= 5% for some alpha >= 1e-12");
    v.detail << "best relative error " << best << " at cost " << curve.back().control_cost;
    return v;
}

Verdict duality() {
    Verdict v;
    double worst = 0.0;
    for (const RegionPartition& part : {separated_1d(32), separated_2d()}) {
        const auto op = std::make_shared<const FracOperator>(fractional_power(part.grid, 0.5));
        std::mt19937_64 rng(7);
        const Index no = static_cast<Index>(part.omega.size());
        const ForwardProblem p(op, part, Potential(part.omega, uniform(rng, no)));
        const Matrix pw = poisson_operator(p, part.w1);
        const double w = part.grid.weight();
        for (int t = 0; t < 5; ++t) {
            const Vector src = gaussian(rng, no);
            const DualCertificate d = dual_certificate(p, part.w1, src);
            for (Index j = 0; j < pw.cols(); ++j) {
                const double gap = std::abs(w * src.dot(pw.col(j)) + w * d.window_trace[j]);
                worst = std::max(worst, gap / (w * src.norm() * pw.col(j).norm()));
            }
        }
    }
    v.require(worst <= 1e-9, "duality gap <= 1e-9");
    v.detail << "worst scaled duality gap " << worst;
    return v;
}

Verdict reconstruction() {
    Verdict v;
    const auto part = benchmark_partition(24);
    const auto op = std::make_shared<const FracOperator>(fractional_power(part.grid, 0.5));
    const Potential truth = benchmark_bump(part);
    const Potential zero = Potential::zero(part.omega);
    const double w = part.grid.weight();
    const MeasuredData data = synthesize_data(op, part, truth);
    const double born = relative_weighted_error(born_reconstruct(data, zero, {RegKind::tsvd, 1e-4}).q_estimate, truth, w);
    const double newton = relative_weighted_error(newton_refine(data, zero, 1e-10, 30).q_estimate, truth, w);
    std::vector<double> noisy;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const MeasuredData d = synthesize_data(op, part, truth, 1e-3, seed);
        noisy.push_back(relative_weighted_error(
            newton_discrepancy(d, zero, default_discrepancy_ladder(), 1.1, 30).q_estimate, truth, w));
    }
    std::sort(noisy.begin(), noisy.end());
    const double median = 0.5 * (noisy[4] + noisy[5]);
    v.require(born <= 0.15, "Born <= 15%");
    v.require(newton <= 0.08, "Newton <= 8%");
    v.require(median <= 0.25, "noisy median <= 25%");
    v.detail << "Born " << born << ", Newton " << newton << ", noisy median " << median;
    return v;
}

Verdict extension() {
    Verdict v;
    const Grid base(1, {32}, 1.0 / 33.0);
    for (double s : {0.3, 0.5, 0.7}) {
        double previous = std::numeric_limits<double>::infinity();
        for (Index m : {32, 64, 128, 256}) {
            const double gap = extension_trace_gap(base, s, m);
            v.require(gap < previous, "gap decreases in M for s = " + std::to_string(s));
            previous = gap;
        }
        v.require(previous <= 0.10, "gap <= 10% for s = " + std::to_string(s));
        v.detail << "s=" << s << ": " << previous << "  ";
    }
    return v;
}

Verdict instability() {
    Verdict v;
    const auto part = benchmark_partition(24);
    const ForwardProblem ref(std::make_shared<const FracOperator>(fractional_power(part.grid, 0.5)), part,
                             Potential::zero(part.omega));
    const double first = sv_decay_study(ref, part.w1, part.w2, 1e-8).summary.at("first_index_below_threshold");
    v.require(first >= 0.0 && first < 40.0, "normalized singular value below 1e-8 within 40 indices");

    const auto sep = partition_box(unit_grid(96), Box{{0.25, 0}, {0.75, 0}}, Box{{0.0, 0}, {0.15, 0}},
                                   Box{{0.85, 0}, {1.0, 0}});
    std::vector<int> freqs;
    for (int k = 1; k <= 23; ++k) freqs.push_back(k);
    const auto op = std::make_shared<const FracOperator>(fractional_power(sep.grid, 0.5));
    const StudyReport r = stability_curve(sep, op, oscillatory_family(sep, 1e-6, freqs, OscillatoryTaper::gaussian));
    const double orders = r.summary.at("dn_decay_orders");
    const double ratio = r.summary.at("q_diff_ratio");
    v.require(orders >= 6.0, "DN differences span >= 6 orders");
    v.require(ratio >= 1.0 - 1e-12, "potential differences stay constant");
    v.detail << "first index " << first << ", DN decay " << orders << " orders, dq ratio " << ratio;
    return v;
}

Verdict determinism() {
    Verdict v;
    const auto root = std::filesystem::temp_directory_path() / "fraccal_acceptance";
    std::filesystem::remove_all(root);
    const RunConfig cfg = load_config(std::filesystem::path(FRACCAL_CONFIG_DIR) / "benchmark_noisy_n24.json");
    std::string first;
    for (const char* sub : {"a", "b"}) {
        ::setenv(kOutputRootEnv, (root / sub).c_str(), 1);
        const RunOutcome o = synthesize(cfg);
        std::string bytes;
        for (const auto& f : o.files) bytes += f.filename().string() + "\n" + read_text(f);
        if (first.empty()) first = bytes;
        else v.require(bytes == first, "two synthesize runs are byte-identical");
    }
    ::unsetenv(kOutputRootEnv);
    std::filesystem::remove_all(root);

    std::mt19937_64 rng(99);
    Matrix m = gaussian(rng, 60).reshaped(12, 5);
    m(0, 0) = std::numeric_limits<double>::denorm_min();
    m(1, 1) = -0.0;
    const Matrix back = parse_matrix_csv(format_matrix_csv(m));
    v.require(std::memcmp(back.data(), m.data(), sizeof(double) * 60) == 0, "CSV round trip is bit-exact");
    v.detail << "seeded synthesis reproduced byte for byte, CSV round trip exact";
    return v;
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        Verdict (*check)();
    };
    const Criterion criteria[] = {
        {"integral identity", integral_identity},
        {"spectral calculus", spectral_calculus},
        {"antilocality", antilocality},
        {"Runge approximation", runge},
        {"duality", duality},
        {"reconstruction", reconstruction},
        {"extension trace", extension},
        {"instability", instability},
        {"determinism", determinism},
    };
    int failures = 0;
    int index = 1;
    for (const Criterion& c : criteria) {
        Verdict v;
        try {
            v = c.check();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail << "exception: " << e.what();
        }
        std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << index++ << ": " << c.name << " - " << v.detail.str()
                  << std::endl;
        if (!v.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
