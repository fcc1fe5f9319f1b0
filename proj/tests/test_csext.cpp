#include <random>

#include <gtest/gtest.h>

#include "fraccal/experiments.hpp"
#include "oracles.hpp"

using namespace fraccal;
using namespace fraccal::testing;

namespace {

Grid base_grid(Index n) { return Grid(1, {n}, 1.0 / static_cast<double>(n + 1)); }

double stencil_eigenvalue(Index n, Index k) {
    return dirichlet_eigenvalues(n, 1.0 / static_cast<double>(n + 1))[k - 1];
}

} // namespace

TEST(Extension, ZeroDatumGivesZeroSolutionAndTrace) {
    const Grid base = base_grid(16);
    const ExtensionProblem p = make_extension(base, 0.4, 32, Vector::Zero(16));
    const ExtensionSolution sol = solve_extension(p);
    EXPECT_EQ(sol.w, Matrix::Zero(16, 33));
    EXPECT_EQ(weighted_neumann_trace(p, sol, 2.0), Vector::Zero(16));
}

TEST(Extension, GradedLevelsAndValidation) {
    const Grid base = base_grid(16);
    const ExtensionProblem p = make_extension(base, 0.3, 10, Vector::Ones(16));
    ASSERT_EQ(p.levels(), 10);
    EXPECT_EQ(p.y.front(), 0.0);
    EXPECT_DOUBLE_EQ(p.y.back(), 4.0);
    const double gamma = default_grading(0.3);
    EXPECT_EQ(gamma, 1.0);
    EXPECT_DOUBLE_EQ(default_grading(0.75), 2.0);
    for (std::size_t j = 1; j < p.y.size(); ++j) EXPECT_GT(p.y[j], p.y[j - 1]);

    EXPECT_THROW(make_extension(base, 1.0, 10, Vector::Ones(16)), InvalidParameter);
    EXPECT_THROW(make_extension(base, 0.5, 1, Vector::Ones(16)), InvalidParameter);
    EXPECT_THROW(make_extension(base, 0.5, 10, Vector::Ones(3)), IndexMismatch);
    EXPECT_THROW(make_extension(base, 0.5, 10, Vector::Ones(16), 0.5), InvalidParameter);
    EXPECT_THROW(make_extension(Grid(2, {4, 4}, 0.2), 0.5, 10, Vector::Ones(16)), InvalidGeometry);
}

TEST(Extension, SolutionSatisfiesTheDiscreteEquation) {
    std::mt19937_64 rng(1);
    for (double s : {0.3, 0.5, 0.7}) {
        const Vector u = gaussian(rng, 24);
        const ExtensionProblem p = make_extension(base_grid(24), s, 64, u);
        const ExtensionSolution sol = solve_extension(p);
        EXPECT_EQ(Vector(sol.w.col(0)), u);
        EXPECT_EQ(Vector(sol.w.col(p.levels())), Vector::Zero(24));
        EXPECT_LE(extension_residual(p, sol), 1e-10) << "s = " << s;
    }
}

TEST(Extension, HalfExponentSineModeDecaysAtTheDiscreteRate) {
    const Index n = 32;
    const ExtensionProblem templ = make_extension(base_grid(n), 0.5, 256, Vector::Zero(n));
    const double dy = templ.y[1];
    for (Index k : {1, 2, 3}) {
        ExtensionProblem p = templ;
        p.datum = sine_mode(n, k);
        const ExtensionSolution sol = solve_extension(p);
        const double expected = std::exp(-std::sqrt(stencil_eigenvalue(n, k)) * dy);
        const Index mid = n / 2;
        for (Index j = 0; j < 10; ++j) {
            const double ratio = sol.w(mid, j + 1) / sol.w(mid, j);
            EXPECT_NEAR(ratio, expected, 0.05 * expected) << "k = " << k << " level " << j;
        }
    }
}

TEST(Extension, HalfExponentUsesUnweightedCoefficients) {
    const ExtensionProblem p = make_extension(base_grid(8), 0.5, 16, Vector::Ones(8));
    const auto c = detail::strip_coefficients(p);
    const double dy = p.y[1];
    for (double v : c.vertical) EXPECT_NEAR(v, 1.0 / dy, 1e-12 / dy);
    for (std::size_t j = 1; j + 1 < c.horizontal.size(); ++j) EXPECT_NEAR(c.horizontal[j], dy, 1e-12);
}

TEST(Extension, MaximumPrinciple) {
    std::mt19937_64 rng(2);
    for (double s : {0.25, 0.5, 0.8}) {
        const Vector u = uniform(rng, 20, -1.0, 2.0);
        const ExtensionProblem p = make_extension(base_grid(20), s, 48, u);
        const Matrix w = solve_extension(p).w;
        const double lo = std::min(u.minCoeff(), 0.0), hi = std::max(u.maxCoeff(), 0.0);
        EXPECT_GE(w.minCoeff(), lo - 1e-12) << "s = " << s;
        EXPECT_LE(w.maxCoeff(), hi + 1e-12) << "s = " << s;
    }
}

TEST(Trace, HalfExponentMatchesSquareRootOnOtherModes) {
    const Index n = 32;
    const Grid base = base_grid(n);
    const double calib = calibrate_trace(base, 0.5, 256);
    for (Index k : {2, 3, 5}) {
        const Vector u = sine_mode(n, k);
        const ExtensionProblem p = make_extension(base, 0.5, 256, u);
        const Vector trace = weighted_neumann_trace(p, solve_extension(p), calib);
        const Vector expected = std::sqrt(stencil_eigenvalue(n, k)) * u;
        EXPECT_LE((trace - expected).norm(), 0.05 * expected.norm()) << "k = " << k;
    }
}

TEST(Trace, SmoothBumpWithinTenPercentAndImprovingInLevels) {
    const Grid base = base_grid(32);
    for (double s : {0.3, 0.5, 0.7}) {
        double previous = std::numeric_limits<double>::infinity();
        for (Index m : {32, 64, 128, 256}) {
            const double gap = extension_trace_gap(base, s, m);
            EXPECT_LT(gap, previous) << "s = " << s << " M = " << m;
            previous = gap;
        }
        EXPECT_LE(previous, 0.10) << "s = " << s;
    }
}

TEST(Trace, LinearAndSymmetricAsAQuadraticForm) {
    const Index n = 16;
    const Grid base = base_grid(n);
    for (double s : {0.3, 0.7}) {
        Matrix t(n, n);
        for (Index i = 0; i < n; ++i) {
            const ExtensionProblem p = make_extension(base, s, 64, Vector::Unit(n, i));
            t.col(i) = raw_trace(p, solve_extension(p));
        }
        EXPECT_LE((t - t.transpose()).cwiseAbs().maxCoeff(), 1e-10 * t.cwiseAbs().maxCoeff()) << "s = " << s;

        std::mt19937_64 rng(3);
        const Vector u = gaussian(rng, n);
        const ExtensionProblem p = make_extension(base, s, 64, u);
        EXPECT_LE((raw_trace(p, solve_extension(p)) - t * u).norm(), 1e-10 * (t * u).norm());
    }
}

TEST(Energy, DirichletEnergyEqualsBoundaryPairing) {
    std::mt19937_64 rng(4);
    for (double s : {0.2, 0.5, 0.9}) {
        const Vector u = gaussian(rng, 24);
        const ExtensionProblem p = make_extension(base_grid(24), s, 80, u);
        const ExtensionSolution sol = solve_extension(p);
        const double energy = dirichlet_energy(p, sol);
        const double pairing = p.base_grid.spacing() * u.dot(conormal_flux(p, sol));
        EXPECT_GT(energy, 0.0);
        EXPECT_NEAR(energy, pairing, 1e-8 * energy) << "s = " << s;
    }
}

namespace {

struct SmallnessSetup {
    Grid base = base_grid(48);
    IndexSet window, omega;
    SmallnessSetup() {
        for (Index i = 0; i < base.size(); ++i) {
            const double x = base.spacing() * static_cast<double>(i + 1);
            if (x < 0.2) window.push_back(i);
            if (x > 0.4 && x < 0.8) omega.push_back(i);
        }
    }
};

} // namespace

TEST(Smallness, ZeroDatumGivesZeroNorms) {
    SmallnessSetup g;
    const ExtensionProblem p = make_extension(g.base, 0.5, 64, Vector::Zero(g.base.size()));
    const SmallnessRow r = smallness_norms(p, solve_extension(p), 1.0, g.window, g.omega, 0.1);
    EXPECT_EQ(r.cauchy_window, 0.0);
    EXPECT_EQ(r.strip_window, 0.0);
    EXPECT_EQ(r.strip_interior, 0.0);
    EXPECT_EQ(r.boundary_interior, 0.0);
}

TEST(Smallness, NormsScaleLinearly) {
    SmallnessSetup g;
    std::mt19937_64 rng(5);
    const Vector u = gaussian(rng, g.base.size());
    const ExtensionProblem templ = make_extension(g.base, 0.4, 64, Vector::Zero(g.base.size()));
    const double calib = calibrate_trace(g.base, 0.4, 64);
    const double eps = 1e-3;
    const auto rows = smallness_propagation_demo(templ, {u, eps * u}, calib, g.window, g.omega, 0.1);
    EXPECT_NEAR(rows[1].cauchy_window, eps * rows[0].cauchy_window, 1e-10 * rows[0].cauchy_window);
    EXPECT_NEAR(rows[1].strip_window, eps * rows[0].strip_window, 1e-10 * rows[0].strip_window);
    EXPECT_NEAR(rows[1].strip_interior, eps * rows[0].strip_interior, 1e-10 * rows[0].strip_interior);
    EXPECT_NEAR(rows[1].boundary_interior, eps * rows[0].boundary_interior, 1e-10 * rows[0].boundary_interior);
}

TEST(Smallness, ShrinkingCauchyDataAtFixedEnergyShrinksInteriorNorms) {
    SmallnessSetup g;
    for (double s : {0.3, 0.5, 0.7}) {
        const ExtensionProblem templ = make_extension(g.base, s, 128, Vector::Zero(g.base.size()));
        const double calib = calibrate_trace(g.base, s, 128);
        const auto family = localized_unit_energy_family(templ, g.omega, 4);
        for (const Vector& u : family) {
            ExtensionProblem p = templ;
            p.datum = u;
            EXPECT_NEAR(dirichlet_energy(p, solve_extension(p)), 1.0, 1e-10);
            for (Index i : g.window) EXPECT_EQ(u[i], 0.0);
        }
        const auto rows = smallness_propagation_demo(templ, family, calib, g.window, g.omega, 0.1);
        for (std::size_t k = 1; k < rows.size(); ++k) {
            EXPECT_LT(rows[k].cauchy_window, rows[k - 1].cauchy_window) << "s = " << s << " member " << k;
            EXPECT_LT(rows[k].strip_interior, rows[k - 1].strip_interior) << "s = " << s << " member " << k;
        }
    }
}
