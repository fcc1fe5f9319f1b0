#include <random>

#include <gtest/gtest.h>

#include "fraccal/forward.hpp"
#include "oracles.hpp"

using namespace fraccal;
using namespace fraccal::testing;

namespace {

struct Fixture1d {
    RegionPartition part = separated_1d(32);
    std::shared_ptr<const FracOperator> op = spectral(part.grid, 0.5);
    Index n_omega() const { return static_cast<Index>(part.omega.size()); }
    Index n_ext() const { return static_cast<Index>(part.exterior.size()); }
};

} // namespace

TEST(Potential, BoundAndValidation) {
    const Potential q(IndexSet{1, 2, 3}, Vector::LinSpaced(3, -2.0, 1.0));
    EXPECT_DOUBLE_EQ(q.bound(), 2.0);
    EXPECT_THROW(Potential(IndexSet{1, 2}, Vector::Ones(3)), IndexMismatch);
    Vector bad = Vector::Ones(2);
    bad[1] = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(Potential(IndexSet{1, 2}, bad), InvalidParameter);
}

TEST(WellPosed, NonnegativePotentialAndZeroPotential) {
    Fixture1d s;
    const ForwardProblem zero(s.op, s.part, Potential::zero(s.part.omega));
    Eigen::SelfAdjointEigenSolver<Matrix> eig(s.op->matrix()(s.part.omega, s.part.omega), Eigen::EigenvaluesOnly);
    EXPECT_NEAR(check_wellposed(zero), eig.eigenvalues().minCoeff(), 1e-10 * eig.eigenvalues().maxCoeff());
    EXPECT_TRUE(zero.well_posed());

    std::mt19937_64 rng(1);
    const ForwardProblem pos(s.op, s.part, Potential(s.part.omega, uniform(rng, s.n_omega())));
    EXPECT_GT(check_wellposed(pos), check_wellposed(zero));
    EXPECT_TRUE(pos.well_posed());
}

TEST(WellPosed, DirichletEigenvalueMakesProblemIllPosed) {
    Fixture1d s;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(s.op->matrix()(s.part.omega, s.part.omega), Eigen::EigenvaluesOnly);
    const double lambda1 = eig.eigenvalues().minCoeff();
    const ForwardProblem p(s.op, s.part, Potential(s.part.omega, Vector::Constant(s.n_omega(), -lambda1)));
    EXPECT_LE(check_wellposed(p), 1e-10 * lambda1);
    EXPECT_FALSE(p.well_posed());
    EXPECT_THROW(solve(p, Vector::Ones(s.n_ext())), IllPosed);
    try {
        poisson_operator(p, s.part.w1);
        FAIL() << "expected IllPosed";
    } catch (const IllPosed& e) {
        EXPECT_LE(e.sigma_min(), p.tolerance());
    }
}

TEST(Solve, ZeroDataGivesZero) {
    Fixture1d s;
    const ForwardProblem p(s.op, s.part, Potential::zero(s.part.omega));
    EXPECT_EQ(solve(p, Vector::Zero(s.n_ext())).values(), Vector::Zero(s.part.grid.size()));
}

TEST(Solve, LinearityAndExteriorValues) {
    Fixture1d s;
    std::mt19937_64 rng(2);
    const ForwardProblem p(s.op, s.part, Potential(s.part.omega, uniform(rng, s.n_omega())));
    const Vector f1 = gaussian(rng, s.n_ext()), f2 = gaussian(rng, s.n_ext());
    const Vector sum = solve(p, f1 + f2).values();
    const Vector sep = solve(p, f1).values() + solve(p, f2).values();
    EXPECT_LE((sum - sep).cwiseAbs().maxCoeff(), 1e-10 * sep.cwiseAbs().maxCoeff());
    EXPECT_EQ(restrict_to(solve(p, f1), s.part.exterior), f1);
}

TEST(Solve, ResidualOnRandomDataAndPotentials) {
    Fixture1d s;
    std::mt19937_64 rng(3);
    for (int t = 0; t < 10; ++t) {
        const ForwardProblem p(s.op, s.part, Potential(s.part.omega, uniform(rng, s.n_omega())));
        const GridFunction u = solve(p, gaussian(rng, s.n_ext()));
        EXPECT_LE(interior_residual(p, u), 1e-10);
    }
}

TEST(Solve, WrongDataSizeThrows) {
    Fixture1d s;
    const ForwardProblem p(s.op, s.part, Potential::zero(s.part.omega));
    EXPECT_THROW(solve(p, Vector::Ones(3)), IndexMismatch);
    EXPECT_THROW(solve_window(p, s.part.w1, Vector::Ones(2)), IndexMismatch);
    EXPECT_THROW(ForwardProblem(s.op, s.part, Potential(IndexSet{0, 1}, Vector::Ones(2))), IndexMismatch);
}

TEST(Solve, SchurSolutionMatchesFullSystem) {
    for (const RegionPartition& part : {separated_1d(20), separated_2d()}) {
        const auto op = spectral(part.grid, 0.6);
        std::mt19937_64 rng(4);
        const Vector q = uniform(rng, static_cast<Index>(part.omega.size()));
        const ForwardProblem p(op, part, Potential(part.omega, q));
        const Vector f = gaussian(rng, static_cast<Index>(part.exterior.size()));

        // Full system: rows of omega carry the equation, exterior rows pin u = f.
        const Index n = part.grid.size();
        Matrix full = Matrix::Zero(n, n);
        Vector rhs = Vector::Zero(n);
        for (std::size_t k = 0; k < part.omega.size(); ++k) {
            full.row(part.omega[k]) = op->matrix().row(part.omega[k]);
            full(part.omega[k], part.omega[k]) += q[static_cast<Index>(k)];
        }
        for (std::size_t k = 0; k < part.exterior.size(); ++k) {
            full(part.exterior[k], part.exterior[k]) = 1.0;
            rhs[part.exterior[k]] = f[static_cast<Index>(k)];
        }
        const Vector direct = full.fullPivLu().solve(rhs);
        EXPECT_LE((solve(p, f).values() - direct).cwiseAbs().maxCoeff(), 1e-10 * direct.cwiseAbs().maxCoeff());
    }
}

TEST(Solve, WindowDataKeepsSupportInOmegaAndWindow) {
    Fixture1d s;
    const ForwardProblem p(s.op, s.part, Potential::zero(s.part.omega));
    const GridFunction u = solve_window(p, s.part.w1, Vector::Ones(static_cast<Index>(s.part.w1.size())));
    for (Index n : s.part.exterior)
        if (!std::binary_search(s.part.w1.begin(), s.part.w1.end(), n)) { EXPECT_EQ(u[n], 0.0); }
    EXPECT_GT(restrict_to(u, s.part.omega).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Poisson, ColumnsAreWindowSolutions) {
    Fixture1d s;
    std::mt19937_64 rng(5);
    const ForwardProblem p(s.op, s.part, Potential(s.part.omega, uniform(rng, s.n_omega())));
    const Matrix pm = poisson_operator(p, s.part.w1);
    ASSERT_EQ(pm.rows(), s.n_omega());
    ASSERT_EQ(pm.cols(), static_cast<Index>(s.part.w1.size()));
    const Vector f = gaussian(rng, pm.cols());
    const Vector via_solve = restrict_to(solve_window(p, s.part.w1, f), s.part.omega);
    EXPECT_LE((pm * f - via_solve).cwiseAbs().maxCoeff(), 1e-12 * (1.0 + via_solve.cwiseAbs().maxCoeff()));
    for (Index j = 0; j < pm.cols(); ++j) {
        const GridFunction col = solve_window(p, s.part.w1, Vector::Unit(pm.cols(), j));
        EXPECT_LE(interior_residual(p, col), 1e-10);
    }
}

TEST(Poisson, DeterministicAssembly) {
    Fixture1d s;
    const ForwardProblem a(s.op, s.part, Potential::zero(s.part.omega));
    const ForwardProblem b(spectral(s.part.grid, 0.5), s.part, Potential::zero(s.part.omega));
    EXPECT_EQ(poisson_operator(a, s.part.w2), poisson_operator(b, s.part.w2));
}

TEST(Poisson, WindowOutsideExteriorThrows) {
    Fixture1d s;
    const ForwardProblem p(s.op, s.part, Potential::zero(s.part.omega));
    EXPECT_THROW(poisson_operator(p, s.part.omega), IndexMismatch);
}
