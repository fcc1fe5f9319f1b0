#pragma once

// Dense discrete fractional Laplacian.
//
// The primary realization is the matrix power A^s = V diag(lambda^s) V^T of the
// truncated second-order stencil Laplacian (zero values outside the box). The
// periodic Fourier multiplier |xi|^{2s} is kept as an independent oracle.

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "fraccal/geometry.hpp"

namespace fraccal {

enum class Method { spectral_power, fourier_symbol };

inline std::string to_string(Method m) {
    return m == Method::spectral_power ? "spectral_power" : "fourier_symbol";
}

class FracOperator {
public:
    FracOperator(Grid grid, double s, Method method, Matrix matrix)
        : grid_(std::move(grid)), s_(s), method_(method), matrix_(std::move(matrix)) {
        if (matrix_.rows() != grid_.size() || matrix_.cols() != grid_.size())
            throw IndexMismatch("operator matrix does not match the grid");
    }

    const Grid& grid() const noexcept { return grid_; }
    double s() const noexcept { return s_; }
    Method method() const noexcept { return method_; }
    const Matrix& matrix() const noexcept { return matrix_; }

private:
    Grid grid_;
    double s_;
    Method method_;
    Matrix matrix_;
};

/// (Au)_i = h^-2 sum_axes (2u_i - u_{i-} - u_{i+}), missing neighbours are zero.
inline Matrix assemble_base_laplacian(const Grid& grid) {
    const Index n = grid.size();
    const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
    Matrix a = Matrix::Zero(n, n);
    for (Index k = 0; k < n; ++k) {
        auto m = grid.multi(k);
        for (int axis = 0; axis < grid.dim(); ++axis) {
            a(k, k) += 2.0 * inv_h2;
            if (m[axis] > 0) {
                auto nb = m;
                --nb[axis];
                a(k, grid.flat(nb[0], nb[1])) -= inv_h2;
            }
            if (m[axis] + 1 < grid.count(axis)) {
                auto nb = m;
                ++nb[axis];
                a(k, grid.flat(nb[0], nb[1])) -= inv_h2;
            }
        }
    }
    return a;
}

/// Eigendecomposition of a symmetric PSD matrix, reusable for several exponents.
class SpectralDecomposition {
public:
    explicit SpectralDecomposition(const Matrix& symmetric) {
        Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric);
        if (solver.info() != Eigen::Success)
            throw EigendecompositionFailure("symmetric eigensolver did not converge");
        eigenvalues_ = solver.eigenvalues();
        eigenvectors_ = solver.eigenvectors();
    }

    const Vector& eigenvalues() const noexcept { return eigenvalues_; }
    const Matrix& eigenvectors() const noexcept { return eigenvectors_; }

    /// V diag(lambda^s) V^T, symmetrized entrywise so that A == A^T holds bit for bit.
    Matrix power(double s) const {
        Vector ls(eigenvalues_.size());
        for (Index k = 0; k < ls.size(); ++k) {
            // round-off can push a zero eigenvalue slightly negative
            const double lam = eigenvalues_[k] < 0.0 ? 0.0 : eigenvalues_[k];
            ls[k] = s == 1.0 ? lam : std::pow(lam, s);
        }
        Matrix p = eigenvectors_ * ls.asDiagonal() * eigenvectors_.transpose();
        return symmetrize(p);
    }

    static Matrix symmetrize(const Matrix& m) {
        Matrix out(m.rows(), m.cols());
        for (Index j = 0; j < m.cols(); ++j)
            for (Index i = j; i < m.rows(); ++i) {
                const double v = 0.5 * (m(i, j) + m(j, i));
                out(i, j) = v;
                out(j, i) = v;
            }
        return out;
    }

private:
    Vector eigenvalues_;
    Matrix eigenvectors_;
};

inline void check_exponent(double s) {
    if (!(s > 0.0 && s <= 1.0)) throw InvalidParameter("fractional exponent s must lie in (0,1], got " + std::to_string(s));
}

inline FracOperator fractional_power(const Grid& grid, const Matrix& base, double s) {
    check_exponent(s);
    if (s == 1.0) return FracOperator(grid, s, Method::spectral_power, base);
    return FracOperator(grid, s, Method::spectral_power, SpectralDecomposition(base).power(s));
}

inline FracOperator fractional_power(const Grid& grid, double s) {
    return fractional_power(grid, assemble_base_laplacian(grid), s);
}

/// Periodic multiplier |xi_k|^{2s} with xi_k = 2 pi k / (N h), k wrapped into (-N/2, N/2].
inline FracOperator assemble_fourier_symbol(const Grid& grid, double s) {
    check_exponent(s);
    const Index n0 = grid.count(0);
    const Index n1 = grid.dim() == 2 ? grid.count(1) : 1;
    const double h = grid.spacing();
    auto freq = [h](Index k, Index n) {
        const Index wrapped = k <= n / 2 ? k : k - n;
        return 2.0 * std::numbers::pi * static_cast<double>(wrapped) / (static_cast<double>(n) * h);
    };
    // kernel on the periodic difference lattice; the symbol is even in each frequency so
    // only the cosine part survives
    Matrix kernel = Matrix::Zero(n0, n1);
    for (Index k1 = 0; k1 < n1; ++k1) {
        const double xi1 = grid.dim() == 2 ? freq(k1, n1) : 0.0;
        for (Index k0 = 0; k0 < n0; ++k0) {
            const double xi0 = freq(k0, n0);
            const double mag2 = xi0 * xi0 + xi1 * xi1;
            if (mag2 == 0.0) continue;
            const double symbol = std::pow(mag2, s);
            for (Index d1 = 0; d1 < n1; ++d1)
                for (Index d0 = 0; d0 < n0; ++d0) {
                    const double phase = 2.0 * std::numbers::pi *
                                         (static_cast<double>(k0 * d0) / static_cast<double>(n0) +
                                          static_cast<double>(k1 * d1) / static_cast<double>(n1));
                    kernel(d0, d1) += symbol * std::cos(phase);
                }
        }
    }
    kernel /= static_cast<double>(n0 * n1);

    const Index n = grid.size();
    Matrix m(n, n);
    for (Index a = 0; a < n; ++a) {
        auto ma = grid.multi(a);
        for (Index b = 0; b < n; ++b) {
            auto mb = grid.multi(b);
            const Index d0 = ((ma[0] - mb[0]) % n0 + n0) % n0;
            const Index d1 = ((ma[1] - mb[1]) % n1 + n1) % n1;
            m(a, b) = kernel(d0, d1);
        }
    }
    return FracOperator(grid, s, Method::fourier_symbol, SpectralDecomposition::symmetrize(m));
}

inline GridFunction apply(const FracOperator& op, const GridFunction& u) {
    if (!(u.grid() == op.grid())) throw IndexMismatch("grid function and operator live on different grids");
    return GridFunction(op.grid(), op.matrix() * u.values());
}

} // namespace fraccal
