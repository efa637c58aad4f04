#pragma once

// Dense symmetric-matrix primitives: eigendecomposition, principal square
// root and eigenvalue-clipping repair. Everything here is templated on the
// scalar type and accepts any Eigen dense expression.

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "mcgta/errors.hpp"

namespace mcgta {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Square matrix that is symmetric within 1e-12 absolute.
using SymMatrix = MatrixX<double>;

inline constexpr double kPsdTolerance = 1e-10;
inline constexpr double kRepairFloor = 1e-6;

template <typename Scalar>
struct SymEigen {
    VectorX<Scalar> values;   // ascending
    MatrixX<Scalar> vectors;  // orthonormal columns
};

namespace detail {

template <typename Derived>
void require_square_finite(const Eigen::MatrixBase<Derived>& m, const char* who) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        throw InvalidInput(std::string(who) + ": matrix must be square and non-empty");
    }
    if (!m.allFinite()) throw InvalidInput(std::string(who) + ": non-finite entries");
}

template <typename Derived>
void require_symmetric(const Eigen::MatrixBase<Derived>& m, const char* who) {
    using Scalar = typename Derived::Scalar;
    const Scalar scale = std::max<Scalar>(Scalar(1), m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-10) * scale) {
        throw InvalidInput(std::string(who) + ": matrix is not symmetric");
    }
}

}  // namespace detail

/// Symmetric part (m + mᵀ)/2 of a square expression.
template <typename Derived>
auto symmetrize(const Eigen::MatrixBase<Derived>& m) {
    return (0.5 * (m + m.transpose())).eval();
}

template <typename Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& m, typename Derived::Scalar tol = 1e-12) {
    return m.rows() == m.cols() && (m - m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

template <typename Derived>
SymEigen<typename Derived::Scalar> sym_eigen(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    detail::require_square_finite(m, "sym_eigen");
    detail::require_symmetric(m, "sym_eigen");
    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(symmetrize(m));
    if (solver.info() != Eigen::Success) throw InvalidInput("sym_eigen: decomposition failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Eigenvalues only, ascending. Cheaper than sym_eigen when vectors are not needed.
template <typename Derived>
VectorX<typename Derived::Scalar> sym_eigenvalues(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    detail::require_square_finite(m, "sym_eigenvalues");
    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(symmetrize(m), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw InvalidInput("sym_eigenvalues: decomposition failed");
    return solver.eigenvalues();
}

/// Principal square root of a symmetric PSD matrix. Eigenvalues in
/// [-tol·max(1, λ_max), 0) are clipped to zero before rooting.
template <typename Derived>
MatrixX<typename Derived::Scalar> spd_sqrt(const Eigen::MatrixBase<Derived>& m,
                                           typename Derived::Scalar psd_tol = kPsdTolerance) {
    using Scalar = typename Derived::Scalar;
    const auto eig = sym_eigen(m);
    const Scalar limit = -psd_tol * std::max<Scalar>(Scalar(1), eig.values.maxCoeff());
    if (eig.values.minCoeff() < limit) {
        throw NotPositiveSemidefinite("spd_sqrt: eigenvalue " + std::to_string(double(eig.values.minCoeff())) +
                                      " below tolerance");
    }
    const VectorX<Scalar> roots = eig.values.cwiseMax(Scalar(0)).cwiseSqrt();
    return symmetrize(eig.vectors * roots.asDiagonal() * eig.vectors.transpose());
}

/// Nearest matrix (Frobenius) with every eigenvalue ≥ floor. Inputs that
/// already satisfy the bound come back untouched.
template <typename Derived>
MatrixX<typename Derived::Scalar> make_spd(const Eigen::MatrixBase<Derived>& m,
                                           typename Derived::Scalar floor = kRepairFloor) {
    using Scalar = typename Derived::Scalar;
    const auto eig = sym_eigen(m);
    if (eig.values.minCoeff() >= floor) return symmetrize(m);
    const VectorX<Scalar> clipped = eig.values.cwiseMax(floor);
    MatrixX<Scalar> out = symmetrize(eig.vectors * clipped.asDiagonal() * eig.vectors.transpose());
    // Reconstruction rounding can leave λ_min a few ulps under the floor.
    const Scalar low = sym_eigenvalues(out).minCoeff();
    if (low < floor) out.diagonal().array() += (floor - low);
    return out;
}

}  // namespace mcgta
