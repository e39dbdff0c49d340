#pragma once

// Small dense complex-matrix kernel. Everything here is generic linear
// algebra; no physics conventions live in this header.

#include <complex>
#include <Eigen/Dense>

#include "cesim/errors.hpp"

namespace cesim::linalg {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kHermitianTol = 1e-9;
inline constexpr double kClampTol = 1e-9;

/// Max-norm of a matrix (largest entry modulus).
double max_norm(const CMatrix& m);

/// True iff every entry is finite (no NaN/Inf in either component).
bool all_finite(const CMatrix& m);

/// Throws std::invalid_argument when a non-finite entry is present.
void require_finite(const CMatrix& m, const char* what);

CMatrix kron(const CMatrix& a, const CMatrix& b);

struct HermitianEigen {
    Eigen::VectorXd values;  // ascending
    CMatrix vectors;         // orthonormal columns, vectors.col(k) <-> values(k)
};

/// Eigendecomposition of a Hermitian matrix. Throws NotHermitian when
/// ||m - m†||_max exceeds tol, NoConvergence on solver failure.
HermitianEigen hermitian_eigensystem(const CMatrix& m, double tol = kHermitianTol);

/// All four eigenvalues (with multiplicity, unordered) of a general
/// complex 4x4 matrix.
Eigen::Vector4cd general_eigenvalues_4x4(const CMatrix& m);

struct Svd {
    CMatrix u;
    Eigen::VectorXd sigma;  // nonnegative, descending
    CMatrix vdag;
};

/// Full SVD m = u * diag(sigma) * vdag for square m.
Svd svd(const CMatrix& m);

enum class Subsystem { A, B };

/// Partial transpose of a 4x4 matrix viewed as a 2⊗2 operator.
CMatrix partial_transpose(const CMatrix& m, Subsystem which);

/// Clamp policy for spectra that are nonnegative-real analytically but
/// carry solver noise: imaginary parts with |Im| <= tol are dropped and
/// real parts in [-tol, 0) are raised to 0. Anything worse throws
/// SpectrumOutOfRange.
double clamp_nonnegative_real(Complex z, double tol = kClampTol);

} // namespace cesim::linalg
