#pragma once

// Two-qubit state type and the basis conventions shared by every layer.
//
// Computational ordering: |ee>, |eg>, |ge>, |gg>  (indices 0..3)
// Collective ordering:    |0,0>, |1,1>, |1,0>, |1,-1>  (indices 0..3)
// with the singlet fixed as |0,0> = (|eg> - |ge>)/sqrt(2).

#include <complex>
#include <Eigen/Dense>

#include "cesim/errors.hpp"
#include "cesim/linalg.hpp"

namespace cesim {

using Complex = std::complex<double>;
using Mat4 = Eigen::Matrix4cd;
using Vec4 = Eigen::Vector4cd;

enum class Basis { Computational, Collective };

inline constexpr double kStateTol = 1e-9;

/// Unitary taking computational coordinates to collective coordinates;
/// row k is the bra of the k-th collective vector.
const Mat4& collective_from_computational();

// Computational-basis kets (unit column vectors).
Vec4 ket_ee();
Vec4 ket_eg();
Vec4 ket_ge();
Vec4 ket_gg();
/// (|eg> - |ge>)/sqrt(2)
Vec4 ket_singlet();
/// (|eg> + |ge>)/sqrt(2)
Vec4 ket_triplet0();

/// Validated 4x4 density matrix (unit trace, Hermitian, positive
/// semidefinite within kStateTol). Construction throws InvalidState.
class DensityMatrix4 {
  public:
    DensityMatrix4(const Mat4& matrix, Basis basis);

    /// Projector |psi><psi| / <psi|psi>.
    static DensityMatrix4 pure(const Vec4& psi, Basis basis);

    const Mat4& matrix() const { return m_; }
    Basis basis() const { return basis_; }

    DensityMatrix4 to_collective() const;
    DensityMatrix4 to_computational() const;
    DensityMatrix4 in_basis(Basis b) const;

  private:
    Mat4 m_;
    Basis basis_;
};

/// Validation used by the DensityMatrix4 constructor, exposed for tests.
void require_valid_state(const Mat4& m, double tol = kStateTol);

} // namespace cesim
