#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace rydsim {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Time evolution under a fixed Hermitian H (MHz): psi(t) = exp(-2 pi i H t) psi(0).
// Diagonalizes once so that many times can be evaluated cheaply.
class HermitianPropagator {
public:
    explicit HermitianPropagator(const CMatrix& hamiltonian);
    explicit HermitianPropagator(const RMatrix& hamiltonian);

    Eigen::Index dimension() const { return energies_.size(); }
    const Eigen::VectorXd& energies() const { return energies_; }
    const CMatrix& eigenvectors() const { return vectors_; }

    CVector evolve(const CVector& psi0, double t_us) const;
    CMatrix unitary(double t_us) const;

private:
    Eigen::VectorXd energies_;
    CMatrix vectors_;
};

// Operator-norm distance between two unitaries after removing the best global phase.
double phase_aligned_distance(const CMatrix& a, const CMatrix& b);

}  // namespace rydsim
