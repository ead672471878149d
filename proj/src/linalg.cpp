#include "rydsim/linalg.hpp"

#include <cmath>

namespace rydsim {

HermitianPropagator::HermitianPropagator(const CMatrix& hamiltonian) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(hamiltonian);
    energies_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
}

HermitianPropagator::HermitianPropagator(const RMatrix& hamiltonian) {
    Eigen::SelfAdjointEigenSolver<RMatrix> solver(hamiltonian);
    energies_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors().cast<cplx>();
}

CVector HermitianPropagator::evolve(const CVector& psi0, double t_us) const {
    CVector coeffs = vectors_.adjoint() * psi0;
    for (Eigen::Index k = 0; k < coeffs.size(); ++k)
        coeffs[k] *= std::polar(1.0, -two_pi * energies_[k] * t_us);
    return vectors_ * coeffs;
}

CMatrix HermitianPropagator::unitary(double t_us) const {
    CVector phases(energies_.size());
    for (Eigen::Index k = 0; k < phases.size(); ++k) phases[k] = std::polar(1.0, -two_pi * energies_[k] * t_us);
    return vectors_ * phases.asDiagonal() * vectors_.adjoint();
}

namespace {

double operator_norm(const CMatrix& m) {
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues()(0);
}

double distance_at(const CMatrix& a, const CMatrix& b, double theta) {
    return operator_norm(a - std::polar(1.0, theta) * b);
}

}  // namespace

double phase_aligned_distance(const CMatrix& a, const CMatrix& b) {
    const cplx overlap = (b.adjoint() * a).trace();
    const double guess = std::abs(overlap) > 0.0 ? std::arg(overlap) : 0.0;

    constexpr int coarse = 256;
    double best_theta = guess;
    double best = distance_at(a, b, guess);
    for (int k = 1; k < coarse; ++k) {
        const double theta = guess + two_pi * k / coarse;
        const double d = distance_at(a, b, theta);
        if (d < best) {
            best = d;
            best_theta = theta;
        }
    }
    // golden-section refinement on the bracketing interval
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = best_theta - two_pi / coarse;
    double hi = best_theta + two_pi / coarse;
    double x1 = hi - g * (hi - lo);
    double x2 = lo + g * (hi - lo);
    double f1 = distance_at(a, b, x1);
    double f2 = distance_at(a, b, x2);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = distance_at(a, b, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = distance_at(a, b, x2);
        }
    }
    return std::min({best, f1, f2});
}

}  // namespace rydsim
