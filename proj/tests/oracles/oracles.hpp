#pragma once

// Reference formulas written without the library, used to check it.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

// Power series of the integer-order Bessel function of the first kind.
inline double bessel_j(int n, double x) {
    if (n < 0) return (n % 2 == 0 ? 1.0 : -1.0) * bessel_j(-n, x);
    double term = std::pow(x / 2.0, n) / std::tgamma(n + 1.0);
    double sum = term;
    for (int k = 1; k < 200; ++k) {
        term *= -(x * x / 4.0) / (static_cast<double>(k) * static_cast<double>(k + n));
        sum += term;
        if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum))) break;
    }
    return sum;
}

// Two-variable Bessel function from its integral representation,
// (1/2pi) int cos(x sin t + y sin 2t - m t) dt, by the periodic trapezoid rule.
inline double generalized_bessel_integral(int m, double x, double y, int points = 4096) {
    double sum = 0.0;
    for (int i = 0; i < points; ++i) {
        const double t = 2.0 * pi * i / points;
        sum += std::cos(x * std::sin(t) + y * std::sin(2.0 * t) - m * t);
    }
    return sum / points;
}

// Eigenvalues of [[a, b], [conj b, d]], ascending.
inline std::array<double, 2> hermitian2_eigenvalues(double a, double d, cplx b) {
    const double mean = 0.5 * (a + d);
    const double half_gap = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(b));
    return {mean - half_gap, mean + half_gap};
}

// Upper-state probability for H = [[0, c], [c, delta]] (MHz) under exp(-2 pi i H t),
// obtained by explicit 2x2 diagonalization.
inline double two_level_transfer(double c, double delta, double t) {
    const auto e = hermitian2_eigenvalues(0.0, delta, c);
    // eigenvector for e_k: (c, e_k) normalized
    cplx amp = 0.0;
    for (double ek : e) {
        const double norm2 = c * c + ek * ek;
        amp += std::exp(cplx(0.0, -2.0 * pi * ek * t)) * (ek * c / norm2);
    }
    return std::norm(amp);
}

inline double poisson_pmf(double mean, int k) {
    return std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0));
}

inline double binomial_pmf(int n, int k, double p) {
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)) * std::pow(p, k) *
           std::pow(1.0 - p, n - k);
}

// Angle between k1 and k2 (radians) that closes k1 + k2 + k3 = 0.
inline double closure_angle(double k1, double k2, double k3) {
    return std::acos((k3 * k3 - k1 * k1 - k2 * k2) / (2.0 * k1 * k2));
}

// Landau-Zener excitation for a linear sweep of rate alpha (MHz/us) through a
// coupling of Rabi frequency rabi (MHz).
inline double landau_zener_transfer(double rabi, double alpha) {
    return 1.0 - std::exp(-pi * pi * rabi * rabi / std::abs(alpha));
}

// FWHM (in the conjugate frequency) of sinc^2 from a rectangular window of length t.
inline double sinc_fwhm(double t) { return 0.885893 / t; }

using Mat = std::vector<std::vector<cplx>>;

inline Mat zeros(std::size_t n) { return Mat(n, std::vector<cplx>(n, 0.0)); }

inline Mat multiply(const Mat& a, const Mat& b) {
    const std::size_t n = a.size();
    Mat c = zeros(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

inline Mat kron(const Mat& a, const Mat& b) {
    const std::size_t na = a.size(), nb = b.size();
    Mat c = zeros(na * nb);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < na; ++j)
            for (std::size_t k = 0; k < nb; ++k)
                for (std::size_t l = 0; l < nb; ++l) c[i * nb + k][j * nb + l] = a[i][j] * b[k][l];
    return c;
}

// Lindblad right-hand side in matrix form:
// drho/dt = -2 pi i [H, rho] + sum_j 2 pi g_j (L rho L^dag - {L^dag L, rho}/2) - damping_jk rho_jk.
struct Lindblad {
    Mat h;
    std::vector<Mat> jumps;
    std::vector<double> linewidths;
    std::vector<std::vector<double>> damping;

    Mat rhs(const Mat& rho) const {
        const std::size_t n = rho.size();
        Mat out = zeros(n);
        const Mat hr = multiply(h, rho);
        const Mat rh = multiply(rho, h);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) out[i][j] = cplx(0.0, -2.0 * pi) * (hr[i][j] - rh[i][j]);
        for (std::size_t q = 0; q < jumps.size(); ++q) {
            const Mat& l = jumps[q];
            Mat ld = zeros(n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) ld[i][j] = std::conj(l[j][i]);
            const Mat lrl = multiply(multiply(l, rho), ld);
            const Mat ldl = multiply(ld, l);
            const Mat a = multiply(ldl, rho);
            const Mat b = multiply(rho, ldl);
            const double rate = 2.0 * pi * linewidths[q];
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) out[i][j] += rate * (lrl[i][j] - 0.5 * (a[i][j] + b[i][j]));
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) out[i][j] -= damping[i][j] * rho[i][j];
        return out;
    }

    Mat evolve(Mat rho, double t, std::size_t steps) const {
        const double h_step = t / static_cast<double>(steps);
        auto axpy = [](const Mat& y, const Mat& k, double s) {
            Mat r = y;
            for (std::size_t i = 0; i < y.size(); ++i)
                for (std::size_t j = 0; j < y.size(); ++j) r[i][j] += s * k[i][j];
            return r;
        };
        for (std::size_t s = 0; s < steps; ++s) {
            const Mat k1 = rhs(rho);
            const Mat k2 = rhs(axpy(rho, k1, h_step / 2));
            const Mat k3 = rhs(axpy(rho, k2, h_step / 2));
            const Mat k4 = rhs(axpy(rho, k3, h_step));
            for (std::size_t i = 0; i < rho.size(); ++i)
                for (std::size_t j = 0; j < rho.size(); ++j)
                    rho[i][j] += h_step / 6.0 * (k1[i][j] + 2.0 * k2[i][j] + 2.0 * k3[i][j] + k4[i][j]);
        }
        return rho;
    }
};

}  // namespace oracle
