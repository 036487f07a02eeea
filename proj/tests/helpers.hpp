#ifndef OAMQKD_TESTS_HELPERS_HPP
#define OAMQKD_TESTS_HELPERS_HPP

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <random>

namespace test_helpers {

/// Adaptive Simpson integration. Deliberately a different rule from the
/// library's Gauss-Kronrod integrator so the two can cross-check each other.
inline double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                          double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double tol = 1e-12) {
    if (a == b) return 0.0;
    double acc = 0.0;
    const int panels = 16;
    const double h = (b - a) / panels;
    for (int i = 0; i < panels; ++i) {
        const double x0 = a + i * h, x1 = x0 + h, xm = 0.5 * (x0 + x1);
        const double f0 = f(x0), f1 = f(x1), fm = f(xm);
        const double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        acc += simpson_rec(f, x0, x1, f0, fm, f1, whole, tol * std::max(1.0, std::abs(whole)), 48);
    }
    return acc;
}

/// Haar-ish random unitary via QR of a Ginibre matrix.
inline Eigen::MatrixXcd random_unitary(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd g(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) g(r, c) = std::complex<double>(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    return q;
}

/// Random matrix with largest singular value strictly below 1.
inline Eigen::MatrixXcd random_contractive(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uni(0.05, 1.0);
    Eigen::MatrixXcd g(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) g(r, c) = std::complex<double>(gauss(rng), gauss(rng));
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(g);
    return g * (uni(rng) / svd.singularValues()(0));
}

inline Eigen::VectorXcd max_entangled(int d) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d * d);
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    for (int j = 0; j < d; ++j) v(j * d + j) = s;
    return v;
}

} // namespace test_helpers

#endif
