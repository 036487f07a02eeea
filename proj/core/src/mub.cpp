#include "oamqkd/mub.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace oamqkd {

namespace {

using Cx = std::complex<double>;

Cx root_of_unity(int num, int den) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(((num % den) + den) % den) /
                     static_cast<double>(den);
    return std::polar(1.0, a);
}

Eigen::MatrixXcd standard_basis(int d) { return Eigen::MatrixXcd::Identity(d, d); }

Eigen::MatrixXcd fourier_basis(int d) {
    Eigen::MatrixXcd b(d, d);
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    for (int j = 0; j < d; ++j)
        for (int sidx = 0; sidx < d; ++sidx) b(j, sidx) = s * root_of_unity(j * sidx, d);
    return b;
}

MUBSet mubs_d2() {
    MUBSet m;
    m.d = 2;
    m.bases.push_back(standard_basis(2));
    Eigen::MatrixXcd x(2, 2), y(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    x << s, s, s, -s;
    y << s, s, Cx(0, s), Cx(0, -s);
    m.bases.push_back(x);
    m.bases.push_back(y);
    return m;
}

/// Odd prime d: eigenbases of X Z^n are w^{n (d+1)/2 j^2 + s j} / sqrt(d).
MUBSet mubs_odd_prime(int d) {
    MUBSet m;
    m.d = d;
    m.bases.push_back(standard_basis(d));
    const int inv2 = (d + 1) / 2;
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    for (int n = 0; n < d; ++n) {
        Eigen::MatrixXcd b(d, d);
        for (int col = 0; col < d; ++col)
            for (int j = 0; j < d; ++j)
                b(j, col) = s * root_of_unity(n * inv2 * j * j + col * j, d);
        m.bases.push_back(b);
    }
    return m;
}

// ---- GF(3^2) for d = 9: elements a + b*alpha with alpha^2 = -1. ----

struct GF9 {
    static int add(int x, int y) {
        const int a = (x % 3 + y % 3) % 3;
        const int b = (x / 3 + y / 3) % 3;
        return a + 3 * b;
    }
    static int mul(int x, int y) {
        const int a1 = x % 3, b1 = x / 3, a2 = y % 3, b2 = y / 3;
        const int a = (a1 * a2 + 2 * b1 * b2) % 3;  // alpha^2 = 2
        const int b = (a1 * b2 + a2 * b1) % 3;
        return a + 3 * b;
    }
    /// Field trace to GF(3): x + x^3.
    static int trace(int x) {
        const int x3 = mul(mul(x, x), x);
        return add(x, x3) % 3;  // the trace lies in the prime field
    }
};

MUBSet mubs_d9() {
    MUBSet m;
    m.d = 9;
    m.bases.push_back(standard_basis(9));
    const double s = 1.0 / 3.0;
    for (int a = 0; a < 9; ++a) {
        Eigen::MatrixXcd basis(9, 9);
        for (int b = 0; b < 9; ++b) {
            for (int x = 0; x < 9; ++x) {
                const int q = GF9::add(GF9::mul(a, GF9::mul(x, x)), GF9::mul(b, x));
                basis(x, b) = s * root_of_unity(GF9::trace(q), 3);
            }
        }
        m.bases.push_back(basis);
    }
    return m;
}

// ---- GF(2^m) for d = 4, 8: carry-less arithmetic. ----

struct GF2m {
    int m;
    unsigned poly;  // reduction polynomial bits, e.g. x^2+x+1 -> 0b111

    unsigned mul(unsigned x, unsigned y) const {
        unsigned acc = 0;
        for (int bit = 0; bit < m; ++bit)
            if (y & (1u << bit)) acc ^= x << bit;
        for (int bit = 2 * m - 2; bit >= m; --bit)
            if (acc & (1u << bit)) acc ^= poly << (bit - m);
        return acc;
    }
    unsigned trace(unsigned x) const {
        unsigned t = 0, p = x;
        for (int i = 0; i < m; ++i) {
            t ^= p;
            p = mul(p, p);
        }
        // The trace is 0 or 1 for elements of the prime field image.
        return t & 1u;
    }
};

/// d = 2^m: one basis per lambda in GF(2^m), the joint eigenbasis of the
/// commuting Pauli class {X_mu Z_{lambda*mu}}. The class generators are
/// combined with incommensurate weights into one non-degenerate Hermitian
/// matrix whose eigenvectors are the basis.
MUBSet mubs_pow2(int d, int m, unsigned poly) {
    const GF2m gf{m, poly};
    MUBSet out;
    out.d = d;
    out.bases.push_back(standard_basis(d));

    const auto pauli_xz = [&](unsigned a, unsigned b) {
        Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(d, d);
        for (int x = 0; x < d; ++x) {
            const int tx = static_cast<int>(static_cast<unsigned>(x) ^ a);
            const double sign = gf.trace(gf.mul(b, static_cast<unsigned>(x))) ? -1.0 : 1.0;
            op(tx, x) = sign;
        }
        return op;
    };
    const double weights[3] = {1.0, std::sqrt(2.0), std::sqrt(5.0)};

    for (unsigned lambda = 0; lambda < static_cast<unsigned>(d); ++lambda) {
        Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d, d);
        for (int i = 0; i < m; ++i) {
            const unsigned mu = 1u << i;
            const unsigned b = gf.mul(lambda, mu);
            Eigen::MatrixXcd g = pauli_xz(mu, b);
            // G^2 = (-1)^{tr(a b)} I; fold the phase so each term squares to I.
            if (gf.trace(gf.mul(mu, b))) g *= Cx(0.0, 1.0);
            h += weights[i] * g;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("build_mubs: eigenbasis computation failed");
        out.bases.push_back(es.eigenvectors());
    }
    return out;
}

MUBSet mubs_d6() {
    MUBSet m;
    m.d = 6;
    m.bases.push_back(standard_basis(6));
    m.bases.push_back(fourier_basis(6));
    return m;
}

} // namespace

MUBSet build_mubs(int d) {
    switch (d) {
        case 2: return mubs_d2();
        case 3: return mubs_odd_prime(3);
        case 4: return mubs_pow2(4, 2, 0b111u);
        case 5: return mubs_odd_prime(5);
        case 6: return mubs_d6();
        case 7: return mubs_odd_prime(7);
        case 8: return mubs_pow2(8, 3, 0b1011u);
        case 9: return mubs_d9();
        default: throw std::invalid_argument("build_mubs: d must be in [2, 9]");
    }
}

} // namespace oamqkd
