#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "oamqkd/conjugation.hpp"
#include "oamqkd/lg.hpp"
#include "oamqkd/mub.hpp"
#include "oamqkd/propagation.hpp"

using namespace oamqkd;
using test_helpers::max_entangled;
using test_helpers::random_contractive;
using test_helpers::random_unitary;

namespace {

CrosstalkMatrix channel(int d, const Eigen::MatrixXcd& m) {
    CrosstalkMatrix c;
    for (int i = 0; i < d; ++i) c.modes.push_back(i - d / 2);
    c.c = m;
    return c;
}

} // namespace

TEST_CASE("Kraus decomposition anchors") {
    const auto id = kraus_from_realization(channel(3, Eigen::MatrixXcd::Identity(3, 3)));
    CHECK((id.U - Eigen::MatrixXcd::Identity(3, 3)).norm() < 1e-12);
    for (int j = 0; j < 3; ++j) CHECK(id.gammas(j) == doctest::Approx(1.0));

    Eigen::MatrixXcd diag = Eigen::Vector2cd(0.5, 0.25).asDiagonal();
    const auto k = kraus_from_realization(channel(2, diag));
    CHECK(k.gammas(0) == doctest::Approx(0.5));
    CHECK(k.gammas(1) == doctest::Approx(0.25));
    CHECK(k.gamma_min == doctest::Approx(0.25));
    CHECK((k.U - Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-12);

    std::mt19937_64 rng(31);
    const Eigen::MatrixXcd u = random_unitary(4, rng);
    const auto ku = kraus_from_realization(channel(4, u));
    CHECK(ku.gamma_min == doctest::Approx(1.0).epsilon(1e-12));

    // polar reconstruction M = U |M| and unitarity of U
    for (int d = 2; d <= 9; ++d) {
        const Eigen::MatrixXcd m = random_contractive(d, rng);
        const auto kk = kraus_from_realization(channel(d, m));
        const Eigen::MatrixXcd abs_m =
            kk.V * kk.gammas.asDiagonal() * kk.V.adjoint();
        CHECK((kk.U * abs_m - m).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((kk.U * kk.U.adjoint() - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() <
              1e-10);
    }
}

TEST_CASE("conjugate filter identities") {
    Eigen::MatrixXcd diag = Eigen::Vector2cd(0.5, 0.25).asDiagonal();
    const auto filt = conjugate_filter(kraus_from_realization(channel(2, diag)));
    Eigen::MatrixXcd expected = Eigen::Vector2cd(0.5, 1.0).asDiagonal();
    CHECK((filt.Mt - expected).norm() < 1e-12);
    CHECK((filt.Mt * diag - 0.25 * Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-12);

    // unitary channel: the filter is exactly the adjoint
    std::mt19937_64 rng(77);
    const Eigen::MatrixXcd u = random_unitary(3, rng);
    const auto fu = conjugate_filter(kraus_from_realization(channel(3, u)));
    CHECK((fu.Mt - u.adjoint()).cwiseAbs().maxCoeff() < 1e-10);

    // singular channel: no filter
    Eigen::MatrixXcd singular = Eigen::MatrixXcd::Zero(2, 2);
    singular(0, 0) = 0.7;
    CHECK_THROWS(conjugate_filter(kraus_from_realization(channel(2, singular))));
}

TEST_CASE("filter identity and physicality over random contractive channels") {
    std::mt19937_64 rng(123);
    for (int d = 2; d <= 9; ++d) {
        for (int trial = 0; trial < 100; ++trial) {
            const Eigen::MatrixXcd m = random_contractive(d, rng);
            const auto k = kraus_from_realization(channel(d, m));
            if (k.gamma_min <= 1e-12) continue;
            const auto f = conjugate_filter(k);
            CHECK((f.Mt * m - k.gamma_min * Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() <
                  1e-10);
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(f.Mt);
            CHECK(svd.singularValues()(0) <= 1.0 + 1e-10);
        }
    }
}

TEST_CASE("conjugated ensemble distills the maximally entangled state") {
    std::mt19937_64 rng(7);
    const int d = 3;
    std::vector<CrosstalkMatrix> ensemble;
    for (int i = 0; i < 40; ++i) ensemble.push_back(channel(d, random_contractive(d, rng)));

    const DensityMatrix rho = conjugated_ensemble(ensemble);
    const Eigen::VectorXcd phi0 = max_entangled(d);
    CHECK(std::abs(std::real(phi0.dot(rho.rho * phi0)) - 1.0) < 1e-9);
    CHECK(average_error_rate(rho, build_mubs(d)) < 1e-9);

    // filtering only discards photons
    std::vector<Eigen::VectorXcd> plain;
    for (const auto& c : ensemble) plain.push_back(postselect_state(c));
    const DensityMatrix unfiltered = average_density_matrix(plain);
    CHECK(rho.T <= unfiltered.T + 1e-12);

    // survival is the mean of gamma_min^2
    double tprime = 0.0;
    for (const auto& c : ensemble) {
        const auto k = kraus_from_realization(c);
        tprime += k.gamma_min * k.gamma_min;
    }
    tprime /= static_cast<double>(ensemble.size());
    CHECK(rho.T == doctest::Approx(tprime).epsilon(1e-12));
}

TEST_CASE("all-identity ensemble survives conjugation untouched") {
    const auto id = channel(2, Eigen::MatrixXcd::Identity(2, 2));
    const DensityMatrix rho = conjugated_ensemble({id, id, id});
    CHECK(rho.T == doctest::Approx(1.0));
    const Eigen::VectorXcd phi0 = max_entangled(2);
    CHECK((rho.rho - phi0 * phi0.adjoint()).norm() < 1e-12);
}

TEST_CASE("singular realizations count as zero survival") {
    const auto id = channel(2, Eigen::MatrixXcd::Identity(2, 2));
    Eigen::MatrixXcd dead = Eigen::MatrixXcd::Zero(2, 2);
    dead(0, 0) = 0.9;  // rank deficient: gamma_min = 0
    const DensityMatrix rho = conjugated_ensemble({id, channel(2, dead)});
    CHECK(rho.T == doctest::Approx(0.5));
    const Eigen::VectorXcd phi0 = max_entangled(2);
    CHECK(std::abs(std::real(phi0.dot(rho.rho * phi0)) - 1.0) < 1e-12);
}

TEST_CASE("misalignment operator") {
    const BeamParams beam(0.15, 1064e-9);
    const GridSpec grid(256, 0.02);
    const auto f = lg_field(ModeIndex(0), 0.0, beam, grid);

    const auto same = apply_misalignment(f, 0.0, 0.5);
    CHECK(same.amplitudes == f.amplitudes);

    // +45 degrees: equal x and y offsets of magnitude/sqrt(2)
    const double mag = 0.2;
    const auto shifted = apply_misalignment(f, mag, 0.7853981633974483);
    const auto manual = translate_field(f, mag / std::sqrt(2.0), mag / std::sqrt(2.0));
    double worst = 0.0;
    for (std::size_t i = 0; i < shifted.amplitudes.size(); ++i)
        worst = std::max(worst, std::abs(shifted.amplitudes[i] - manual.amplitudes[i]));
    CHECK(worst < 1e-12);

    // Gaussian overlap decay oracle
    const double expected = std::exp(-mag * mag / (2.0 * 0.15 * 0.15));
    CHECK(std::abs(overlap(f, shifted)) == doctest::Approx(expected).epsilon(1e-3));

    CHECK_THROWS(apply_misalignment(f, -0.1, 0.0));
    CHECK_THROWS(apply_misalignment(f, grid.extent(), 0.0));
}

TEST_CASE("depolarizing channel on Bob") {
    const int d = 3;
    const Eigen::VectorXcd phi0 = max_entangled(d);
    DensityMatrix pure;
    pure.d = d;
    pure.T = 0.7;
    pure.rho = phi0 * phi0.adjoint();

    const auto same = depolarize(pure, 0.0, d);
    CHECK((same.rho - pure.rho).norm() < 1e-15);

    const auto noisy = depolarize(pure, 0.18, d);
    CHECK(std::real(phi0.dot(noisy.rho * phi0)) == doctest::Approx(0.82).epsilon(1e-9));
    CHECK(std::abs(noisy.rho.trace().real() - 1.0) < 1e-12);
    CHECK(noisy.T == doctest::Approx(0.7));  // survival untouched

    // near-total depolarization: Bob's marginal approaches maximally mixed
    DensityMatrix aligned;
    aligned.d = d;
    aligned.T = 1.0;
    aligned.rho = Eigen::MatrixXcd::Zero(d * d, d * d);
    aligned.rho(0, 0) = 1.0;  // |00><00|: Bob's marginal is pure
    const double pmax = 1.0 - 1.0 / 9.0;
    const auto flat = depolarize(aligned, pmax * (1.0 - 1e-9), d);
    Eigen::MatrixXcd bob = Eigen::MatrixXcd::Zero(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int bp = 0; bp < d; ++bp) bob(b, bp) += flat.rho(a * d + b, a * d + bp) / 1.0;
    CHECK((bob - Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d)).cwiseAbs().maxCoeff() <
          1e-6);

    CHECK_THROWS(depolarize(pure, pmax, d));   // at the boundary
    CHECK_THROWS(depolarize(pure, -0.1, d));
    CHECK_THROWS(depolarize(pure, 0.1, d + 1));  // dimension mismatch
}
