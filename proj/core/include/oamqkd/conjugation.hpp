#ifndef OAMQKD_CONJUGATION_HPP
#define OAMQKD_CONJUGATION_HPP

#include <Eigen/Dense>
#include <vector>

#include "oamqkd/crosstalk.hpp"
#include "oamqkd/field.hpp"
#include "oamqkd/qkd.hpp"

namespace oamqkd {

/// Post-selected channel operator of one realization, with its singular
/// system and polar factor M = U |M|.
struct KrausOperator {
    int d = 0;
    Eigen::MatrixXcd M;
    Eigen::VectorXd gammas;  // singular values, descending
    Eigen::MatrixXcd U;      // unitary polar factor
    Eigen::MatrixXcd V;      // right singular vectors (eigenvectors of |M|)
    Eigen::MatrixXcd W;      // left singular vectors
    double gamma_min = 0.0;
};

/// Reads the Kraus operator straight off the realization's crosstalk
/// matrix (the perfect-tomography assumption) and decomposes it.
KrausOperator kraus_from_realization(const CrosstalkMatrix& C);

/// Procrustean conjugate filter: largest singular value exactly 1, and
/// Mt * M = gamma_min * identity.
struct ConjugateFilter {
    int d = 0;
    Eigen::MatrixXcd Mt;
};

/// Throws a singular-channel error when gamma_min <= 1e-12; such
/// realizations contribute zero survival instead of a filter.
ConjugateFilter conjugate_filter(const KrausOperator& k);

/// Runs the filter pipeline over an ensemble: per realization the filter is
/// built from filter_source (defaults to the measured ensemble itself) and
/// applied to the post-selected state from `measured`. Singular
/// realizations enter the average as zero-survival events. Returns the
/// averaged state, with T carrying the conjugated survival fraction.
DensityMatrix conjugated_ensemble(const std::vector<CrosstalkMatrix>& measured,
                                  const std::vector<CrosstalkMatrix>* filter_source = nullptr);

/// Transverse displacement of Bob's received field by magnitude along
/// `direction` (radians), applied before projection.
ComplexField apply_misalignment(const ComplexField& f, double magnitude, double direction);

/// Depolarizing channel on Bob's subsystem, parameterized by the infidelity
/// it would leave on a maximally entangled input: p = infidelity/(1 - 1/d^2).
DensityMatrix depolarize(const DensityMatrix& rho, double infidelity, int d);

} // namespace oamqkd

#endif
