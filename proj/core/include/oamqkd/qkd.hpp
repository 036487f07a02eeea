#ifndef OAMQKD_QKD_HPP
#define OAMQKD_QKD_HPP

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "oamqkd/crosstalk.hpp"
#include "oamqkd/mub.hpp"
#include "oamqkd/subspace.hpp"

namespace oamqkd {

/// Ensemble-averaged bipartite state on H_d (x) H_d, Alice-major index
/// ordering (a * d + b), with the photon survival fraction T.
struct DensityMatrix {
    int d = 0;
    Eigen::MatrixXcd rho;
    double T = 0.0;
};

struct KeyRateResult {
    double Q = 0.0;
    double T = 0.0;
    double K1 = 0.0;
    double K = 0.0;
};

/// Post-selected (unnormalized) bipartite vector: amplitude c(l, l_t)/sqrt(d)
/// at index (l_t, l). Its squared norm is the realization's survival
/// probability.
Eigen::VectorXcd postselect_state(const CrosstalkMatrix& C);

/// T = mean squared norm; rho = mean outer product / T. Throws when every
/// state in the ensemble is zero.
DensityMatrix average_density_matrix(const std::vector<Eigen::VectorXcd>& states);

/// Average error rate over the MUB set, with the complex conjugate on
/// Alice's projector. Real up to rounding; clamped to [0, 1].
double average_error_rate(const DensityMatrix& rho, const MUBSet& mubs);

/// Secret-key bits per post-selected photon for the (d+1)-MUB protocol,
/// clamped at zero. d = 6 is rejected: only two bases exist there and no
/// corresponding rate expression is modeled.
double key_rate_per_photon(double Q, int d);

/// K = T * K1.
double secret_key_rate(double T, double K1);

struct HolevoResult {
    double mutual_info = 0.0;   // I(A:B), standard-basis measurements
    double holevo_bound = 0.0;  // chi(A:E)
    double k1_direct = 0.0;     // I(A:B) - chi(A:E)
};

/// Entropic route to K1; independent of the closed-form rate and used to
/// cross-check it on symmetric states.
HolevoResult holevo_check(const DensityMatrix& rho, const MUBSet& mubs);

/// Exhaustive search over the subspace construction conventions, ranking by
/// K computed from the (full, 9-mode) crosstalk ensemble. Ties go to the
/// candidate with the smallest max |l|.
std::pair<EncodingSubspace, KeyRateResult> best_subspace(
    int d, const std::vector<CrosstalkMatrix>& ensemble);

/// Q, T, K1, K for one ensemble restricted to a subspace.
KeyRateResult evaluate_subspace(const EncodingSubspace& subspace,
                                const std::vector<CrosstalkMatrix>& ensemble);

} // namespace oamqkd

#endif
