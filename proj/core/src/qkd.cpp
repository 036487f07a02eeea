#include "oamqkd/qkd.hpp"

#include <cmath>
#include <stdexcept>

namespace oamqkd {

namespace {

double log2_safe(double x) { return std::log2(x); }

/// Deterministic pairwise reduction; keeps ensemble sums independent of
/// worker count and better conditioned than a running sum.
template <typename T, typename Get>
T pairwise_sum(std::size_t lo, std::size_t hi, const Get& get) {
    if (hi - lo == 1) return get(lo);
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum<T>(lo, mid, get) + pairwise_sum<T>(mid, hi, get);
}

} // namespace

Eigen::VectorXcd postselect_state(const CrosstalkMatrix& C) {
    const int d = C.dim();
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    Eigen::VectorXcd v(d * d);
    for (int lt = 0; lt < d; ++lt)
        for (int l = 0; l < d; ++l) v(lt * d + l) = C.c(l, lt) * s;
    return v;
}

DensityMatrix average_density_matrix(const std::vector<Eigen::VectorXcd>& states) {
    if (states.empty()) throw std::invalid_argument("average_density_matrix: empty ensemble");
    const auto dim = states.front().size();
    for (const auto& v : states)
        if (v.size() != dim) throw std::invalid_argument("average_density_matrix: mixed dimensions");
    const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(dim))));
    if (static_cast<Eigen::Index>(d) * d != dim)
        throw std::invalid_argument("average_density_matrix: states must live on H_d x H_d");

    const double inv_n = 1.0 / static_cast<double>(states.size());
    const double T = pairwise_sum<double>(0, states.size(),
                                          [&](std::size_t i) { return states[i].squaredNorm(); }) *
                     inv_n;
    if (!(T > 0.0)) throw std::runtime_error("average_density_matrix: degenerate all-zero ensemble");

    Eigen::MatrixXcd sum = pairwise_sum<Eigen::MatrixXcd>(
        0, states.size(),
        [&](std::size_t i) { return Eigen::MatrixXcd(states[i] * states[i].adjoint()); });
    DensityMatrix out;
    out.d = d;
    out.rho = sum * (inv_n / T);
    // Exact Hermitization against rounding asymmetry.
    out.rho = 0.5 * (out.rho + out.rho.adjoint().eval());
    out.T = T;
    return out;
}

double average_error_rate(const DensityMatrix& rho, const MUBSet& mubs) {
    if (rho.d != mubs.d) throw std::invalid_argument("average_error_rate: dimension mismatch");
    const int d = rho.d;
    double q = 0.0;
    for (const auto& basis : mubs.bases) {
        for (int s = 0; s < d; ++s) {
            const Eigen::VectorXcd alice = basis.col(s).conjugate();
            for (int sp = 0; sp < d; ++sp) {
                if (sp == s) continue;
                const Eigen::VectorXcd bob = basis.col(sp);
                Eigen::VectorXcd u(d * d);
                for (int a = 0; a < d; ++a)
                    for (int b = 0; b < d; ++b) u(a * d + b) = alice(a) * bob(b);
                q += std::real(u.dot(rho.rho * u));  // Eigen dot conjugates the left side
            }
        }
    }
    q /= static_cast<double>(mubs.basis_count());
    return std::min(1.0, std::max(0.0, q));
}

double key_rate_per_photon(double Q, int d) {
    if (d == 6)
        throw std::invalid_argument(
            "key_rate_per_photon: d = 6 runs with 2 MUBs and has no modeled rate expression");
    if (d < 2 || d > 9) throw std::invalid_argument("key_rate_per_photon: d must be in [2, 9]");
    const double qmax = static_cast<double>(d - 1) / d;
    if (Q < 0.0 || Q > qmax + 1e-12)
        throw std::invalid_argument("key_rate_per_photon: Q outside [0, (d-1)/d]");
    if (Q == 0.0) return log2_safe(static_cast<double>(d));
    const double a = (static_cast<double>(d) + 1.0) / d;
    const double k1 = log2_safe(static_cast<double>(d)) +
                      a * Q * log2_safe(Q / (static_cast<double>(d) * (d - 1))) +
                      (1.0 - a * Q) * log2_safe(1.0 - a * Q);
    return std::max(0.0, k1);
}

double secret_key_rate(double T, double K1) {
    if (T < 0.0 || T > 1.0 + 1e-12) throw std::invalid_argument("secret_key_rate: T outside [0, 1]");
    if (K1 < 0.0) throw std::invalid_argument("secret_key_rate: K1 must be non-negative");
    return T * K1;
}

HolevoResult holevo_check(const DensityMatrix& rho, const MUBSet& mubs) {
    if (rho.d != mubs.d) throw std::invalid_argument("holevo_check: dimension mismatch");
    const int d = rho.d;

    const auto entropy = [](const Eigen::MatrixXcd& m) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
        if (es.info() != Eigen::Success) throw std::runtime_error("holevo_check: eigensolver failed");
        double s = 0.0;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            const double lam = es.eigenvalues()(i);
            if (lam < -1e-9) throw std::invalid_argument("holevo_check: rho not positive semidefinite");
            if (lam > 1e-15) s -= lam * std::log2(lam);
        }
        return s;
    };

    // Joint standard-basis outcome distribution.
    Eigen::MatrixXd p(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) p(a, b) = std::real(rho.rho(a * d + b, a * d + b));
    const double total = p.sum();
    if (total > 0.0) p /= total;

    double mi = 0.0;
    const Eigen::VectorXd pa = p.rowwise().sum();
    const Eigen::VectorXd pb = p.colwise().sum();
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            if (p(a, b) > 0.0) mi += p(a, b) * std::log2(p(a, b) / (pa(a) * pb(b)));

    const double s_ab = entropy(rho.rho);
    double cond = 0.0;
    for (int a = 0; a < d; ++a) {
        if (pa(a) <= 0.0) continue;
        Eigen::MatrixXcd rho_b(d, d);
        for (int b = 0; b < d; ++b)
            for (int bp = 0; bp < d; ++bp) rho_b(b, bp) = rho.rho(a * d + b, a * d + bp);
        rho_b /= rho_b.trace();
        cond += pa(a) * entropy(rho_b);
    }
    const double chi = s_ab - cond;

    HolevoResult r;
    r.mutual_info = mi;
    r.holevo_bound = chi;
    r.k1_direct = mi - chi;
    return r;
}

KeyRateResult evaluate_subspace(const EncodingSubspace& subspace,
                                const std::vector<CrosstalkMatrix>& ensemble) {
    std::vector<Eigen::VectorXcd> states;
    states.reserve(ensemble.size());
    for (const auto& full : ensemble) states.push_back(postselect_state(full.restricted(subspace.ls)));
    const DensityMatrix rho = average_density_matrix(states);
    const MUBSet mubs = build_mubs(subspace.dim());
    KeyRateResult r;
    r.Q = average_error_rate(rho, mubs);
    r.T = rho.T;
    r.K1 = key_rate_per_photon(r.Q, subspace.dim());
    r.K = secret_key_rate(r.T, r.K1);
    return r;
}

std::pair<EncodingSubspace, KeyRateResult> best_subspace(
    int d, const std::vector<CrosstalkMatrix>& ensemble) {
    if (d == 6) throw std::invalid_argument("best_subspace: no key-rate ranking for d = 6");
    if (ensemble.empty()) throw std::invalid_argument("best_subspace: empty ensemble");
    const auto candidates = subspace_candidates(d);
    EncodingSubspace best_space = candidates.front();
    KeyRateResult best;
    bool first = true;
    for (const auto& cand : candidates) {
        const KeyRateResult r = evaluate_subspace(cand, ensemble);
        // Candidates come sorted by max |l|, so strict improvement breaks
        // ties toward the smaller alphabet.
        if (first || r.K > best.K) {
            best = r;
            best_space = cand;
            first = false;
        }
    }
    return {best_space, best};
}

} // namespace oamqkd
