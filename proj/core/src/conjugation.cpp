#include "oamqkd/conjugation.hpp"

#include <cmath>
#include <stdexcept>

#include "oamqkd/propagation.hpp"

namespace oamqkd {

KrausOperator kraus_from_realization(const CrosstalkMatrix& C) {
    KrausOperator k;
    k.d = C.dim();
    k.M = C.c;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(k.M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    k.gammas = svd.singularValues();
    k.W = svd.matrixU();
    k.V = svd.matrixV();
    k.U = k.W * k.V.adjoint();
    k.gamma_min = k.gammas(k.d - 1);
    return k;
}

ConjugateFilter conjugate_filter(const KrausOperator& k) {
    if (k.gamma_min <= 1e-12)
        throw std::runtime_error("conjugate_filter: singular channel, no physical filter exists");
    Eigen::VectorXd scale(k.d);
    for (int j = 0; j < k.d; ++j) scale(j) = k.gamma_min / k.gammas(j);
    ConjugateFilter f;
    f.d = k.d;
    // (sum_j (gmin/gj) |v_j><v_j|) U^dag = V diag(gmin/g) W^dag.
    f.Mt = k.V * scale.asDiagonal() * k.W.adjoint();
    return f;
}

DensityMatrix conjugated_ensemble(const std::vector<CrosstalkMatrix>& measured,
                                  const std::vector<CrosstalkMatrix>* filter_source) {
    if (measured.empty()) throw std::invalid_argument("conjugated_ensemble: empty ensemble");
    const auto& filters = filter_source ? *filter_source : measured;
    if (filters.size() != measured.size())
        throw std::invalid_argument("conjugated_ensemble: filter/measurement ensemble mismatch");

    const int d = measured.front().dim();
    std::vector<Eigen::VectorXcd> states;
    states.reserve(measured.size());
    for (std::size_t i = 0; i < measured.size(); ++i) {
        if (measured[i].dim() != d || filters[i].dim() != d)
            throw std::invalid_argument("conjugated_ensemble: mixed dimensions");
        const KrausOperator k = kraus_from_realization(filters[i]);
        if (k.gamma_min <= 1e-12) {
            states.emplace_back(Eigen::VectorXcd::Zero(d * d));
            continue;
        }
        const ConjugateFilter filt = conjugate_filter(k);
        const Eigen::VectorXcd v = postselect_state(measured[i]);
        Eigen::VectorXcd out(d * d);
        for (int lt = 0; lt < d; ++lt) out.segment(lt * d, d) = filt.Mt * v.segment(lt * d, d);
        states.push_back(std::move(out));
    }
    return average_density_matrix(states);
}

ComplexField apply_misalignment(const ComplexField& f, double magnitude, double direction) {
    if (magnitude < 0.0)
        throw std::invalid_argument("apply_misalignment: magnitude must be non-negative");
    if (magnitude == 0.0) return f;
    return translate_field(f, magnitude * std::cos(direction), magnitude * std::sin(direction));
}

DensityMatrix depolarize(const DensityMatrix& rho, double infidelity, int d) {
    if (rho.d != d) throw std::invalid_argument("depolarize: dimension mismatch");
    const double pmax = 1.0 - 1.0 / (static_cast<double>(d) * d);
    if (infidelity < 0.0 || infidelity >= pmax)
        throw std::invalid_argument("depolarize: infidelity outside [0, 1 - 1/d^2)");
    const double p = infidelity / pmax;

    // Alice's marginal.
    Eigen::MatrixXcd rho_a = Eigen::MatrixXcd::Zero(d, d);
    for (int a = 0; a < d; ++a)
        for (int ap = 0; ap < d; ++ap)
            for (int b = 0; b < d; ++b) rho_a(a, ap) += rho.rho(a * d + b, ap * d + b);

    DensityMatrix out;
    out.d = d;
    out.T = rho.T;
    out.rho = (1.0 - p) * rho.rho;
    const double invd = 1.0 / static_cast<double>(d);
    for (int a = 0; a < d; ++a)
        for (int ap = 0; ap < d; ++ap)
            for (int b = 0; b < d; ++b) out.rho(a * d + b, ap * d + b) += p * rho_a(a, ap) * invd;
    return out;
}

} // namespace oamqkd
