#ifndef OAMQKD_QUADRATURE_HPP
#define OAMQKD_QUADRATURE_HPP

#include <functional>

namespace oamqkd {

/// Adaptive Gauss-Kronrod (7-15) integration of f over [a, b].
/// Subdivides until the Kronrod error estimate of each panel satisfies
/// err <= max(rel_tol * |panel|, abs_floor). The absolute floor keeps the
/// recursion from chasing integrands that decay to ~0 over most of the
/// interval (turbulence profiles above the boundary layer do exactly that).
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10, double abs_floor = 1e-20,
                 int max_depth = 60);

} // namespace oamqkd

#endif
