#pragma once

#include <complex>
#include <functional>

namespace lcgf {

/// Adaptive Gauss-Kronrod on a finite interval.
struct QuadratureScheme {
    int nodes = 61;          ///< Kronrod points: 15, 31 or 61
    double abs_tol = 1e-12;  ///< error estimate must stay below abs_tol * max(1, L1 norm)
    int max_depth = 20;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    double l1 = 0.0;
};

/// Throws ToleranceError when the error estimate exceeds the scheme tolerance.
double integrate(const std::function<double(double)>& f, double a, double b, const QuadratureScheme& scheme = {});
std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& f, double a, double b,
                                       const QuadratureScheme& scheme = {});

/// Same integration without the tolerance check.
QuadratureResult integrate_unchecked(const std::function<double(double)>& f, double a, double b,
                                     const QuadratureScheme& scheme = {});

}  // namespace lcgf
