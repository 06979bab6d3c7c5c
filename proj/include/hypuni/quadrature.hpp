#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace hypuni {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Adaptive Gauss-Kronrod (G7,K15) integration of f over [a,b].
/// Subdivides until the local Kronrod-Gauss discrepancy meets the
/// absolute tolerance; throws QuadratureError if the interval budget
/// is exhausted before that happens.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12);

/// Trapezoidal rule for 2pi-periodic integrands over [0, 2pi), with
/// compensated summation. Spectrally accurate for trigonometric
/// polynomials of degree < n.
double integrate_periodic(const std::function<double(double)>& f, int n = 512);

}  // namespace hypuni
