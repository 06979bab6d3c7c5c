#pragma once

#include <complex>
#include <vector>

namespace hypuni::collar {

// Boundary curvatures live in [0,1). Values are accepted up to
// kCurvatureMax; above kNearDegenerate the geometry is flagged so
// consumers see the L -> infinity blow-up explicitly.
inline constexpr double kCurvatureMax = 1.0 - 1e-12;
inline constexpr double kNearDegenerate = 1.0 - 1e-6;

/// Analytic description of a hyperbolic collar: central geodesic length
/// ell, boundary curvature c, boundary length L and momentum d = c*L.
struct CollarGeometry {
    double ell = 0.0;
    double c = 0.0;
    double d = 0.0;
    double L = 0.0;
    bool near_degenerate = false;
};

/// Collar density rho_ell(s) = (ell/2pi) / cos(ell*s/2pi), |s| < pi^2/ell.
double rho(double ell, double s);

/// Conformal half-width X(ell) = (2pi/ell)(pi/2 - arctan(sinh(ell/2))) of the
/// collar on the geodesic side. Strictly decreasing in ell.
double collar_halfwidth_x(double ell);

/// Boundary offset Y(ell,c) = (2pi/ell) arcsin(c): the s coordinate of the
/// constant-curvature-c circle.
double boundary_offset_y(double ell, double c);

/// Xbar_d(ell) = (2pi/ell)(pi/2 - arctan(ell/d)): boundary offset expressed
/// through the momentum d instead of the curvature.
double xbar_d(double ell, double d);

/// Geodesic curvature sin(ell*s/2pi) of the circle {s} x S^1.
double circle_curvature(double ell, double s);

/// Area of the half-collar [0, Y(ell,c)] x S^1; equals the momentum d.
double halfcollar_area(double ell, double c);

/// Populate all collar lengths from (ell, c).
CollarGeometry lengths_from(double ell, double c);

/// Invert L^2 - ell^2 = d^2: geodesic length from boundary data.
/// Throws std::domain_error when L <= d (infeasible boundary length).
double geodesic_from_boundary(double L, double d);

/// The unique rotationally symmetric hyperbolic metric on the flat cylinder
/// [0,T] x S^1 with both boundary curvatures equal to c, as the radial
/// profile u with g = e^{2u} (ds^2 + dth^2).
struct CylinderSolution {
    double modulus = 0.0;  // T
    double c = 0.0;
    double ell = 0.0;              // central geodesic length (4pi/T) asin(c)
    double boundary_length = 0.0;  // L = ell / sqrt(1-c^2)
    double momentum = 0.0;         // d = c L

    double profile(double s) const;             // u(s) = log rho_ell(s - T/2)
    double profile_derivative(double s) const;  // u'(s)
};
CylinderSolution cylinder_solution(double T, double c);

/// Radial test functions for the trace checks: polynomials in s with exact
/// derivative evaluation.
class Polynomial {
  public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {}
    double operator()(double s) const;
    Polynomial derivative() const;
    const std::vector<double>& coefficients() const { return coeffs_; }

  private:
    std::vector<double> coeffs_;  // ascending powers
};

/// Both sides of the half-collar trace inequality
///   c int_Gamma |w| dS  <=  int_C+ |w| dv + c int_C+ |dw| dv
/// evaluated by quadrature on the exact collar. Contract: lhs <= rhs up to
/// quadrature tolerance, with equality for constant w.
struct TracePair {
    double lhs = 0.0;
    double rhs = 0.0;
};
TracePair trace_inequality_check(double ell, double c, const Polynomial& w,
                                 double quad_tol = 1e-12);

/// One Fourier mode b_j e^{j(s + i th)} dz^2 of a holomorphic quadratic
/// differential on the collar.
struct FourierMode {
    int j = 0;
    std::complex<double> b;
};

/// d/dt [ L(Gamma_s)^2 - L(gamma)^2 ] under the metric variation
/// Re(sum_j b_j e^{j(s+i th)} dz^2), evaluated by theta-quadrature of the two
/// length-derivative integrals. Vanishes for arbitrary finite Fourier data.
double horizontal_variation_derivative(double ell, double s,
                                       const std::vector<FourierMode>& modes,
                                       int theta_nodes = 512);

}  // namespace hypuni::collar
