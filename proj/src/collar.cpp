#include "hypuni/collar.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hypuni/quadrature.hpp"

namespace hypuni::collar {

namespace {

constexpr double kPi = std::numbers::pi;

void require_ell(double ell) {
    if (!(ell > 0.0) || !std::isfinite(ell))
        throw std::domain_error("geodesic length must be positive, got " +
                                std::to_string(ell));
}

void require_curvature(double c) {
    if (!(c >= 0.0) || !(c <= kCurvatureMax))
        throw std::domain_error("boundary curvature must lie in [0,1), got " +
                                std::to_string(c));
}

void require_in_collar(double ell, double s) {
    if (!(std::abs(s) < kPi * kPi / ell))
        throw std::domain_error("coordinate s=" + std::to_string(s) +
                                " outside collar |s| < pi^2/ell for ell=" +
                                std::to_string(ell));
}

}  // namespace

double rho(double ell, double s) {
    require_ell(ell);
    require_in_collar(ell, s);
    return (ell / (2.0 * kPi)) / std::cos(ell * s / (2.0 * kPi));
}

double collar_halfwidth_x(double ell) {
    require_ell(ell);
    // pi/2 - arctan(sinh(ell/2)) written as atan2(1, sinh) to avoid the
    // cancellation near pi/2 for large ell
    return (2.0 * kPi / ell) * std::atan2(1.0, std::sinh(0.5 * ell));
}

double boundary_offset_y(double ell, double c) {
    require_ell(ell);
    require_curvature(c);
    return (2.0 * kPi / ell) * std::asin(c);
}

double xbar_d(double ell, double d) {
    require_ell(ell);
    if (!(d > 0.0) || !std::isfinite(d))
        throw std::domain_error("momentum must be positive, got " + std::to_string(d));
    return (2.0 * kPi / ell) * std::atan2(d, ell);
}

double circle_curvature(double ell, double s) {
    require_ell(ell);
    require_in_collar(ell, s);
    return std::sin(ell * s / (2.0 * kPi));
}

double halfcollar_area(double ell, double c) {
    require_ell(ell);
    require_curvature(c);
    return c * ell / std::sqrt(1.0 - c * c);
}

CollarGeometry lengths_from(double ell, double c) {
    require_ell(ell);
    require_curvature(c);
    CollarGeometry g;
    g.ell = ell;
    g.c = c;
    g.L = ell / std::sqrt(1.0 - c * c);
    g.d = c * g.L;
    g.near_degenerate = c > kNearDegenerate;
    return g;
}

double geodesic_from_boundary(double L, double d) {
    if (!(L > 0.0)) throw std::domain_error("boundary length must be positive");
    if (!(d >= 0.0)) throw std::domain_error("momentum must be nonnegative");
    if (!(L > d))
        throw std::domain_error("boundary length L=" + std::to_string(L) +
                                " infeasible for momentum d=" + std::to_string(d));
    return std::sqrt((L - d) * (L + d));
}

double CylinderSolution::profile(double s) const {
    return std::log(rho(ell, s - 0.5 * modulus));
}

double CylinderSolution::profile_derivative(double s) const {
    const double x = ell * (s - 0.5 * modulus) / (2.0 * kPi);
    return (ell / (2.0 * kPi)) * std::tan(x);
}

CylinderSolution cylinder_solution(double T, double c) {
    if (!(T > 0.0)) throw std::domain_error("cylinder modulus must be positive");
    if (!(c > 0.0))
        throw std::domain_error(
            "a flat cylinder admits no hyperbolic metric with geodesic boundary "
            "(c must be positive)");
    require_curvature(c);
    CylinderSolution sol;
    sol.modulus = T;
    sol.c = c;
    sol.ell = (4.0 * kPi / T) * std::asin(c);
    const CollarGeometry g = lengths_from(sol.ell, c);
    sol.boundary_length = g.L;
    sol.momentum = g.d;
    return sol;
}

double Polynomial::operator()(double s) const {
    double v = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = v * s + *it;
    return v;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return Polynomial{};
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i)
        d[i - 1] = static_cast<double>(i) * coeffs_[i];
    return Polynomial(std::move(d));
}

TracePair trace_inequality_check(double ell, double c, const Polynomial& w,
                                 double quad_tol) {
    require_ell(ell);
    require_curvature(c);
    const double Y = boundary_offset_y(ell, c);
    const Polynomial dw = w.derivative();

    TracePair p;
    // dS on {Y} x S^1 is rho(Y) dth, total boundary length 2 pi rho(Y)
    p.lhs = c * std::abs(w(Y)) * 2.0 * kPi * rho(ell, Y);
    const double vol =
        integrate([&](double s) { return std::abs(w(s)) * rho(ell, s) * rho(ell, s); },
                  0.0, Y, quad_tol);
    // |dw|_g = rho^{-1} |w'|, dv = rho^2 ds dth
    const double grad = integrate(
        [&](double s) { return std::abs(dw(s)) * rho(ell, s); }, 0.0, Y, quad_tol);
    p.rhs = 2.0 * kPi * (vol + c * grad);
    return p;
}

double horizontal_variation_derivative(double ell, double s,
                                       const std::vector<FourierMode>& modes,
                                       int theta_nodes) {
    require_ell(ell);
    require_in_collar(ell, s);
    if (theta_nodes < 256) theta_nodes = 256;

    // phi(s, th) = sum_j b_j e^{js} e^{i j th};  Re(Omega)_{th th} = -Re(phi)
    auto phi_re = [&](double sv, double th) {
        double re = 0.0;
        for (const auto& m : modes) {
            const std::complex<double> val =
                m.b * std::exp(static_cast<double>(m.j) * sv) *
                std::complex<double>(std::cos(m.j * th), std::sin(m.j * th));
            re += val.real();
        }
        return re;
    };
    // d/dt L(Gamma_s)^2 = L(Gamma_s) int (dtg)_thth / sqrt(g_thth) dth,
    // g_thth = rho(s)^2 and L(Gamma_s) = 2 pi rho(s), so each term reduces to
    // -2pi int Re(phi(s,.)) dth; quadrature keeps the check honest.
    auto length_sq_rate = [&](double sv) {
        const double I = integrate_periodic(
            [&](double th) { return -phi_re(sv, th) / rho(ell, sv); }, theta_nodes);
        return 2.0 * kPi * rho(ell, sv) * I;
    };
    return length_sq_rate(s) - length_sq_rate(0.0);
}

}  // namespace hypuni::collar
