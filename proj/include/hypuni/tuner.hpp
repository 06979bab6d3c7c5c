#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "hypuni/mesh.hpp"
#include "hypuni/solver.hpp"

namespace hypuni::tuner {

/// Common boundary momentum target d = c_i L_i for every loop.
struct MomentumTarget {
    double d = 1.0;
};

struct TuneConfig {
    double tol = 1e-8;   // convergence when max_i |c_i L_i - d_i| <= tol * d_i
    int max_outer = 30;
    solver::SolverConfig inner;  // inner residual_tol is tightened to
                                 // <= 1e-2 * tol * d automatically
    std::optional<std::vector<double>> initial_c;    // override the default guess
    std::optional<std::vector<double>> per_loop_d;   // generalization flag
};

struct TuneIterate {
    int iteration = 0;
    std::vector<double> c;
    std::vector<double> F;  // momentum map values c_i L_i
    double step_norm = 0.0;
};

struct TuneReport {
    std::vector<double> c_star;
    solver::SolveReport solve;
    std::vector<TuneIterate> iterates;
    int outer_iterations = 0;
    double d = 0.0;
};

/// Solve the linearized problem pulled back to the background metric:
/// H v = rhs with H the Newton Jacobian at u_c and rhs_v = b_i B_v e^{u_v}
/// on loop i (zero in the interior).
Eigen::VectorXd linearized_solve(const TriMesh& mesh, const BackgroundMetric& bg,
                                 const Eigen::VectorXd& u_c,
                                 const solver::CurvatureSpec& c,
                                 const std::vector<double>& b);

/// F_i(c) = c_i L_i(u_c): solves for u_c, then evaluates the momentum map.
std::vector<double> momentum_map(
    const TriMesh& mesh, const BackgroundMetric& bg, const solver::CurvatureSpec& c,
    const solver::SolverConfig& config = {},
    const std::optional<solver::ConformalFactor>& warm = std::nullopt,
    solver::ConformalFactor* u_out = nullptr, solver::SolveReport* report_out = nullptr);

/// dF via the linearization: J_ij = delta_ij L_i + c_i sum_{v in Gamma_i}
/// B_v e^{u_v} v_j(v), with v_j the response to the unit loop perturbation.
Eigen::MatrixXd jacobian(const TriMesh& mesh, const BackgroundMetric& bg,
                         const Eigen::VectorXd& u_c, const solver::CurvatureSpec& c);

/// Outer Newton iteration on G(c) = F(c) - d; returns the tuned curvatures,
/// the converged conformal factor, and the iterate history.
std::pair<solver::ConformalFactor, TuneReport> tune_d(const TriMesh& mesh,
                                                      const BackgroundMetric& bg,
                                                      const MomentumTarget& d,
                                                      const TuneConfig& config = {});

}  // namespace hypuni::tuner
