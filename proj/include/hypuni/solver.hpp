#pragma once

#include <Eigen/Core>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypuni/mesh.hpp"

namespace hypuni::solver {

/// Per-vertex log conformal factor: g = e^{2u} g0.
struct ConformalFactor {
    Eigen::VectorXd u;
};

/// Constant geodesic curvature per boundary loop, each in [0,1).
struct CurvatureSpec {
    std::vector<double> c;
    void validate(int n_loops) const;
};

struct SolverConfig {
    double residual_tol = 1e-10;   // on max_v |R_v|
    int max_newton = 50;           // per continuation stage
    double continuation_step = 0.1;
    double levenberg_seed = 1e-6;  // first shift when H is indefinite (x diag scale)
    double exp_cap = 50.0;         // u cap inside line-search energy evaluations
};

struct SolveReport {
    std::vector<double> c;    // prescribed curvatures
    std::vector<double> L;    // boundary lengths
    std::vector<double> ell;  // predicted geodesic lengths L_i sqrt(1-c_i^2)
    double area = 0.0;
    double residual_norm = 0.0;  // max_v |R_v| at the returned u
    int newton_iterations = 0;   // accepted steps, all stages
    int stages = 0;
    double wall_time_s = 0.0;
    std::vector<double> residual_history;  // final stage
    std::vector<double> energy_history;    // final stage

    std::string to_kv() const;               // key = value record (has wall time)
    static std::string csv_header(int n_loops);
    std::string csv_row() const;             // reproducible: no wall time
};

struct SolveError : std::runtime_error {
    SolveError(const std::string& msg, int stage, int iteration,
               std::vector<double> history)
        : std::runtime_error(msg), stage(stage), iteration(iteration),
          residual_history(std::move(history)) {}
    int stage;
    int iteration;
    std::vector<double> residual_history;
};

struct InfeasibleTopologyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Discrete residual of the prescribed-curvature system:
/// R_v = (L u)_v + Omega_v + A_v e^{2 u_v} - [v on loop i] c_i B_v e^{u_v}.
/// R = 0 is the Euler-Lagrange system of energy().
Eigen::VectorXd residual(const BackgroundMetric& bg, const Eigen::VectorXd& u,
                         const CurvatureSpec& c);

/// E(u) = u^T L u + sum_v (A_v e^{2u_v} + 2 Omega_v u_v)
///        - 2 sum_i c_i sum_{v in Gamma_i} B_v e^{u_v};  grad E = 2 residual.
/// Exponentials are evaluated with u capped so wild line-search trial points
/// cannot overflow.
double energy(const BackgroundMetric& bg, const Eigen::VectorXd& u,
              const CurvatureSpec& c, double exp_cap = 50.0);

/// Solve the prescribed-curvature problem by damped Newton with continuation
/// in c. Requires chi < 0, or chi = 0 with every c_i > 0.
std::pair<ConformalFactor, SolveReport> solve_u(
    const TriMesh& mesh, const BackgroundMetric& bg, const CurvatureSpec& c,
    const SolverConfig& config = {},
    const std::optional<ConformalFactor>& warm_start = std::nullopt);

double boundary_length(const TriMesh& mesh, const BackgroundMetric& bg,
                       const Eigen::VectorXd& u, int loop_index);
double area(const BackgroundMetric& bg, const Eigen::VectorXd& u);

/// Dirichlet energy E(h) = 1/2 h^T L h of the discrete harmonic function with
/// h = 1 on loop_index and h = 0 on all other boundary loops. Needs >= 2
/// loops. (The conformal modulus of the separating annulus is pi / E.)
double harmonic_energy(const TriMesh& mesh, const BackgroundMetric& bg,
                       int loop_index);

}  // namespace hypuni::solver
