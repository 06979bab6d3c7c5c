#include "hypuni/solver.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace hypuni::solver {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Eigen::VectorXd per_vertex_c(const BackgroundMetric& bg, const CurvatureSpec& c) {
    Eigen::VectorXd ce = Eigen::VectorXd::Zero(bg.vertex_area.size());
    for (int v = 0; v < ce.size(); ++v)
        if (bg.loop_of[v] >= 0) ce[v] = c.c[bg.loop_of[v]];
    return ce;
}

// exact minimizer of the energy over constant u: with x = e^t,
// Area0 x^2 - (sum_i c_i L0_i) x + 2 pi chi = 0, positive root
double constant_initial_guess(const BackgroundMetric& bg, const Eigen::VectorXd& ce) {
    const double a = bg.total_area;
    const double b = (ce.array() * bg.boundary_mass.array()).sum();
    const double w = bg.integrated_curvature.sum();
    const double disc = b * b - 4.0 * a * w;
    const double x = (b + std::sqrt(std::max(disc, 0.0))) / (2.0 * a);
    return std::log(std::max(x, 1e-300));
}

}  // namespace

void CurvatureSpec::validate(int n_loops) const {
    if (static_cast<int>(c.size()) != n_loops)
        throw std::invalid_argument("curvature spec has " + std::to_string(c.size()) +
                                    " entries for " + std::to_string(n_loops) +
                                    " boundary loops");
    for (double ci : c)
        if (!(ci >= 0.0) || !(ci < 1.0) || !std::isfinite(ci))
            throw std::invalid_argument("boundary curvature " + std::to_string(ci) +
                                        " outside [0,1)");
}

Eigen::VectorXd residual(const BackgroundMetric& bg, const Eigen::VectorXd& u,
                         const CurvatureSpec& c) {
    const Eigen::VectorXd ce = per_vertex_c(bg, c);
    return bg.stiffness * u + bg.integrated_curvature +
           (bg.vertex_area.array() * (2.0 * u.array()).exp() -
            ce.array() * bg.boundary_mass.array() * u.array().exp())
               .matrix();
}

double energy(const BackgroundMetric& bg, const Eigen::VectorXd& u,
              const CurvatureSpec& c, double exp_cap) {
    const Eigen::VectorXd ce = per_vertex_c(bg, c);
    const Eigen::ArrayXd uc = u.array().min(exp_cap);
    return u.dot(bg.stiffness * u) +
           (bg.vertex_area.array() * (2.0 * uc).exp() +
            2.0 * bg.integrated_curvature.array() * u.array() -
            2.0 * ce.array() * bg.boundary_mass.array() * uc.exp())
               .sum();
}

double boundary_length(const TriMesh& mesh, const BackgroundMetric& bg,
                       const Eigen::VectorXd& u, int loop_index) {
    double L = 0.0;
    for (int v : mesh.boundary_loops.at(loop_index))
        L += bg.boundary_mass[v] * std::exp(u[v]);
    return L;
}

double area(const BackgroundMetric& bg, const Eigen::VectorXd& u) {
    return (bg.vertex_area.array() * (2.0 * u.array()).exp()).sum();
}

std::pair<ConformalFactor, SolveReport> solve_u(
    const TriMesh& mesh, const BackgroundMetric& bg, const CurvatureSpec& c,
    const SolverConfig& config, const std::optional<ConformalFactor>& warm_start) {
    const auto t_start = std::chrono::steady_clock::now();
    const int V = mesh.n_vertices;
    const int k = mesh.n_loops();
    c.validate(k);
    if (!(config.residual_tol > 0.0) || config.max_newton < 1 ||
        !(config.continuation_step > 0.0 && config.continuation_step < 1.0))
        throw std::invalid_argument("invalid solver configuration");

    const int chi = mesh.euler_characteristic();
    if (chi == 0) {
        for (double ci : c.c)
            if (ci == 0.0)
                throw InfeasibleTopologyError(
                    "chi = 0 with a geodesic boundary loop: summing the residual "
                    "forces sum_i c_i L_i = Area > 0, so every c_i must be positive");
    }

    // continuation path: from c = 0 for chi < 0; a warm start, or the chi = 0
    // case (where c = 0 is infeasible), starts at the target directly
    const Eigen::Map<const Eigen::VectorXd> c_target(c.c.data(), k);
    Eigen::VectorXd c_from =
        (warm_start || chi == 0) ? Eigen::VectorXd(c_target) : Eigen::VectorXd::Zero(k);

    Eigen::VectorXd u;
    if (warm_start) {
        if (warm_start->u.size() != V)
            throw std::invalid_argument("warm start size mismatch");
        u = warm_start->u;
    } else {
        CurvatureSpec c0;
        c0.c.assign(c_from.data(), c_from.data() + k);
        u = Eigen::VectorXd::Constant(V, constant_initial_guess(bg, per_vertex_c(bg, c0)));
    }

    const double span = (c_target - c_from).cwiseAbs().maxCoeff();
    const int n_stages = std::max(1, static_cast<int>(std::ceil(span / config.continuation_step)));

    // stage targets, refined adaptively on failure
    std::vector<Eigen::VectorXd> pending;
    for (int s = n_stages; s >= 1; --s)
        pending.push_back(c_from + (static_cast<double>(s) / n_stages) * (c_target - c_from));

    SolveReport report;
    report.c = c.c;
    Eigen::VectorXd c_reached = c_from;
    int total_its = 0;
    int stage_no = 0;

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;

    while (!pending.empty()) {
        const Eigen::VectorXd c_stage = pending.back();
        pending.pop_back();
        ++stage_no;
        CurvatureSpec cs;
        cs.c.assign(c_stage.data(), c_stage.data() + k);
        const Eigen::VectorXd ce = per_vertex_c(bg, cs);
        const bool final_stage = pending.empty();

        std::vector<double> rhist, ehist;
        Eigen::VectorXd u_stage = u;
        double lambda = 0.0;
        bool converged = false;
        for (int it = 0; it < config.max_newton; ++it) {
            const Eigen::VectorXd R = residual(bg, u_stage, cs);
            const double rnorm = R.cwiseAbs().maxCoeff();
            rhist.push_back(rnorm);
            ehist.push_back(energy(bg, u_stage, cs, config.exp_cap));
            if (rnorm <= config.residual_tol) {
                converged = true;
                break;
            }

            const Eigen::VectorXd diag =
                2.0 * bg.vertex_area.array() * (2.0 * u_stage.array()).exp() -
                ce.array() * bg.boundary_mass.array() * u_stage.array().exp();
            Eigen::SparseMatrix<double> H = bg.stiffness;
            const double diag_scale = std::max(diag.cwiseAbs().maxCoeff(), 1e-12);

            // Levenberg shift until the factorization is positive definite
            Eigen::VectorXd step;
            for (int boost = 0; boost < 40; ++boost) {
                Eigen::SparseMatrix<double> Hs = H;
                Eigen::VectorXd shifted = diag;
                if (lambda > 0.0) shifted.array() += lambda * diag_scale;
                for (int v = 0; v < V; ++v) Hs.coeffRef(v, v) += shifted[v];
                ldlt.compute(Hs);
                if (ldlt.info() == Eigen::Success && ldlt.vectorD().minCoeff() > 0.0) {
                    step = ldlt.solve(-R);
                    break;
                }
                lambda = (lambda == 0.0) ? config.levenberg_seed : 10.0 * lambda;
            }
            if (step.size() == 0)
                throw SolveError("Newton system not positive definite after Levenberg shifts",
                                 stage_no, it, rhist);

            // backtracking Armijo on the energy; when the predicted decrease is
            // below round-off the iterate is in the quadratic regime and the
            // full step is accepted
            const double E0 = ehist.back();
            const double slope = 2.0 * R.dot(step);
            double t = 1.0;
            if (std::abs(slope) > 1e-12 * (1.0 + std::abs(E0))) {
                while (t > 1e-12 &&
                       energy(bg, u_stage + t * step, cs, config.exp_cap) >
                           E0 + 1e-4 * t * slope)
                    t *= 0.5;
                if (t <= 1e-12) {
                    lambda = (lambda == 0.0) ? config.levenberg_seed : 10.0 * lambda;
                    continue;  // retry with a stronger shift
                }
            }
            u_stage += t * step;
            ++total_its;
            if (lambda > 0.0) lambda = (lambda < 1e-14) ? 0.0 : 0.5 * lambda;
        }

        if (!converged) {
            // bisect the failed stage if there is room, otherwise give up
            const double stage_span = (c_stage - c_reached).cwiseAbs().maxCoeff();
            if (stage_span > 1e-4) {
                pending.push_back(c_stage);
                pending.push_back(c_reached + 0.5 * (c_stage - c_reached));
                continue;
            }
            throw SolveError("Newton did not reach tolerance " +
                                 std::to_string(config.residual_tol) + " at stage " +
                                 std::to_string(stage_no),
                             stage_no, config.max_newton, rhist);
        }
        u = u_stage;
        c_reached = c_stage;
        if (final_stage) {
            report.residual_history = std::move(rhist);
            report.energy_history = std::move(ehist);
        }
    }

    if (u.cwiseAbs().maxCoeff() >= config.exp_cap)
        throw SolveError("converged iterate hit the exponential cap", stage_no, 0,
                         report.residual_history);

    report.stages = stage_no;
    report.newton_iterations = total_its;
    report.residual_norm = residual(bg, u, c).cwiseAbs().maxCoeff();
    report.area = area(bg, u);
    report.L.resize(k);
    report.ell.resize(k);
    for (int i = 0; i < k; ++i) {
        report.L[i] = boundary_length(mesh, bg, u, i);
        report.ell[i] = report.L[i] * std::sqrt(1.0 - c.c[i] * c.c[i]);
    }
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return {ConformalFactor{std::move(u)}, std::move(report)};
}

double harmonic_energy(const TriMesh& mesh, const BackgroundMetric& bg,
                       int loop_index) {
    const int k = mesh.n_loops();
    if (k < 2)
        throw std::invalid_argument(
            "harmonic capacity needs at least two boundary loops");
    if (loop_index < 0 || loop_index >= k)
        throw std::invalid_argument("loop index out of range");
    const int V = mesh.n_vertices;

    Eigen::VectorXd h = Eigen::VectorXd::Zero(V);
    std::vector<int> free_index(V, -1);
    int n_free = 0;
    for (int v = 0; v < V; ++v) {
        if (bg.loop_of[v] < 0)
            free_index[v] = n_free++;
        else if (bg.loop_of[v] == loop_index)
            h[v] = 1.0;
    }

    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_free);
    for (int col = 0; col < bg.stiffness.outerSize(); ++col) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(bg.stiffness, col); it; ++it) {
            const int r = static_cast<int>(it.row());
            if (free_index[r] < 0) continue;
            if (free_index[col] >= 0)
                trip.emplace_back(free_index[r], free_index[col], it.value());
            else
                rhs[free_index[r]] -= it.value() * h[col];
        }
    }
    Eigen::SparseMatrix<double> Aff(n_free, n_free);
    Aff.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(Aff);
    if (ldlt.info() != Eigen::Success)
        throw std::runtime_error("harmonic capacity: interior stiffness factorization failed");
    const Eigen::VectorXd hf = ldlt.solve(rhs);
    for (int v = 0; v < V; ++v)
        if (free_index[v] >= 0) h[v] = hf[free_index[v]];
    return 0.5 * h.dot(bg.stiffness * h);
}

std::string SolveReport::to_kv() const {
    std::ostringstream os;
    os << "loops = " << c.size() << "\n";
    for (size_t i = 0; i < c.size(); ++i) os << "c_" << i << " = " << fmt(c[i]) << "\n";
    for (size_t i = 0; i < L.size(); ++i) os << "L_" << i << " = " << fmt(L[i]) << "\n";
    for (size_t i = 0; i < ell.size(); ++i) os << "ell_" << i << " = " << fmt(ell[i]) << "\n";
    os << "area = " << fmt(area) << "\n";
    os << "residual_norm = " << fmt(residual_norm) << "\n";
    os << "newton_iterations = " << newton_iterations << "\n";
    os << "stages = " << stages << "\n";
    os << "wall_time_s = " << fmt(wall_time_s) << "\n";
    return os.str();
}

std::string SolveReport::csv_header(int n_loops) {
    std::ostringstream os;
    for (int i = 0; i < n_loops; ++i) os << "c_" << i << ",";
    for (int i = 0; i < n_loops; ++i) os << "L_" << i << ",";
    for (int i = 0; i < n_loops; ++i) os << "ell_" << i << ",";
    os << "area,residual_norm,newton_iterations";
    return os.str();
}

std::string SolveReport::csv_row() const {
    std::ostringstream os;
    for (double v : c) os << fmt(v) << ",";
    for (double v : L) os << fmt(v) << ",";
    for (double v : ell) os << fmt(v) << ",";
    os << fmt(area) << "," << fmt(residual_norm) << "," << newton_iterations;
    return os.str();
}

}  // namespace hypuni::solver
