#include "hypuni/tuner.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hypuni/collar.hpp"

namespace hypuni::tuner {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kClampLo = 1e-8;
constexpr double kClampHi = 1.0 - 1e-6;

Eigen::SparseMatrix<double> newton_matrix(const BackgroundMetric& bg,
                                          const Eigen::VectorXd& u,
                                          const solver::CurvatureSpec& c) {
    const int V = static_cast<int>(u.size());
    Eigen::VectorXd ce = Eigen::VectorXd::Zero(V);
    for (int v = 0; v < V; ++v)
        if (bg.loop_of[v] >= 0) ce[v] = c.c[bg.loop_of[v]];
    Eigen::SparseMatrix<double> H = bg.stiffness;
    const Eigen::VectorXd diag =
        2.0 * bg.vertex_area.array() * (2.0 * u.array()).exp() -
        ce.array() * bg.boundary_mass.array() * u.array().exp();
    for (int v = 0; v < V; ++v) H.coeffRef(v, v) += diag[v];
    return H;
}

// weighted boundary samples B_v e^{u_v} of one loop, as a dense vector
Eigen::VectorXd loop_measure(const TriMesh& mesh, const BackgroundMetric& bg,
                             const Eigen::VectorXd& u, int loop) {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(u.size());
    for (int v : mesh.boundary_loops.at(loop))
        m[v] = bg.boundary_mass[v] * std::exp(u[v]);
    return m;
}

}  // namespace

Eigen::VectorXd linearized_solve(const TriMesh& mesh, const BackgroundMetric& bg,
                                 const Eigen::VectorXd& u_c,
                                 const solver::CurvatureSpec& c,
                                 const std::vector<double>& b) {
    const int k = mesh.n_loops();
    c.validate(k);
    if (static_cast<int>(b.size()) != k)
        throw std::invalid_argument("perturbation b needs one entry per loop");
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(u_c.size());
    for (int i = 0; i < k; ++i) rhs += b[i] * loop_measure(mesh, bg, u_c, i);

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(newton_matrix(bg, u_c, c));
    if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() <= 0.0)
        throw std::runtime_error(
            "linearized system is singular or indefinite at this (u, c)");
    return ldlt.solve(rhs);
}

std::vector<double> momentum_map(const TriMesh& mesh, const BackgroundMetric& bg,
                                 const solver::CurvatureSpec& c,
                                 const solver::SolverConfig& config,
                                 const std::optional<solver::ConformalFactor>& warm,
                                 solver::ConformalFactor* u_out,
                                 solver::SolveReport* report_out) {
    auto [u, report] = solver::solve_u(mesh, bg, c, config, warm);
    std::vector<double> F(report.L.size());
    for (size_t i = 0; i < F.size(); ++i) F[i] = c.c[i] * report.L[i];
    if (u_out) *u_out = std::move(u);
    if (report_out) *report_out = std::move(report);
    return F;
}

Eigen::MatrixXd jacobian(const TriMesh& mesh, const BackgroundMetric& bg,
                         const Eigen::VectorXd& u_c, const solver::CurvatureSpec& c) {
    const int k = mesh.n_loops();
    c.validate(k);
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(newton_matrix(bg, u_c, c));
    if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() <= 0.0)
        throw std::runtime_error("Jacobian assembly: Newton matrix not positive definite");

    std::vector<Eigen::VectorXd> measures(k);
    Eigen::VectorXd L(k);
    for (int i = 0; i < k; ++i) {
        measures[i] = loop_measure(mesh, bg, u_c, i);
        L[i] = measures[i].sum();
    }
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(k, k);
    for (int j = 0; j < k; ++j) {
        const Eigen::VectorXd vj = ldlt.solve(measures[j]);
        for (int i = 0; i < k; ++i)
            J(i, j) = (i == j ? L[i] : 0.0) + c.c[i] * measures[i].dot(vj);
    }
    return J;
}

std::pair<solver::ConformalFactor, TuneReport> tune_d(const TriMesh& mesh,
                                                      const BackgroundMetric& bg,
                                                      const MomentumTarget& d,
                                                      const TuneConfig& config) {
    const int k = mesh.n_loops();
    std::vector<double> dvec(k, d.d);
    if (config.per_loop_d) {
        if (static_cast<int>(config.per_loop_d->size()) != k)
            throw std::invalid_argument("per-loop d needs one entry per loop");
        dvec = *config.per_loop_d;
    }
    double d_min = dvec[0];
    for (double dv : dvec) {
        if (!(dv > 0.0)) throw std::invalid_argument("momentum target must be positive");
        d_min = std::min(d_min, dv);
    }

    // inexact inner solves corrupt the outer Newton model
    solver::SolverConfig inner = config.inner;
    inner.residual_tol = std::min(inner.residual_tol, 1e-2 * config.tol * d_min);

    std::vector<double> c0(k);
    std::optional<solver::ConformalFactor> warm;
    if (config.initial_c) {
        if (static_cast<int>(config.initial_c->size()) != k)
            throw std::invalid_argument("initial c needs one entry per loop");
        c0 = *config.initial_c;
    } else if (mesh.euler_characteristic() < 0) {
        // boundary lengths of the c = 0 solve feed the collar relation
        // c = d / sqrt(L^2 + d^2)
        solver::CurvatureSpec zero;
        zero.c.assign(k, 0.0);
        solver::ConformalFactor u0;
        solver::SolveReport rep0;
        momentum_map(mesh, bg, zero, inner, std::nullopt, &u0, &rep0);
        for (int i = 0; i < k; ++i)
            c0[i] = dvec[i] / std::hypot(rep0.L[i], dvec[i]);
        warm = std::move(u0);
    } else {
        // annulus: measure the conformal modulus and use the exact cylinder
        // relation T(ell) = (4 pi / ell) arctan(d / ell)
        const double Z = kPi / solver::harmonic_energy(mesh, bg, 0);
        for (int i = 0; i < k; ++i) {
            const double dv = dvec[i];
            double lo = 1e-9, hi = 1e9;
            for (int it = 0; it < 200; ++it) {
                const double mid = std::sqrt(lo * hi);
                ((4.0 * kPi / mid) * std::atan2(dv, mid) > Z ? lo : hi) = mid;
            }
            const double ell = std::sqrt(lo * hi);
            c0[i] = dvec[i] / std::hypot(ell, dvec[i]);
        }
    }
    for (double& ci : c0) ci = std::clamp(ci, kClampLo, kClampHi);

    TuneReport report;
    report.d = d.d;
    Eigen::VectorXd c = Eigen::Map<Eigen::VectorXd>(c0.data(), k);
    const Eigen::Map<const Eigen::VectorXd> dv(dvec.data(), k);

    solver::ConformalFactor u;
    for (int outer = 0; outer < config.max_outer; ++outer) {
        solver::CurvatureSpec cs;
        cs.c.assign(c.data(), c.data() + k);
        solver::SolveReport srep;
        const std::vector<double> F = momentum_map(mesh, bg, cs, inner, warm, &u, &srep);
        warm = u;

        const Eigen::Map<const Eigen::VectorXd> Fv(F.data(), k);
        const Eigen::VectorXd G = Fv - dv;
        TuneIterate itrow;
        itrow.iteration = outer;
        itrow.c = cs.c;
        itrow.F = F;

        if ((G.cwiseAbs().array() <= config.tol * dv.array()).all()) {
            report.iterates.push_back(std::move(itrow));
            report.outer_iterations = outer;
            report.c_star = cs.c;
            report.solve = std::move(srep);
            return {std::move(u), std::move(report)};
        }

        const Eigen::MatrixXd J = jacobian(mesh, bg, u.u, cs);
        Eigen::VectorXd step = J.partialPivLu().solve(-G);

        // clamp to the solvability window with step halving
        int halvings = 0;
        while (((c + step).array() < kClampLo).any() ||
               ((c + step).array() > kClampHi).any()) {
            step *= 0.5;
            if (++halvings > 60)
                throw solver::SolveError("tune_d step pinned at the curvature clamp",
                                         0, outer, {});
        }
        itrow.step_norm = step.cwiseAbs().maxCoeff();
        report.iterates.push_back(std::move(itrow));
        c += step;
    }
    throw solver::SolveError("tune_d did not converge in " +
                                 std::to_string(config.max_outer) + " outer iterations",
                             0, config.max_outer, {});
}

}  // namespace hypuni::tuner
