#include "hypuni/verify.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "hypuni/collar.hpp"
#include "hypuni/quadrature.hpp"

namespace hypuni::verify {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// portable uniform doubles in [0,1) from the raw engine stream
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}
double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
    if (threads <= 0) {
        const char* env = std::getenv("HYPUNI_THREADS");
        if (env) threads = std::max(1, std::atoi(env));
        else threads = static_cast<int>(std::thread::hardware_concurrency());
        if (threads <= 0) threads = 1;
    }
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace

double gauss_bonnet_residual(const TriMesh& mesh, const BackgroundMetric& bg,
                             const Eigen::VectorXd& u, const solver::CurvatureSpec& c) {
    c.validate(mesh.n_loops());
    double boundary_term = 0.0;
    for (int i = 0; i < mesh.n_loops(); ++i)
        boundary_term += c.c[i] * solver::boundary_length(mesh, bg, u, i);
    const double area_g = solver::area(bg, u);
    return std::abs(-area_g + boundary_term - 2.0 * kPi * mesh.euler_characteristic());
}

std::vector<MdIdentityRow> md_identities(const solver::SolveReport& report, double d) {
    std::vector<MdIdentityRow> rows;
    for (size_t i = 0; i < report.L.size(); ++i) {
        MdIdentityRow row;
        row.loop = static_cast<int>(i);
        const double L = report.L[i];
        const double c = report.c[i];
        row.cL_minus_d = c * L - d;
        if (!(L > d)) {
            row.feasible = false;
            rows.push_back(row);
            continue;
        }
        row.ell = std::sqrt((L - d) * (L + d));
        if (d > 0.0) {
            row.Y = collar::boundary_offset_y(row.ell, c);
            row.Xbar = collar::xbar_d(row.ell, d);
            row.Y_minus_Xbar = row.Y - row.Xbar;
        }
        rows.push_back(row);
    }
    return rows;
}

double conformal_modulus(const TriMesh& mesh, const BackgroundMetric& bg,
                         int loop_index) {
    return kPi / solver::harmonic_energy(mesh, bg, loop_index);
}

std::vector<AnnulusSweepRow> annulus_degeneration_sweep(
    const std::vector<double>& Ts, double d, int n_th,
    const tuner::TuneConfig& config, int threads) {
    std::vector<AnnulusSweepRow> rows(Ts.size());
    parallel_for(static_cast<int>(Ts.size()), threads, [&](int m) {
        AnnulusSweepRow& row = rows[m];
        row.T = Ts[m];
        try {
            // keep triangle aspect ratio roughly fixed across the family
            const int n_s = std::max(2, static_cast<int>(std::lround(
                                            n_th * row.T / (2.0 * kPi))));
            const TriMesh mesh = generate_flat_annulus(row.T, n_s, n_th);
            const BackgroundMetric bg = build_background(mesh);

            tuner::MomentumTarget target{d};
            auto [u, trep] = tuner::tune_d(mesh, bg, target, config);
            row.converged = true;
            row.c = trep.c_star;
            row.L = trep.solve.L;
            row.area = trep.solve.area;
            row.residual_norm = trep.solve.residual_norm;
            row.newton_iterations = trep.solve.newton_iterations;
            row.outer_iterations = trep.outer_iterations;
            for (size_t i = 0; i < row.L.size(); ++i) {
                const double ell = collar::geodesic_from_boundary(row.L[i], d);
                row.ell.push_back(ell);
                row.X.push_back(collar::collar_halfwidth_x(ell));
                row.Xbar.push_back(collar::xbar_d(ell, d));
            }
            row.ell_cylinder = (4.0 * kPi / row.T) * std::asin(row.c[0]);
            row.modulus = conformal_modulus(mesh, bg, 0);
            row.ell_type1 = 2.0 * kPi * kPi / row.modulus;
        } catch (const std::exception& e) {
            row.converged = false;
            row.error = e.what();
        }
    });
    return rows;
}

std::string annulus_sweep_csv(const std::vector<AnnulusSweepRow>& rows) {
    std::ostringstream os;
    os << "T,converged,c_0,c_1,L_0,L_1,ell_0,ell_1,X_0,X_1,Xbar_0,Xbar_1,"
          "area,residual_norm,newton_iterations,outer_iterations,"
          "ell_cylinder,modulus,ell_type1\n";
    for (const auto& r : rows) {
        os << fmt(r.T) << "," << (r.converged ? 1 : 0);
        auto emit2 = [&](const std::vector<double>& v) {
            for (int i = 0; i < 2; ++i)
                os << "," << (i < static_cast<int>(v.size()) ? fmt(v[i]) : "nan");
        };
        emit2(r.c);
        emit2(r.L);
        emit2(r.ell);
        emit2(r.X);
        emit2(r.Xbar);
        os << "," << fmt(r.area) << "," << fmt(r.residual_norm) << ","
           << r.newton_iterations << "," << r.outer_iterations << ","
           << fmt(r.ell_cylinder) << "," << fmt(r.modulus) << ","
           << fmt(r.ell_type1) << "\n";
    }
    return os.str();
}

std::vector<PantsSweepRow> pants_degeneration_sweep(const std::vector<double>& as,
                                                    double d, double R, double r, int n,
                                                    const tuner::TuneConfig& config,
                                                    int threads) {
    std::vector<PantsSweepRow> rows(as.size());
    parallel_for(static_cast<int>(as.size()), threads, [&](int m) {
        PantsSweepRow& row = rows[m];
        row.a = as[m];
        try {
            const TriMesh mesh = generate_pants_domain(R, r, row.a, n);
            const BackgroundMetric bg = build_background(mesh);

            solver::CurvatureSpec zero;
            zero.c.assign(mesh.n_loops(), 0.0);
            auto [u0, rep0] = solver::solve_u(mesh, bg, zero, config.inner);
            row.L_type1 = rep0.L;

            auto [u, trep] = tuner::tune_d(mesh, bg, tuner::MomentumTarget{d}, config);
            row.converged = true;
            row.c = trep.c_star;
            row.L = trep.solve.L;
            row.ell = trep.solve.ell;
            row.area = trep.solve.area;
            row.residual_norm = trep.solve.residual_norm;
            row.newton_iterations = trep.solve.newton_iterations;
        } catch (const std::exception& e) {
            row.converged = false;
            row.error = e.what();
        }
    });
    return rows;
}

std::string pants_sweep_csv(const std::vector<PantsSweepRow>& rows) {
    std::ostringstream os;
    os << "a,converged,c_0,c_1,c_2,L_0,L_1,L_2,ell_0,ell_1,ell_2,"
          "area,residual_norm,newton_iterations,"
          "L_type1_0,L_type1_1,L_type1_2\n";
    for (const auto& r : rows) {
        os << fmt(r.a) << "," << (r.converged ? 1 : 0);
        auto emit3 = [&](const std::vector<double>& v) {
            for (int i = 0; i < 3; ++i)
                os << "," << (i < static_cast<int>(v.size()) ? fmt(v[i]) : "nan");
        };
        emit3(r.c);
        emit3(r.L);
        emit3(r.ell);
        os << "," << fmt(r.area) << "," << fmt(r.residual_norm) << ","
           << r.newton_iterations;
        emit3(r.L_type1);
        os << "\n";
    }
    return os.str();
}

TraceSuiteReport trace_suite(int samples, std::uint64_t seed) {
    TraceSuiteReport rep;
    std::mt19937_64 rng(seed);
    constexpr double kTol = 1e-9;
    rep.worst_slack = std::numeric_limits<double>::infinity();

    // half-collar inequality with random polynomial radial functions
    for (int s = 0; s < samples; ++s) {
        const double ell = uniform(rng, 0.3, 5.0);
        const double c = uniform(rng, 0.05, 0.95);
        const int deg = 1 + static_cast<int>(rng() % 4);
        std::vector<double> coeffs(deg + 1);
        for (double& x : coeffs) x = uniform(rng, -1.0, 1.0);
        const auto p = collar::trace_inequality_check(ell, c, collar::Polynomial(coeffs));
        const double slack = p.rhs - p.lhs;
        rep.worst_slack = std::min(rep.worst_slack, slack);
        ++rep.cases;
        if (slack < -kTol) {
            ++rep.violations;
            rep.notes.push_back("half-collar violation at ell=" + fmt(ell) +
                                " c=" + fmt(c) + " slack=" + fmt(slack));
        }
    }

    // constant w: the area identity makes these the equality cases
    for (int s = 0; s < 16; ++s) {
        const double ell = uniform(rng, 0.3, 5.0);
        const double c = uniform(rng, 0.05, 0.95);
        const double w0 = uniform(rng, 0.2, 3.0);
        const auto p = collar::trace_inequality_check(ell, c, collar::Polynomial({w0}));
        rep.max_equality_gap = std::max(rep.max_equality_gap, std::abs(p.lhs - p.rhs));
        ++rep.cases;
    }

    // euclidean cylinder trace inequality with radial linear profiles:
    // |w(0)| <= int_0^X |w'| ds + X^{-1} int_0^X |w| ds
    for (int s = 0; s < samples; ++s) {
        const double X = uniform(rng, 0.2, 4.0);
        const double alpha = uniform(rng, -2.0, 2.0);
        const double beta = uniform(rng, -2.0, 2.0);
        const collar::Polynomial w({alpha, beta});
        const collar::Polynomial dw = w.derivative();
        const double lhs = std::abs(w(0.0));
        const double rhs =
            integrate([&](double x) { return std::abs(dw(x)); }, 0.0, X, 1e-12) +
            integrate([&](double x) { return std::abs(w(x)); }, 0.0, X, 1e-12) / X;
        const double slack = rhs - lhs;
        rep.worst_slack = std::min(rep.worst_slack, slack);
        ++rep.cases;
        if (slack < -kTol) {
            ++rep.violations;
            rep.notes.push_back("euclidean cylinder violation at X=" + fmt(X) +
                                " alpha=" + fmt(alpha) + " beta=" + fmt(beta));
        }
    }
    // constant profiles are the equality case of the cylinder bound
    for (int s = 0; s < 16; ++s) {
        const double X = uniform(rng, 0.2, 4.0);
        const double alpha = uniform(rng, 0.1, 2.0);
        const double rhs =
            integrate([&](double x) { return alpha; }, 0.0, X, 1e-12) / X;
        rep.max_equality_gap = std::max(rep.max_equality_gap, std::abs(rhs - alpha));
        ++rep.cases;
    }

    rep.all_hold = rep.violations == 0;
    return rep;
}

std::vector<CollarSampleRow> sample_collar_identities(int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<CollarSampleRow> rows;
    rows.reserve(samples);
    for (int s = 0; s < samples; ++s) {
        CollarSampleRow r{};
        r.ell = uniform(rng, 0.05, 8.0);
        r.c = uniform(rng, 0.01, 0.99);
        const auto g = collar::lengths_from(r.ell, r.c);
        r.d = g.d;
        r.L = g.L;
        r.Y = collar::boundary_offset_y(r.ell, r.c);
        r.Xbar = collar::xbar_d(r.ell, r.d);
        r.X = collar::collar_halfwidth_x(r.ell);
        r.halfcollar_area = collar::halfcollar_area(r.ell, r.c);
        r.curvature_at_Y = collar::circle_curvature(r.ell, r.Y);
        rows.push_back(r);
    }
    return rows;
}

std::string collar_samples_csv(const std::vector<CollarSampleRow>& rows) {
    std::ostringstream os;
    os << "ell,c,d,L,Y,Xbar_d,X,halfcollar_area,curvature_at_Y\n";
    for (const auto& r : rows)
        os << fmt(r.ell) << "," << fmt(r.c) << "," << fmt(r.d) << "," << fmt(r.L) << ","
           << fmt(r.Y) << "," << fmt(r.Xbar) << "," << fmt(r.X) << ","
           << fmt(r.halfcollar_area) << "," << fmt(r.curvature_at_Y) << "\n";
    return os.str();
}

}  // namespace hypuni::verify
