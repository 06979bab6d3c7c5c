// hypuni: represent a conformal structure on a surface with boundary by the
// hyperbolic metric whose boundary curves have constant positive geodesic
// curvature, prescribed directly (solve) or through the boundary momentum
// d = k_g * L (tune), with generators, identity checks and degeneration
// sweeps.
//
// Exit codes: 0 success, 2 invalid input, 3 numerical non-convergence.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hypuni/collar.hpp"
#include "hypuni/mesh.hpp"
#include "hypuni/quadrature.hpp"
#include "hypuni/solver.hpp"
#include "hypuni/tuner.hpp"
#include "hypuni/verify.hpp"

using nlohmann::json;
using namespace hypuni;

namespace {

constexpr double kPi = std::numbers::pi;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write to " + path + " failed");
}

void maybe_dump_config(const std::string& path, const json& cfg) {
    if (!path.empty()) write_text(path, cfg.dump(2) + "\n");
}

// ---------------------------------------------------------------- gen

struct GenConfig {
    std::string shape = "annulus";
    double T = kPi;
    int ns = 64, nth = 64;
    double R = 3.0, r = 0.8, a = 1.4;
    int n = 64;
    std::string out;
};

json to_json(const GenConfig& g) {
    return json{{"command", "gen"}, {"shape", g.shape}, {"T", g.T},   {"ns", g.ns},
                {"nth", g.nth},     {"R", g.R},         {"r", g.r},   {"a", g.a},
                {"n", g.n},         {"out", g.out}};
}

GenConfig gen_from_json(const json& j) {
    GenConfig g;
    g.shape = j.at("shape");
    g.T = j.value("T", g.T);
    g.ns = j.value("ns", g.ns);
    g.nth = j.value("nth", g.nth);
    g.R = j.value("R", g.R);
    g.r = j.value("r", g.r);
    g.a = j.value("a", g.a);
    g.n = j.value("n", g.n);
    g.out = j.at("out");
    return g;
}

int run_gen(const GenConfig& g) {
    TriMesh mesh;
    if (g.shape == "annulus")
        mesh = generate_flat_annulus(g.T, g.ns, g.nth);
    else if (g.shape == "pants")
        mesh = generate_pants_domain(g.R, g.r, g.a, g.n);
    else
        throw std::invalid_argument("unknown shape '" + g.shape + "'");
    write_mesh(mesh, g.out);
    std::cout << "wrote " << g.out << ": V=" << mesh.n_vertices
              << " E=" << mesh.n_edges() << " F=" << mesh.n_faces()
              << " chi=" << mesh.euler_characteristic() << " k=" << mesh.n_loops()
              << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- solve

struct SolveCmdConfig {
    std::string mesh_path;
    std::vector<double> c;
    double tol = 1e-10;
    int max_newton = 50;
    double step = 0.1;
    std::string out;  // prefix; empty = stdout only
};

json to_json(const SolveCmdConfig& s) {
    return json{{"command", "solve"}, {"mesh", s.mesh_path}, {"c", s.c},
                {"tol", s.tol},       {"max_newton", s.max_newton},
                {"step", s.step},     {"out", s.out}};
}

SolveCmdConfig solve_from_json(const json& j) {
    SolveCmdConfig s;
    s.mesh_path = j.at("mesh");
    s.c = j.at("c").get<std::vector<double>>();
    s.tol = j.value("tol", s.tol);
    s.max_newton = j.value("max_newton", s.max_newton);
    s.step = j.value("step", s.step);
    s.out = j.value("out", std::string{});
    return s;
}

int run_solve(const SolveCmdConfig& cfg) {
    const TriMesh mesh = read_mesh(cfg.mesh_path);
    const BackgroundMetric bg = build_background(mesh);
    solver::CurvatureSpec c{cfg.c};
    c.validate(mesh.n_loops());
    solver::SolverConfig sc;
    sc.residual_tol = cfg.tol;
    sc.max_newton = cfg.max_newton;
    sc.continuation_step = cfg.step;
    auto [u, report] = solver::solve_u(mesh, bg, c, sc);
    std::cout << report.to_kv();
    if (!cfg.out.empty()) {
        write_text(cfg.out + "_report.txt", report.to_kv());
        write_text(cfg.out + "_report.csv",
                   solver::SolveReport::csv_header(mesh.n_loops()) + "\n" +
                       report.csv_row() + "\n");
        std::ostringstream os;
        for (int v = 0; v < mesh.n_vertices; ++v) os << fmt(u.u[v]) << "\n";
        write_text(cfg.out + "_u.txt", os.str());
    }
    return kExitOk;
}

// ---------------------------------------------------------------- tune

struct TuneCmdConfig {
    std::string mesh_path;
    double d = 1.0;
    double tol = 1e-8;
    int max_outer = 30;
    std::string out;
};

json to_json(const TuneCmdConfig& t) {
    return json{{"command", "tune"}, {"mesh", t.mesh_path},      {"d", t.d},
                {"tol", t.tol},      {"max_outer", t.max_outer}, {"out", t.out}};
}

TuneCmdConfig tune_from_json(const json& j) {
    TuneCmdConfig t;
    t.mesh_path = j.at("mesh");
    t.d = j.at("d");
    t.tol = j.value("tol", t.tol);
    t.max_outer = j.value("max_outer", t.max_outer);
    t.out = j.value("out", std::string{});
    return t;
}

std::string iterates_csv(const tuner::TuneReport& rep, int k) {
    std::ostringstream os;
    os << "iteration";
    for (int i = 0; i < k; ++i) os << ",c_" << i;
    for (int i = 0; i < k; ++i) os << ",F_" << i;
    os << ",step_norm\n";
    for (const auto& it : rep.iterates) {
        os << it.iteration;
        for (double v : it.c) os << "," << fmt(v);
        for (double v : it.F) os << "," << fmt(v);
        os << "," << fmt(it.step_norm) << "\n";
    }
    return os.str();
}

int run_tune(const TuneCmdConfig& cfg) {
    const TriMesh mesh = read_mesh(cfg.mesh_path);
    const BackgroundMetric bg = build_background(mesh);
    tuner::TuneConfig tc;
    tc.tol = cfg.tol;
    tc.max_outer = cfg.max_outer;
    auto [u, rep] = tuner::tune_d(mesh, bg, tuner::MomentumTarget{cfg.d}, tc);
    std::cout << "d = " << fmt(cfg.d) << "\n"
              << "outer_iterations = " << rep.outer_iterations << "\n"
              << rep.solve.to_kv();
    for (const auto& row : verify::md_identities(rep.solve, cfg.d))
        std::cout << "loop " << row.loop
                  << ": |cL-d| = " << fmt(std::abs(row.cL_minus_d))
                  << "  ell = " << fmt(row.ell) << "\n";
    if (!cfg.out.empty()) {
        write_text(cfg.out + "_iterates.csv", iterates_csv(rep, mesh.n_loops()));
        write_text(cfg.out + "_report.txt", rep.solve.to_kv());
        write_text(cfg.out + "_report.csv",
                   solver::SolveReport::csv_header(mesh.n_loops()) + "\n" +
                       rep.solve.csv_row() + "\n");
    }
    return kExitOk;
}

// ---------------------------------------------------------------- sweep

struct SweepCmdConfig {
    std::string family = "annulus";
    std::vector<double> T;
    std::vector<double> a;
    double d = 1.0;
    int nth = 64;
    double R = 3.0, r = 0.8;
    int n = 64;
    double tol = 1e-8;
    int threads = 0;
    std::string out;
};

json to_json(const SweepCmdConfig& s) {
    return json{{"command", "sweep"}, {"family", s.family},   {"T", s.T},
                {"a", s.a},           {"d", s.d},             {"nth", s.nth},
                {"R", s.R},           {"r", s.r},             {"n", s.n},
                {"tol", s.tol},       {"threads", s.threads}, {"out", s.out}};
}

SweepCmdConfig sweep_from_json(const json& j) {
    SweepCmdConfig s;
    s.family = j.at("family");
    s.T = j.value("T", s.T);
    s.a = j.value("a", s.a);
    s.d = j.at("d");
    s.nth = j.value("nth", s.nth);
    s.R = j.value("R", s.R);
    s.r = j.value("r", s.r);
    s.n = j.value("n", s.n);
    s.tol = j.value("tol", s.tol);
    s.threads = j.value("threads", s.threads);
    s.out = j.value("out", std::string{});
    return s;
}

int run_sweep(const SweepCmdConfig& cfg) {
    tuner::TuneConfig tc;
    tc.tol = cfg.tol;
    std::string csv;
    bool all_ok = true;
    if (cfg.family == "annulus") {
        if (cfg.T.empty()) throw std::invalid_argument("annulus sweep needs --T values");
        auto rows =
            verify::annulus_degeneration_sweep(cfg.T, cfg.d, cfg.nth, tc, cfg.threads);
        csv = verify::annulus_sweep_csv(rows);
        for (const auto& row : rows) {
            if (!row.converged) {
                all_ok = false;
                std::cerr << "T=" << fmt(row.T) << " failed: " << row.error << "\n";
            } else {
                std::cerr << "T=" << fmt(row.T) << " c0=" << fmt(row.c[0])
                          << " L0=" << fmt(row.L[0]) << " ell0=" << fmt(row.ell[0])
                          << " ell_type1=" << fmt(row.ell_type1) << "\n";
            }
        }
    } else if (cfg.family == "pants") {
        if (cfg.a.empty()) throw std::invalid_argument("pants sweep needs --a values");
        auto rows = verify::pants_degeneration_sweep(cfg.a, cfg.d, cfg.R, cfg.r, cfg.n,
                                                     tc, cfg.threads);
        csv = verify::pants_sweep_csv(rows);
        for (const auto& row : rows)
            if (!row.converged) {
                all_ok = false;
                std::cerr << "a=" << fmt(row.a) << " failed: " << row.error << "\n";
            }
    } else {
        throw std::invalid_argument("unknown sweep family '" + cfg.family + "'");
    }
    if (cfg.out.empty())
        std::cout << csv;
    else
        write_text(cfg.out, csv);
    return all_ok ? kExitOk : kExitNumerical;
}

// ---------------------------------------------------------------- modulus

struct ModulusCmdConfig {
    std::string mesh_path;
    int loop = 0;
};

json to_json(const ModulusCmdConfig& m) {
    return json{{"command", "modulus"}, {"mesh", m.mesh_path}, {"loop", m.loop}};
}

ModulusCmdConfig modulus_from_json(const json& j) {
    ModulusCmdConfig m;
    m.mesh_path = j.at("mesh");
    m.loop = j.value("loop", 0);
    return m;
}

int run_modulus(const ModulusCmdConfig& cfg) {
    const TriMesh mesh = read_mesh(cfg.mesh_path);
    const BackgroundMetric bg = build_background(mesh);
    const double Z = verify::conformal_modulus(mesh, bg, cfg.loop);
    std::cout << "modulus = " << fmt(Z) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- verify

struct VerifyCmdConfig {
    std::uint64_t seed = 1234;
    int samples = 200;
    bool quick = false;
    std::string csv;
};

json to_json(const VerifyCmdConfig& v) {
    return json{{"command", "verify"}, {"seed", v.seed}, {"samples", v.samples},
                {"quick", v.quick},    {"csv", v.csv}};
}

VerifyCmdConfig verify_from_json(const json& j) {
    VerifyCmdConfig v;
    v.seed = j.value("seed", v.seed);
    v.samples = j.value("samples", v.samples);
    v.quick = j.value("quick", v.quick);
    v.csv = j.value("csv", std::string{});
    return v;
}

int run_verify(const VerifyCmdConfig& cfg) {
    int failures = 0;
    auto check = [&](const std::string& name, bool ok, const std::string& detail) {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << detail << "\n";
        if (!ok) ++failures;
    };

    // closed-form collar identities over a seeded sample
    {
        auto rows = verify::sample_collar_identities(cfg.samples, cfg.seed);
        double len_id = 0, area_id = 0, y_xbar = 0, curv = 0;
        bool domains = true, split = true;
        for (const auto& r : rows) {
            len_id = std::max(
                len_id, std::abs(r.L * r.L - r.ell * r.ell - r.d * r.d) / (r.L * r.L));
            area_id =
                std::max(area_id, std::abs(r.halfcollar_area - r.d) / std::max(1.0, r.d));
            y_xbar = std::max(y_xbar, std::abs(r.Y - r.Xbar));
            curv = std::max(curv, std::abs(r.curvature_at_Y - r.c));
            domains = domains && r.Y < kPi * kPi / r.ell;
            split = split && ((r.X >= r.Xbar) == (std::sinh(0.5 * r.ell) <= r.ell / r.d));
        }
        check("collar length identity L^2-ell^2=d^2", len_id <= 1e-12,
              "max rel defect " + fmt(len_id));
        check("halfcollar area equals momentum d", area_id <= 1e-12,
              "max defect " + fmt(area_id));
        check("Y(ell,c) = Xbar_d(ell) under d = cL", y_xbar <= 1e-12,
              "max |Y-Xbar| " + fmt(y_xbar));
        check("circle curvature at Y returns c", curv <= 1e-12,
              "max defect " + fmt(curv));
        check("Y inside the complete cylinder", domains, "all samples");
        check("collar split X >= Xbar iff sinh(ell/2) <= ell/d", split, "all samples");
        if (!cfg.csv.empty()) write_text(cfg.csv, verify::collar_samples_csv(rows));
    }

    // quadrature cross-check of the closed-form half-collar area
    {
        std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
        auto u01 = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
        double worst = 0;
        for (int i = 0; i < 8; ++i) {
            const double ell = 0.3 + 4.0 * u01();
            const double c = 0.1 + 0.85 * u01();
            const double Y = collar::boundary_offset_y(ell, c);
            const double quad = 2.0 * kPi *
                                integrate(
                                    [&](double s) {
                                        const double rr = collar::rho(ell, s);
                                        return rr * rr;
                                    },
                                    0.0, Y, 1e-13);
            worst = std::max(worst, std::abs(quad - collar::halfcollar_area(ell, c)));
        }
        check("halfcollar area vs adaptive quadrature", worst <= 1e-10,
              "max defect " + fmt(worst));
    }

    // cylinder profile solves u'' = e^{2u} with u' = c e^u at the ends
    {
        const auto sol = collar::cylinder_solution(kPi, 0.5);
        double ode = 0;
        const double h = 1e-5;
        for (int i = 1; i < 100; ++i) {
            const double s = kPi * i / 100.0;
            const double upp =
                (sol.profile_derivative(s + h) - sol.profile_derivative(s - h)) /
                (2.0 * h);
            ode = std::max(ode, std::abs(upp - std::exp(2.0 * sol.profile(s))));
        }
        const double bc =
            std::abs(sol.profile_derivative(kPi) - 0.5 * std::exp(sol.profile(kPi)));
        check("cylinder profile ODE residual", ode <= 1e-9, "max " + fmt(ode));
        check("cylinder boundary condition u' = c e^u", bc <= 1e-12, fmt(bc));
    }

    // X(ell) decays like ell^{-1} e^{-ell/2}
    {
        double lo = 1e300, hi = 0;
        for (double ell = 10.0; ell <= 40.0; ell += 0.5) {
            const double v = collar::collar_halfwidth_x(ell) * ell * std::exp(0.5 * ell);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        check("X(ell) ell e^{ell/2} bounded on [10,40]", lo > 0 && hi <= 4.2 * kPi,
              "range [" + fmt(lo) + ", " + fmt(hi) + "]");
    }

    // horizontal curves: d/dt [L(Gamma)^2 - L(gamma)^2] vanishes
    {
        std::mt19937_64 rng(cfg.seed ^ 0xdeadbeefull);
        auto u01 = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
        double worst = 0;
        const int sets = cfg.quick ? 20 : 100;
        for (int i = 0; i < sets; ++i) {
            const double ell = 0.5 + 3.5 * u01();
            const double s = (2.0 * u01() - 1.0) * std::min(0.4, 0.9 * kPi * kPi / ell);
            std::vector<collar::FourierMode> modes;
            for (int j = -8; j <= 8; ++j)
                modes.push_back({j, {2.0 * u01() - 1.0, 2.0 * u01() - 1.0}});
            worst = std::max(
                worst, std::abs(collar::horizontal_variation_derivative(ell, s, modes)));
        }
        check("horizontal variation derivative vanishes", worst <= 1e-10,
              "max " + fmt(worst));
    }

    // randomized trace inequalities
    {
        const auto rep = verify::trace_suite(cfg.quick ? 50 : cfg.samples, cfg.seed);
        check("trace inequalities hold", rep.all_hold,
              std::to_string(rep.cases) + " cases, worst slack " + fmt(rep.worst_slack));
        check("constant-w equality cases", rep.max_equality_gap <= 1e-10,
              "max gap " + fmt(rep.max_equality_gap));
    }

    if (!cfg.quick) {
        // discrete solve against the exact cylinder
        const TriMesh mesh = generate_flat_annulus(kPi, 32, 32);
        const BackgroundMetric bg = build_background(mesh);
        solver::CurvatureSpec c{{0.5, 0.5}};
        auto [u, rep] = solver::solve_u(mesh, bg, c);
        const auto sol = collar::cylinder_solution(kPi, 0.5);
        double uerr = 0;
        for (int v = 0; v < mesh.n_vertices; ++v) {
            const double s = (v / 32) * (kPi / 32.0);
            uerr = std::max(uerr, std::abs(u.u[v] - sol.profile(s)));
        }
        check("annulus solve matches cylinder profile", uerr <= 5e-4,
              "max error " + fmt(uerr));
        const double gb = verify::gauss_bonnet_residual(mesh, bg, u.u, c);
        check("Gauss-Bonnet at convergence", gb <= mesh.n_vertices * 1e-10, fmt(gb));
        check("loop symmetry L_0 = L_1", std::abs(rep.L[0] - rep.L[1]) <= 1e-10,
              fmt(std::abs(rep.L[0] - rep.L[1])));

        auto [ut, trep] = tuner::tune_d(mesh, bg, tuner::MomentumTarget{sol.momentum});
        double cdef = 0;
        for (double ci : trep.c_star) cdef = std::max(cdef, std::abs(ci - 0.5));
        check("tuner recovers c from d (cylinder)", cdef <= 1e-3,
              "max |c*-0.5| " + fmt(cdef));

        const double Z = verify::conformal_modulus(mesh, bg, 0);
        check("conformal modulus of the straight grid", std::abs(Z - kPi) <= 1e-10,
              "Z = " + fmt(Z));
    }

    std::cout << (failures == 0 ? "all checks passed\n"
                                : std::to_string(failures) + " check(s) failed\n");
    return failures == 0 ? kExitOk : kExitNumerical;
}

// ---------------------------------------------------------------- dispatch

int run_from_json(const json& cfg) {
    const std::string cmd = cfg.at("command");
    if (cmd == "gen") return run_gen(gen_from_json(cfg));
    if (cmd == "solve") return run_solve(solve_from_json(cfg));
    if (cmd == "tune") return run_tune(tune_from_json(cfg));
    if (cmd == "sweep") return run_sweep(sweep_from_json(cfg));
    if (cmd == "modulus") return run_modulus(modulus_from_json(cfg));
    if (cmd == "verify") return run_verify(verify_from_json(cfg));
    throw std::invalid_argument("unknown command '" + cmd + "' in config");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "hyperbolic uniformization of surfaces with boundary: constant positive "
        "boundary curvature, prescribed directly or through the momentum d = k_g L"};
    app.require_subcommand(0, 1);

    std::string json_config;
    app.add_option("--json-config", json_config,
                   "run a command from a dumped JSON config (overrides subcommands)");

    GenConfig gen;
    std::string gen_dump;
    auto* cgen = app.add_subcommand("gen", "generate a test mesh");
    cgen->add_option("shape", gen.shape, "annulus or pants")->required();
    cgen->add_option("--T", gen.T, "annulus conformal modulus");
    cgen->add_option("--ns", gen.ns, "annulus axial intervals");
    cgen->add_option("--nth", gen.nth, "annulus angular intervals");
    cgen->add_option("--R", gen.R, "pants outer radius");
    cgen->add_option("--r", gen.r, "pants hole radius");
    cgen->add_option("--a", gen.a, "pants hole offset");
    cgen->add_option("--n", gen.n, "pants outer-circle vertex count");
    cgen->add_option("-o,--out", gen.out, "output mesh file")->required();
    cgen->add_option("--dump-config", gen_dump, "write the run config as JSON");

    SolveCmdConfig scfg;
    std::string solve_dump;
    auto* csolve = app.add_subcommand("solve", "prescribed-curvature solve");
    csolve->add_option("mesh", scfg.mesh_path, "mesh file")->required();
    csolve->add_option("--c", scfg.c, "per-loop boundary curvatures")
        ->required()
        ->delimiter(',');
    csolve->add_option("--tol", scfg.tol, "residual tolerance");
    csolve->add_option("--max-newton", scfg.max_newton, "Newton iterations per stage");
    csolve->add_option("--step", scfg.step, "max continuation step in c");
    csolve->add_option("-o,--out", scfg.out, "report file prefix");
    csolve->add_option("--dump-config", solve_dump, "write the run config as JSON");

    TuneCmdConfig tcfg;
    std::string tune_dump;
    auto* ctune = app.add_subcommand("tune", "prescribed boundary momentum d = c L");
    ctune->add_option("mesh", tcfg.mesh_path, "mesh file")->required();
    ctune->add_option("--d", tcfg.d, "target momentum")->required();
    ctune->add_option("--tol", tcfg.tol, "relative tolerance on c_i L_i - d");
    ctune->add_option("--max-outer", tcfg.max_outer, "outer Newton iterations");
    ctune->add_option("-o,--out", tcfg.out, "report file prefix");
    ctune->add_option("--dump-config", tune_dump, "write the run config as JSON");

    SweepCmdConfig swcfg;
    std::string sweep_dump;
    auto* csweep = app.add_subcommand("sweep", "degeneration sweep over a family");
    csweep->add_option("family", swcfg.family, "annulus or pants")->required();
    csweep->add_option("--T", swcfg.T, "annulus moduli")->delimiter(',');
    csweep->add_option("--a", swcfg.a, "pants hole offsets")->delimiter(',');
    csweep->add_option("--d", swcfg.d, "target momentum")->required();
    csweep->add_option("--nth", swcfg.nth, "annulus angular resolution");
    csweep->add_option("--R", swcfg.R, "pants outer radius");
    csweep->add_option("--r", swcfg.r, "pants hole radius");
    csweep->add_option("--n", swcfg.n, "pants resolution");
    csweep->add_option("--tol", swcfg.tol, "tuner tolerance");
    csweep->add_option("--threads", swcfg.threads,
                       "worker threads (default: HYPUNI_THREADS or hardware)");
    csweep->add_option("-o,--out", swcfg.out, "output CSV (default stdout)");
    csweep->add_option("--dump-config", sweep_dump, "write the run config as JSON");

    ModulusCmdConfig mcfg;
    std::string modulus_dump;
    auto* cmod = app.add_subcommand("modulus", "conformal modulus via harmonic capacity");
    cmod->add_option("mesh", mcfg.mesh_path, "mesh file")->required();
    cmod->add_option("--loop", mcfg.loop, "boundary loop index");
    cmod->add_option("--dump-config", modulus_dump, "write the run config as JSON");

    VerifyCmdConfig vcfg;
    std::string verify_dump;
    auto* cver = app.add_subcommand("verify", "run the identity/property suite");
    cver->add_option("--seed", vcfg.seed, "seed for the randomized suites");
    cver->add_option("--samples", vcfg.samples, "randomized sample count");
    cver->add_flag("--quick", vcfg.quick, "skip the discrete-solve checks");
    cver->add_option("--csv", vcfg.csv, "dump the sampled collar identity table");
    cver->add_option("--dump-config", verify_dump, "write the run config as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (!json_config.empty()) {
            std::ifstream in(json_config);
            if (!in) throw std::invalid_argument("cannot open " + json_config);
            json cfg = json::parse(in);
            return run_from_json(cfg);
        }
        if (cgen->parsed()) {
            maybe_dump_config(gen_dump, to_json(gen));
            return run_gen(gen);
        }
        if (csolve->parsed()) {
            maybe_dump_config(solve_dump, to_json(scfg));
            return run_solve(scfg);
        }
        if (ctune->parsed()) {
            maybe_dump_config(tune_dump, to_json(tcfg));
            return run_tune(tcfg);
        }
        if (csweep->parsed()) {
            maybe_dump_config(sweep_dump, to_json(swcfg));
            return run_sweep(swcfg);
        }
        if (cmod->parsed()) {
            maybe_dump_config(modulus_dump, to_json(mcfg));
            return run_modulus(mcfg);
        }
        if (cver->parsed()) {
            maybe_dump_config(verify_dump, to_json(vcfg));
            return run_verify(vcfg);
        }
        std::cerr << app.help();
        return kExitUsage;
    } catch (const solver::InfeasibleTopologyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const solver::SolveError& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (!e.residual_history.empty()) {
            std::cerr << "residual history:";
            for (double r : e.residual_history) std::cerr << " " << fmt(r);
            std::cerr << "\n";
        }
        return kExitNumerical;
    } catch (const QuadratureError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const json::exception& e) {
        std::cerr << "error: bad config: " << e.what() << "\n";
        return kExitUsage;
    } catch (const MeshError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
