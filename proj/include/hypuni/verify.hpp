#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "hypuni/mesh.hpp"
#include "hypuni/solver.hpp"
#include "hypuni/tuner.hpp"

namespace hypuni::verify {

/// |{-Area_g + sum_i c_i L_i} - 2 pi chi|: the Gauss-Bonnet defect of the
/// metric e^{2u} g0. At a converged solve this equals |sum_v R_v|.
double gauss_bonnet_residual(const TriMesh& mesh, const BackgroundMetric& bg,
                             const Eigen::VectorXd& u, const solver::CurvatureSpec& c);

/// Per-loop identity table for a converged tune: momentum defect, geodesic
/// length from L^2 - ell^2 = d^2, and the collar-coordinate consistency
/// Y(ell, c) = Xbar_d(ell).
struct MdIdentityRow {
    int loop = 0;
    bool feasible = true;  // false when L <= d (unconverged or buggy input)
    double cL_minus_d = 0.0;
    double ell = 0.0;
    double Y = 0.0;
    double Xbar = 0.0;
    double Y_minus_Xbar = 0.0;
};
std::vector<MdIdentityRow> md_identities(const solver::SolveReport& report, double d);

/// Conformal modulus of the annular region separating loop_index from the
/// rest of the boundary: Z = pi / E(h) with h the discrete harmonic function
/// that is 1 on the loop and 0 on the other boundary curves.
double conformal_modulus(const TriMesh& mesh, const BackgroundMetric& bg,
                         int loop_index);

/// One member of the annulus degeneration family.
struct AnnulusSweepRow {
    double T = 0.0;
    bool converged = false;
    std::string error;
    std::vector<double> c, L, ell;  // tuned values; ell_i = sqrt(L_i^2 - d^2)
    std::vector<double> X, Xbar;    // collar widths at ell_i
    double area = 0.0;
    double residual_norm = 0.0;
    int newton_iterations = 0;
    int outer_iterations = 0;
    double ell_cylinder = 0.0;  // independent cross-check (4 pi / T) asin(c_0)
    double modulus = 0.0;       // measured conformal modulus Z
    double ell_type1 = 0.0;     // 2 pi^2 / Z: the collapsing type-I comparison
};

/// Run tune_d over a family of flat annuli of moduli Ts (grid n_th x ~n_th
/// per 2pi of modulus). Failures are recorded per member; the sweep continues.
std::vector<AnnulusSweepRow> annulus_degeneration_sweep(
    const std::vector<double>& Ts, double d, int n_th, const tuner::TuneConfig& config,
    int threads = 0);

std::string annulus_sweep_csv(const std::vector<AnnulusSweepRow>& rows);

/// Pants pinch family: hole offset a sweeps toward R - r. Records the tuned
/// metric and the c = 0 (type-I) boundary lengths for the collapse contrast.
struct PantsSweepRow {
    double a = 0.0;
    bool converged = false;
    std::string error;
    std::vector<double> c, L, ell;
    double area = 0.0;
    double residual_norm = 0.0;
    int newton_iterations = 0;
    std::vector<double> L_type1;  // boundary lengths of the c = 0 solve
};
std::vector<PantsSweepRow> pants_degeneration_sweep(const std::vector<double>& as,
                                                    double d, double R, double r, int n,
                                                    const tuner::TuneConfig& config,
                                                    int threads = 0);
std::string pants_sweep_csv(const std::vector<PantsSweepRow>& rows);

/// Randomized trace-inequality suite: (est. on collars) random polynomial
/// radial functions on random (ell, c) half-collars, plus the euclidean
/// cylinder trace inequality with linear profiles, plus the constant-w
/// equality cases.
struct TraceSuiteReport {
    int cases = 0;
    int violations = 0;
    double worst_slack = 0.0;        // min over cases of rhs - lhs (>= -tol)
    double max_equality_gap = 0.0;   // constant-w cases, |lhs - rhs|
    bool all_hold = true;
    std::vector<std::string> notes;
};
TraceSuiteReport trace_suite(int samples, std::uint64_t seed);

/// Sampled collar identity table (the CSV dump the CLI exposes).
struct CollarSampleRow {
    double ell, c, d, L, Y, Xbar, X, halfcollar_area, curvature_at_Y;
};
std::vector<CollarSampleRow> sample_collar_identities(int samples, std::uint64_t seed);
std::string collar_samples_csv(const std::vector<CollarSampleRow>& rows);

}  // namespace hypuni::verify
