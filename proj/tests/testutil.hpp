#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "hypuni/mesh.hpp"

namespace testutil {

inline std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

// Annulus with a smooth non-constant conformal rescale of the background
// edge lengths. Same conformal class in the continuum, so the discrete
// modulus converges to T under refinement (unlike the straight grid, where
// it is exact and leaves nothing to measure).
inline hypuni::TriMesh distorted_annulus(double T, int n) {
    hypuni::TriMesh mesh = hypuni::generate_flat_annulus(T, n, n);
    constexpr double kPi = std::numbers::pi;
    auto phi = [&](int v) {
        const int i = v / n, j = v % n;
        const double s = i * (T / n), th = j * (2.0 * kPi / n);
        return 0.25 * std::sin(2.0 * kPi * s / T) * std::cos(th) +
               0.15 * std::cos(2.0 * th);
    };
    for (int e = 0; e < mesh.n_edges(); ++e)
        mesh.edge_lengths[e] *=
            std::exp(0.5 * (phi(mesh.edges[e][0]) + phi(mesh.edges[e][1])));
    mesh.validate();
    return mesh;
}

}  // namespace testutil
