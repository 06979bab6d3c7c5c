#include <Eigen/SparseCore>
#include <cmath>
#include <numbers>
#include <vector>

#include "hypuni/mesh.hpp"

namespace hypuni {

namespace {
constexpr double kPi = std::numbers::pi;

// interior angle at the vertex opposite side a, from the law of cosines
double corner_angle(double a, double b, double c, int face_index) {
    const double cosv = (b * b + c * c - a * a) / (2.0 * b * c);
    if (!(cosv > -1.0 && cosv < 1.0))
        throw MeshError("degenerate corner in face " + std::to_string(face_index));
    return std::acos(cosv);
}
}  // namespace

BackgroundMetric build_background(const TriMesh& mesh) {
    mesh.validate();
    const int V = mesh.n_vertices;

    BackgroundMetric bg;
    bg.vertex_area = Eigen::VectorXd::Zero(V);
    bg.boundary_mass = Eigen::VectorXd::Zero(V);
    bg.loop_of.assign(V, -1);
    Eigen::VectorXd angle_sum = Eigen::VectorXd::Zero(V);

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(mesh.n_faces() * 12);

    for (int fi = 0; fi < mesh.n_faces(); ++fi) {
        const auto& f = mesh.faces[fi];
        const double la = mesh.edge_length(f[1], f[2]);
        const double lb = mesh.edge_length(f[0], f[2]);
        const double lc = mesh.edge_length(f[0], f[1]);
        const double ang[3] = {corner_angle(la, lb, lc, fi),
                               corner_angle(lb, lc, la, fi),
                               corner_angle(lc, la, lb, fi)};
        const double s = 0.5 * (la + lb + lc);
        const double area = std::sqrt(s * (s - la) * (s - lb) * (s - lc));
        if (!(area > 0.0))
            throw MeshError("degenerate face " + std::to_string(fi) + " (zero area)");
        for (int e = 0; e < 3; ++e) {
            angle_sum[f[e]] += ang[e];
            bg.vertex_area[f[e]] += area / 3.0;
            // half-cotan of the angle opposite edge (f[e+1], f[e+2])
            const double w = 0.5 * std::cos(ang[e]) / std::sin(ang[e]);
            const int u = f[(e + 1) % 3], v = f[(e + 2) % 3];
            trip.emplace_back(u, v, -w);
            trip.emplace_back(v, u, -w);
            trip.emplace_back(u, u, w);
            trip.emplace_back(v, v, w);
        }
        bg.total_area += area;
    }
    bg.stiffness.resize(V, V);
    bg.stiffness.setFromTriplets(trip.begin(), trip.end());

    std::vector<char> on_boundary(V, 0);
    for (int li = 0; li < mesh.n_loops(); ++li) {
        const auto& lp = mesh.boundary_loops[li];
        for (size_t m = 0; m < lp.size(); ++m) {
            const int u = lp[m], v = lp[(m + 1) % lp.size()];
            const double len = mesh.edge_length(u, v);
            bg.boundary_mass[u] += 0.5 * len;
            bg.boundary_mass[v] += 0.5 * len;
            bg.loop_of[u] = li;
            on_boundary[u] = 1;
        }
    }

    bg.integrated_curvature = Eigen::VectorXd::Zero(V);
    for (int v = 0; v < V; ++v)
        bg.integrated_curvature[v] = (on_boundary[v] ? kPi : 2.0 * kPi) - angle_sum[v];

    return bg;
}

}  // namespace hypuni
