#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <array>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace hypuni {

struct MeshError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Triangulated surface with boundary, carrying the background metric g0
/// intrinsically as positive edge lengths. Positions are optional (2D or 3D);
/// all geometry uses the edge lengths.
struct TriMesh {
    int n_vertices = 0;
    int position_dim = 0;  // 0 (none), 2, or 3
    std::vector<std::array<double, 3>> positions;
    std::vector<std::array<int, 3>> faces;  // positively oriented triples
    std::vector<std::vector<int>> boundary_loops;  // ordered cyclic vertex lists

    std::vector<std::array<int, 2>> edges;  // canonical (i<j), lexicographic
    std::vector<double> edge_lengths;

    /// Rebuild the canonical edge list (and lookup) from the faces.
    /// Existing lengths are dropped.
    void rebuild_edges();
    int edge_index(int i, int j) const;  // -1 if absent
    double edge_length(int i, int j) const;

    int n_edges() const { return static_cast<int>(edges.size()); }
    int n_faces() const { return static_cast<int>(faces.size()); }
    int n_loops() const { return static_cast<int>(boundary_loops.size()); }
    int euler_characteristic() const;
    int genus() const;

    /// Compute edge lengths from stored positions (Euclidean chords).
    void lengths_from_positions();

    /// Check every structural invariant; throws MeshError listing all
    /// violations found.
    void validate() const;

  private:
    std::unordered_map<long long, int> edge_lookup_;
};

/// Lumped discretization of the background metric: cotan stiffness (weak
/// -Laplace), vertex areas A_v, boundary masses B_v, and the integrated
/// curvature Omega_v (angle defect 2pi - sum at interior vertices,
/// pi - sum at boundary vertices).
struct BackgroundMetric {
    Eigen::SparseMatrix<double> stiffness;
    Eigen::VectorXd vertex_area;
    Eigen::VectorXd boundary_mass;
    Eigen::VectorXd integrated_curvature;
    std::vector<int> loop_of;  // boundary loop index per vertex, -1 interior
    double total_area = 0.0;
};

BackgroundMetric build_background(const TriMesh& mesh);

/// Regular grid on the flat cylinder [0,T] x S^1, split into triangles with
/// the diagonal direction alternating row by row. Two boundary loops of
/// combinatorial length n_th; loop 0 at s=0, loop 1 at s=T.
TriMesh generate_flat_annulus(double T, int n_s, int n_th);

/// Planar domain: disk of radius R minus two disks of radius r centered at
/// (+-a, 0), Delaunay-triangulated; chi = -1, three boundary loops ordered
/// outer, hole at +a, hole at -a. n is the vertex count on the outer circle.
TriMesh generate_pants_domain(double R = 3.0, double r = 0.8, double a = 1.4,
                              int n = 64);

TriMesh read_mesh(const std::string& path);
void write_mesh(const TriMesh& mesh, const std::string& path);

}  // namespace hypuni
