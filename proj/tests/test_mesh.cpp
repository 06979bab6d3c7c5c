#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "hypuni/mesh.hpp"

using namespace hypuni;

namespace {
constexpr double kPi = std::numbers::pi;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}
}  // namespace

TEST_SUITE_BEGIN("mesh");

TEST_CASE("flat annulus combinatorics") {
    const TriMesh mesh = generate_flat_annulus(kPi, 4, 8);
    CHECK(mesh.n_vertices == 40);
    CHECK(mesh.euler_characteristic() == 0);
    CHECK(mesh.n_loops() == 2);
    CHECK(mesh.genus() == 0);

    // both background loop lengths are exactly 2 pi on the straight grid
    for (const auto& lp : mesh.boundary_loops) {
        double len = 0.0;
        for (size_t m = 0; m < lp.size(); ++m)
            len += mesh.edge_length(lp[m], lp[(m + 1) % lp.size()]);
        CHECK(len == doctest::Approx(2.0 * kPi).epsilon(1e-14));
    }

    // refinement halves the longest edge
    auto max_edge = [](const TriMesh& m) {
        double mx = 0.0;
        for (double l : m.edge_lengths) mx = std::max(mx, l);
        return mx;
    };
    CHECK(max_edge(generate_flat_annulus(kPi, 8, 16)) ==
          doctest::Approx(0.5 * max_edge(mesh)).epsilon(1e-12));

    CHECK_THROWS_AS(generate_flat_annulus(-1.0, 4, 8), MeshError);
    CHECK_THROWS_AS(generate_flat_annulus(1.0, 1, 8), MeshError);
}

TEST_CASE("generators are deterministic") {
    const std::string p1 = temp_path("hypuni_det1.mesh");
    const std::string p2 = temp_path("hypuni_det2.mesh");
    write_mesh(generate_flat_annulus(2.5, 6, 10), p1);
    write_mesh(generate_flat_annulus(2.5, 6, 10), p2);
    CHECK(slurp(p1) == slurp(p2));
    write_mesh(generate_pants_domain(3.0, 0.8, 1.4, 48), p1);
    write_mesh(generate_pants_domain(3.0, 0.8, 1.4, 48), p2);
    CHECK(slurp(p1) == slurp(p2));
}

TEST_CASE("background metric on the flat annulus") {
    const TriMesh mesh = generate_flat_annulus(kPi, 6, 12);
    const BackgroundMetric bg = build_background(mesh);

    // flat grid: zero angle defect everywhere, and exactly on the boundary too
    for (int v = 0; v < mesh.n_vertices; ++v) {
        CHECK(std::abs(bg.integrated_curvature[v]) <= 1e-12);
        CHECK(bg.vertex_area[v] > 0.0);
        if (bg.loop_of[v] >= 0) CHECK(bg.boundary_mass[v] > 0.0);
        else CHECK(bg.boundary_mass[v] == 0.0);
    }
    CHECK(std::abs(bg.integrated_curvature.sum()) <= 1e-9);
    CHECK(bg.total_area == doctest::Approx(2.0 * kPi * kPi).epsilon(1e-13));

    // stiffness rows sum to zero
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(mesh.n_vertices);
    CHECK((bg.stiffness * ones).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("pants domain: topology and curvature bookkeeping") {
    const TriMesh mesh = generate_pants_domain();
    CHECK(mesh.euler_characteristic() == -1);
    CHECK(mesh.n_loops() == 3);
    const BackgroundMetric bg = build_background(mesh);

    // discrete Gauss-Bonnet: flat interior, boundary turning accounts for all
    CHECK(bg.integrated_curvature.sum() == doctest::Approx(-2.0 * kPi).epsilon(1e-9));

    // outer loop turns by +2pi, each hole by -2pi
    std::vector<double> turning(3, 0.0);
    for (int li = 0; li < 3; ++li)
        for (int v : mesh.boundary_loops[li]) turning[li] += bg.integrated_curvature[v];
    CHECK(turning[0] == doctest::Approx(2.0 * kPi).epsilon(1e-9));
    CHECK(turning[1] == doctest::Approx(-2.0 * kPi).epsilon(1e-9));
    CHECK(turning[2] == doctest::Approx(-2.0 * kPi).epsilon(1e-9));

    // loop ordering contract: outer first, then the hole at +a
    double cx1 = 0.0, cx2 = 0.0;
    for (int v : mesh.boundary_loops[1]) cx1 += mesh.positions[v][0];
    for (int v : mesh.boundary_loops[2]) cx2 += mesh.positions[v][0];
    CHECK(cx1 / mesh.boundary_loops[1].size() > 0.5);
    CHECK(cx2 / mesh.boundary_loops[2].size() < -0.5);

    CHECK_THROWS_AS(generate_pants_domain(3.0, 0.8, 2.5, 48), MeshError);
    CHECK_THROWS_AS(generate_pants_domain(3.0, 1.5, 1.4, 48), MeshError);
}

TEST_CASE("validation rejects broken meshes") {
    // one triangle: chi = 1 > 0
    TriMesh tri;
    tri.n_vertices = 3;
    tri.faces = {{0, 1, 2}};
    tri.boundary_loops = {{0, 1, 2}};
    tri.rebuild_edges();
    tri.edge_lengths = {1.0, 1.0, 1.0};
    CHECK_THROWS_WITH_AS(tri.validate(), doctest::Contains("chi"), MeshError);

    // orientation flip: one face wound the wrong way
    TriMesh ann = generate_flat_annulus(1.0, 2, 4);
    std::swap(ann.faces[0][0], ann.faces[0][1]);
    CHECK_THROWS_WITH_AS(ann.validate(), doctest::Contains("orientation"), MeshError);

    // broken triangle inequality
    TriMesh ann2 = generate_flat_annulus(1.0, 2, 4);
    ann2.edge_lengths[0] = 100.0;
    CHECK_THROWS_WITH_AS(ann2.validate(), doctest::Contains("triangle inequality"),
                         MeshError);

    // boundary loops must cover the boundary
    TriMesh ann3 = generate_flat_annulus(1.0, 2, 4);
    ann3.boundary_loops.pop_back();
    CHECK_THROWS_AS(ann3.validate(), MeshError);
}

TEST_CASE("mesh file round trip is bit-exact") {
    const std::string p1 = temp_path("hypuni_rt1.mesh");
    const std::string p2 = temp_path("hypuni_rt2.mesh");
    for (const TriMesh& mesh :
         {generate_flat_annulus(kPi / 3.0, 5, 9), generate_pants_domain(3, 0.8, 1.4, 32)}) {
        write_mesh(mesh, p1);
        const TriMesh back = read_mesh(p1);
        CHECK(back.n_vertices == mesh.n_vertices);
        CHECK(back.faces == mesh.faces);
        CHECK(back.boundary_loops == mesh.boundary_loops);
        CHECK(back.edge_lengths == mesh.edge_lengths);
        CHECK(back.positions == mesh.positions);
        write_mesh(back, p2);
        CHECK(slurp(p1) == slurp(p2));
    }
}

TEST_CASE("mesh reader: fallback and errors") {
    const std::string path = temp_path("hypuni_reader.mesh");
    // no edge_lengths section: derive from positions
    {
        std::ofstream out(path);
        out << "vertices\n";
        const TriMesh ann = generate_flat_annulus(1.0, 2, 4);
        TriMesh flatpos = ann;
        // make chord lengths the intended metric by writing positions only
        for (int v = 0; v < ann.n_vertices; ++v)
            out << v << " " << ann.positions[v][0] << " " << ann.positions[v][1] << " "
                << ann.positions[v][2] << "\n";
        out << "faces\n";
        for (const auto& f : ann.faces) out << f[0] << " " << f[1] << " " << f[2] << "\n";
        out << "loops\n";
        for (const auto& lp : ann.boundary_loops) {
            for (size_t m = 0; m < lp.size(); ++m) out << (m ? " " : "") << lp[m];
            out << "\n";
        }
    }
    const TriMesh derived = read_mesh(path);
    CHECK(derived.edge_lengths.size() == derived.edges.size());
    for (int e = 0; e < derived.n_edges(); ++e) {
        const auto& p = derived.positions[derived.edges[e][0]];
        const auto& q = derived.positions[derived.edges[e][1]];
        const double chord = std::sqrt((p[0] - q[0]) * (p[0] - q[0]) +
                                       (p[1] - q[1]) * (p[1] - q[1]) +
                                       (p[2] - q[2]) * (p[2] - q[2]));
        CHECK(derived.edge_lengths[e] == doctest::Approx(chord).epsilon(1e-15));
    }

    // no positions and no lengths: error
    {
        std::ofstream out(path);
        out << "vertices\n0\n1\n2\n3\nfaces\n0 1 2\n";
    }
    CHECK_THROWS_WITH_AS(read_mesh(path), doctest::Contains("edge_lengths"), MeshError);

    // malformed face line carries the line number
    {
        std::ofstream out(path);
        out << "vertices\n0 0 0\n1 1 0\n2 0 1\nfaces\n0 1 x\n";
    }
    CHECK_THROWS_WITH_AS(read_mesh(path), doctest::Contains(":6:"), MeshError);

    // face referencing a vertex that does not exist
    {
        std::ofstream out(path);
        out << "vertices\n0 0 0\n1 1 0\n2 0 1\nfaces\n0 1 7\n";
    }
    CHECK_THROWS_WITH_AS(read_mesh(path), doctest::Contains("face 0"), MeshError);
}

TEST_SUITE_END();
