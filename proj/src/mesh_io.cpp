#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "hypuni/mesh.hpp"

namespace hypuni {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& msg) {
    throw MeshError(path + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

void write_mesh(const TriMesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw MeshError("cannot open " + path + " for writing");
    out << "vertices\n";
    for (int v = 0; v < mesh.n_vertices; ++v) {
        out << v;
        if (mesh.position_dim >= 2)
            out << ' ' << fmt(mesh.positions[v][0]) << ' ' << fmt(mesh.positions[v][1]);
        if (mesh.position_dim == 3) out << ' ' << fmt(mesh.positions[v][2]);
        out << '\n';
    }
    out << "faces\n";
    for (const auto& f : mesh.faces) out << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
    out << "loops\n";
    for (const auto& lp : mesh.boundary_loops) {
        for (size_t m = 0; m < lp.size(); ++m) out << (m ? " " : "") << lp[m];
        out << '\n';
    }
    out << "edge_lengths\n";
    for (int idx = 0; idx < mesh.n_edges(); ++idx)
        out << mesh.edges[idx][0] << ' ' << mesh.edges[idx][1] << ' '
            << fmt(mesh.edge_lengths[idx]) << '\n';
    if (!out) throw MeshError("write to " + path + " failed");
}

TriMesh read_mesh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MeshError("cannot open " + path);

    enum class Section { None, Vertices, Faces, Loops, EdgeLengths };
    Section sec = Section::None;

    struct VertexRow {
        int index;
        std::vector<double> coords;
    };
    std::vector<VertexRow> vrows;
    std::vector<std::array<int, 3>> faces;
    std::vector<std::vector<int>> loops;
    struct LengthRow {
        int i, j;
        double len;
        int line;
    };
    std::vector<LengthRow> lrows;
    bool saw_lengths_section = false;

    std::string line;
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        std::string trimmed = line;
        const auto h = trimmed.find('#');
        if (h != std::string::npos) trimmed.erase(h);
        std::istringstream iss(trimmed);
        std::string first;
        if (!(iss >> first)) continue;  // blank/comment

        if (first == "vertices") { sec = Section::Vertices; continue; }
        if (first == "faces") { sec = Section::Faces; continue; }
        if (first == "loops") { sec = Section::Loops; continue; }
        if (first == "edge_lengths") { sec = Section::EdgeLengths; saw_lengths_section = true; continue; }

        std::istringstream row(trimmed);
        switch (sec) {
            case Section::None:
                parse_fail(path, ln, "expected a section header, got '" + first + "'");
            case Section::Vertices: {
                VertexRow vr;
                if (!(row >> vr.index)) parse_fail(path, ln, "bad vertex index");
                double x;
                while (row >> x) vr.coords.push_back(x);
                if (vr.coords.size() > 3)
                    parse_fail(path, ln, "too many vertex coordinates");
                vrows.push_back(std::move(vr));
                break;
            }
            case Section::Faces: {
                std::array<int, 3> f;
                if (!(row >> f[0] >> f[1] >> f[2]))
                    parse_fail(path, ln, "face " + std::to_string(faces.size()) +
                                             " needs three vertex indices");
                std::string extra;
                if (row >> extra)
                    parse_fail(path, ln, "trailing tokens after face " +
                                             std::to_string(faces.size()));
                faces.push_back(f);
                break;
            }
            case Section::Loops: {
                std::vector<int> lp;
                int v;
                std::istringstream row2(trimmed);
                while (row2 >> v) lp.push_back(v);
                if (row2.fail() && !row2.eof())
                    parse_fail(path, ln, "bad vertex index in loop");
                loops.push_back(std::move(lp));
                break;
            }
            case Section::EdgeLengths: {
                LengthRow lr;
                lr.line = ln;
                if (!(row >> lr.i >> lr.j >> lr.len))
                    parse_fail(path, ln, "edge length rows are 'i j length'");
                lrows.push_back(lr);
                break;
            }
        }
    }

    TriMesh mesh;
    mesh.n_vertices = static_cast<int>(vrows.size());
    if (mesh.n_vertices == 0) throw MeshError(path + ": no vertices");

    size_t dim = vrows.front().coords.size();
    std::vector<char> present(mesh.n_vertices, 0);
    mesh.positions.assign(mesh.n_vertices, {0.0, 0.0, 0.0});
    for (const auto& vr : vrows) {
        if (vr.index < 0 || vr.index >= mesh.n_vertices)
            throw MeshError(path + ": vertex index " + std::to_string(vr.index) +
                            " outside 0.." + std::to_string(mesh.n_vertices - 1));
        if (present[vr.index])
            throw MeshError(path + ": duplicate vertex index " + std::to_string(vr.index));
        present[vr.index] = 1;
        if (vr.coords.size() != dim)
            throw MeshError(path + ": vertex " + std::to_string(vr.index) +
                            " has inconsistent coordinate count");
        for (size_t t = 0; t < vr.coords.size(); ++t)
            mesh.positions[vr.index][t] = vr.coords[t];
    }
    mesh.position_dim = dim == 0 ? 0 : (dim == 1 ? 2 : static_cast<int>(dim));
    if (dim == 1) throw MeshError(path + ": vertices need 0, 2 or 3 coordinates");
    if (mesh.position_dim == 0) mesh.positions.clear();

    for (size_t fi = 0; fi < faces.size(); ++fi)
        for (int e = 0; e < 3; ++e)
            if (faces[fi][e] < 0 || faces[fi][e] >= mesh.n_vertices)
                throw MeshError(path + ": face " + std::to_string(fi) +
                                " references unknown vertex " +
                                std::to_string(faces[fi][e]));
    mesh.faces = std::move(faces);
    mesh.boundary_loops = std::move(loops);
    mesh.rebuild_edges();

    if (saw_lengths_section && !lrows.empty()) {
        std::vector<char> have(mesh.n_edges(), 0);
        for (const auto& lr : lrows) {
            const int idx = mesh.edge_index(lr.i, lr.j);
            if (idx < 0)
                parse_fail(path, lr.line,
                           "length given for nonexistent edge (" + std::to_string(lr.i) +
                               "," + std::to_string(lr.j) + ")");
            if (have[idx])
                parse_fail(path, lr.line, "duplicate length for edge (" +
                                              std::to_string(lr.i) + "," +
                                              std::to_string(lr.j) + ")");
            have[idx] = 1;
            mesh.edge_lengths[idx] = lr.len;
        }
        for (int idx = 0; idx < mesh.n_edges(); ++idx)
            if (!have[idx])
                throw MeshError(path + ": missing length for edge (" +
                                std::to_string(mesh.edges[idx][0]) + "," +
                                std::to_string(mesh.edges[idx][1]) + ")");
    } else if (mesh.position_dim != 0) {
        // documented fallback: derive the metric from positions
        mesh.lengths_from_positions();
    } else {
        throw MeshError(path + ": no edge_lengths section and no vertex positions");
    }

    mesh.validate();
    return mesh;
}

}  // namespace hypuni
