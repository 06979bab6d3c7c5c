#include "hypuni/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace hypuni {

namespace {
long long edge_key(int i, int j) {
    if (i > j) std::swap(i, j);
    return (static_cast<long long>(i) << 32) | static_cast<unsigned>(j);
}
}  // namespace

void TriMesh::rebuild_edges() {
    edges.clear();
    edge_lengths.clear();
    edge_lookup_.clear();
    std::set<std::array<int, 2>> eset;
    for (const auto& f : faces) {
        for (int e = 0; e < 3; ++e) {
            int u = f[e], v = f[(e + 1) % 3];
            if (u > v) std::swap(u, v);
            eset.insert({u, v});
        }
    }
    edges.assign(eset.begin(), eset.end());
    edge_lengths.assign(edges.size(), 0.0);
    for (int idx = 0; idx < static_cast<int>(edges.size()); ++idx)
        edge_lookup_[edge_key(edges[idx][0], edges[idx][1])] = idx;
}

int TriMesh::edge_index(int i, int j) const {
    auto it = edge_lookup_.find(edge_key(i, j));
    return it == edge_lookup_.end() ? -1 : it->second;
}

double TriMesh::edge_length(int i, int j) const {
    const int idx = edge_index(i, j);
    if (idx < 0)
        throw MeshError("no edge between vertices " + std::to_string(i) + " and " +
                        std::to_string(j));
    return edge_lengths[idx];
}

int TriMesh::euler_characteristic() const {
    return n_vertices - n_edges() + n_faces();
}

int TriMesh::genus() const {
    return (2 - euler_characteristic() - n_loops()) / 2;
}

void TriMesh::lengths_from_positions() {
    if (position_dim == 0)
        throw MeshError("cannot derive edge lengths: mesh has no vertex positions");
    for (int idx = 0; idx < n_edges(); ++idx) {
        const auto& p = positions[edges[idx][0]];
        const auto& q = positions[edges[idx][1]];
        edge_lengths[idx] = std::sqrt((p[0] - q[0]) * (p[0] - q[0]) +
                                      (p[1] - q[1]) * (p[1] - q[1]) +
                                      (p[2] - q[2]) * (p[2] - q[2]));
    }
}

void TriMesh::validate() const {
    std::vector<std::string> problems;
    auto complain = [&](const std::string& msg) { problems.push_back(msg); };

    if (n_vertices <= 0) complain("mesh has no vertices");
    if (faces.empty()) complain("mesh has no faces");
    if (position_dim != 0 && static_cast<int>(positions.size()) != n_vertices)
        complain("positions size does not match vertex count");
    if (static_cast<int>(edge_lengths.size()) != n_edges())
        complain("edge length table does not match edge list");

    // face sanity + directed halfedges
    std::map<std::pair<int, int>, int> halfedge_count;
    std::vector<char> used(static_cast<size_t>(std::max(n_vertices, 0)), 0);
    for (int fi = 0; fi < n_faces(); ++fi) {
        const auto& f = faces[fi];
        bool bad = false;
        for (int e = 0; e < 3; ++e) {
            if (f[e] < 0 || f[e] >= n_vertices) {
                complain("face " + std::to_string(fi) + " references invalid vertex " +
                         std::to_string(f[e]));
                bad = true;
            }
        }
        if (bad) continue;
        if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) {
            complain("face " + std::to_string(fi) + " has a repeated vertex");
            continue;
        }
        for (int e = 0; e < 3; ++e) {
            used[f[e]] = 1;
            const int u = f[e], v = f[(e + 1) % 3];
            if (++halfedge_count[{u, v}] > 1)
                complain("directed edge (" + std::to_string(u) + "," +
                         std::to_string(v) +
                         ") appears in more than one face: inconsistent orientation");
        }
    }
    for (int v = 0; v < n_vertices; ++v)
        if (!used[v]) complain("vertex " + std::to_string(v) + " belongs to no face");

    // boundary edges carry exactly one of the two directions
    std::set<std::pair<int, int>> boundary_edges;
    for (const auto& [he, cnt] : halfedge_count) {
        const auto [u, v] = he;
        if (!halfedge_count.count({v, u}))
            boundary_edges.insert({std::min(u, v), std::max(u, v)});
    }

    // boundary loops must partition the boundary edges
    if (boundary_loops.empty()) complain("mesh has no boundary loops (need k >= 1)");
    std::set<std::pair<int, int>> loop_edges;
    for (size_t li = 0; li < boundary_loops.size(); ++li) {
        const auto& lp = boundary_loops[li];
        if (lp.size() < 3) {
            complain("boundary loop " + std::to_string(li) + " has fewer than 3 vertices");
            continue;
        }
        for (size_t m = 0; m < lp.size(); ++m) {
            const int u = lp[m], v = lp[(m + 1) % lp.size()];
            if (u < 0 || u >= n_vertices || v < 0 || v >= n_vertices) {
                complain("boundary loop " + std::to_string(li) + " references invalid vertex");
                continue;
            }
            const auto key = std::make_pair(std::min(u, v), std::max(u, v));
            if (!boundary_edges.count(key))
                complain("loop " + std::to_string(li) + " edge (" + std::to_string(u) +
                         "," + std::to_string(v) + ") is not a boundary edge");
            if (!loop_edges.insert(key).second)
                complain("boundary edge (" + std::to_string(u) + "," + std::to_string(v) +
                         ") appears in more than one loop position");
        }
    }
    if (loop_edges.size() != boundary_edges.size())
        complain("boundary loops cover " + std::to_string(loop_edges.size()) +
                 " of " + std::to_string(boundary_edges.size()) + " boundary edges");

    // metric: positive lengths and strict triangle inequality
    for (int idx = 0; idx < std::min<int>(n_edges(), edge_lengths.size()); ++idx)
        if (!(edge_lengths[idx] > 0.0) || !std::isfinite(edge_lengths[idx]))
            complain("edge (" + std::to_string(edges[idx][0]) + "," +
                     std::to_string(edges[idx][1]) + ") has nonpositive length");
    for (int fi = 0; fi < n_faces(); ++fi) {
        const auto& f = faces[fi];
        const int ia = edge_index(f[1], f[2]);
        const int ib = edge_index(f[0], f[2]);
        const int ic = edge_index(f[0], f[1]);
        if (ia < 0 || ib < 0 || ic < 0) continue;  // reported above
        const double a = edge_lengths[ia], b = edge_lengths[ib], c = edge_lengths[ic];
        if (!(a + b > c && b + c > a && c + a > b))
            complain("face " + std::to_string(fi) + " violates the triangle inequality");
    }

    // topology: chi <= 0, chi = 0 only for the annulus
    const int chi = euler_characteristic();
    const int k = n_loops();
    if (chi > 0)
        complain("Euler characteristic chi=" + std::to_string(chi) +
                 " > 0: no such hyperbolic structure");
    if (chi == 0 && !(k == 2 && genus() == 0))
        complain("chi = 0 is admitted only for the annulus (k=2, genus 0)");
    if ((2 - chi - k) % 2 != 0)
        complain("chi and loop count are inconsistent (non-integer genus)");

    if (!problems.empty()) {
        std::ostringstream oss;
        oss << "invalid mesh (" << problems.size() << " problem"
            << (problems.size() == 1 ? "" : "s") << "):";
        for (const auto& p : problems) oss << "\n  - " << p;
        throw MeshError(oss.str());
    }
}

}  // namespace hypuni
