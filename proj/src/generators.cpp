#include <algorithm>
#include <cstdint>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>
#include <vector>

#include "hypuni/mesh.hpp"

namespace hypuni {

namespace {
constexpr double kPi = std::numbers::pi;
}

TriMesh generate_flat_annulus(double T, int n_s, int n_th) {
    if (!(T > 0.0)) throw MeshError("annulus modulus T must be positive");
    if (n_s < 2 || n_th < 3) throw MeshError("annulus grid needs n_s >= 2, n_th >= 3");

    TriMesh mesh;
    mesh.n_vertices = (n_s + 1) * n_th;
    mesh.position_dim = 3;
    mesh.positions.resize(mesh.n_vertices);
    const double ds = T / n_s;
    const double dth = 2.0 * kPi / n_th;
    auto vid = [&](int i, int j) { return i * n_th + ((j % n_th + n_th) % n_th); };
    for (int i = 0; i <= n_s; ++i)
        for (int j = 0; j < n_th; ++j)
            mesh.positions[vid(i, j)] = {std::cos(j * dth), std::sin(j * dth), i * ds};

    // diagonal direction alternates per axial row: keeps the discrete system
    // rotation invariant and free of directional bias in the radial profile
    for (int i = 0; i < n_s; ++i) {
        for (int j = 0; j < n_th; ++j) {
            const int a = vid(i, j), b = vid(i + 1, j);
            const int c = vid(i + 1, j + 1), d = vid(i, j + 1);
            if (i % 2 == 0) {
                mesh.faces.push_back({a, b, c});
                mesh.faces.push_back({a, c, d});
            } else {
                mesh.faces.push_back({a, b, d});
                mesh.faces.push_back({b, c, d});
            }
        }
    }

    mesh.rebuild_edges();
    // intrinsic flat metric ds^2 + dth^2 (not the chord lengths of the
    // embedding)
    for (int idx = 0; idx < mesh.n_edges(); ++idx) {
        const int u = mesh.edges[idx][0], v = mesh.edges[idx][1];
        const int iu = u / n_th, ju = u % n_th;
        const int iv = v / n_th, jv = v % n_th;
        const double dsv = std::abs(iu - iv) * ds;
        int djj = std::abs(ju - jv);
        djj = std::min(djj, n_th - djj);
        const double dtv = djj * dth;
        mesh.edge_lengths[idx] = std::hypot(dsv, dtv);
    }

    mesh.boundary_loops.resize(2);
    for (int j = 0; j < n_th; ++j) {
        mesh.boundary_loops[0].push_back(vid(0, j));
        mesh.boundary_loops[1].push_back(vid(n_s, j));
    }
    mesh.validate();
    return mesh;
}

namespace {

struct Vec2 {
    double x, y;
};

struct DelaunayTri {
    int a, b, c;  // ccw
};

double orient2d(const Vec2& p, const Vec2& q, const Vec2& r) {
    return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
}

// > 0 when d lies inside the circumcircle of ccw triangle (a,b,c)
double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    const double adx = a.x - d.x, ady = a.y - d.y;
    const double bdx = b.x - d.x, bdy = b.y - d.y;
    const double cdx = c.x - d.x, cdy = c.y - d.y;
    const double ad = adx * adx + ady * ady;
    const double bd = bdx * bdx + bdy * bdy;
    const double cd = cdx * cdx + cdy * cdy;
    return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) +
           ad * (bdx * cdy - bdy * cdx);
}

// deterministic tie-breaking jitter: the generator's circle samples are
// exactly cocircular, which double-precision incircle tests cannot order
double hash_unit(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z = z ^ (z >> 31);
    return static_cast<double>(z >> 11) * 0x1.0p-53 - 0.5;
}

// Bowyer-Watson with a super-triangle; fine for the few thousand
// well-separated points the generator produces.
std::vector<DelaunayTri> delaunay(const std::vector<Vec2>& pts) {
    double span = 1.0;
    for (const auto& p : pts) span = std::max({span, std::abs(p.x), std::abs(p.y)});
    const double big = 64.0 * span;
    std::vector<Vec2> all = pts;
    const int s0 = static_cast<int>(all.size());
    all.push_back({-big, -big});
    all.push_back({big, -big});
    all.push_back({0.0, big});

    std::vector<DelaunayTri> tris{{s0, s0 + 1, s0 + 2}};
    for (int pi = 0; pi < s0; ++pi) {
        const Vec2& p = all[pi];
        std::vector<DelaunayTri> keep;
        std::map<std::pair<int, int>, int> cavity;  // directed boundary edges
        keep.reserve(tris.size() + 4);
        int n_bad = 0;
        for (const auto& t : tris) {
            if (incircle(all[t.a], all[t.b], all[t.c], p) > 0.0) {
                ++n_bad;
                for (auto [u, v] : {std::pair{t.a, t.b}, {t.b, t.c}, {t.c, t.a}}) {
                    // an edge interior to the cavity appears in both directions
                    auto rev = cavity.find({v, u});
                    if (rev != cavity.end())
                        rev->second++;
                    else
                        cavity[{u, v}] = 0;
                }
            } else {
                keep.push_back(t);
            }
        }
        int n_boundary = 0;
        for (const auto& [e, dead] : cavity)
            if (dead == 0) {
                keep.push_back({e.first, e.second, pi});
                ++n_boundary;
            }
        // a star-shaped cavity has exactly bad + 2 boundary edges
        if (n_bad == 0 || n_boundary != n_bad + 2)
            throw MeshError("Delaunay cavity degenerated while inserting point " +
                            std::to_string(pi));
        tris = std::move(keep);
    }

    std::vector<DelaunayTri> out;
    for (const auto& t : tris)
        if (t.a < s0 && t.b < s0 && t.c < s0) out.push_back(t);
    return out;
}

}  // namespace

TriMesh generate_pants_domain(double R, double r, double a, int n) {
    if (!(a + r < R) || !(r < a) || !(r > 0.0))
        throw MeshError("infeasible pants parameters: need 0 < r < a and a + r < R");
    if (n < 24) throw MeshError("pants resolution too coarse (need n >= 24)");

    const double h = 2.0 * kPi * R / n;
    std::vector<Vec2> pts;
    for (int k = 0; k < n; ++k) {
        const double t = 2.0 * kPi * k / n;
        pts.push_back({R * std::cos(t), R * std::sin(t)});
    }
    const int nh = std::max(12, static_cast<int>(std::lround(2.0 * kPi * r / h)));
    for (const double cx : {a, -a}) {
        for (int k = 0; k < nh; ++k) {
            const double t = 2.0 * kPi * k / nh;
            pts.push_back({cx + r * std::cos(t), r * std::sin(t)});
        }
    }
    const double margin = 0.7 * h;
    auto inside = [&](double x, double y, double m) {
        return std::hypot(x, y) < R - m && std::hypot(x - a, y) > r + m &&
               std::hypot(x + a, y) > r + m;
    };
    const double row_h = h * std::sqrt(3.0) / 2.0;
    int row = 0;
    for (double y = -R; y <= R; y += row_h, ++row) {
        for (double x = -R + (row % 2 ? 0.5 * h : 0.0); x <= R; x += h)
            if (inside(x, y, margin)) pts.push_back({x, y});
    }
    const double jit = 1e-7 * h;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        pts[i].x += jit * hash_unit(2 * i);
        pts[i].y += jit * hash_unit(2 * i + 1);
    }

    auto tris = delaunay(pts);

    TriMesh mesh;
    std::vector<int> remap(pts.size(), -1);
    for (const auto& t : tris) {
        const Vec2 cen{(pts[t.a].x + pts[t.b].x + pts[t.c].x) / 3.0,
                       (pts[t.a].y + pts[t.b].y + pts[t.c].y) / 3.0};
        if (!inside(cen.x, cen.y, 0.0)) continue;
        int f[3] = {t.a, t.b, t.c};
        if (orient2d(pts[f[0]], pts[f[1]], pts[f[2]]) < 0.0) std::swap(f[1], f[2]);
        for (int& v : f) {
            if (remap[v] < 0) {
                remap[v] = mesh.n_vertices++;
                mesh.positions.push_back({pts[v].x, pts[v].y, 0.0});
            }
            v = remap[v];
        }
        mesh.faces.push_back({f[0], f[1], f[2]});
    }
    mesh.position_dim = 2;
    mesh.rebuild_edges();
    mesh.lengths_from_positions();

    // boundary loops from the directed halfedges that lack a twin
    std::set<std::pair<int, int>> halfedges;
    for (const auto& f : mesh.faces)
        for (int e = 0; e < 3; ++e) halfedges.insert({f[e], f[(e + 1) % 3]});
    std::map<int, int> next;
    for (const auto& [u, v] : halfedges)
        if (!halfedges.count({v, u})) next[u] = v;

    std::vector<std::vector<int>> loops;
    std::set<int> seen;
    for (const auto& [start, _] : next) {
        if (seen.count(start)) continue;
        std::vector<int> lp{start};
        seen.insert(start);
        for (int v = next.at(start); v != start; v = next.at(v)) {
            lp.push_back(v);
            seen.insert(v);
        }
        loops.push_back(std::move(lp));
    }
    if (loops.size() != 3)
        throw MeshError("pants generator produced " + std::to_string(loops.size()) +
                        " boundary loops (expected 3); adjust parameters");

    // order: outer loop first, then hole at +a, then hole at -a
    auto centroid_x = [&](const std::vector<int>& lp) {
        double cx = 0.0;
        for (int v : lp) cx += mesh.positions[v][0];
        return cx / static_cast<double>(lp.size());
    };
    auto max_radius = [&](const std::vector<int>& lp) {
        double m = 0.0;
        for (int v : lp) m = std::max(m, std::hypot(mesh.positions[v][0], mesh.positions[v][1]));
        return m;
    };
    std::sort(loops.begin(), loops.end(), [&](const auto& p, const auto& q) {
        const double rp = max_radius(p), rq = max_radius(q);
        if (std::abs(rp - rq) > 1e-9) return rp > rq;
        return centroid_x(p) > centroid_x(q);
    });
    mesh.boundary_loops = std::move(loops);
    mesh.validate();
    return mesh;
}

}  // namespace hypuni
