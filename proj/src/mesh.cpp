#include "hfem/mesh.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "hfem/geometry.hpp"

namespace hfem {

namespace {

Mesh square_lattice(int L) {
    if (L < 1) throw std::invalid_argument("mesh subdivision L must be >= 1");
    Mesh m;
    m.domain_id = DomainId::unit_square;
    m.vertices.reserve((L + 1) * (L + 1));
    for (int j = 0; j <= L; ++j)
        for (int i = 0; i <= L; ++i)
            m.vertices.push_back({double(i) / L, double(j) / L});

    auto vid = [L](int i, int j) { return j * (L + 1) + i; };
    m.triangles.reserve(2 * L * L);
    for (int j = 0; j < L; ++j) {
        for (int i = 0; i < L; ++i) {
            const int v00 = vid(i, j), v10 = vid(i + 1, j);
            const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
            // diagonal parallel to x1 = x2
            m.triangles.push_back({v00, v10, v11});
            m.triangles.push_back({v00, v11, v01});
        }
    }
    return m;
}

void check_positive_areas(const Mesh& m) {
    for (int t = 0; t < m.n_triangles(); ++t) {
        const auto& tri = m.triangles[t];
        const auto& a = m.vertices[tri[0]];
        const auto& b = m.vertices[tri[1]];
        const auto& c = m.vertices[tri[2]];
        const double twice = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
        if (!(twice > 0.0)) throw std::runtime_error("triangle with non-positive area");
    }
}

} // namespace

void build_edge_topology(Mesh& m) {
    m.edges.clear();
    m.tri_edges.assign(m.triangles.size(), {-1, -1, -1});
    m.tri_sigma.assign(m.triangles.size(), {0.0, 0.0, 0.0});

    std::map<std::pair<int, int>, int> index;
    for (int t = 0; t < m.n_triangles(); ++t) {
        const auto& tri = m.triangles[t];
        for (int k = 0; k < 3; ++k) {
            // edge opposite local vertex k
            const int a = tri[(k + 1) % 3], b = tri[(k + 2) % 3];
            const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
            auto [it, inserted] = index.try_emplace(key, m.n_edges());
            if (inserted) {
                EdgeRecord e;
                e.v0 = key.first;
                e.v1 = key.second;
                const auto& p0 = m.vertices[e.v0];
                const auto& p1 = m.vertices[e.v1];
                const double dx = p1[0] - p0[0], dy = p1[1] - p0[1];
                e.length = std::hypot(dx, dy);
                e.nx = dy / e.length;
                e.ny = -dx / e.length;
                e.tri[0] = t;
                m.edges.push_back(e);
            } else {
                EdgeRecord& e = m.edges[it->second];
                if (e.tri[1] >= 0) throw std::runtime_error("non-manifold edge (shared by >2 triangles)");
                e.tri[1] = t;
            }
            m.tri_edges[t][k] = it->second;
        }
    }

    for (auto& e : m.edges)
        if (e.is_boundary()) e.marker = EdgeMarker::dirichlet_zero;

    for (int t = 0; t < m.n_triangles(); ++t) {
        const TriangleGeometry g = triangle_geometry(m, t);
        for (int k = 0; k < 3; ++k) {
            const EdgeRecord& e = m.edges[m.tri_edges[t][k]];
            const double dot = g.n_out[k].x() * e.nx + g.n_out[k].y() * e.ny;
            if (std::abs(std::abs(dot) - 1.0) > 1e-12)
                throw std::runtime_error("edge/triangle orientation mismatch");
            m.tri_sigma[t][k] = dot > 0 ? 1.0 : -1.0;
        }
    }
}

Mesh build_square_mesh(int L) {
    Mesh m = square_lattice(L);
    build_edge_topology(m);
    return m;
}

Mesh build_quarter_disk_mesh(int L) {
    Mesh m = square_lattice(L);
    m.domain_id = DomainId::quarter_disk;
    // cartesian-to-polar: the concentric square ring through a node becomes
    // the circle of radius max(x1,x2), with the angle proportional to the
    // position along the ring, so every ring is uniform in angle
    for (auto& v : m.vertices) {
        const double mx = std::max(v[0], v[1]);
        if (mx == 0.0) continue;
        const double s = (v[0] >= v[1]) ? v[1] : 2.0 * mx - v[0]; // ring arclength from (mx, 0)
        const double theta = 0.25 * M_PI * s / mx;
        v[0] = mx * std::cos(theta);
        v[1] = mx * std::sin(theta);
    }
    check_positive_areas(m);
    build_edge_topology(m);
    // axis edges carry the symmetry (zero normal flux) condition, the arc
    // keeps the homogeneous Dirichlet marker
    constexpr double tol = 1e-12;
    for (auto& e : m.edges) {
        if (!e.is_boundary()) continue;
        const auto& p0 = m.vertices[e.v0];
        const auto& p1 = m.vertices[e.v1];
        const bool on_x_axis = std::abs(p0[1]) <= tol && std::abs(p1[1]) <= tol;
        const bool on_y_axis = std::abs(p0[0]) <= tol && std::abs(p1[0]) <= tol;
        e.marker = (on_x_axis || on_y_axis) ? EdgeMarker::flux_zero : EdgeMarker::dirichlet_zero;
    }
    return m;
}

void dump_mesh(const Mesh& m, std::ostream& os) {
    os << m.n_vertices() << ' ' << m.n_triangles() << ' ' << m.n_edges() << '\n';
    os.precision(17);
    for (const auto& v : m.vertices) os << v[0] << ' ' << v[1] << '\n';
    for (const auto& t : m.triangles) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    for (const auto& e : m.edges)
        os << e.v0 << ' ' << e.v1 << ' ' << static_cast<int>(e.marker) << '\n';
}

double mesh_size(const Mesh& m) {
    double h = 0.0;
    for (const auto& e : m.edges) h = std::max(h, e.length);
    return h;
}

} // namespace hfem
