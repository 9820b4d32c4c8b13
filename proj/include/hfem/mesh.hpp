#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace hfem {

enum class DomainId { unit_square, quarter_disk };

enum class EdgeMarker : std::uint8_t { interior, dirichlet_zero, flux_zero };

// One globally oriented edge. The normal follows a single convention shared
// by both adjacent triangles: with t the unit vector from the lower-index
// endpoint v0 to the higher-index endpoint v1, n = (t.y, -t.x).
struct EdgeRecord {
    int v0 = -1;
    int v1 = -1;                    // v0 < v1
    double nx = 0.0, ny = 0.0;      // global unit normal
    double length = 0.0;
    std::array<int, 2> tri{-1, -1}; // adjacent triangles, tri[1] = -1 on boundary
    EdgeMarker marker = EdgeMarker::interior;

    bool is_boundary() const { return tri[1] < 0; }
};

// Triangulation with globally consistent edge orientation. Immutable after
// construction; all derived arrays are filled by build_edge_topology.
struct Mesh {
    DomainId domain_id = DomainId::unit_square;
    std::vector<std::array<double, 2>> vertices;
    std::vector<std::array<int, 3>> triangles;   // counterclockwise
    std::vector<EdgeRecord> edges;

    // Per triangle: global edge index opposite local vertex i, and the sign
    // sigma = n_out . n_F relating the outward normal to the global one.
    std::vector<std::array<int, 3>> tri_edges;
    std::vector<std::array<double, 3>> tri_sigma;

    int n_vertices() const { return static_cast<int>(vertices.size()); }
    int n_triangles() const { return static_cast<int>(triangles.size()); }
    int n_edges() const { return static_cast<int>(edges.size()); }
};

// Uniform mesh of the unit square with 2*L^2 triangles; every cell square is
// split along the diagonal of direction (1,1). All boundary edges are marked
// dirichlet_zero.
Mesh build_square_mesh(int L);

// The square mesh mapped node-wise onto the quarter disk x1,x2 >= 0 of unit
// radius: the concentric square ring through a node becomes the circular arc
// of radius m = max(x1,x2), with the angle proportional to the position along
// the ring (the origin stays put). Axis edges are marked flux_zero, arc edges
// dirichlet_zero.
Mesh build_quarter_disk_mesh(int L);

// Enumerates edges (deterministic: order of first encounter over triangles),
// fills normals, adjacency, tri_edges and tri_sigma. Boundary edges get the
// dirichlet_zero marker. Throws on non-manifold input.
void build_edge_topology(Mesh& mesh);

// Plain-text dump: "nv nt ne", then vertices "x y", triangles "i j k",
// edges "i j marker".
void dump_mesh(const Mesh& mesh, std::ostream& os);

// Maximum element diameter (longest edge).
double mesh_size(const Mesh& mesh);

} // namespace hfem
