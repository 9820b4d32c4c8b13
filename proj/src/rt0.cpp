#include "hfem/rt0.hpp"

namespace hfem {

std::array<RT0Local, 3> rt0_basis(const TriangleGeometry& g) {
    std::array<RT0Local, 3> basis;
    for (int i = 0; i < 3; ++i) {
        const double s = g.face_len[i] / (2.0 * g.area);
        basis[i].c = s;
        basis[i].e = -s * g.x[i];
    }
    return basis;
}

std::array<RT0Local, 3> rt0_basis_global(const Mesh& mesh, const TriangleGeometry& g, int elem) {
    std::array<RT0Local, 3> basis = rt0_basis(g);
    for (int i = 0; i < 3; ++i) {
        basis[i].c *= mesh.tri_sigma[elem][i];
        basis[i].e *= mesh.tri_sigma[elem][i];
    }
    return basis;
}

} // namespace hfem
