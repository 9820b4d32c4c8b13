#pragma once

#include <array>
#include <vector>

#include "hfem/hermite.hpp"

namespace hfem {

// Restriction of an RT0 field to one element: q(x) = c x + e, div q = 2c.
struct RT0Local {
    double c = 0.0;
    Vec2 e = Vec2::Zero();

    Vec2 eval(const Vec2& x) const { return c * x + e; }
};

// Local RT0 basis with edge-mean normal component delta_ij with respect to
// the element's outward normals: N_i = meas(F_i)/(2 area) (x - x_i).
std::array<RT0Local, 3> rt0_basis(const TriangleGeometry& g);

// Same basis in the global n_F convention (sigma-signed).
std::array<RT0Local, 3> rt0_basis_global(const Mesh& mesh, const TriangleGeometry& g, int elem);

// RT0 flux + P0 scalar pair of the Douglas-Roberts mixed methods.
struct MixedSolution {
    std::vector<double> edge_flux;  // global edge-mean normal components of p_h
    std::vector<RT0Local> p;        // per element
    std::vector<double> u;          // per element constant
};

} // namespace hfem
