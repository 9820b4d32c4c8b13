#pragma once

#include <array>
#include <vector>

#include "hfem/geometry.hpp"

namespace hfem {

// Element ansatz v(x) = x^t { K^-1 [ a x/2 + b ] } + d. Its flux K grad v is
// the incomplete-linear (RT0-form) field a x + b, and div K grad v = 2a.
struct LocalQuadratic {
    double a = 0.0;
    Vec2 b = Vec2::Zero();
    double d = 0.0;
};

struct EvalResult {
    double value;
    Vec2 gradient;
    double div_K_grad;
};

EvalResult evaluate(const LocalQuadratic& v, const struct DiffusionTensor& K, const Vec2& x);

// Constant symmetric positive-definite diffusion tensor with cached inverse
// and eigenvalue bounds.
struct DiffusionTensor {
    Eigen::Matrix2d K = Eigen::Matrix2d::Identity();
    Eigen::Matrix2d Kinv = Eigen::Matrix2d::Identity();
    double lambda_min = 1.0;
    double lambda_max = 1.0;

    static DiffusionTensor identity();
    // Throws std::invalid_argument if K is not symmetric positive-definite.
    static DiffusionTensor make(const Eigen::Matrix2d& K);
};

enum class Space { U, V, W };

enum class VelocityMode { centroid_P0, vertex_P1, rt0 };

// One of the three velocity interpolants: element-centroid constant (w_h),
// vertex piecewise-linear (w^1_h), or Raviart-Thomas (w~_h, a x + b per
// element with shared edge-mean normal components).
struct DiscreteVelocity {
    VelocityMode mode = VelocityMode::centroid_P0;
    std::vector<Vec2> cell_value;                  // centroid_P0
    std::vector<std::array<Vec2, 3>> vertex_value; // vertex_P1
    std::vector<double> rt_a;                      // rt0
    std::vector<Vec2> rt_b;

    Vec2 eval(const TriangleGeometry& g, int elem, const Vec2& x) const;
};

DiscreteVelocity interpolate_velocity(const VectorField& w, const Mesh& mesh, VelocityMode mode);

// The four local basis functions of the requested space on one element,
// in the order (edge dof opposite vertex 0, 1, 2, cell mean). Edge dofs are
// taken with respect to the element's outward normals; multiply by sigma to
// pass to the global convention. Space V needs a centroid_P0 velocity,
// space W an rt0 one; U ignores it.
std::array<LocalQuadratic, 4> local_basis(const TriangleGeometry& g, const DiffusionTensor& K,
                                          Space space, const DiscreteVelocity* vel, int elem);

// Unique LocalQuadratic whose three edge dofs (global n_F convention, in
// tri_edges order) and cell mean match the given values.
LocalQuadratic recover_local(const Mesh& mesh, const TriangleGeometry& g, const DiffusionTensor& K,
                             Space space, const DiscreteVelocity* vel, int elem,
                             const std::array<double, 3>& edge_dofs, double cell_mean);

// Inverse of recover_local: the element's dof values of a LocalQuadratic
// (edge dofs in the global convention, plus the cell mean).
struct LocalDofs {
    std::array<double, 3> edge;
    double mean;
};
LocalDofs extract_dofs(const Mesh& mesh, const TriangleGeometry& g, const DiffusionTensor& K,
                       Space space, const DiscreteVelocity* vel, int elem, const LocalQuadratic& v);

// Mean over the element of the quadratic part x^t K^-1 (a x/2 + b)
// (three-midpoint rule, exact for quadratics).
double quadratic_mean(const TriangleGeometry& g, const DiffusionTensor& K, double a, const Vec2& b);

// Global numbering: one dof per edge (flux), then one per triangle (mean).
struct DofMap {
    int n_edges = 0;
    int n_cells = 0;
    std::vector<int> constrained_edges; // flux_zero edge dofs

    int total() const { return n_edges + n_cells; }
    int edge_dof(int e) const { return e; }
    int cell_dof(int t) const { return n_edges + t; }
};

DofMap dof_map(const Mesh& mesh);

} // namespace hfem
