#include "hfem/hermite.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace hfem {

DiffusionTensor DiffusionTensor::identity() { return DiffusionTensor{}; }

DiffusionTensor DiffusionTensor::make(const Eigen::Matrix2d& K) {
    if ((K - K.transpose()).cwiseAbs().maxCoeff() > 1e-14)
        throw std::invalid_argument("diffusion tensor must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(K);
    DiffusionTensor d;
    d.K = K;
    d.lambda_min = es.eigenvalues().minCoeff();
    d.lambda_max = es.eigenvalues().maxCoeff();
    if (!(d.lambda_min > 0.0))
        throw std::invalid_argument("diffusion tensor must be positive-definite");
    d.Kinv = K.inverse();
    return d;
}

EvalResult evaluate(const LocalQuadratic& v, const DiffusionTensor& K, const Vec2& x) {
    EvalResult r;
    r.value = x.dot(K.Kinv * (0.5 * v.a * x + v.b)) + v.d;
    r.gradient = K.Kinv * (v.a * x + v.b);
    r.div_K_grad = 2.0 * v.a;
    return r;
}

double quadratic_mean(const TriangleGeometry& g, const DiffusionTensor& K, double a, const Vec2& b) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i) {
        const Vec2& m = g.face_mid[i];
        s += m.dot(K.Kinv * (0.5 * a * m + b));
    }
    return s / 3.0; // midpoint rule, exact for quadratics
}

Vec2 DiscreteVelocity::eval(const TriangleGeometry& g, int elem, const Vec2& x) const {
    switch (mode) {
        case VelocityMode::centroid_P0: return cell_value[elem];
        case VelocityMode::vertex_P1: {
            const auto l = barycentric(g, x);
            const auto& v = vertex_value[elem];
            return l[0] * v[0] + l[1] * v[1] + l[2] * v[2];
        }
        case VelocityMode::rt0: return rt_a[elem] * x + rt_b[elem];
    }
    return Vec2::Zero();
}

DiscreteVelocity interpolate_velocity(const VectorField& w, const Mesh& mesh, VelocityMode mode) {
    DiscreteVelocity v;
    v.mode = mode;
    const int nt = mesh.n_triangles();
    switch (mode) {
        case VelocityMode::centroid_P0: {
            v.cell_value.resize(nt);
            for (int t = 0; t < nt; ++t) v.cell_value[t] = w(triangle_geometry(mesh, t).centroid);
            break;
        }
        case VelocityMode::vertex_P1: {
            v.vertex_value.resize(nt);
            for (int t = 0; t < nt; ++t)
                for (int k = 0; k < 3; ++k) {
                    const auto& p = mesh.vertices[mesh.triangles[t][k]];
                    v.vertex_value[t][k] = w(Vec2(p[0], p[1]));
                }
            break;
        }
        case VelocityMode::rt0: {
            // one edge-mean normal value per global edge, shared exactly by
            // both adjacent elements
            std::vector<double> edge_mean(mesh.n_edges());
            for (int e = 0; e < mesh.n_edges(); ++e) {
                const EdgeRecord& er = mesh.edges[e];
                const Vec2 a(mesh.vertices[er.v0][0], mesh.vertices[er.v0][1]);
                const Vec2 b(mesh.vertices[er.v1][0], mesh.vertices[er.v1][1]);
                const Vec2 n(er.nx, er.ny);
                edge_mean[e] = edge_mean_gauss2(a, b, [&](const Vec2& p) { return w(p).dot(n); });
            }
            v.rt_a.resize(nt);
            v.rt_b.resize(nt);
            for (int t = 0; t < nt; ++t) {
                const TriangleGeometry g = triangle_geometry(mesh, t);
                double a = 0.0;
                Vec2 b = Vec2::Zero();
                for (int k = 0; k < 3; ++k) {
                    const double gout =
                        mesh.tri_sigma[t][k] * edge_mean[mesh.tri_edges[t][k]];
                    const double s = gout * g.face_len[k] / (2.0 * g.area);
                    a += s;
                    b -= s * g.x[k];
                }
                v.rt_a[t] = a;
                v.rt_b[t] = b;
            }
            break;
        }
    }
    return v;
}

std::array<LocalQuadratic, 4> local_basis(const TriangleGeometry& g, const DiffusionTensor& K,
                                          Space space, const DiscreteVelocity* vel, int elem) {
    std::array<LocalQuadratic, 4> basis;
    for (int i = 0; i < 3; ++i) {
        LocalQuadratic& phi = basis[i];
        phi.a = 1.0 / g.height[i];
        phi.b = -phi.a * g.x[i];
        phi.d = -quadratic_mean(g, K, phi.a, phi.b);
    }
    switch (space) {
        case Space::U:
            basis[3] = LocalQuadratic{0.0, Vec2::Zero(), 1.0};
            break;
        case Space::V: {
            if (!vel || vel->mode != VelocityMode::centroid_P0)
                throw std::invalid_argument("space V requires a centroid_P0 velocity");
            const Vec2 wh = vel->cell_value[elem];
            // psi_4 = (x_T - x)^t K^-1 w_h + 1
            basis[3] = LocalQuadratic{0.0, -wh, g.centroid.dot(K.Kinv * wh) + 1.0};
            break;
        }
        case Space::W: {
            if (!vel || vel->mode != VelocityMode::rt0)
                throw std::invalid_argument("space W requires an rt0 velocity");
            const double aw = vel->rt_a[elem];
            const Vec2 bw = vel->rt_b[elem];
            basis[3] = LocalQuadratic{aw, bw, 1.0 - quadratic_mean(g, K, aw, bw)};
            break;
        }
    }
    return basis;
}

namespace {

// Mean normal component of the velocity term of the edge dof, per space:
//   U: 0, V: w_h . n_F, W: -(w~_h at the edge midpoint) . n_F
// (the W dof is taken as (K grad v - w~_h Pi_T[v]) . n_F so that the
// canonical basis keeps the Kronecker property with a plus sign; edge
// continuity is the same either way).
double velocity_dof_term(const Mesh& mesh, const TriangleGeometry& g, Space space,
                         const DiscreteVelocity* vel, int elem, int local_edge) {
    if (space == Space::U) return 0.0;
    const EdgeRecord& e = mesh.edges[mesh.tri_edges[elem][local_edge]];
    const Vec2 n(e.nx, e.ny);
    if (space == Space::V) return vel->cell_value[elem].dot(n);
    return -vel->eval(g, elem, g.face_mid[local_edge]).dot(n);
}

} // namespace

LocalQuadratic recover_local(const Mesh& mesh, const TriangleGeometry& g, const DiffusionTensor& K,
                             Space space, const DiscreteVelocity* vel, int elem,
                             const std::array<double, 3>& edge_dofs, double cell_mean) {
    LocalQuadratic v;
    for (int k = 0; k < 3; ++k) {
        // diffusive part of the dof, then to the outward convention
        const double diffusive =
            edge_dofs[k] - velocity_dof_term(mesh, g, space, vel, elem, k) * cell_mean;
        const double gout = mesh.tri_sigma[elem][k] * diffusive;
        const double s = gout * g.face_len[k] / (2.0 * g.area);
        v.a += s;
        v.b -= s * g.x[k];
    }
    v.d = cell_mean - quadratic_mean(g, K, v.a, v.b);
    return v;
}

LocalDofs extract_dofs(const Mesh& mesh, const TriangleGeometry& g, const DiffusionTensor& K,
                       Space space, const DiscreteVelocity* vel, int elem,
                       const LocalQuadratic& v) {
    LocalDofs dofs;
    dofs.mean = quadratic_mean(g, K, v.a, v.b) + v.d;
    for (int k = 0; k < 3; ++k) {
        const EdgeRecord& e = mesh.edges[mesh.tri_edges[elem][k]];
        const Vec2 n(e.nx, e.ny);
        // K grad v = a x + b is linear: its edge mean is the midpoint value
        const double diffusive = (v.a * g.face_mid[k] + v.b).dot(n);
        dofs.edge[k] = diffusive + velocity_dof_term(mesh, g, space, vel, elem, k) * dofs.mean;
    }
    return dofs;
}

DofMap dof_map(const Mesh& mesh) {
    DofMap d;
    d.n_edges = mesh.n_edges();
    d.n_cells = mesh.n_triangles();
    for (int e = 0; e < d.n_edges; ++e)
        if (mesh.edges[e].marker == EdgeMarker::flux_zero) d.constrained_edges.push_back(e);
    return d;
}

} // namespace hfem
