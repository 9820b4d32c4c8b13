#include "hfem/assembly.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hfem {

const char* method_name(Method m) {
    switch (m) {
        case Method::A: return "A";
        case Method::hA: return "hA";
        case Method::B: return "B";
        case Method::hB: return "hB";
    }
    return "?";
}

Method parse_method(const std::string& s) {
    if (s == "A") return Method::A;
    if (s == "hA") return Method::hA;
    if (s == "B") return Method::B;
    if (s == "hB") return Method::hB;
    throw std::invalid_argument("unknown method '" + s + "' (expected A, hA, B or hB)");
}

Eigen::SparseMatrix<double> LinearSystem::matrix() const {
    std::vector<Eigen::Triplet<double>> sorted = triplets;
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        return a.row() != b.row() ? a.row() < b.row() : a.col() < b.col();
    });
    // sum duplicates in canonical order
    std::vector<Eigen::Triplet<double>> merged;
    merged.reserve(sorted.size());
    for (const auto& t : sorted) {
        if (!merged.empty() && merged.back().row() == t.row() && merged.back().col() == t.col())
            merged.back() = {t.row(), t.col(), merged.back().value() + t.value()};
        else
            merged.push_back(t);
    }
    Eigen::SparseMatrix<double> A(dim, dim);
    A.setFromTriplets(merged.begin(), merged.end());
    A.makeCompressed();
    return A;
}

namespace {

LinearSystem empty_system(const Mesh& mesh) {
    LinearSystem sys;
    sys.full_dim = mesh.n_edges() + mesh.n_triangles();
    sys.dim = sys.full_dim;
    sys.rhs = Eigen::VectorXd::Zero(sys.dim);
    sys.kept.resize(sys.dim);
    for (int i = 0; i < sys.dim; ++i) sys.kept[i] = i;
    return sys;
}

// Scatter a 4x4 element block; local index k < 3 is the edge dof opposite
// vertex k (outward convention, hence the sigma sign), k = 3 the cell dof.
void scatter_hermite(LinearSystem& sys, const Mesh& mesh, int t,
                     const Eigen::Matrix4d& elem_matrix, const Eigen::Vector4d& elem_rhs) {
    const int ne = mesh.n_edges();
    std::array<int, 4> gid;
    std::array<double, 4> sign;
    for (int k = 0; k < 3; ++k) {
        gid[k] = mesh.tri_edges[t][k];
        sign[k] = mesh.tri_sigma[t][k];
    }
    gid[3] = ne + t;
    sign[3] = 1.0;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j)
            sys.triplets.emplace_back(gid[i], gid[j], sign[i] * sign[j] * elem_matrix(i, j));
        sys.rhs[gid[i]] += sign[i] * elem_rhs[i];
    }
}

Eigen::Vector4d hermite_rhs(const TriangleGeometry& g, const DiffusionTensor& K,
                            const std::array<LocalQuadratic, 4>& test, const ScalarField& f,
                            const QuadratureRule& rule, RhsMode mode) {
    Eigen::Vector4d r = Eigen::Vector4d::Zero();
    if (mode == RhsMode::mean_projected) {
        // -(f, Pi_h v): only the cell test dof has nonzero mean
        r[3] = -integrate(g, f, rule);
    } else {
        for (int i = 0; i < 4; ++i)
            r[i] = -integrate(
                g, [&](const Vec2& x) { return f(x) * evaluate(test[i], K, x).value; }, rule);
    }
    return r;
}

} // namespace

LinearSystem assemble_method_hA(const Mesh& mesh, const DiffusionTensor& K, const VectorField& w,
                                const ScalarField& f, FirstTermVelocity ftv, int quad_degree,
                                RhsMode rhs_mode) {
    const QuadratureRule& rule = quadrature_rule(quad_degree);
    const DiscreteVelocity w_h = interpolate_velocity(w, mesh, VelocityMode::centroid_P0);
    DiscreteVelocity w1_h;
    if (ftv == FirstTermVelocity::P1) w1_h = interpolate_velocity(w, mesh, VelocityMode::vertex_P1);

    LinearSystem sys = empty_system(mesh);
    const double mean[4] = {0.0, 0.0, 0.0, 1.0};
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const TriangleGeometry g = triangle_geometry(mesh, t);
        const auto trial = local_basis(g, K, Space::U, nullptr, t);
        const auto test = local_basis(g, K, Space::V, &w_h, t);
        const Vec2 wc = w_h.cell_value[t];

        // per trial function: int grad u (exact: A grad u(x_T)) and
        // int w1 . grad u (or w . grad u for the a*_h variant)
        std::array<Vec2, 4> grad_int;
        std::array<double, 4> conv_int;
        for (int j = 0; j < 4; ++j) {
            grad_int[j] = g.area * (K.Kinv * (trial[j].a * g.centroid + trial[j].b));
            conv_int[j] = integrate(
                g,
                [&](const Vec2& x) {
                    const Vec2 gu = K.Kinv * (trial[j].a * x + trial[j].b);
                    const Vec2 wx = (ftv == FirstTermVelocity::P1) ? w1_h.eval(g, t, x) : w(x);
                    return wx.dot(gu);
                },
                rule);
        }

        Eigen::Matrix4d E;
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                const double grad_term = integrate(
                    g,
                    [&](const Vec2& x) {
                        const Vec2 gu = K.Kinv * (trial[j].a * x + trial[j].b);
                        const Vec2 kgv = test[i].a * x + test[i].b;
                        return gu.dot(kgv);
                    },
                    rule);
                E(i, j) = mean[i] * (2.0 * trial[j].a * g.area - conv_int[j]) // 1st term
                          + grad_term + mean[i] * wc.dot(grad_int[j])         // 2nd term
                          + 2.0 * test[i].a * g.area * mean[j];               // 3rd term
            }
        }
        scatter_hermite(sys, mesh, t, E, hermite_rhs(g, K, test, f, rule, rhs_mode));
    }
    return sys;
}

LinearSystem assemble_method_hB(const Mesh& mesh, const DiffusionTensor& K, const VectorField& w,
                                const ScalarField& f, int quad_degree, RhsMode rhs_mode) {
    const QuadratureRule& rule = quadrature_rule(quad_degree);
    const DiscreteVelocity wt_h = interpolate_velocity(w, mesh, VelocityMode::rt0);

    LinearSystem sys = empty_system(mesh);
    const double mean[4] = {0.0, 0.0, 0.0, 1.0};
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const TriangleGeometry g = triangle_geometry(mesh, t);
        const auto trial = local_basis(g, K, Space::W, &wt_h, t);
        const auto test = local_basis(g, K, Space::U, nullptr, t);

        Eigen::Matrix4d E;
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                const double grad_term = integrate(
                    g,
                    [&](const Vec2& x) {
                        const Vec2 gu = K.Kinv * (trial[j].a * x + trial[j].b);
                        const Vec2 kgv = test[i].a * x + test[i].b;
                        return gu.dot(kgv);
                    },
                    rule);
                E(i, j) = 2.0 * trial[j].a * g.area * mean[i] // (div K grad u, v)
                          + grad_term                         // (grad u, K grad v)
                          + 2.0 * test[i].a * g.area * mean[j]; // (u, div K grad v)
            }
        }
        scatter_hermite(sys, mesh, t, E, hermite_rhs(g, K, test, f, rule, rhs_mode));
    }
    return sys;
}

namespace {

LinearSystem assemble_mixed(const Mesh& mesh, const DiffusionTensor& K, const VectorField& w,
                            const ScalarField* div_w, const ScalarField& f, int quad_degree,
                            bool divergence_form) {
    const QuadratureRule& rule = quadrature_rule(quad_degree);
    LinearSystem sys = empty_system(mesh);
    const int ne = mesh.n_edges();
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const TriangleGeometry g = triangle_geometry(mesh, t);
        const auto q = rt0_basis_global(mesh, g, t);
        const int cell = ne + t;
        for (int i = 0; i < 3; ++i) {
            const int gi = mesh.tri_edges[t][i];
            // (K^-1 p, q)
            for (int j = 0; j < 3; ++j) {
                const double m = integrate(
                    g, [&](const Vec2& x) { return (K.Kinv * q[j].eval(x)).dot(q[i].eval(x)); },
                    rule);
                sys.triplets.emplace_back(gi, mesh.tri_edges[t][j], m);
            }
            // -(u, div q): div q_i is constant, integral sigma_i meas(F_i)
            const double div_qi = mesh.tri_sigma[t][i] * g.face_len[i];
            sys.triplets.emplace_back(gi, cell, -div_qi);
            // (div p, v)
            sys.triplets.emplace_back(cell, gi, div_qi);
            if (divergence_form) {
                // -(K^-1 w u, q)
                const double conv = integrate(
                    g, [&](const Vec2& x) { return (K.Kinv * w(x)).dot(q[i].eval(x)); }, rule);
                sys.triplets.emplace_back(gi, cell, -conv);
            } else {
                // -(w . K^-1 p, v)
                const double conv = integrate(
                    g, [&](const Vec2& x) { return w(x).dot(K.Kinv * q[i].eval(x)); }, rule);
                sys.triplets.emplace_back(cell, gi, -conv);
            }
        }
        if (divergence_form) {
            // -(div w u, v)
            sys.triplets.emplace_back(cell, cell, -integrate(g, *div_w, rule));
        }
        sys.rhs[cell] += integrate(g, f, rule);
    }
    return sys;
}

} // namespace

LinearSystem assemble_method_A(const Mesh& mesh, const DiffusionTensor& K, const VectorField& w,
                               const ScalarField& f, int quad_degree) {
    return assemble_mixed(mesh, K, w, nullptr, f, quad_degree, false);
}

LinearSystem assemble_method_B(const Mesh& mesh, const DiffusionTensor& K, const VectorField& w,
                               const ScalarField& div_w, const ScalarField& f, int quad_degree) {
    return assemble_mixed(mesh, K, w, &div_w, f, quad_degree, true);
}

LinearSystem apply_flux_bc(const LinearSystem& sys, const DofMap& dofs) {
    if (dofs.constrained_edges.empty()) return sys;
    std::vector<int> to_reduced(sys.full_dim, -1);
    LinearSystem out;
    out.full_dim = sys.full_dim;
    out.eliminated = dofs.constrained_edges;
    std::vector<bool> drop(sys.full_dim, false);
    for (int e : dofs.constrained_edges) drop[e] = true;
    for (int i = 0; i < sys.dim; ++i) {
        const int full = sys.kept[i];
        if (drop[full]) continue;
        to_reduced[full] = static_cast<int>(out.kept.size());
        out.kept.push_back(full);
    }
    out.dim = static_cast<int>(out.kept.size());
    out.rhs = Eigen::VectorXd::Zero(out.dim);
    for (int i = 0; i < sys.dim; ++i) {
        const int r = to_reduced[sys.kept[i]];
        if (r >= 0) out.rhs[r] = sys.rhs[i];
    }
    out.triplets.reserve(sys.triplets.size());
    for (const auto& t : sys.triplets) {
        const int r = to_reduced[sys.kept[t.row()]];
        const int c = to_reduced[sys.kept[t.col()]];
        if (r >= 0 && c >= 0) out.triplets.emplace_back(r, c, t.value());
    }
    return out;
}

Eigen::VectorXd solve(const LinearSystem& sys) {
    const Eigen::SparseMatrix<double> A = sys.matrix();

    // Ruiz equilibration: high Peclet numbers put the matrix entries on
    // wildly different scales, which defeats the pivoting of a plain LU.
    Eigen::VectorXd R = Eigen::VectorXd::Ones(sys.dim), C = Eigen::VectorXd::Ones(sys.dim);
    for (int pass = 0; pass < 5; ++pass) {
        Eigen::VectorXd rmax = Eigen::VectorXd::Zero(sys.dim), cmax = Eigen::VectorXd::Zero(sys.dim);
        for (int k = 0; k < A.outerSize(); ++k)
            for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it) {
                const double v = std::abs(R[it.row()] * it.value() * C[it.col()]);
                rmax[it.row()] = std::max(rmax[it.row()], v);
                cmax[it.col()] = std::max(cmax[it.col()], v);
            }
        for (int i = 0; i < sys.dim; ++i) {
            if (rmax[i] > 0.0) R[i] /= std::sqrt(rmax[i]);
            if (cmax[i] > 0.0) C[i] /= std::sqrt(cmax[i]);
        }
    }
    Eigen::SparseMatrix<double> As = R.asDiagonal() * A * C.asDiagonal();
    As.makeCompressed();

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(As);
    if (lu.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "sparse LU factorization failed (dim " << sys.dim << "): " << lu.lastErrorMessage();
        throw SolverError(msg.str());
    }
    auto scaled_solve = [&](const Eigen::VectorXd& rhs) -> Eigen::VectorXd {
        return C.asDiagonal() * Eigen::VectorXd(lu.solve(R.asDiagonal() * rhs));
    };
    Eigen::VectorXd x = scaled_solve(sys.rhs);
    const double bnorm = std::max(sys.rhs.norm(), 1e-300);
    double res = (A * x - sys.rhs).norm() / bnorm;
    for (int it = 0; it < 8 && res > 1e-10; ++it) {
        const Eigen::VectorXd trial = x + scaled_solve(sys.rhs - A * x);
        const double next = (A * trial - sys.rhs).norm() / bnorm;
        if (next >= res) break; // refinement stalled
        x = trial;
        res = next;
    }

    // Inverse iteration on (As^T As)^-1 estimates 1/sigma_min of the
    // equilibrated matrix. Convection-dominated cases produce strongly
    // non-normal systems whose tiny residual hides an O(eps/sigma_min)
    // error component, so the residual test alone cannot gate accuracy.
    double inv_sigma = 0.0;
    {
        Eigen::VectorXd z = Eigen::VectorXd::Ones(sys.dim).normalized();
        for (int it = 0; it < 4; ++it) {
            Eigen::VectorXd y = lu.solve(z);
            y = lu.transpose().solve(y).eval();
            const double n = y.norm();
            if (!std::isfinite(n) || n == 0.0) break;
            inv_sigma = std::sqrt(n);
            z = y / n;
        }
    }

    if (res > 1e-10 || inv_sigma > 3e8) {
        // Refactor in quadruple precision: the double factorization cannot
        // deliver the exact discrete solution once sigma_min drops near eps.
        using Quad = boost::multiprecision::cpp_bin_float_quad;
        using QVec = Eigen::Matrix<Quad, Eigen::Dynamic, 1>;
        Eigen::SparseMatrix<Quad> Aq = As.cast<Quad>();
        Aq.makeCompressed();
        Eigen::SparseLU<Eigen::SparseMatrix<Quad>> luq;
        luq.compute(Aq);
        if (luq.info() != Eigen::Success) {
            std::ostringstream msg;
            msg << "quad-precision LU factorization failed (dim " << sys.dim << ")";
            throw SolverError(msg.str());
        }
        const QVec bq = (R.asDiagonal() * sys.rhs).cast<Quad>();
        QVec xq = luq.solve(bq);
        xq += luq.solve(QVec(bq - Aq * xq));
        for (int i = 0; i < sys.dim; ++i) x[i] = C[i] * static_cast<double>(xq[i]);
        res = (A * x - sys.rhs).norm() / bnorm;
    }

    if (!(res <= 1e-10)) {
        std::ostringstream msg;
        msg << "solver residual " << res << " above tolerance 1e-10 (dim " << sys.dim << ")";
        throw SolverError(msg.str());
    }
    Eigen::VectorXd full = Eigen::VectorXd::Zero(sys.full_dim);
    for (int i = 0; i < sys.dim; ++i) full[sys.kept[i]] = x[i];
    return full;
}

DiscreteSolution reconstruct(const Mesh& mesh, const Eigen::VectorXd& dofs, Method method,
                             const DiffusionTensor& K, const DiscreteVelocity* vel) {
    if (dofs.size() != mesh.n_edges() + mesh.n_triangles())
        throw std::invalid_argument("dof vector dimension mismatch");
    DiscreteSolution sol;
    sol.method = method;
    sol.dofs = dofs;
    const int ne = mesh.n_edges();
    if (method == Method::hA || method == Method::hB) {
        const Space space = (method == Method::hA) ? Space::U : Space::W;
        sol.elements.resize(mesh.n_triangles());
        for (int t = 0; t < mesh.n_triangles(); ++t) {
            const TriangleGeometry g = triangle_geometry(mesh, t);
            std::array<double, 3> edge_dofs;
            for (int k = 0; k < 3; ++k) edge_dofs[k] = dofs[mesh.tri_edges[t][k]];
            sol.elements[t] =
                recover_local(mesh, g, K, space, vel, t, edge_dofs, dofs[ne + t]);
        }
    } else {
        sol.mixed.edge_flux.assign(dofs.data(), dofs.data() + ne);
        sol.mixed.u.assign(dofs.data() + ne, dofs.data() + ne + mesh.n_triangles());
        sol.mixed.p.resize(mesh.n_triangles());
        for (int t = 0; t < mesh.n_triangles(); ++t) {
            const TriangleGeometry g = triangle_geometry(mesh, t);
            const auto q = rt0_basis_global(mesh, g, t);
            RT0Local p;
            for (int k = 0; k < 3; ++k) {
                const double coef = dofs[mesh.tri_edges[t][k]];
                p.c += coef * q[k].c;
                p.e += coef * q[k].e;
            }
            sol.mixed.p[t] = p;
        }
    }
    return sol;
}

} // namespace hfem
