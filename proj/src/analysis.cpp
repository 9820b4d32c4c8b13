#include "hfem/analysis.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hfem {

ErrorReport error_norms(const Mesh& mesh, const DiscreteSolution& sol, const ExactFields& exact,
                        const DiffusionTensor& K,
                        const std::optional<MixedErrorContext>& mixed_ctx, int quad_degree) {
    const QuadratureRule& rule = quadrature_rule(quad_degree);
    const bool is_mixed = (sol.method == Method::A || sol.method == Method::B);
    const bool is_b_form = (sol.method == Method::B);
    if (is_mixed && is_b_form && !mixed_ctx)
        throw std::invalid_argument("method B error norms need the velocity context");

    ErrorReport rep;
    rep.h = mesh_size(mesh);
    double su = 0.0, sg = 0.0, sd = 0.0;
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const TriangleGeometry g = triangle_geometry(mesh, t);
        if (is_mixed) {
            const RT0Local& p = sol.mixed.p[t];
            const double ut = sol.mixed.u[t];
            su += integrate(
                g, [&](const Vec2& x) { const double e = exact.u(x) - ut; return e * e; }, rule);
            sg += integrate(
                g,
                [&](const Vec2& x) {
                    Vec2 flux = p.eval(x);
                    if (is_b_form) flux -= mixed_ctx->w(x) * ut;
                    const Vec2 e = exact.grad_u(x) + K.Kinv * flux;
                    return e.squaredNorm();
                },
                rule);
            sd += integrate(
                g,
                [&](const Vec2& x) {
                    double approx = -2.0 * p.c;
                    if (is_b_form) approx += ut * mixed_ctx->div_w(x);
                    const double e = exact.div_K_grad_u(x) - approx;
                    return e * e;
                },
                rule);
            rep.e_max_centroid = std::max(rep.e_max_centroid, std::abs(exact.u(g.centroid) - ut));
        } else {
            const LocalQuadratic& v = sol.elements[t];
            su += integrate(
                g,
                [&](const Vec2& x) {
                    const double e = exact.u(x) - evaluate(v, K, x).value;
                    return e * e;
                },
                rule);
            sg += integrate(
                g,
                [&](const Vec2& x) {
                    const Vec2 e = exact.grad_u(x) - K.Kinv * (v.a * x + v.b);
                    return e.squaredNorm();
                },
                rule);
            sd += integrate(
                g,
                [&](const Vec2& x) {
                    const double e = exact.div_K_grad_u(x) - 2.0 * v.a;
                    return e * e;
                },
                rule);
            rep.e_max_centroid = std::max(
                rep.e_max_centroid, std::abs(exact.u(g.centroid) - evaluate(v, K, g.centroid).value));
        }
    }
    rep.e_u_l2 = std::sqrt(su);
    rep.e_grad_l2 = std::sqrt(sg);
    rep.e_divflux_l2 = std::sqrt(sd);
    return rep;
}

double h_norm(const Mesh& mesh, const std::vector<LocalQuadratic>& field, const DiffusionTensor& K) {
    if (static_cast<int>(field.size()) != mesh.n_triangles())
        throw std::invalid_argument("field size must match triangle count");
    const QuadratureRule& rule = quadrature_rule(6);
    double s = 0.0;
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const TriangleGeometry g = triangle_geometry(mesh, t);
        const LocalQuadratic& v = field[t];
        const double mean = quadratic_mean(g, K, v.a, v.b) + v.d;
        const double grad2 = integrate(
            g, [&](const Vec2& x) { return (K.Kinv * (v.a * x + v.b)).squaredNorm(); }, rule);
        s += mean * mean * g.area + grad2 + 4.0 * v.a * v.a * g.area;
    }
    return std::sqrt(s);
}

RateTable convergence_rates(const std::vector<ErrorReport>& reports) {
    if (reports.size() < 2) throw std::invalid_argument("need at least two reports");
    RateTable rt;
    auto rate = [](double coarse, double fine) {
        if (!(coarse > 0.0) || !(fine > 0.0)) return std::numeric_limits<double>::quiet_NaN();
        return std::log2(coarse / fine);
    };
    for (std::size_t i = 1; i < reports.size(); ++i) {
        const ErrorReport& c = reports[i - 1];
        const ErrorReport& f = reports[i];
        if (!(f.h < c.h)) throw std::invalid_argument("reports must be ordered by decreasing h");
        rt.rate_u.push_back(rate(c.e_u_l2, f.e_u_l2));
        rt.rate_grad.push_back(rate(c.e_grad_l2, f.e_grad_l2));
        rt.rate_divflux.push_back(rate(c.e_divflux_l2, f.e_divflux_l2));
        rt.rate_max.push_back(rate(c.e_max_centroid, f.e_max_centroid));
    }
    return rt;
}

namespace {

// h-norm Gram matrix of the global basis of the given space (sigma-signed
// edge functions, then cell functions), restricted to the kept dofs.
Eigen::MatrixXd hnorm_gram(const Mesh& mesh, const DiffusionTensor& K, Space space,
                           const DiscreteVelocity* vel, const std::vector<int>& reduced_of_full,
                           int dim, const QuadratureRule& rule) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim, dim);
    const double mean[4] = {0.0, 0.0, 0.0, 1.0};
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const TriangleGeometry g = triangle_geometry(mesh, t);
        const auto basis = local_basis(g, K, space, vel, t);
        std::array<int, 4> gid;
        std::array<double, 4> sign;
        for (int k = 0; k < 3; ++k) {
            gid[k] = reduced_of_full[mesh.tri_edges[t][k]];
            sign[k] = mesh.tri_sigma[t][k];
        }
        gid[3] = reduced_of_full[mesh.n_edges() + t];
        sign[3] = 1.0;
        for (int i = 0; i < 4; ++i) {
            if (gid[i] < 0) continue;
            for (int j = 0; j < 4; ++j) {
                if (gid[j] < 0) continue;
                const double grad = integrate(
                    g,
                    [&](const Vec2& x) {
                        return (K.Kinv * (basis[i].a * x + basis[i].b))
                            .dot(K.Kinv * (basis[j].a * x + basis[j].b));
                    },
                    rule);
                const double val = mean[i] * mean[j] * g.area + grad +
                                   4.0 * basis[i].a * basis[j].a * g.area;
                M(gid[i], gid[j]) += sign[i] * sign[j] * val;
            }
        }
    }
    return M;
}

} // namespace

double infsup_estimate(const Mesh& mesh, const DiffusionTensor& K, const VectorField& w,
                       InfSupForm form, int quad_degree) {
    const DofMap dofs = dof_map(mesh);
    if (dofs.total() > 2000)
        throw std::invalid_argument("inf-sup estimator is dense; limited to 2000 dofs");

    const ScalarField zero_f = [](const Vec2&) { return 0.0; };
    const FirstTermVelocity ftv =
        (form == InfSupForm::a_star) ? FirstTermVelocity::exact : FirstTermVelocity::P1;
    LinearSystem sys = apply_flux_bc(assemble_method_hA(mesh, K, w, zero_f, ftv, quad_degree), dofs);

    std::vector<int> reduced_of_full(sys.full_dim, -1);
    for (int i = 0; i < sys.dim; ++i) reduced_of_full[sys.kept[i]] = i;

    const Eigen::MatrixXd A = Eigen::MatrixXd(sys.matrix());
    const QuadratureRule& rule = quadrature_rule(quad_degree);
    const DiscreteVelocity w_h = interpolate_velocity(w, mesh, VelocityMode::centroid_P0);
    const Eigen::MatrixXd MU =
        hnorm_gram(mesh, K, Space::U, nullptr, reduced_of_full, sys.dim, rule);
    const Eigen::MatrixXd MV = hnorm_gram(mesh, K, Space::V, &w_h, reduced_of_full, sys.dim, rule);

    Eigen::LLT<Eigen::MatrixXd> lltU(MU), lltV(MV);
    if (lltU.info() != Eigen::Success || lltV.info() != Eigen::Success)
        throw std::runtime_error("h-norm Gram matrix is not positive definite");

    // rows of A are test functions: a(u, v) = v^t A u. The whitened operator
    // is L_V^-1 A L_U^-T; its smallest singular value is the inf-sup constant.
    Eigen::MatrixXd B = lltV.matrixL().solve(A);
    B = lltU.matrixL().solve(B.transpose()).transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(B);
    return svd.singularValues().minCoeff();
}

} // namespace hfem
