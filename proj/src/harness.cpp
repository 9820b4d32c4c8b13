#include "hfem/harness.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace hfem {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9e", v);
    return buf;
}

DiscreteSolution solve_case(const Mesh& mesh, const ProblemSpec& p, Method method,
                            int quad_assembly) {
    const DofMap dofs = dof_map(mesh);
    LinearSystem sys;
    DiscreteVelocity rt_vel;
    const DiscreteVelocity* recon_vel = nullptr;
    switch (method) {
        case Method::A:
            sys = assemble_method_A(mesh, p.K, p.w, p.f, quad_assembly);
            break;
        case Method::B:
            sys = assemble_method_B(mesh, p.K, p.w, p.div_w, p.f, quad_assembly);
            break;
        case Method::hA:
            sys = assemble_method_hA(mesh, p.K, p.w, p.f, FirstTermVelocity::P1, quad_assembly,
                                     p.hermite_rhs);
            break;
        case Method::hB:
            sys = assemble_method_hB(mesh, p.K, p.w, p.f, quad_assembly, p.hermite_rhs);
            rt_vel = interpolate_velocity(p.w, mesh, VelocityMode::rt0);
            recon_vel = &rt_vel;
            break;
    }
    sys = apply_flux_bc(sys, dofs);
    const Eigen::VectorXd x = solve(sys);
    DiscreteSolution sol = reconstruct(mesh, x, method, p.K, recon_vel);
    return sol;
}

} // namespace

ErrorReport run_case(const ProblemSpec& p, Method method, int L, int quad_assembly,
                     int quad_error) {
    const Mesh mesh = build_problem_mesh(p, L);
    const DofMap dofs = dof_map(mesh);
    DiscreteSolution sol;
    try {
        sol = solve_case(mesh, p, method, quad_assembly);
    } catch (const SolverError& err) {
        throw SolverError(std::string(err.what()) + " [problem " + std::to_string(p.id) +
                          ", method " + method_name(method) + ", Pe " + fmt(p.peclet) + ", L " +
                          std::to_string(L) + "]");
    }
    std::optional<MixedErrorContext> ctx;
    if (method == Method::A || method == Method::B) ctx = MixedErrorContext{p.w, p.div_w};
    ErrorReport rep = error_norms(mesh, sol, p.exact, p.K, ctx, quad_error);
    rep.dofs = dofs.total() - static_cast<int>(dofs.constrained_edges.size());
    return rep;
}

std::string csv_header() {
    return "method,problem,peclet,L,h,dofs,e_u_l2,e_grad_l2,e_divflux_l2,e_max_centroid";
}

std::string csv_row(const SweepConfig& cfg, int L, const ErrorReport& r) {
    std::string row = method_name(cfg.method);
    row += ',' + std::to_string(cfg.problem) + ',' + fmt(cfg.peclet) + ',' + std::to_string(L) +
           ',' + fmt(r.h) + ',' + std::to_string(r.dofs) + ',' + fmt(r.e_u_l2) + ',' +
           fmt(r.e_grad_l2) + ',' + fmt(r.e_divflux_l2) + ',' + fmt(r.e_max_centroid);
    return row;
}

namespace {

void write_plot_data(const SweepConfig& cfg, const std::vector<ErrorReport>& reports) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.plot_dir);
    const std::string stem = std::string(method_name(cfg.method)) + "_p" +
                             std::to_string(cfg.problem) + "_pe" + fmt(cfg.peclet);
    auto write_column = [&](const std::string& name, auto getter) {
        std::ofstream os(fs::path(cfg.plot_dir) / (stem + "_" + name + ".dat"));
        for (const auto& r : reports) os << fmt(r.h) << ' ' << fmt(getter(r)) << '\n';
    };
    write_column("e_u", [](const ErrorReport& r) { return r.e_u_l2; });
    write_column("e_grad", [](const ErrorReport& r) { return r.e_grad_l2; });
    write_column("e_divflux", [](const ErrorReport& r) { return r.e_divflux_l2; });
    write_column("e_max", [](const ErrorReport& r) { return r.e_max_centroid; });
    // reference slopes through the coarsest data point
    if (!reports.empty()) {
        const double h0 = reports.front().h;
        const double e0 = reports.front().e_u_l2;
        std::ofstream o1(fs::path(cfg.plot_dir) / (stem + "_ref_h.dat"));
        std::ofstream o2(fs::path(cfg.plot_dir) / (stem + "_ref_h2.dat"));
        for (const auto& r : reports) {
            o1 << fmt(r.h) << ' ' << fmt(e0 * r.h / h0) << '\n';
            o2 << fmt(r.h) << ' ' << fmt(e0 * (r.h / h0) * (r.h / h0)) << '\n';
        }
    }
}

} // namespace

SweepResult run_sweep(const SweepConfig& cfg) {
    for (std::size_t i = 1; i < cfg.L_values.size(); ++i)
        if (cfg.L_values[i] <= cfg.L_values[i - 1])
            throw std::invalid_argument("L values must be strictly increasing");

    const ProblemSpec problem = builtin_problem(cfg.problem, cfg.peclet, cfg.fmode);
    SweepResult result;
    result.csv = csv_header() + '\n';

    auto flush_csv = [&]() {
        if (cfg.out_csv.empty()) return;
        std::ofstream os(cfg.out_csv);
        os << result.csv;
    };

    for (int L : cfg.L_values) {
        try {
            ErrorReport r = run_case(problem, cfg.method, L, cfg.quad_assembly, cfg.quad_error);
            result.reports.push_back(r);
            result.csv += csv_row(cfg, L, r) + '\n';
        } catch (...) {
            flush_csv(); // retain the partial data section
            throw;
        }
    }
    flush_csv();
    if (result.reports.size() >= 2) result.rates = convergence_rates(result.reports);
    if (!cfg.plot_dir.empty()) write_plot_data(cfg, result.reports);
    return result;
}

} // namespace hfem
