#pragma once

#include <string>

#include "hfem/problems.hpp"

namespace hfem {

struct SweepConfig {
    int problem = 1;
    Method method = Method::hA;
    double peclet = 1.0;
    std::vector<int> L_values;   // strictly increasing
    std::string out_csv;         // empty: no file
    std::string plot_dir;        // empty: no plot data
    int quad_assembly = 6;
    int quad_error = 10;
    FMode fmode = FMode::fixed_f;
};

// mesh -> assemble -> bc -> solve -> reconstruct -> error_norms for one case.
ErrorReport run_case(const ProblemSpec& problem, Method method, int L, int quad_assembly = 6,
                     int quad_error = 10);

struct SweepResult {
    std::vector<ErrorReport> reports;
    RateTable rates;
    std::string csv; // data section, deterministic
};

// One run_case per L; writes the CSV (and plot data files when requested).
// A case failure aborts the sweep after flushing the partial CSV.
SweepResult run_sweep(const SweepConfig& config);

// CSV schema: method,problem,peclet,L,h,dofs,e_u_l2,e_grad_l2,e_divflux_l2,e_max_centroid
std::string csv_header();
std::string csv_row(const SweepConfig& config, int L, const ErrorReport& r);

} // namespace hfem
