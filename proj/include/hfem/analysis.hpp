#pragma once

#include <optional>
#include <vector>

#include "hfem/assembly.hpp"

namespace hfem {

// Exact solution data for error measurement.
struct ExactFields {
    ScalarField u;
    VectorField grad_u;
    ScalarField div_K_grad_u;
};

struct ErrorReport {
    double h = 0.0;              // max element diameter
    int dofs = 0;                // unknowns after constraints
    double e_u_l2 = 0.0;         // || u - u_h ||_0
    double e_grad_l2 = 0.0;      // element-wise gradient error in L2
    double e_divflux_l2 = 0.0;   // || div K grad (u - u_h) ||_0
    double e_max_centroid = 0.0; // max |u - u_h| over triangle centroids
};

// Extra context needed by the mixed methods' error measures (method B
// reconstructs grad u from p_h - w u_h and div K grad u from
// -div p_h + u_h div w).
struct MixedErrorContext {
    VectorField w;
    ScalarField div_w;
};

ErrorReport error_norms(const Mesh& mesh, const DiscreteSolution& sol, const ExactFields& exact,
                        const DiffusionTensor& K,
                        const std::optional<MixedErrorContext>& mixed_ctx = std::nullopt,
                        int quad_degree = 10);

// Working norm: sqrt( (Pi_h v, Pi_h v) + sum_T (grad v, grad v)_T
//                     + (div K grad v, div K grad v)_T ).
double h_norm(const Mesh& mesh, const std::vector<LocalQuadratic>& field, const DiffusionTensor& K);

// log2 error ratios per consecutive mesh pair (h halves between entries);
// NaN marks an undefined slope (a zero error in the pair).
struct RateTable {
    std::vector<double> rate_u, rate_grad, rate_divflux, rate_max;
};
RateTable convergence_rates(const std::vector<ErrorReport>& reports);

enum class InfSupForm { a_h, a_star };

// Discrete inf-sup constant of the chosen form over U_h x V_h in the h-norm:
// smallest singular value of L_V^-1 A L_U^-T with the h-norm Gram Cholesky
// factors M = L L^T. Dense; guarded to <= 2000 dofs.
double infsup_estimate(const Mesh& mesh, const DiffusionTensor& K, const VectorField& w,
                       InfSupForm form, int quad_degree = 6);

} // namespace hfem
