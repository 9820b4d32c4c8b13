#pragma once

#include <Eigen/SparseCore>
#include <string>
#include <vector>

#include "hfem/hermite.hpp"
#include "hfem/rt0.hpp"

namespace hfem {

enum class Method { A, hA, B, hB };

const char* method_name(Method m);
Method parse_method(const std::string& s); // throws on unknown tag

// Square sparse nonsymmetric system in triplet form. Before boundary
// constraints, dim == #edges + #cells and kept is the identity map;
// apply_flux_bc shrinks dim and records the surviving dof ids in kept.
struct LinearSystem {
    int dim = 0;
    int full_dim = 0;
    std::vector<Eigen::Triplet<double>> triplets;
    Eigen::VectorXd rhs;
    std::vector<int> kept;       // reduced index -> full dof id
    std::vector<int> eliminated; // full dof ids removed (value pinned to 0)

    // Canonically ordered compressed matrix (triplets summed in sorted
    // (row, col) order for bit-stable assembly).
    Eigen::SparseMatrix<double> matrix() const;
};

enum class FirstTermVelocity { P1, exact };

// Right-hand-side convention for the Hermite methods: full_test integrates
// -(f, v) against the complete quadratic test function, mean_projected uses
// -(f, Pi_h v), the form the error analysis is stated for. The reference
// results use full_test on the square problem and mean_projected on the
// disk; ProblemSpec records the convention per problem.
enum class RhsMode { full_test, mean_projected };

// Hermite Petrov-Galerkin system, trial U_h / test V_h:
//   sum_T (div K grad u - w1_h . grad u, Pi_T v)_T
//       + (grad u, K grad v + w_h Pi_T v)_T + (u, div K grad v)_T
// FirstTermVelocity::exact replaces w1_h by w in the first term (the
// auxiliary form used for inf-sup probing).
LinearSystem assemble_method_hA(const Mesh& mesh, const DiffusionTensor& K, const VectorField& w,
                                const ScalarField& f,
                                FirstTermVelocity ftv = FirstTermVelocity::P1,
                                int quad_degree = 6, RhsMode rhs_mode = RhsMode::full_test);

// Hermite system in divergence form, trial W_h (built with the RT0 velocity
// interpolant) / test U_h:
//   sum_T (div K grad u, v)_T + (grad u, K grad v)_T + (u, div K grad v)_T
LinearSystem assemble_method_hB(const Mesh& mesh, const DiffusionTensor& K, const VectorField& w,
                                const ScalarField& f, int quad_degree = 6,
                                RhsMode rhs_mode = RhsMode::full_test);

// Douglas-Roberts mixed RT0xP0 baseline, non-divergence form:
//   (K^-1 p, q) - (u, div q)     = 0      for all q in RT0
//   (div p, v) - (w . K^-1 p, v) = (f, v) for all v in P0
LinearSystem assemble_method_A(const Mesh& mesh, const DiffusionTensor& K, const VectorField& w,
                               const ScalarField& f, int quad_degree = 6);

// Douglas-Roberts mixed baseline in divergence form:
//   (K^-1 p, q) - (u, div q) - (K^-1 w u, q) = 0      for all q
//   (div p, v) - (div w u, v)                = (f, v) for all v
// div w is the analytic divergence of the problem velocity.
LinearSystem assemble_method_B(const Mesh& mesh, const DiffusionTensor& K, const VectorField& w,
                               const ScalarField& div_w, const ScalarField& f,
                               int quad_degree = 6);

// Removes the trial column and test row of every flux_zero edge dof (the
// eliminated dofs take the value 0 on reconstruction). dirichlet_zero edges
// stay free (natural treatment).
LinearSystem apply_flux_bc(const LinearSystem& sys, const DofMap& dofs);

// Sparse LU with iterative refinement; result is expanded to full dimension
// with zeros at eliminated dofs. Throws SolverError on singular
// factorization or unmet residual tolerance (1e-10 relative).
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
Eigen::VectorXd solve(const LinearSystem& sys);

struct DiscreteSolution {
    Method method = Method::hA;
    Eigen::VectorXd dofs;                 // full-dimension dof vector
    std::vector<LocalQuadratic> elements; // Hermite methods
    MixedSolution mixed;                  // mixed methods
};

// Element-wise reconstruction from the dof vector. Hermite methods recover a
// LocalQuadratic per element (hB needs the rt0 velocity used at assembly);
// mixed methods split the vector into edge fluxes and cell constants.
DiscreteSolution reconstruct(const Mesh& mesh, const Eigen::VectorXd& dofs, Method method,
                             const DiffusionTensor& K, const DiscreteVelocity* vel);

} // namespace hfem
