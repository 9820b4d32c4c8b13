#pragma once

#include "hfem/analysis.hpp"

namespace hfem {

// Source-term handling for test problem 2. fixed_f (default) keeps the
// printed source f = 1 - (x1^2 + x2^2)/2 together with its matching unit
// velocity, so the solved system is the same at every reported Peclet
// number (the reference disk tables repeat one row per Peclet). regen_f
// scales the velocity with Pe and regenerates f from the identity
// f = -div K grad u + w . grad u; those systems become severely
// ill-conditioned for moderate Pe. Problem 1 always regenerates f.
enum class FMode { fixed_f, regen_f };

struct ProblemSpec {
    int id = 1;
    DomainId domain = DomainId::unit_square;
    DiffusionTensor K;
    double peclet = 1.0;
    VectorField w;
    ScalarField div_w; // analytic divergence of w
    ScalarField f;
    ExactFields exact;
    // source-term convention under which this problem's reference results
    // are reproduced (square: -(f, v); disk: -(f, Pi_h v))
    RhsMode hermite_rhs = RhsMode::full_test;
};

// Built-in manufactured problems:
//   1: unit square, u = (x1 - x1^2)(x2 - x2^2)/4, w = Pe [x1^2, x2^2]^t/sqrt(2)
//   2: quarter disk, u = (1 - x1^2 - x2^2)/4,     w = Pe [x1, x2]^t
// both with K = I. Throws on unknown id or Pe <= 0.
ProblemSpec builtin_problem(int id, double peclet, FMode mode = FMode::fixed_f);

Mesh build_problem_mesh(const ProblemSpec& problem, int L);

} // namespace hfem
