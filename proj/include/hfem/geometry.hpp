#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <vector>

#include "hfem/mesh.hpp"

namespace hfem {

using Vec2 = Eigen::Vector2d;
using ScalarField = std::function<double(const Vec2&)>;
using VectorField = std::function<Vec2(const Vec2&)>;

// Per-triangle geometric quantities. Face F_i is the edge opposite vertex i.
struct TriangleGeometry {
    std::array<Vec2, 3> x;          // vertices, counterclockwise
    double area = 0.0;
    Vec2 centroid = Vec2::Zero();
    std::array<double, 3> face_len{};   // meas(F_i)
    std::array<Vec2, 3> n_out{};        // outward unit normal of F_i
    std::array<double, 3> height{};     // h_i = 2*area / meas(F_i)
    std::array<Vec2, 3> face_mid{};     // midpoint of F_i
};

// Throws std::invalid_argument on zero or negative area.
TriangleGeometry triangle_geometry(const Vec2& a, const Vec2& b, const Vec2& c);
TriangleGeometry triangle_geometry(const Mesh& mesh, int t);

// Quadrature on the reference triangle, stored in barycentric coordinates
// with weights summing to one (scaled by the element area at use).
struct QuadratureRule {
    std::vector<std::array<double, 3>> points;
    std::vector<double> weights;
    int degree = 0;
};

// Positive-weight rule exact for all bivariate polynomials up to the given
// total degree. Supported degrees: 2, 4, 6, 10. Throws otherwise.
const QuadratureRule& quadrature_rule(int degree);

template <class F>
double integrate(const TriangleGeometry& g, F&& f, const QuadratureRule& rule) {
    double s = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const auto& l = rule.points[q];
        const Vec2 p = l[0] * g.x[0] + l[1] * g.x[1] + l[2] * g.x[2];
        s += rule.weights[q] * f(p);
    }
    return s * g.area;
}

// Two-point Gauss mean of f along the segment [a, b] (exact to degree 3).
template <class F>
double edge_mean_gauss2(const Vec2& a, const Vec2& b, F&& f) {
    static const double s = 0.5 / std::sqrt(3.0);
    const Vec2 mid = 0.5 * (a + b);
    const Vec2 half = b - a;
    return 0.5 * (f(mid - s * half) + f(mid + s * half));
}

// Barycentric coordinates of p with respect to g.
std::array<double, 3> barycentric(const TriangleGeometry& g, const Vec2& p);

} // namespace hfem
