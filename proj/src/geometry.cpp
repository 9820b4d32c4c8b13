#include "hfem/geometry.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace hfem {

TriangleGeometry triangle_geometry(const Vec2& a, const Vec2& b, const Vec2& c) {
    TriangleGeometry g;
    g.x = {a, b, c};
    const double twice = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
    if (!(twice > 0.0)) throw std::invalid_argument("degenerate triangle (area <= 0)");
    g.area = 0.5 * twice;
    g.centroid = (a + b + c) / 3.0;
    for (int i = 0; i < 3; ++i) {
        const Vec2& p = g.x[(i + 1) % 3];
        const Vec2& q = g.x[(i + 2) % 3];
        const Vec2 t = q - p;
        g.face_len[i] = t.norm();
        g.n_out[i] = Vec2(t.y(), -t.x()) / g.face_len[i]; // outward for ccw vertices
        g.height[i] = 2.0 * g.area / g.face_len[i];
        g.face_mid[i] = 0.5 * (p + q);
    }
    return g;
}

TriangleGeometry triangle_geometry(const Mesh& m, int t) {
    const auto& tri = m.triangles[t];
    auto v = [&](int k) { return Vec2(m.vertices[tri[k]][0], m.vertices[tri[k]][1]); };
    return triangle_geometry(v(0), v(1), v(2));
}

std::array<double, 3> barycentric(const TriangleGeometry& g, const Vec2& p) {
    std::array<double, 3> l{};
    for (int i = 0; i < 3; ++i) {
        // signed distance from the line of F_i, scaled to 1 at vertex i
        const Vec2& a = g.x[(i + 1) % 3];
        l[i] = (p - a).dot(-g.n_out[i]) / g.height[i];
    }
    return l;
}

namespace {

struct GaussSegment {
    std::vector<double> nodes;   // on [0, 1]
    std::vector<double> weights; // summing to 1
};

// Gauss-Legendre nodes on [-1, 1]; classic values, verified by the monomial
// exactness tests.
GaussSegment gauss_segment(int n) {
    static const std::map<int, std::vector<std::array<double, 2>>> table = {
        {2, {{0.5773502691896257645091488, 1.0}}},
        {3, {{0.0, 0.8888888888888888888888889}, {0.7745966692414833770358531, 0.5555555555555555555555556}}},
        {4,
         {{0.3399810435848562648026658, 0.6521451548625461426269361},
          {0.8611363115940525752239465, 0.3478548451374538573730639}}},
        {6,
         {{0.2386191860831969086305017, 0.4679139345726910473898703},
          {0.6612093864662645136613996, 0.3607615730481386075698335},
          {0.9324695142031520278123016, 0.1713244923791703450402961}}},
    };
    const auto& rows = table.at(n);
    GaussSegment s;
    for (const auto& [x, w] : rows) {
        if (x == 0.0) {
            s.nodes.push_back(0.5);
            s.weights.push_back(0.5 * w);
        } else {
            s.nodes.push_back(0.5 * (1.0 - x));
            s.weights.push_back(0.5 * w);
            s.nodes.push_back(0.5 * (1.0 + x));
            s.weights.push_back(0.5 * w);
        }
    }
    return s;
}

// Collapsed (Duffy) tensor rule: x = xi (1 - eta), y = eta, Jacobian 1 - eta.
// An n-point segment rule gives exactness for total degree 2n - 2 on the
// triangle; all weights positive.
QuadratureRule duffy_rule(int n, int degree) {
    const GaussSegment s = gauss_segment(n);
    QuadratureRule r;
    r.degree = degree;
    for (std::size_t i = 0; i < s.nodes.size(); ++i) {
        for (std::size_t j = 0; j < s.nodes.size(); ++j) {
            const double xi = s.nodes[i], eta = s.nodes[j];
            const double x = xi * (1.0 - eta), y = eta;
            r.points.push_back({1.0 - x - y, x, y});
            r.weights.push_back(2.0 * s.weights[i] * s.weights[j] * (1.0 - eta));
        }
    }
    return r;
}

QuadratureRule midpoint_rule() {
    QuadratureRule r;
    r.degree = 2;
    r.points = {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}};
    r.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    return r;
}

} // namespace

const QuadratureRule& quadrature_rule(int degree) {
    static const QuadratureRule d2 = midpoint_rule();
    static const QuadratureRule d4 = duffy_rule(3, 4);
    static const QuadratureRule d6 = duffy_rule(4, 6);
    static const QuadratureRule d10 = duffy_rule(6, 10);
    switch (degree) {
        case 2: return d2;
        case 4: return d4;
        case 6: return d6;
        case 10: return d10;
        default: throw std::invalid_argument("unsupported quadrature degree (use 2, 4, 6 or 10)");
    }
}

} // namespace hfem
