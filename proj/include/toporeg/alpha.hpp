#ifndef TOPOREG_ALPHA_HPP
#define TOPOREG_ALPHA_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "toporeg/delaunay.hpp"
#include "toporeg/errors.hpp"
#include "toporeg/point_cloud.hpp"

namespace toporeg {

struct Simplex {
    std::array<int, 3> vertices{-1, -1, -1}; // ascending, unused slots -1
    int dimension = 0;
};

// Alpha filtration over the Delaunay triangulation. Every simplex carries its
// alpha value (squared-length units) and a provenance record: Gabriel(self),
// or Inherited(index of the coface whose value it takes).
struct Filtration {
    std::vector<Simplex> simplices;
    std::vector<double> values;
    std::vector<int> attaining_coface;  // -1 for Gabriel(self)
    std::vector<std::size_t> order;     // simplex indices sorted by (value, dim, vertices)
    std::vector<std::size_t> rank;      // simplex index -> position in order
    std::size_t n_points = 0;

    bool is_gabriel(std::size_t simplex_index) const { return attaining_coface[simplex_index] < 0; }

    int edge_index(int u, int v) const {
        if (u > v) std::swap(u, v);
        auto it = edge_lookup_.find(pack(u, v));
        return it == edge_lookup_.end() ? -1 : it->second;
    }

    // Construction-time helpers; indexes edges for face lookups.
    void build_lookups() {
        edge_lookup_.clear();
        for (std::size_t s = 0; s < simplices.size(); ++s)
            if (simplices[s].dimension == 1)
                edge_lookup_.emplace(pack(simplices[s].vertices[0], simplices[s].vertices[1]),
                                     static_cast<int>(s));
    }

private:
    static std::uint64_t pack(int u, int v) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
               static_cast<std::uint32_t>(v);
    }
    std::unordered_map<std::uint64_t, int> edge_lookup_;
};

// Circumcenter of a nondegenerate triangle.
inline Vec2 circumcenter(const Vec2& a, const Vec2& b, const Vec2& c) {
    Vec2 u = b - a, v = c - a;
    double bl = u.norm2(), cl = v.norm2();
    double d = 2.0 * u.cross(v);
    double ox = (v.y * bl - u.y * cl) / d;
    double oy = (u.x * cl - v.x * bl) / d;
    return {a.x + ox, a.y + oy};
}

inline double circumradius2(const Vec2& a, const Vec2& b, const Vec2& c) {
    Vec2 o = circumcenter(a, b, c);
    return (a - o).norm2();
}

namespace detail {

// w strictly inside the circle with diameter (u, v): obtuse angle at w.
// On-circle (right angle) counts as outside, i.e. Gabriel.
inline bool inside_diametral(const Vec2& u, const Vec2& v, const Vec2& w) {
    return (u - w).dot(v - w) < 0.0;
}

} // namespace detail

inline Filtration alpha_filtration(const PointCloud& cloud) {
    const std::size_t n = cloud.size();
    if (n == 0) fail(ErrorCode::TooFewPoints, "empty cloud");

    Filtration f;
    f.n_points = n;
    for (std::size_t i = 0; i < n; ++i) {
        Simplex s;
        s.vertices = {static_cast<int>(i), -1, -1};
        s.dimension = 0;
        f.simplices.push_back(s);
        f.values.push_back(0.0);
        f.attaining_coface.push_back(-1);
    }

    if (n == 1) {
        cloud.validate();
    } else if (n == 2) {
        cloud.validate();
        Simplex e;
        e.vertices = {0, 1, -1};
        e.dimension = 1;
        f.simplices.push_back(e);
        f.values.push_back((cloud.points[0] - cloud.points[1]).norm2() / 4.0);
        f.attaining_coface.push_back(-1);
    } else {
        Triangulation tri = delaunay(cloud);

        const int edge_base = static_cast<int>(f.simplices.size());
        for (const auto& e : tri.edges) {
            Simplex s;
            s.vertices = {e[0], e[1], -1};
            s.dimension = 1;
            f.simplices.push_back(s);
            f.values.push_back(0.0);
            f.attaining_coface.push_back(-1);
        }
        const int tri_base = static_cast<int>(f.simplices.size());
        for (const auto& t : tri.triangles) {
            Simplex s;
            s.vertices = {t[0], t[1], t[2]};
            s.dimension = 2;
            f.simplices.push_back(s);
            double r2 = circumradius2(cloud.points[t[0]], cloud.points[t[1]], cloud.points[t[2]]);
            if (!std::isfinite(r2))
                fail(ErrorCode::DegenerateCloud, "triangle too close to degenerate for a circumradius");
            f.values.push_back(r2);
            f.attaining_coface.push_back(-1);
        }

        // Edge values: squared half-length when Gabriel, otherwise the
        // smallest value among incident triangles that violate the
        // diametral-circle test (Definition of inherited alpha values).
        std::unordered_map<std::uint64_t, std::vector<int>> edge_to_tris;
        auto pack = [](int u, int v) {
            if (u > v) std::swap(u, v);
            return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
                   static_cast<std::uint32_t>(v);
        };
        for (std::size_t t = 0; t < tri.triangles.size(); ++t) {
            const auto& tv = tri.triangles[t];
            edge_to_tris[pack(tv[0], tv[1])].push_back(static_cast<int>(t));
            edge_to_tris[pack(tv[0], tv[2])].push_back(static_cast<int>(t));
            edge_to_tris[pack(tv[1], tv[2])].push_back(static_cast<int>(t));
        }
        std::unordered_map<std::uint64_t, int> edge_simplex;
        for (std::size_t e = 0; e < tri.edges.size(); ++e)
            edge_simplex.emplace(pack(tri.edges[e][0], tri.edges[e][1]),
                                 edge_base + static_cast<int>(e));

        for (std::size_t e = 0; e < tri.edges.size(); ++e) {
            const int u = tri.edges[e][0], v = tri.edges[e][1];
            const int se = edge_base + static_cast<int>(e);
            double best = 0.0;
            int best_tri = -1;
            for (int t : edge_to_tris[pack(u, v)]) {
                const auto& tv = tri.triangles[t];
                int w = (tv[0] != u && tv[0] != v) ? tv[0] : ((tv[1] != u && tv[1] != v) ? tv[1] : tv[2]);
                if (!detail::inside_diametral(cloud.points[u], cloud.points[v], cloud.points[w]))
                    continue;
                double tval = f.values[tri_base + t];
                if (best_tri < 0 || tval < best) { best = tval; best_tri = t; }
            }
            if (best_tri < 0) {
                f.values[se] = (cloud.points[u] - cloud.points[v]).norm2() / 4.0;
            } else {
                f.values[se] = best;
                f.attaining_coface[se] = tri_base + best_tri;
            }
        }

        // In exact arithmetic an edge value never exceeds any incident
        // triangle's: the violating triangle flanking an edge always has the
        // smaller circumradius, and a Gabriel edge's half-length is a lower
        // bound for every circumradius through its endpoints. Rounding can
        // still break this (sliver triangles from cocircular inputs amplify
        // the circumradius error well past a few ulps), so restore the
        // invariant directly and keep the attaining coface in sync for the
        // gradient.
        for (std::size_t t = 0; t < tri.triangles.size(); ++t) {
            const auto& tv = tri.triangles[t];
            const double tval = f.values[tri_base + t];
            for (auto [u, v] : {std::pair{tv[0], tv[1]}, {tv[0], tv[2]}, {tv[1], tv[2]}}) {
                const int se = edge_simplex.at(pack(u, v));
                if (f.values[se] > tval) {
                    f.values[se] = tval;
                    f.attaining_coface[se] = tri_base + static_cast<int>(t);
                }
            }
        }
    }

    f.order.resize(f.simplices.size());
    for (std::size_t i = 0; i < f.order.size(); ++i) f.order[i] = i;
    std::sort(f.order.begin(), f.order.end(), [&f](std::size_t a, std::size_t b) {
        if (f.values[a] != f.values[b]) return f.values[a] < f.values[b];
        if (f.simplices[a].dimension != f.simplices[b].dimension)
            return f.simplices[a].dimension < f.simplices[b].dimension;
        return f.simplices[a].vertices < f.simplices[b].vertices;
    });
    f.rank.resize(f.order.size());
    for (std::size_t pos = 0; pos < f.order.size(); ++pos) f.rank[f.order[pos]] = pos;
    f.build_lookups();
    return f;
}

// Sparse gradient of one alpha value: (point index, d alpha / d point) pairs.
struct AlphaGradient {
    std::array<std::pair<int, Vec2>, 3> entries;
    int count = 0;

    void add(int point, const Vec2& g) { entries[count++] = {point, g}; }
};

namespace detail {

inline AlphaGradient circumradius2_gradient(const PointCloud& cloud, const Simplex& s) {
    const Vec2 &a = cloud.points[s.vertices[0]], &b = cloud.points[s.vertices[1]],
               &c = cloud.points[s.vertices[2]];
    Vec2 o = circumcenter(a, b, c);
    // Barycentric weights of the circumcenter: o - a = wb (b - a) + wc (c - a).
    Vec2 u = b - a, v = c - a, r = o - a;
    double d = u.cross(v);
    double wb = r.cross(v) / d;
    double wc = u.cross(r) / d;
    double wa = 1.0 - wb - wc;
    // d(R^2)/dp = 2 w_p (p - o) for each vertex p.
    AlphaGradient g;
    g.add(s.vertices[0], 2.0 * wa * (a - o));
    g.add(s.vertices[1], 2.0 * wb * (b - o));
    g.add(s.vertices[2], 2.0 * wc * (c - o));
    return g;
}

} // namespace detail

// Gradient of the alpha value of one simplex with respect to the point
// coordinates; nonzero only on the vertices of the defining simplex (the
// simplex itself when Gabriel, the attaining coface when inherited).
inline AlphaGradient alpha_gradient_sparse(const PointCloud& cloud, const Filtration& f,
                                           std::size_t simplex_index) {
    const Simplex& s = f.simplices[simplex_index];
    if (s.dimension == 0) return {};
    if (f.attaining_coface[simplex_index] >= 0)
        return detail::circumradius2_gradient(
            cloud, f.simplices[f.attaining_coface[simplex_index]]);
    if (s.dimension == 2) return detail::circumradius2_gradient(cloud, s);
    // Gabriel edge: alpha = |u - v|^2 / 4.
    const Vec2 &u = cloud.points[s.vertices[0]], &v = cloud.points[s.vertices[1]];
    AlphaGradient g;
    g.add(s.vertices[0], (u - v) * 0.5);
    g.add(s.vertices[1], (v - u) * 0.5);
    return g;
}

inline std::vector<Vec2> alpha_value_gradient(const PointCloud& cloud, const Filtration& f,
                                              std::size_t simplex_index) {
    std::vector<Vec2> dense(cloud.size());
    AlphaGradient g = alpha_gradient_sparse(cloud, f, simplex_index);
    for (int k = 0; k < g.count; ++k) dense[g.entries[k].first] += g.entries[k].second;
    return dense;
}

} // namespace toporeg

#endif
