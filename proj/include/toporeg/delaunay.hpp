#ifndef TOPOREG_DELAUNAY_HPP
#define TOPOREG_DELAUNAY_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "toporeg/errors.hpp"
#include "toporeg/point_cloud.hpp"
#include "toporeg/predicates.hpp"

namespace toporeg {

struct Triangulation {
    // Triangles with ascending vertex indices, list sorted lexicographically.
    std::vector<std::array<int, 3>> triangles;
    // All triangulation edges, ascending pairs, sorted lexicographically.
    std::vector<std::array<int, 2>> edges;
};

namespace detail {

// Incremental insertion in point-index order with Lawson legalization.
// Exact cocircularity is treated as legal (no flip), so configurations built
// from lower-indexed points persist; together with index-order insertion this
// realizes the lowest-vertex-index tie-break for cocircular point sets.
class DelaunayBuilder {
public:
    explicit DelaunayBuilder(const std::vector<Vec2>& pts) : pts_(pts) {}

    void build() {
        const int n = static_cast<int>(pts_.size());
        // First point whose orientation against points 0 and 1 is nonzero.
        int apex = -1;
        for (int i = 2; i < n; ++i) {
            if (orient2d(pts_[0], pts_[1], pts_[i]) != 0.0) { apex = i; break; }
        }
        if (apex < 0) fail(ErrorCode::AllCollinear, "no triangle exists");

        start_fan(apex);
        for (int i = 2; i < n; ++i) {
            if (i == apex || inserted_[i]) continue;
            insert(i);
        }
    }

    std::vector<std::array<int, 3>> alive_triangles() const {
        std::vector<std::array<int, 3>> out;
        for (std::size_t t = 0; t < tris_.size(); ++t) {
            if (!alive_[t]) continue;
            std::array<int, 3> tri = tris_[t];
            std::sort(tri.begin(), tri.end());
            out.push_back(tri);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    const std::vector<Vec2>& pts_;
    std::vector<std::array<int, 3>> tris_; // counterclockwise vertex order
    std::vector<char> alive_;
    std::unordered_map<std::uint64_t, std::array<int, 2>> edge_tris_;
    std::vector<std::array<int, 2>> flip_stack_;
    std::vector<char> inserted_;

    static std::uint64_t edge_key(int u, int v) {
        if (u > v) std::swap(u, v);
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
               static_cast<std::uint32_t>(v);
    }

    int add_tri(int a, int b, int c) {
        int t = static_cast<int>(tris_.size());
        tris_.push_back({a, b, c});
        alive_.push_back(1);
        for (auto [u, v] : std::array<std::array<int, 2>, 3>{{{a, b}, {b, c}, {c, a}}}) {
            auto it = edge_tris_.find(edge_key(u, v));
            if (it == edge_tris_.end()) edge_tris_.emplace(edge_key(u, v), std::array<int, 2>{t, -1});
            else it->second[1] = t;
        }
        return t;
    }

    void remove_tri(int t) {
        alive_[t] = 0;
        const auto& tri = tris_[t];
        for (auto [u, v] : std::array<std::array<int, 2>, 3>{
                 {{tri[0], tri[1]}, {tri[1], tri[2]}, {tri[2], tri[0]}}}) {
            auto it = edge_tris_.find(edge_key(u, v));
            if (it->second[0] == t) it->second[0] = it->second[1];
            it->second[1] = -1;
            if (it->second[0] < 0) edge_tris_.erase(it);
        }
    }

    int opposite_vertex(int t, int u, int v) const {
        for (int w : tris_[t])
            if (w != u && w != v) return w;
        return -1;
    }

    // Fan from the collinear prefix [0, apex) to the apex point. The prefix
    // points all lie on one line, so consecutive segments plus the apex give
    // a valid (and Delaunay) triangulation of that prefix.
    void start_fan(int apex) {
        inserted_.assign(pts_.size(), 0);
        std::vector<int> chain;
        for (int i = 0; i < apex; ++i) chain.push_back(i);
        Vec2 dir = pts_[1] - pts_[0];
        const bool by_x = std::abs(dir.x) >= std::abs(dir.y);
        std::sort(chain.begin(), chain.end(), [&](int i, int j) {
            return by_x ? pts_[i].x < pts_[j].x : pts_[i].y < pts_[j].y;
        });
        for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
            int u = chain[k], v = chain[k + 1];
            if (orient2d(pts_[u], pts_[v], pts_[apex]) > 0.0)
                add_tri(u, v, apex);
            else
                add_tri(v, u, apex);
            flip_stack_.push_back({u, v});
        }
        for (int i = 0; i <= apex; ++i) inserted_[i] = 1;
    }

    void insert(int p) {
        inserted_[p] = 1;
        int containing = -1, on_edge_u = -1, on_edge_v = -1;
        for (std::size_t t = 0; t < tris_.size() && containing < 0; ++t) {
            if (!alive_[t]) continue;
            const auto& tri = tris_[t];
            double o0 = orient2d(pts_[tri[0]], pts_[tri[1]], pts_[p]);
            double o1 = orient2d(pts_[tri[1]], pts_[tri[2]], pts_[p]);
            double o2 = orient2d(pts_[tri[2]], pts_[tri[0]], pts_[p]);
            if (o0 < 0.0 || o1 < 0.0 || o2 < 0.0) continue;
            containing = static_cast<int>(t);
            if (o0 == 0.0) { on_edge_u = tri[0]; on_edge_v = tri[1]; }
            else if (o1 == 0.0) { on_edge_u = tri[1]; on_edge_v = tri[2]; }
            else if (o2 == 0.0) { on_edge_u = tri[2]; on_edge_v = tri[0]; }
        }

        if (containing < 0) insert_outside(p);
        else if (on_edge_u < 0) insert_interior(containing, p);
        else insert_on_edge(containing, on_edge_u, on_edge_v, p);

        legalize();
    }

    void insert_interior(int t, int p) {
        auto [a, b, c] = tris_[t];
        remove_tri(t);
        add_tri(a, b, p);
        add_tri(b, c, p);
        add_tri(c, a, p);
        flip_stack_.push_back({a, b});
        flip_stack_.push_back({b, c});
        flip_stack_.push_back({c, a});
    }

    void insert_on_edge(int t, int u, int v, int p) {
        int w = opposite_vertex(t, u, v);
        auto adj = edge_tris_.at(edge_key(u, v));
        int t2 = (adj[0] == t) ? adj[1] : adj[0];
        remove_tri(t);
        add_tri(u, p, w);
        add_tri(p, v, w);
        flip_stack_.push_back({u, w});
        flip_stack_.push_back({v, w});
        if (t2 >= 0) {
            int z = opposite_vertex(t2, u, v);
            remove_tri(t2);
            add_tri(p, u, z);
            add_tri(v, p, z);
            flip_stack_.push_back({u, z});
            flip_stack_.push_back({v, z});
        }
    }

    void insert_outside(int p) {
        // Snapshot of hull edges strictly visible from p, oriented so the
        // triangulation interior is on the left of (u, v).
        std::vector<std::array<int, 2>> visible;
        for (std::size_t t = 0; t < tris_.size(); ++t) {
            if (!alive_[t]) continue;
            const auto& tri = tris_[t];
            for (auto [u, v] : std::array<std::array<int, 2>, 3>{
                     {{tri[0], tri[1]}, {tri[1], tri[2]}, {tri[2], tri[0]}}}) {
                const auto& adj = edge_tris_.at(edge_key(u, v));
                if (adj[1] >= 0) continue; // interior edge
                if (orient2d(pts_[u], pts_[v], pts_[p]) < 0.0) visible.push_back({u, v});
            }
        }
        for (auto [u, v] : visible) {
            add_tri(v, u, p);
            flip_stack_.push_back({u, v});
        }
    }

    void legalize() {
        while (!flip_stack_.empty()) {
            auto [u, v] = flip_stack_.back();
            flip_stack_.pop_back();
            auto it = edge_tris_.find(edge_key(u, v));
            if (it == edge_tris_.end() || it->second[1] < 0) continue;
            int t1 = it->second[0], t2 = it->second[1];
            int a = opposite_vertex(t1, u, v);
            int b = opposite_vertex(t2, u, v);
            // Strictly inside the circumcircle of t1: flip. Exactly on it: keep.
            const auto& tri = tris_[t1];
            if (incircle(pts_[tri[0]], pts_[tri[1]], pts_[tri[2]], pts_[b]) <= 0.0) continue;
            remove_tri(t1);
            remove_tri(t2);
            make_ccw_tri(a, b, u);
            make_ccw_tri(a, b, v);
            flip_stack_.push_back({u, a});
            flip_stack_.push_back({u, b});
            flip_stack_.push_back({v, a});
            flip_stack_.push_back({v, b});
        }
    }

    void make_ccw_tri(int a, int b, int c) {
        if (orient2d(pts_[a], pts_[b], pts_[c]) > 0.0) add_tri(a, b, c);
        else add_tri(b, a, c);
    }
};

} // namespace detail

// Delaunay triangulation of the cloud. Deterministic given input order:
// points are inserted in index order and exact cocircular ties never flip.
inline Triangulation delaunay(const PointCloud& cloud) {
    if (cloud.size() < 3) fail(ErrorCode::TooFewPoints, "delaunay needs at least 3 points");
    cloud.validate();

    detail::DelaunayBuilder builder(cloud.points);
    builder.build();

    Triangulation out;
    out.triangles = builder.alive_triangles();
    std::vector<std::array<int, 2>> edges;
    for (const auto& t : out.triangles) {
        edges.push_back({t[0], t[1]});
        edges.push_back({t[0], t[2]});
        edges.push_back({t[1], t[2]});
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    out.edges = std::move(edges);
    return out;
}

} // namespace toporeg

#endif
