#ifndef TOPOREG_POINT_CLOUD_HPP
#define TOPOREG_POINT_CLOUD_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "toporeg/errors.hpp"

namespace toporeg {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

// Ordered planar points, optionally labeled. Point order is meaningful: it
// drives every tie-break downstream (triangulation, filtration, diagrams).
struct PointCloud {
    std::vector<Vec2> points;
    std::vector<std::string> ids; // empty, or one label per point

    PointCloud() = default;
    explicit PointCloud(std::vector<Vec2> pts) : points(std::move(pts)) {}

    std::size_t size() const { return points.size(); }

    // Coordinates must be finite; no two points may coincide within 1e-12
    // (duplicates are rejected, not merged).
    void validate() const {
        if (!ids.empty() && ids.size() != points.size())
            fail(ErrorCode::LengthMismatch, "ids length differs from point count");
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (!std::isfinite(points[i].x) || !std::isfinite(points[i].y))
                fail(ErrorCode::DegenerateCloud, "non-finite coordinate at point " + std::to_string(i));
        }
        constexpr double tol2 = 1e-12 * 1e-12;
        for (std::size_t i = 0; i < points.size(); ++i) {
            for (std::size_t j = i + 1; j < points.size(); ++j) {
                if ((points[i] - points[j]).norm2() <= tol2)
                    fail(ErrorCode::DuplicatePoints,
                         "points " + std::to_string(i) + " and " + std::to_string(j) +
                             " coincide within 1e-12");
            }
        }
    }

    // Subcloud on the given (ascending) indices; labels follow when present.
    PointCloud subcloud(const std::vector<std::size_t>& indices) const {
        PointCloud sub;
        sub.points.reserve(indices.size());
        for (std::size_t idx : indices) sub.points.push_back(points[idx]);
        if (!ids.empty()) {
            sub.ids.reserve(indices.size());
            for (std::size_t idx : indices) sub.ids.push_back(ids[idx]);
        }
        return sub;
    }
};

} // namespace toporeg

#endif
