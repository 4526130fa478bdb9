#ifndef TOPOREG_TRAJECTORY_HPP
#define TOPOREG_TRAJECTORY_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "toporeg/alpha.hpp"
#include "toporeg/errors.hpp"
#include "toporeg/persistence.hpp"
#include "toporeg/point_cloud.hpp"

namespace toporeg {

struct CycleProjection {
    std::vector<Vec2> loop; // closed anchor polygon, counterclockwise
    double total_length = 0.0;
    struct PointOnLoop {
        int segment = 0;      // anchor[segment] -> anchor[segment+1 mod k]
        double t = 0.0;       // parameter along the segment, in [0, 1]
        Vec2 projected{0.0, 0.0};
        double arc_position = 0.0; // in [0, total_length)
    };
    std::vector<PointOnLoop> points;
};

// Orthogonal projection of every point onto the closed polygon through the
// anchors; equidistant segments resolve to the lower segment index.
inline CycleProjection project_onto_loop(const std::vector<Vec2>& anchors,
                                         const std::vector<Vec2>& points) {
    const std::size_t k = anchors.size();
    if (k < 3) fail(ErrorCode::NotALoop, "loop needs at least 3 anchors");

    CycleProjection out;
    out.loop = anchors;
    std::vector<double> seg_len(k), cum_len(k, 0.0);
    for (std::size_t s = 0; s < k; ++s) {
        seg_len[s] = (anchors[(s + 1) % k] - anchors[s]).norm();
        if (s + 1 < k) cum_len[s + 1] = cum_len[s] + seg_len[s];
    }
    out.total_length = cum_len[k - 1] + seg_len[k - 1];
    if (out.total_length <= 0.0) fail(ErrorCode::NotALoop, "loop has zero length");

    out.points.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Vec2& p = points[i];
        double best_d2 = std::numeric_limits<double>::infinity();
        CycleProjection::PointOnLoop best;
        for (std::size_t s = 0; s < k; ++s) {
            const Vec2& a = anchors[s];
            const Vec2 dir = anchors[(s + 1) % k] - a;
            const double len2 = dir.norm2();
            double t = (len2 > 0.0) ? std::clamp((p - a).dot(dir) / len2, 0.0, 1.0) : 0.0;
            const Vec2 proj = a + dir * t;
            const double d2 = (p - proj).norm2();
            if (d2 < best_d2) {
                best_d2 = d2;
                best.segment = static_cast<int>(s);
                best.t = t;
                best.projected = proj;
                best.arc_position = std::fmod(cum_len[s] + t * seg_len[s], out.total_length);
            }
        }
        out.points[i] = best;
    }
    return out;
}

struct PseudotimeResult {
    std::vector<double> pseudotime; // per point, in [0, 2*pi)
    CycleProjection projection;
    std::vector<int> loop_vertices; // indices into the cloud, origin first
};

// Representative cycle of the most persistent H1 pair, oriented
// counterclockwise with the origin at its lowest-index anchor; pseudotime is
// the normalized arc-length position of each point's projection.
inline PseudotimeResult infer_pseudotime(const PointCloud& cloud) {
    const Filtration filt = alpha_filtration(cloud);
    const PersistenceResult pers = compute_persistence(filt, 1);
    std::vector<int> loop = representative_cycle(filt, pers, 0);

    std::vector<Vec2> anchors(loop.size());
    for (std::size_t i = 0; i < loop.size(); ++i) anchors[i] = cloud.points[loop[i]];
    double signed_area = 0.0;
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        const Vec2& a = anchors[i];
        const Vec2& b = anchors[(i + 1) % anchors.size()];
        signed_area += a.x * b.y - b.x * a.y;
    }
    if (signed_area < 0.0) {
        std::reverse(loop.begin() + 1, loop.end());
        std::reverse(anchors.begin() + 1, anchors.end());
    }

    PseudotimeResult res;
    res.projection = project_onto_loop(anchors, cloud.points);
    res.loop_vertices = std::move(loop);
    res.pseudotime.resize(cloud.points.size());
    const double two_pi = 2.0 * 3.14159265358979323846;
    for (std::size_t i = 0; i < cloud.points.size(); ++i)
        res.pseudotime[i] =
            two_pi * res.projection.points[i].arc_position / res.projection.total_length;
    return res;
}

// Fisher-Lee circular correlation coefficient.
inline double circular_correlation(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) fail(ErrorCode::LengthMismatch, "angle vectors differ in length");
    if (a.size() < 3) fail(ErrorCode::LengthMismatch, "need at least 3 angles");
    double num = 0.0, da = 0.0, db = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            const double sa = std::sin(a[i] - a[j]);
            const double sb = std::sin(b[i] - b[j]);
            num += sa * sb;
            da += sa * sa;
            db += sb * sb;
        }
    }
    const double denom = std::sqrt(da * db);
    return (denom > 0.0) ? num / denom : 0.0;
}

// Mean inter-label pairwise distance over mean intra-label pairwise distance.
inline double community_separation(const PointCloud& cloud, const std::vector<int>& labels) {
    if (labels.size() != cloud.points.size())
        fail(ErrorCode::LengthMismatch, "labels do not match the cloud");
    std::map<int, int> counts;
    for (int l : labels) ++counts[l];
    if (counts.size() < 2) fail(ErrorCode::SingleLabel, "need at least 2 distinct labels");
    for (const auto& [label, count] : counts)
        if (count < 2)
            fail(ErrorCode::SingleLabel,
                 "label " + std::to_string(label) + " has fewer than 2 points");

    double inter = 0.0, intra = 0.0;
    std::size_t n_inter = 0, n_intra = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        for (std::size_t j = i + 1; j < labels.size(); ++j) {
            const double d = (cloud.points[i] - cloud.points[j]).norm();
            if (labels[i] == labels[j]) {
                intra += d;
                ++n_intra;
            } else {
                inter += d;
                ++n_inter;
            }
        }
    }
    return (inter / static_cast<double>(n_inter)) / (intra / static_cast<double>(n_intra));
}

// Deterministic 2-means: centers start at the farthest point pair, then
// Lloyd iterations; distance ties go to cluster 0.
inline std::vector<int> two_means(const PointCloud& cloud, int max_iter = 100) {
    const std::size_t n = cloud.points.size();
    if (n < 2) fail(ErrorCode::TooFewPoints, "2-means needs at least 2 points");
    std::size_t bi = 0, bj = 1;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d2 = (cloud.points[i] - cloud.points[j]).norm2();
            if (d2 > best) {
                best = d2;
                bi = i;
                bj = j;
            }
        }
    }
    Vec2 c0 = cloud.points[bi], c1 = cloud.points[bj];
    std::vector<int> labels(n, 0);
    for (int it = 0; it < max_iter; ++it) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            const int want =
                ((cloud.points[i] - c1).norm2() < (cloud.points[i] - c0).norm2()) ? 1 : 0;
            if (want != labels[i]) {
                labels[i] = want;
                changed = true;
            }
        }
        Vec2 s0{0.0, 0.0}, s1{0.0, 0.0};
        int n0 = 0, n1 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (labels[i] == 0) {
                s0 = s0 + cloud.points[i];
                ++n0;
            } else {
                s1 = s1 + cloud.points[i];
                ++n1;
            }
        }
        if (n0 > 0) c0 = s0 * (1.0 / n0);
        if (n1 > 0) c1 = s1 * (1.0 / n1);
        if (!changed && it > 0) break;
    }
    return labels;
}

} // namespace toporeg

#endif
