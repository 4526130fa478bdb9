#ifndef TOPOREG_DATASETS_HPP
#define TOPOREG_DATASETS_HPP

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "toporeg/errors.hpp"
#include "toporeg/graph.hpp"
#include "toporeg/point_cloud.hpp"
#include "toporeg/rng.hpp"

namespace toporeg {

struct CircleData {
    Eigen::MatrixXd data;       // n x ambient_dim
    std::vector<double> angles; // ground truth, in [0, 2*pi)
};

// Unit-circle samples at uniform random angles in the first two coordinates,
// i.i.d. uniform noise on [-noise_half_width, noise_half_width] elsewhere.
inline CircleData generate_circle(int n = 50, int ambient_dim = 500,
                                  double noise_half_width = 0.45, std::uint64_t seed = 0) {
    if (n < 3 || ambient_dim < 2)
        fail(ErrorCode::BadDimensions, "circle data needs n >= 3 and ambient_dim >= 2");
    Rng rng(seed);
    CircleData out;
    out.data = Eigen::MatrixXd::Zero(n, ambient_dim);
    out.angles.resize(n);
    const double two_pi = 2.0 * 3.14159265358979323846;
    for (int i = 0; i < n; ++i) {
        out.angles[i] = two_pi * rng.uniform01();
        out.data(i, 0) = std::cos(out.angles[i]);
        out.data(i, 1) = std::sin(out.angles[i]);
    }
    for (int i = 0; i < n; ++i)
        for (int j = 2; j < ambient_dim; ++j)
            out.data(i, j) = rng.uniform(-noise_half_width, noise_half_width);
    return out;
}

struct ClusterData {
    PointCloud cloud;
    std::vector<int> labels; // cluster index per point
};

// Isotropic Gaussian blobs around the given centers.
inline ClusterData generate_clusters(const std::vector<Vec2>& centers, int points_per_cluster,
                                     double spread, std::uint64_t seed = 0) {
    if (centers.empty()) fail(ErrorCode::BadConfig, "need at least one cluster center");
    if (points_per_cluster < 1) fail(ErrorCode::BadConfig, "points_per_cluster must be >= 1");
    Rng rng(seed);
    ClusterData out;
    for (std::size_t c = 0; c < centers.size(); ++c) {
        for (int k = 0; k < points_per_cluster; ++k) {
            const Vec2 p{centers[c].x + spread * rng.normal(),
                         centers[c].y + spread * rng.normal()};
            out.cloud.points.push_back(p);
            out.cloud.ids.push_back(std::to_string(out.cloud.ids.size()));
            out.labels.push_back(static_cast<int>(c));
        }
    }
    return out;
}

struct BifurcationData {
    Eigen::MatrixXd data;    // (3*arm_length_points + 1) x ambient_dim
    std::vector<int> labels; // 0, 1, 2 per arm; 3 for the junction
    PointCloud planar;       // the exact 2-D 'Y' coordinates
};

// Planar 'Y': three unit arms leaving a common junction at angles 90, 210,
// and 330 degrees, lifted with ambient uniform noise like generate_circle.
inline BifurcationData generate_bifurcation(int arm_length_points = 20, int ambient_dim = 50,
                                            double noise_half_width = 0.05,
                                            std::uint64_t seed = 0) {
    if (arm_length_points < 2 || ambient_dim < 2)
        fail(ErrorCode::BadDimensions, "bifurcation needs >= 2 points per arm and ambient_dim >= 2");
    Rng rng(seed);
    BifurcationData out;
    const int n = 3 * arm_length_points + 1;
    out.data = Eigen::MatrixXd::Zero(n, ambient_dim);
    out.planar.points.push_back(Vec2{0.0, 0.0});
    out.planar.ids.push_back("0");
    out.labels.push_back(3);
    const double deg = 3.14159265358979323846 / 180.0;
    const std::array<double, 3> arm_angle{90.0 * deg, 210.0 * deg, 330.0 * deg};
    for (int arm = 0; arm < 3; ++arm) {
        const Vec2 dir{std::cos(arm_angle[arm]), std::sin(arm_angle[arm])};
        for (int k = 1; k <= arm_length_points; ++k) {
            const double t = static_cast<double>(k) / arm_length_points;
            out.planar.points.push_back(dir * t);
            out.planar.ids.push_back(std::to_string(out.planar.ids.size()));
            out.labels.push_back(arm);
        }
    }
    for (int i = 0; i < n; ++i) {
        out.data(i, 0) = out.planar.points[i].x;
        out.data(i, 1) = out.planar.points[i].y;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 2; j < ambient_dim; ++j)
            out.data(i, j) = rng.uniform(-noise_half_width, noise_half_width);
    return out;
}

struct KarateData {
    Graph graph;
    std::vector<int> labels; // 0 = instructor faction, 1 = administrator faction
};

// Zachary's karate club: 34 members, 78 friendship ties, and the two
// factions after the split.
inline KarateData load_karate() {
    static constexpr std::array<std::pair<int, int>, 78> kEdges{{
        {0, 1},   {0, 2},   {0, 3},   {0, 4},   {0, 5},   {0, 6},   {0, 7},   {0, 8},
        {0, 10},  {0, 11},  {0, 12},  {0, 13},  {0, 17},  {0, 19},  {0, 21},  {0, 31},
        {1, 2},   {1, 3},   {1, 7},   {1, 13},  {1, 17},  {1, 19},  {1, 21},  {1, 30},
        {2, 3},   {2, 7},   {2, 8},   {2, 9},   {2, 13},  {2, 27},  {2, 28},  {2, 32},
        {3, 7},   {3, 12},  {3, 13},  {4, 6},   {4, 10},  {5, 6},   {5, 10},  {5, 16},
        {6, 16},  {8, 30},  {8, 32},  {8, 33},  {9, 33},  {13, 33}, {14, 32}, {14, 33},
        {15, 32}, {15, 33}, {18, 32}, {18, 33}, {19, 33}, {20, 32}, {20, 33}, {22, 32},
        {22, 33}, {23, 25}, {23, 27}, {23, 29}, {23, 32}, {23, 33}, {24, 25}, {24, 27},
        {24, 31}, {25, 31}, {26, 29}, {26, 33}, {27, 33}, {28, 31}, {28, 33}, {29, 32},
        {29, 33}, {30, 32}, {30, 33}, {31, 32}, {31, 33}, {32, 33},
    }};
    static constexpr std::array<int, 34> kLabels{0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0,
                                                 0, 0, 1, 1, 0, 0, 1, 0, 1, 0, 1, 1,
                                                 1, 1, 1, 1, 1, 1, 1, 1, 1, 1};
    KarateData out;
    out.graph = make_graph(34, {kEdges.begin(), kEdges.end()});
    out.labels.assign(kLabels.begin(), kLabels.end());
    if (out.graph.n != 34 || out.graph.edges.size() != 78)
        fail(ErrorCode::FixtureMissing, "karate fixture failed its self-check");
    return out;
}

} // namespace toporeg

#endif
