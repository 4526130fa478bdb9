#ifndef TOPOREG_PREDICATES_HPP
#define TOPOREG_PREDICATES_HPP

#include <cmath>
#include <vector>

#include "toporeg/point_cloud.hpp"

namespace toporeg {

// Adaptive-precision orientation and in-circle predicates. Each test first
// evaluates in plain floating point against a forward error bound; only when
// the result is within the bound does it fall back to exact evaluation with
// nonoverlapping floating-point expansions. Signs are therefore exact, which
// is what the triangulation's determinism guarantee rests on.
namespace detail {

// (x, y) with x + y == a + b exactly.
inline void two_sum(double a, double b, double& x, double& y) {
    x = a + b;
    double bvirt = x - a;
    double avirt = x - bvirt;
    double bround = b - bvirt;
    double around = a - avirt;
    y = around + bround;
}

// (x, y) with x + y == a - b exactly.
inline void two_diff(double a, double b, double& x, double& y) {
    x = a - b;
    double bvirt = a - x;
    double avirt = x + bvirt;
    double bround = bvirt - b;
    double around = a - avirt;
    y = around + bround;
}

// (x, y) with x + y == a * b exactly.
inline void two_prod(double a, double b, double& x, double& y) {
    x = a * b;
    y = std::fma(a, b, -x);
}

// Nonoverlapping expansion, components in increasing magnitude order.
using Expansion = std::vector<double>;

inline Expansion grow(const Expansion& e, double b) {
    Expansion h;
    h.reserve(e.size() + 1);
    double q = b;
    for (double c : e) {
        double sum, err;
        two_sum(q, c, sum, err);
        if (err != 0.0) h.push_back(err);
        q = sum;
    }
    if (q != 0.0 || h.empty()) h.push_back(q);
    return h;
}

inline Expansion exp_add(const Expansion& e, const Expansion& f) {
    Expansion h = e;
    for (double c : f) h = grow(h, c);
    return h;
}

inline Expansion exp_scale(const Expansion& e, double b) {
    Expansion h;
    for (double c : e) {
        double p, err;
        two_prod(c, b, p, err);
        if (err != 0.0) h = grow(h, err);
        if (p != 0.0) h = grow(h, p);
    }
    if (h.empty()) h.push_back(0.0);
    return h;
}

inline Expansion exp_mul(const Expansion& e, const Expansion& f) {
    Expansion h{0.0};
    for (double c : f) h = exp_add(h, exp_scale(e, c));
    return h;
}

inline Expansion exp_neg(Expansion e) {
    for (double& c : e) c = -c;
    return e;
}

// Largest-magnitude component carries the sign of the whole expansion.
inline double exp_estimate(const Expansion& e) {
    for (auto it = e.rbegin(); it != e.rend(); ++it)
        if (*it != 0.0) return *it;
    return 0.0;
}

inline Expansion diff_expansion(double a, double b) {
    double x, y;
    two_diff(a, b, x, y);
    Expansion h;
    if (y != 0.0) h.push_back(y);
    h.push_back(x);
    return h;
}

// Forward error coefficients (epsilon = 2^-53).
constexpr double kEps = 1.1102230246251565e-16;
constexpr double kOrientBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kIncircleBound = (10.0 + 96.0 * kEps) * kEps;

} // namespace detail

// > 0 if (a, b, c) wind counterclockwise, < 0 clockwise, == 0 collinear.
inline double orient2d(const Vec2& a, const Vec2& b, const Vec2& c) {
    double detleft = (b.x - a.x) * (c.y - a.y);
    double detright = (b.y - a.y) * (c.x - a.x);
    double det = detleft - detright;
    double detsum = std::abs(detleft) + std::abs(detright);
    if (std::abs(det) > detail::kOrientBound * detsum) return det;

    using namespace detail;
    Expansion bax = diff_expansion(b.x, a.x);
    Expansion bay = diff_expansion(b.y, a.y);
    Expansion cax = diff_expansion(c.x, a.x);
    Expansion cay = diff_expansion(c.y, a.y);
    Expansion result = exp_add(exp_mul(bax, cay), exp_neg(exp_mul(bay, cax)));
    return exp_estimate(result);
}

// For counterclockwise (a, b, c): > 0 if d lies strictly inside the
// circumcircle, < 0 strictly outside, == 0 exactly on it.
inline double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    double adx = a.x - d.x, ady = a.y - d.y;
    double bdx = b.x - d.x, bdy = b.y - d.y;
    double cdx = c.x - d.x, cdy = c.y - d.y;

    double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
    double cdxady = cdx * ady, adxcdy = adx * cdy;
    double adxbdy = adx * bdy, bdxady = bdx * ady;
    double alift = adx * adx + ady * ady;
    double blift = bdx * bdx + bdy * bdy;
    double clift = cdx * cdx + cdy * cdy;

    double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
    double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                       (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                       (std::abs(adxbdy) + std::abs(bdxady)) * clift;
    if (std::abs(det) > detail::kIncircleBound * permanent) return det;

    using namespace detail;
    Expansion eadx = diff_expansion(a.x, d.x), eady = diff_expansion(a.y, d.y);
    Expansion ebdx = diff_expansion(b.x, d.x), ebdy = diff_expansion(b.y, d.y);
    Expansion ecdx = diff_expansion(c.x, d.x), ecdy = diff_expansion(c.y, d.y);

    Expansion ealift = exp_add(exp_mul(eadx, eadx), exp_mul(eady, eady));
    Expansion eblift = exp_add(exp_mul(ebdx, ebdx), exp_mul(ebdy, ebdy));
    Expansion eclift = exp_add(exp_mul(ecdx, ecdx), exp_mul(ecdy, ecdy));

    Expansion minor_a = exp_add(exp_mul(ebdx, ecdy), exp_neg(exp_mul(ecdx, ebdy)));
    Expansion minor_b = exp_add(exp_mul(ecdx, eady), exp_neg(exp_mul(eadx, ecdy)));
    Expansion minor_c = exp_add(exp_mul(eadx, ebdy), exp_neg(exp_mul(ebdx, eady)));

    Expansion result = exp_add(exp_mul(ealift, minor_a),
                               exp_add(exp_mul(eblift, minor_b), exp_mul(eclift, minor_c)));
    return exp_estimate(result);
}

} // namespace toporeg

#endif
