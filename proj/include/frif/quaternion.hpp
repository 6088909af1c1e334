#pragma once

#include <cmath>

#include "frif/errors.hpp"

namespace frif {

// Real quaternion a + v1*e1 + v2*e2 + v3*e3 under the Hamilton product.
struct Quaternion {
    double a = 0.0;   // scalar part
    double v1 = 0.0;  // e1 coefficient
    double v2 = 0.0;  // e2 coefficient
    double v3 = 0.0;  // e3 coefficient

    constexpr Quaternion() = default;
    constexpr Quaternion(double a_, double v1_, double v2_, double v3_)
        : a(a_), v1(v1_), v2(v2_), v3(v3_) {}

    static constexpr Quaternion scalar(double x) { return {x, 0, 0, 0}; }
    static constexpr Quaternion e(int i) {
        switch (i) {
            case 0: return {1, 0, 0, 0};
            case 1: return {0, 1, 0, 0};
            case 2: return {0, 0, 1, 0};
            default: return {0, 0, 0, 1};
        }
    }

    friend constexpr Quaternion operator+(const Quaternion& p, const Quaternion& q) {
        return {p.a + q.a, p.v1 + q.v1, p.v2 + q.v2, p.v3 + q.v3};
    }
    friend constexpr Quaternion operator-(const Quaternion& p, const Quaternion& q) {
        return {p.a - q.a, p.v1 - q.v1, p.v2 - q.v2, p.v3 - q.v3};
    }
    friend constexpr Quaternion operator-(const Quaternion& p) {
        return {-p.a, -p.v1, -p.v2, -p.v3};
    }
    friend constexpr Quaternion operator*(double t, const Quaternion& q) {
        return {t * q.a, t * q.v1, t * q.v2, t * q.v3};
    }

    // Hamilton product: scalar part ab - <v,w>, vector part aw + bv + v^w.
    friend constexpr Quaternion operator*(const Quaternion& p, const Quaternion& q) {
        return {p.a * q.a - p.v1 * q.v1 - p.v2 * q.v2 - p.v3 * q.v3,
                p.a * q.v1 + q.a * p.v1 + p.v2 * q.v3 - p.v3 * q.v2,
                p.a * q.v2 + q.a * p.v2 - p.v1 * q.v3 + p.v3 * q.v1,
                p.a * q.v3 + q.a * p.v3 + p.v1 * q.v2 - p.v2 * q.v1};
    }

    friend constexpr bool operator==(const Quaternion& p, const Quaternion& q) {
        return p.a == q.a && p.v1 == q.v1 && p.v2 == q.v2 && p.v3 == q.v3;
    }

    constexpr double norm_sq() const { return a * a + v1 * v1 + v2 * v2 + v3 * v3; }
    double norm() const { return std::sqrt(norm_sq()); }
};

inline constexpr Quaternion quat_mul(const Quaternion& p, const Quaternion& q) {
    return p * q;
}

inline constexpr Quaternion quat_conj(const Quaternion& q) {
    return {q.a, -q.v1, -q.v2, -q.v3};
}

inline double quat_norm(const Quaternion& q) { return q.norm(); }

inline Quaternion quat_inv(const Quaternion& q) {
    double n2 = q.norm_sq();
    if (n2 == 0.0) throw ZeroDivisor("inverse of the zero quaternion");
    return (1.0 / n2) * quat_conj(q);
}

struct VectorProduct {
    double dot = 0.0;
    Quaternion cross;
};

// For pure vectors v, w: v*w = -<v,w> + v^w. Returns the pair and verifies
// the identity against the Hamilton product.
inline VectorProduct vector_product_identity(const Quaternion& v, const Quaternion& w) {
    if (v.a != 0.0 || w.a != 0.0)
        throw NotAVector("vector product requires zero scalar parts");
    VectorProduct r;
    r.dot = v.v1 * w.v1 + v.v2 * w.v2 + v.v3 * w.v3;
    r.cross = {0.0, v.v2 * w.v3 - v.v3 * w.v2, v.v3 * w.v1 - v.v1 * w.v3,
               v.v1 * w.v2 - v.v2 * w.v1};
    Quaternion lhs = v * w;
    Quaternion rhs = Quaternion::scalar(-r.dot) + r.cross;
    double gap = (lhs - rhs).norm();
    if (gap > 1e-12 * (1.0 + lhs.norm()))
        throw EvalError("vector product identity violated");
    return r;
}

}  // namespace frif
