#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "frif/errors.hpp"

namespace frif {

// Closed interval used for range enclosures during sup-norm certification.
// Outward rounding is not modelled; certified bounds add an explicit
// Lipschitz inflation term instead, so last-ulp effects are absorbed there.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    Interval(double x) : lo(x), hi(x) {}
    Interval(double a, double b) : lo(std::min(a, b)), hi(std::max(a, b)) {}

    double mag() const { return std::max(std::fabs(lo), std::fabs(hi)); }
    double mig() const {
        if (lo <= 0.0 && 0.0 <= hi) return 0.0;
        return std::min(std::fabs(lo), std::fabs(hi));
    }
    bool contains_zero() const { return lo <= 0.0 && 0.0 <= hi; }

    friend Interval operator+(const Interval& a, const Interval& b) {
        return {a.lo + b.lo, a.hi + b.hi};
    }
    friend Interval operator-(const Interval& a, const Interval& b) {
        return {a.lo - b.hi, a.hi - b.lo};
    }
    friend Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }
    friend Interval operator*(const Interval& a, const Interval& b) {
        double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
        return {std::min(std::min(p1, p2), std::min(p3, p4)),
                std::max(std::max(p1, p2), std::max(p3, p4))};
    }
    friend Interval operator/(const Interval& a, const Interval& b) {
        if (b.contains_zero())
            throw EvalError("interval division by a range containing zero");
        Interval inv(1.0 / b.lo, 1.0 / b.hi);
        return a * inv;
    }
};

inline Interval abs(const Interval& a) {
    if (a.contains_zero()) return {0.0, a.mag()};
    return {a.mig(), a.mag()};
}

namespace detail {

// Enclosure of sin over [lo, hi]; exact at endpoints, widened to +/-1 where a
// critical point pi/2 + k*pi lies inside.
inline Interval sin_range(const Interval& a) {
    constexpr double pi = std::numbers::pi;
    if (a.hi - a.lo >= 2.0 * pi) return {-1.0, 1.0};
    double lo = std::min(std::sin(a.lo), std::sin(a.hi));
    double hi = std::max(std::sin(a.lo), std::sin(a.hi));
    // k with pi/2 + k*pi inside [a.lo, a.hi]
    double k0 = std::ceil((a.lo - pi / 2.0) / pi);
    for (double k = k0; pi / 2.0 + k * pi <= a.hi; k += 1.0) {
        double c = pi / 2.0 + k * pi;
        double v = std::sin(c) >= 0.0 ? 1.0 : -1.0;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo, hi};
}

inline Interval cos_range(const Interval& a) {
    constexpr double pi = std::numbers::pi;
    return sin_range(Interval(a.lo + pi / 2.0, a.hi + pi / 2.0));
}

inline Interval pow_range(const Interval& a, double p) {
    double pi_int;
    if (std::modf(p, &pi_int) == 0.0 && std::fabs(p) < 64.0) {
        int n = static_cast<int>(pi_int);
        if (n == 0) return Interval(1.0);
        bool recip = n < 0;
        n = std::abs(n);
        Interval r(1.0);
        for (int i = 0; i < n; ++i) r = r * a;
        if (recip) return Interval(1.0) / r;
        return r;
    }
    if (a.lo < 0.0)
        throw EvalError("non-integer power of a range reaching below zero");
    return {std::pow(a.lo, p), std::pow(a.hi, p)};
}

}  // namespace detail
}  // namespace frif
