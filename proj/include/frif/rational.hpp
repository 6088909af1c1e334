#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "frif/errors.hpp"

namespace frif {

using int128 = __int128;

// Exact rational with 128-bit numerator/denominator. Denominator > 0 and
// gcd(num, den) == 1 after every operation. Operations that would exceed the
// safe magnitude window return nullopt from the checked entry points; Scalar
// (below) uses that to drop to floating point instead of overflowing.
class Rational {
  public:
    Rational() = default;
    Rational(long long n) : num_(n), den_(1) {}
    Rational(long long n, long long d) {
        if (d == 0) throw ZeroDivisor("rational with zero denominator");
        num_ = n;
        den_ = d;
        normalize();
    }

    static std::optional<Rational> checked(int128 n, int128 d) {
        if (d == 0) return std::nullopt;
        Rational r;
        r.num_ = n;
        r.den_ = d;
        r.normalize();
        if (!r.in_range()) return std::nullopt;
        return r;
    }

    int128 num() const { return num_; }
    int128 den() const { return den_; }

    bool is_integer() const { return den_ == 1; }
    bool is_zero() const { return num_ == 0; }

    double to_double() const {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    friend std::optional<Rational> add(const Rational& a, const Rational& b) {
        return Rational::checked(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend std::optional<Rational> sub(const Rational& a, const Rational& b) {
        return Rational::checked(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend std::optional<Rational> mul(const Rational& a, const Rational& b) {
        return Rational::checked(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend std::optional<Rational> div(const Rational& a, const Rational& b) {
        if (b.num_ == 0) return std::nullopt;
        return Rational::checked(a.num_ * b.den_, a.den_ * b.num_);
    }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator<(const Rational& a, const Rational& b) {
        return a.num_ * b.den_ < b.num_ * a.den_;
    }
    friend bool operator<=(const Rational& a, const Rational& b) {
        return a.num_ * b.den_ <= b.num_ * a.den_;
    }

    Rational abs() const {
        Rational r = *this;
        if (r.num_ < 0) r.num_ = -r.num_;
        return r;
    }

    std::string str() const;

  private:
    // Inputs to products must stay below ~2^62 to keep int128 intermediates
    // safe; dyadic workloads (denominators 2^k up to k ~ 120) fit comfortably
    // because normalize() runs before the window check.
    static constexpr int128 kMax = int128(1) << 124;

    bool in_range() const {
        int128 n = num_ < 0 ? -num_ : num_;
        return n < kMax && den_ < kMax;
    }

    static int128 gcd128(int128 a, int128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b != 0) {
            int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        int128 g = gcd128(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0) den_ = 1;
    }

    int128 num_ = 0;
    int128 den_ = 1;
};

inline std::string to_string_int128(int128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : v;
    std::string s;
    while (u != 0) {
        s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    return neg ? "-" + s : s;
}

inline std::string Rational::str() const {
    std::string s = to_string_int128(num_);
    if (den_ != 1) s += "/" + to_string_int128(den_);
    return s;
}

// A real number carried exactly as a rational whenever the inputs allow it,
// with a double mirror for numeric work. Arithmetic stays exact while both
// operands are exact and in range; it degrades to double silently otherwise.
class Scalar {
  public:
    Scalar() : exact_(true) {}
    Scalar(double v) : value_(v), exact_(false) {}
    Scalar(int v) : rat_(v), value_(v), exact_(true) {}

    static Scalar integer(long long n) {
        Scalar s;
        s.rat_ = Rational(n);
        s.value_ = static_cast<double>(n);
        s.exact_ = true;
        return s;
    }
    static Scalar ratio(long long n, long long d) {
        Scalar s;
        s.rat_ = Rational(n, d);
        s.value_ = s.rat_.to_double();
        s.exact_ = true;
        return s;
    }
    static Scalar from_rational(const Rational& r) {
        Scalar s;
        s.rat_ = r;
        s.value_ = r.to_double();
        s.exact_ = true;
        return s;
    }
    // Every finite double is a dyadic rational; convert exactly when the
    // exponent fits the rational range, else keep the float.
    static Scalar exact_from_double(double v);

    bool exact() const { return exact_; }
    double value() const { return value_; }
    const Rational& rat() const { return rat_; }

    friend Scalar operator+(const Scalar& a, const Scalar& b) {
        return combine(a, b, add(a.rat_, b.rat_), a.value_ + b.value_);
    }
    friend Scalar operator-(const Scalar& a, const Scalar& b) {
        return combine(a, b, sub(a.rat_, b.rat_), a.value_ - b.value_);
    }
    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        return combine(a, b, mul(a.rat_, b.rat_), a.value_ * b.value_);
    }
    friend Scalar operator/(const Scalar& a, const Scalar& b) {
        if (a.exact_ && b.exact_) {
            if (b.rat_.is_zero()) throw ZeroDivisor("scalar division by exact zero");
            return combine(a, b, div(a.rat_, b.rat_), a.value_ / b.value_);
        }
        return Scalar(a.value_ / b.value_);
    }
    Scalar operator-() const {
        if (exact_) return from_rational(Rational(-1)) * *this;
        return Scalar(-value_);
    }

    // Exact comparison when both sides are exact, double comparison otherwise.
    friend bool operator==(const Scalar& a, const Scalar& b) {
        if (a.exact_ && b.exact_) return a.rat_ == b.rat_;
        return a.value_ == b.value_;
    }
    friend bool operator<(const Scalar& a, const Scalar& b) {
        if (a.exact_ && b.exact_) return a.rat_ < b.rat_;
        return a.value_ < b.value_;
    }
    friend bool operator<=(const Scalar& a, const Scalar& b) {
        if (a.exact_ && b.exact_) return a.rat_ <= b.rat_;
        return a.value_ <= b.value_;
    }
    friend bool operator>(const Scalar& a, const Scalar& b) { return b < a; }
    friend bool operator>=(const Scalar& a, const Scalar& b) { return b <= a; }

    std::string str() const {
        if (exact_) return rat_.str();
        return std::to_string(value_);
    }

  private:
    static Scalar combine(const Scalar& a, const Scalar& b,
                          std::optional<Rational> r, double v) {
        if (a.exact_ && b.exact_ && r) {
            Scalar s;
            s.rat_ = *r;
            s.value_ = r->to_double();
            s.exact_ = true;
            return s;
        }
        return Scalar(v);
    }

    Rational rat_;
    double value_ = 0.0;
    bool exact_ = false;
};

inline Scalar Scalar::exact_from_double(double v) {
    if (!(v == v) || v - v != 0.0) return Scalar(v);  // nan/inf stay inexact
    double mant_d;
    int exp2;
    mant_d = std::frexp(v, &exp2);
    long long mant = static_cast<long long>(mant_d * 9007199254740992.0);  // 2^53
    int e = exp2 - 53;
    if (e >= 0) {
        if (e > 60) return Scalar(v);
        auto r = Rational::checked(int128(mant) << e, 1);
        return r ? from_rational(*r) : Scalar(v);
    }
    if (e < -110) return Scalar(v);
    auto r = Rational::checked(mant, int128(1) << (-e));
    return r ? from_rational(*r) : Scalar(v);
}

}  // namespace frif
