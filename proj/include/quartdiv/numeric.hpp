#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace quartdiv {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

inline i128 abs128(i128 v) { return v < 0 ? -v : v; }

inline i128 gcd128(i128 a, i128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline i64 gcd64(i64 a, i64 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline i64 lcm64(i64 a, i64 b) {
    if (a == 0 || b == 0) return 0;
    i64 g = gcd64(a, b);
    i128 r = (i128)(a / g) * b;
    if (abs128(r) > (i128)INT64_MAX) throw std::overflow_error("lcm64 overflow");
    return (i64)(r < 0 ? -r : r);
}

inline i128 mul128_checked(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("int128 multiply overflow");
    return r;
}

inline i128 add128_checked(i128 a, i128 b) {
    i128 r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("int128 add overflow");
    return r;
}

std::string to_string_i128(i128 v);
std::string to_string_u128(u128 v);

// Floor of sqrt for unsigned 128-bit values; exact.
u128 isqrt_u128(u128 n);
inline u64 isqrt_u64(u64 n) { return (u64)isqrt_u128(n); }

inline bool is_perfect_square_i128(i128 n) {
    if (n < 0) return false;
    u128 r = isqrt_u128((u128)n);
    return (i128)(r * r) == n;
}

// Exact rational on int128 with overflow-checked arithmetic. Denominator > 0,
// always stored in lowest terms.
class Rational {
  public:
    Rational() : num_(0), den_(1) {}
    Rational(i128 n) : num_(n), den_(1) {}
    Rational(i128 n, i128 d) : num_(n), den_(d) { normalize(); }

    static Rational from_i64(i64 n, i64 d = 1) { return Rational((i128)n, (i128)d); }

    i128 num() const { return num_; }
    i128 den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }

    Rational operator-() const {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }

    Rational operator+(const Rational& o) const {
        i128 g = gcd128(den_, o.den_);
        i128 dl = den_ / g;
        i128 dr = o.den_ / g;
        i128 n = add128_checked(mul128_checked(num_, dr), mul128_checked(o.num_, dl));
        i128 d = mul128_checked(mul128_checked(dl, dr), g);
        return Rational(n, d);
    }
    Rational operator-(const Rational& o) const { return *this + (-o); }

    Rational operator*(const Rational& o) const {
        i128 g1 = gcd128(num_, o.den_);
        i128 g2 = gcd128(o.num_, den_);
        i128 n = mul128_checked(num_ / g1, o.num_ / g2);
        i128 d = mul128_checked(den_ / g2, o.den_ / g1);
        return Rational(n, d);
    }

    Rational operator/(const Rational& o) const {
        if (o.num_ == 0) throw std::domain_error("rational division by zero");
        return *this * Rational(o.den_, o.num_);
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const {
        return mul128_checked(num_, o.den_) < mul128_checked(o.num_, den_);
    }
    bool operator<=(const Rational& o) const { return !(o < *this); }
    bool operator>(const Rational& o) const { return o < *this; }
    bool operator>=(const Rational& o) const { return !(*this < o); }

    Rational abs() const { return num_ < 0 ? -*this : *this; }
    int sign() const { return num_ < 0 ? -1 : (num_ > 0 ? 1 : 0); }

    double to_double() const { return (double)num_ / (double)den_; }
    std::string to_string() const {
        if (den_ == 1) return to_string_i128(num_);
        return to_string_i128(num_) + "/" + to_string_i128(den_);
    }

    Rational floor_rational() const;

  private:
    void normalize() {
        if (den_ == 0) throw std::domain_error("rational with zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        i128 g = gcd128(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }
    i128 num_;
    i128 den_;
};

inline Rational Rational::floor_rational() const {
    i128 q = num_ / den_;
    if (num_ < 0 && q * den_ != num_) q -= 1;
    return Rational(q);
}

// Floor and ceil of num/den as integers (den > 0 assumed after normalize).
inline i128 floor_div_i128(i128 n, i128 d) {
    if (d < 0) {
        n = -n;
        d = -d;
    }
    i128 q = n / d;
    if (n % d != 0 && ((n < 0) != (d < 0))) q -= 1;
    return q;
}

inline i128 ceil_div_i128(i128 n, i128 d) { return -floor_div_i128(-n, d); }

}  // namespace quartdiv
