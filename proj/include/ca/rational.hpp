#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ca {

// Exact rational over int64 with overflow-checked arithmetic. Geometry paths
// (transform module) never touch floating point.
class Rational {
  public:
    constexpr Rational() = default;
    Rational(long long num, long long den = 1) : n_(num), d_(den) { normalize(); }

    long long num() const { return n_; }
    long long den() const { return d_; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(checked_add(checked_mul(a.n_, b.d_), checked_mul(b.n_, a.d_)),
                        checked_mul(a.d_, b.d_));
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return a + Rational(-b.n_, b.d_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(checked_mul(a.n_, b.n_), checked_mul(a.d_, b.d_));
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.n_ == 0) throw std::domain_error("rational division by zero");
        return Rational(checked_mul(a.n_, b.d_), checked_mul(a.d_, b.n_));
    }
    Rational operator-() const { return Rational(-n_, d_); }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.n_ == b.n_ && a.d_ == b.d_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.n_) * b.d_ < static_cast<__int128>(b.n_) * a.d_;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    bool is_integer() const { return d_ == 1; }
    long long floor() const {
        long long q = n_ / d_;
        if (n_ % d_ != 0 && n_ < 0) --q;
        return q;
    }
    long long ceil() const {
        long long q = n_ / d_;
        if (n_ % d_ != 0 && n_ > 0) ++q;
        return q;
    }
    Rational abs() const { return n_ < 0 ? Rational(-n_, d_) : *this; }

    double to_double() const { return static_cast<double>(n_) / static_cast<double>(d_); }
    std::string str() const {
        if (d_ == 1) return std::to_string(n_);
        return std::to_string(n_) + "/" + std::to_string(d_);
    }

    // parses "p", "p/q"
    static Rational parse(const std::string& s);

  private:
    long long n_ = 0;
    long long d_ = 1;

    static long long checked_mul(long long a, long long b) {
        __int128 p = static_cast<__int128>(a) * b;
        if (p > INT64_MAX || p < INT64_MIN) throw std::overflow_error("rational overflow");
        return static_cast<long long>(p);
    }
    static long long checked_add(long long a, long long b) {
        __int128 s = static_cast<__int128>(a) + b;
        if (s > INT64_MAX || s < INT64_MIN) throw std::overflow_error("rational overflow");
        return static_cast<long long>(s);
    }
    void normalize() {
        if (d_ == 0) throw std::domain_error("rational with zero denominator");
        if (d_ < 0) {
            n_ = -n_;
            d_ = -d_;
        }
        long long g = std::gcd(n_ < 0 ? -n_ : n_, d_);
        if (g > 1) {
            n_ /= g;
            d_ /= g;
        }
    }
};

inline Rational Rational::parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(s));
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

}  // namespace ca
