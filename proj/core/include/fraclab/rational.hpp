#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fraclab {

// Exact rational arithmetic for the threshold algebra. Intermediate
// products go through __int128; anything that cannot be reduced back into
// int64 throws, which at the parameter scales used here never happens.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num) : num_(num), den_(1) {}
    Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) { normalize(); }

    static Rational from_i128(__int128 num, __int128 den) {
        if (den == 0) throw std::domain_error("rational: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const __int128 g = gcd128(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        if (num > max64() || num < -max64() || den > max64())
            throw std::overflow_error("rational: overflow");
        return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den), tag{});
    }

    // Parses "3", "-0.125", "5/4". Decimal strings are exact.
    static Rational parse(const std::string& s);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    std::string str() const {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return from_i128(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return from_i128(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from_i128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("rational: division by zero");
        return from_i128(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }
    Rational operator-() const { return Rational(-num_, den_); }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator<(const Rational& a, const Rational& b) {
        return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return a < b || a == b; }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

private:
    struct tag {};
    Rational(std::int64_t n, std::int64_t d, tag) : num_(n), den_(d) {}
    using i128 = __int128;

    static constexpr __int128 max64() { return std::numeric_limits<std::int64_t>::max(); }
    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) {
            const __int128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }

    void normalize() {
        if (den_ == 0) throw std::domain_error("rational: zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

inline Rational Rational::parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("rational: empty string");
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    }
    const auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(std::stoll(s));
    const std::string ip = s.substr(0, dot);
    const std::string fp = s.substr(dot + 1);
    if (fp.size() > 18) throw std::invalid_argument("rational: too many decimal digits");
    std::int64_t den = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
    const bool neg = !ip.empty() && ip[0] == '-';
    const std::int64_t whole = (ip.empty() || ip == "-" || ip == "+") ? 0 : std::stoll(ip);
    const std::int64_t frac = fp.empty() ? 0 : std::stoll(fp);
    __int128 num = i128(whole < 0 ? -whole : whole) * den + frac;
    if (neg || whole < 0) num = -num;
    return from_i128(num, den);
}

inline Rational rational_min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational rational_max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace fraclab
