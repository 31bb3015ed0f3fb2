#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "hvcheck/error.hpp"

namespace hvcheck {

/// Exact rational with 64-bit numerator/denominator, always reduced,
/// denominator > 0. Intermediate products run in 128 bits; results that
/// do not fit back into 64 bits throw Error(Overflow).
class Rational {
public:
    constexpr Rational() : num_(0), den_(1) {}
    Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_one() const { return num_ == 1 && den_ == 1; }
    int sign() const { return num_ > 0 ? 1 : num_ < 0 ? -1 : 0; }

    Rational operator-() const;
    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    std::strong_ordering operator<=>(const Rational& o) const;

    Rational abs() const { return num_ < 0 ? -*this : *this; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    /// "p" for integers, "p/q" otherwise.
    std::string str() const;

    /// Parses "p" or "p/q". Throws Error(ParseError) on malformed input.
    static Rational parse(const std::string& text, int line = 0);

private:
    static Rational make_reduced(__int128 n, __int128 d);
    std::int64_t num_;
    std::int64_t den_;
};

inline Rational operator*(std::int64_t a, const Rational& b) { return Rational(a) * b; }

} // namespace hvcheck
