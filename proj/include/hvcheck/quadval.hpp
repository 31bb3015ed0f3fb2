#pragma once

#include <string>

#include "hvcheck/rational.hpp"

namespace hvcheck {

/// Exact value of the form a + b*sqrt(2) with rational a, b. Closed under
/// +, -, *; enough for spin correlation tables at angles that are multiples
/// of pi/4. Printed as "p/q" when b = 0 and "(p+q*sqrt2)/r" otherwise.
class QuadVal {
public:
    QuadVal() = default;
    QuadVal(Rational a) : a_(a) {}
    QuadVal(std::int64_t a) : a_(Rational(a)) {}
    QuadVal(Rational a, Rational b) : a_(a), b_(b) {}

    static QuadVal sqrt2(Rational coeff = Rational(1)) { return QuadVal(Rational(0), coeff); }

    const Rational& rat_part() const { return a_; }
    const Rational& sqrt2_part() const { return b_; }
    bool is_rational() const { return b_.is_zero(); }
    bool is_zero() const { return a_.is_zero() && b_.is_zero(); }

    QuadVal operator-() const { return QuadVal(-a_, -b_); }
    QuadVal operator+(const QuadVal& o) const { return QuadVal(a_ + o.a_, b_ + o.b_); }
    QuadVal operator-(const QuadVal& o) const { return QuadVal(a_ - o.a_, b_ - o.b_); }
    QuadVal operator*(const QuadVal& o) const {
        return QuadVal(a_ * o.a_ + Rational(2) * b_ * o.b_, a_ * o.b_ + b_ * o.a_);
    }
    QuadVal& operator+=(const QuadVal& o) { return *this = *this + o; }
    QuadVal& operator-=(const QuadVal& o) { return *this = *this - o; }

    bool operator==(const QuadVal& o) const { return a_ == o.a_ && b_ == o.b_; }
    bool operator!=(const QuadVal& o) const { return !(*this == o); }

    /// Exact sign: a + b*sqrt2 > 0 iff decided by comparing a^2 with 2 b^2.
    int sign() const;
    bool operator<(const QuadVal& o) const { return (*this - o).sign() < 0; }
    bool operator<=(const QuadVal& o) const { return (*this - o).sign() <= 0; }

    QuadVal abs() const { return sign() < 0 ? -*this : *this; }

    double to_double() const;
    std::string str() const;

    /// Parses "p", "p/q", or "(p+q*sqrt2)/r".
    static QuadVal parse(const std::string& text, int line = 0);

private:
    Rational a_;
    Rational b_;
};

} // namespace hvcheck
