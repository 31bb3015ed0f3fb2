#include "hvcheck/quadval.hpp"

#include <cmath>
#include <numeric>

namespace hvcheck {

int QuadVal::sign() const {
    int sa = a_.sign();
    int sb = b_.sign();
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // Opposite signs: compare a^2 against 2 b^2; the larger magnitude wins.
    Rational a2 = a_ * a_;
    Rational b2 = Rational(2) * b_ * b_;
    if (a2 == b2) return 0; // impossible for nonzero b (sqrt2 irrational), kept for safety
    return a2 > b2 ? sa : sb;
}

double QuadVal::to_double() const {
    return a_.to_double() + b_.to_double() * std::sqrt(2.0);
}

std::string QuadVal::str() const {
    if (b_.is_zero()) return a_.str();
    // Common denominator r so the value prints as (p+q*sqrt2)/r.
    std::int64_t r = std::lcm(a_.den(), b_.den());
    std::int64_t p = a_.num() * (r / a_.den());
    std::int64_t q = b_.num() * (r / b_.den());
    std::string qs = q < 0 ? std::to_string(q) : "+" + std::to_string(q);
    return "(" + std::to_string(p) + qs + "*sqrt2)/" + std::to_string(r);
}

QuadVal QuadVal::parse(const std::string& text, int line) {
    if (text.empty())
        throw Error(ErrorCode::ParseError, "empty value", line);
    if (text.front() != '(')
        return QuadVal(Rational::parse(text, line));
    auto close = text.find(')');
    auto slash = text.find('/', close);
    if (close == std::string::npos || slash == std::string::npos)
        throw Error(ErrorCode::ParseError, "malformed sqrt2 value '" + text + "'", line);
    std::string inner = text.substr(1, close - 1);
    std::string denom = text.substr(slash + 1);
    auto star = inner.find("*sqrt2");
    if (star == std::string::npos)
        throw Error(ErrorCode::ParseError, "malformed sqrt2 value '" + text + "'", line);
    // inner is "p+q*sqrt2" where q may be negative; find the '+' or '-' that
    // separates p from q, skipping a leading sign on p.
    std::size_t split = std::string::npos;
    for (std::size_t i = 1; i < star; ++i) {
        if (inner[i] == '+' || inner[i] == '-') split = i;
    }
    if (split == std::string::npos)
        throw Error(ErrorCode::ParseError, "malformed sqrt2 value '" + text + "'", line);
    std::string p_text = inner.substr(0, split);
    std::string q_text = inner.substr(split, star - split);
    if (!q_text.empty() && q_text.front() == '+') q_text.erase(0, 1);
    Rational p = Rational::parse(p_text, line);
    Rational q = Rational::parse(q_text, line);
    Rational r = Rational::parse(denom, line);
    if (r.is_zero())
        throw Error(ErrorCode::ParseError, "zero denominator in '" + text + "'", line);
    return QuadVal(p / r, q / r);
}

} // namespace hvcheck
