#include "hvcheck/rational.hpp"

#include <cstdlib>
#include <numeric>

namespace hvcheck {

const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::InvalidRegion: return "InvalidRegion";
        case ErrorCode::TimeNotOutsideRegion: return "TimeNotOutsideRegion";
        case ErrorCode::BadTimeOrder: return "BadTimeOrder";
        case ErrorCode::EnumerationBudget: return "EnumerationBudget";
        case ErrorCode::UnsupportedLawKind: return "UnsupportedLawKind";
        case ErrorCode::NullCondition: return "NullCondition";
        case ErrorCode::PreconditionFailed: return "PreconditionFailed";
        case ErrorCode::SearchBudget: return "SearchBudget";
        case ErrorCode::BadTable: return "BadTable";
        case ErrorCode::UnsupportedAngle: return "UnsupportedAngle";
        case ErrorCode::NullSettings: return "NullSettings";
        case ErrorCode::BadFamily: return "BadFamily";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ValidationError: return "ValidationError";
        case ErrorCode::Overflow: return "Overflow";
    }
    return "Unknown";
}

namespace {

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

constexpr __int128 kMin64 = static_cast<__int128>(INT64_MIN);
constexpr __int128 kMax64 = static_cast<__int128>(INT64_MAX);

std::int64_t narrow(__int128 v) {
    if (v < kMin64 || v > kMax64)
        throw Error(ErrorCode::Overflow, "rational arithmetic overflow");
    return static_cast<std::int64_t>(v);
}

} // namespace

Rational Rational::make_reduced(__int128 n, __int128 d) {
    if (d == 0)
        throw Error(ErrorCode::Overflow, "zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    __int128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    Rational r;
    r.num_ = narrow(n);
    r.den_ = narrow(d);
    return r;
}

Rational::Rational(std::int64_t n, std::int64_t d) {
    *this = make_reduced(n, d);
}

Rational Rational::operator-() const {
    Rational r;
    r.num_ = narrow(-static_cast<__int128>(num_));
    r.den_ = den_;
    return r;
}

Rational Rational::operator+(const Rational& o) const {
    __int128 n = static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_;
    __int128 d = static_cast<__int128>(den_) * o.den_;
    return make_reduced(n, d);
}

Rational Rational::operator-(const Rational& o) const {
    __int128 n = static_cast<__int128>(num_) * o.den_ - static_cast<__int128>(o.num_) * den_;
    __int128 d = static_cast<__int128>(den_) * o.den_;
    return make_reduced(n, d);
}

Rational Rational::operator*(const Rational& o) const {
    __int128 n = static_cast<__int128>(num_) * o.num_;
    __int128 d = static_cast<__int128>(den_) * o.den_;
    return make_reduced(n, d);
}

Rational Rational::operator/(const Rational& o) const {
    if (o.num_ == 0)
        throw Error(ErrorCode::Overflow, "division by zero rational");
    __int128 n = static_cast<__int128>(num_) * o.den_;
    __int128 d = static_cast<__int128>(den_) * o.num_;
    return make_reduced(n, d);
}

std::strong_ordering Rational::operator<=>(const Rational& o) const {
    __int128 lhs = static_cast<__int128>(num_) * o.den_;
    __int128 rhs = static_cast<__int128>(o.num_) * den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(const std::string& text, int line) {
    const char* s = text.c_str();
    char* end = nullptr;
    errno = 0;
    long long n = std::strtoll(s, &end, 10);
    if (end == s || errno != 0)
        throw Error(ErrorCode::ParseError, "expected rational, got '" + text + "'", line);
    if (*end == '\0') return Rational(n);
    if (*end != '/')
        throw Error(ErrorCode::ParseError, "expected rational, got '" + text + "'", line);
    const char* ds = end + 1;
    errno = 0;
    long long d = std::strtoll(ds, &end, 10);
    if (end == ds || *end != '\0' || errno != 0 || d == 0)
        throw Error(ErrorCode::ParseError, "expected rational, got '" + text + "'", line);
    return Rational(n, d);
}

} // namespace hvcheck
