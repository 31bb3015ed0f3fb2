#include "hvcheck/chsh.hpp"

#include <cmath>

namespace hvcheck {

void validate_table(const PredictionsTable& t) {
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            if (t.is_approx) {
                double sum = 0;
                for (int A = 0; A < 2; ++A)
                    for (int B = 0; B < 2; ++B) {
                        double v = t.approx[PredictionsTable::idx(a, b, A, B)];
                        if (v < -1e-12 || v > 1 + 1e-12)
                            throw Error(ErrorCode::BadTable, "table entry outside [0,1]");
                        sum += v;
                    }
                if (std::abs(sum - 1.0) > 1e-9)
                    throw Error(ErrorCode::BadTable, "table column does not sum to 1");
            } else {
                QuadVal sum;
                for (int A = 0; A < 2; ++A)
                    for (int B = 0; B < 2; ++B) {
                        const QuadVal& v = t.p(a, b, A, B);
                        if (v.sign() < 0 || (v - QuadVal(1)).sign() > 0)
                            throw Error(ErrorCode::BadTable, "table entry outside [0,1]");
                        sum += v;
                    }
                if (sum != QuadVal(1))
                    throw Error(ErrorCode::BadTable, "table column does not sum to exactly 1");
            }
        }
    }
}

QuadVal correlator(const PredictionsTable& t, int a, int b) {
    QuadVal e;
    for (int A = 0; A < 2; ++A)
        for (int B = 0; B < 2; ++B) {
            int sign = ((A + B) % 2 == 0) ? 1 : -1;
            e += QuadVal(Rational(sign)) * t.p(a, b, A, B);
        }
    return e;
}

QuadVal chsh_value(const PredictionsTable& t) {
    validate_table(t);
    return correlator(t, 0, 0) + correlator(t, 0, 1) + correlator(t, 1, 0) - correlator(t, 1, 1);
}

double chsh_value_float(const PredictionsTable& t) {
    validate_table(t);
    auto e = [&](int a, int b) {
        double v = 0;
        for (int A = 0; A < 2; ++A)
            for (int B = 0; B < 2; ++B) {
                int sign = ((A + B) % 2 == 0) ? 1 : -1;
                double p = t.is_approx ? t.approx[PredictionsTable::idx(a, b, A, B)]
                                       : t.p(a, b, A, B).to_double();
                v += sign * p;
            }
        return v;
    };
    return e(0, 0) + e(0, 1) + e(1, 0) - e(1, 1);
}

PredictionsTable strategy_table(int f0, int f1, int g0, int g1) {
    PredictionsTable t;
    int f[2] = {f0, f1};
    int g[2] = {g0, g1};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) t.p(a, b, f[a], g[b]) = QuadVal(1);
    return t;
}

QuadVal chsh_local_bound() {
    QuadVal best;
    for (int f0 = 0; f0 < 2; ++f0)
        for (int f1 = 0; f1 < 2; ++f1)
            for (int g0 = 0; g0 < 2; ++g0)
                for (int g1 = 0; g1 < 2; ++g1) {
                    QuadVal s = chsh_value(strategy_table(f0, f1, g0, g1)).abs();
                    if (best < s) best = s;
                }
    return best;
}

PredictionsTable pr_box_table() {
    PredictionsTable t;
    Rational half(1, 2);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int A = 0; A < 2; ++A)
                for (int B = 0; B < 2; ++B)
                    if ((A ^ B) == (a & b)) t.p(a, b, A, B) = QuadVal(half * half * 2);
    return t;
}

namespace {

// cos(k * pi/4) as an exact a + b*sqrt2.
QuadVal cos_pi4_multiple(int k) {
    int m = ((k % 8) + 8) % 8;
    switch (m) {
        case 0: return QuadVal(1);
        case 1: return QuadVal(Rational(0), Rational(1, 2));
        case 2: return QuadVal(0);
        case 3: return QuadVal(Rational(0), Rational(-1, 2));
        case 4: return QuadVal(-1);
        case 5: return QuadVal(Rational(0), Rational(-1, 2));
        case 6: return QuadVal(0);
        case 7: return QuadVal(Rational(0), Rational(1, 2));
    }
    return QuadVal(0);
}

} // namespace

PredictionsTable singlet_exact_table(int a_mul, int a_prime_mul, int b_mul, int b_prime_mul) {
    PredictionsTable t;
    int left[2] = {a_mul, a_prime_mul};
    int right[2] = {b_mul, b_prime_mul};
    Rational quarter(1, 4);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            QuadVal c = cos_pi4_multiple(left[a] - right[b]);
            for (int A = 0; A < 2; ++A)
                for (int B = 0; B < 2; ++B) {
                    int prod = ((A + B) % 2 == 0) ? 1 : -1;
                    t.p(a, b, A, B) = (QuadVal(1) - QuadVal(Rational(prod)) * c) * QuadVal(quarter);
                }
        }
    validate_table(t);
    return t;
}

PredictionsTable singlet_table_at(double theta_a, double theta_a_prime, double theta_b,
                                  double theta_b_prime, bool exact) {
    if (!exact) return singlet_float_table(theta_a, theta_a_prime, theta_b, theta_b_prime);
    const double quarter = std::atan2(1.0, 1.0); // pi/4
    int muls[4];
    const double angles[4] = {theta_a, theta_a_prime, theta_b, theta_b_prime};
    for (int i = 0; i < 4; ++i) {
        double k = angles[i] / quarter;
        double rounded = std::round(k);
        if (std::abs(k - rounded) > 1e-9)
            throw Error(ErrorCode::UnsupportedAngle,
                        "exact mode needs angles that are multiples of pi/4; got " +
                            std::to_string(angles[i]) + " (use float mode instead)");
        muls[i] = static_cast<int>(rounded);
    }
    return singlet_exact_table(muls[0], muls[1], muls[2], muls[3]);
}

PredictionsTable singlet_float_table(double theta_a, double theta_a_prime, double theta_b,
                                     double theta_b_prime) {
    PredictionsTable t;
    t.is_approx = true;
    double left[2] = {theta_a, theta_a_prime};
    double right[2] = {theta_b, theta_b_prime};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            double c = std::cos(left[a] - right[b]);
            for (int A = 0; A < 2; ++A)
                for (int B = 0; B < 2; ++B) {
                    int prod = ((A + B) % 2 == 0) ? 1 : -1;
                    t.approx[PredictionsTable::idx(a, b, A, B)] = (1.0 - prod * c) / 4.0;
                }
        }
    validate_table(t);
    return t;
}

} // namespace hvcheck
