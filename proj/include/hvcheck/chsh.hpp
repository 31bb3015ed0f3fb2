#pragma once

#include <array>
#include <functional>
#include <optional>

#include "hvcheck/quadval.hpp"

namespace hvcheck {

/// Conditional outcome table P(A,B | a,b) for a two-setting, two-outcome
/// experiment. Settings and outcomes are indexed 0/1; outcome index 0 means
/// value +1 and index 1 means value -1. Entries are exact by default; float
/// mode carries doubles and an approx flag.
struct PredictionsTable {
    // entry(a, b, A, B)
    std::array<QuadVal, 16> exact{};
    std::array<double, 16> approx{};
    bool is_approx = false;

    static std::size_t idx(int a, int b, int A, int B) {
        return static_cast<std::size_t>(((a * 2 + b) * 2 + A) * 2 + B);
    }
    const QuadVal& p(int a, int b, int A, int B) const { return exact[idx(a, b, A, B)]; }
    QuadVal& p(int a, int b, int A, int B) { return exact[idx(a, b, A, B)]; }
};

/// Every (a,b) column must sum to exactly 1 with entries in [0,1];
/// throws Error(BadTable) otherwise. Float mode checks to 1e-9.
void validate_table(const PredictionsTable& t);

/// Correlator E(a,b) = sum_{A,B} A*B*P(A,B|a,b).
QuadVal correlator(const PredictionsTable& t, int a, int b);

/// CHSH combination S = E(0,0) + E(0,1) + E(1,0) - E(1,1), exact.
QuadVal chsh_value(const PredictionsTable& t);

/// Float-mode CHSH for approx tables (also works on exact ones).
double chsh_value_float(const PredictionsTable& t);

/// Maximum |S| over the 16 deterministic local strategies A=f(a), B=g(b);
/// returns exactly 2. Mixtures of strategies are convex combinations and
/// cannot exceed the vertex maximum.
QuadVal chsh_local_bound();

/// Table of the deterministic strategy A=f(a), B=g(b) given as value maps
/// f0,f1,g0,g1 in {+1,-1} encoded as outcome indices 0/1.
PredictionsTable strategy_table(int f0, int f1, int g0, int g1);

/// The extremal no-signalling box: A xor B = a and b, uniform marginals.
PredictionsTable pr_box_table();

/// Singlet-state table P(A,B|a,b) = (1 - A*B*cos(theta_a - theta_b))/4 with
/// all four angles given as integer multiples of pi/4 (exact mode).
PredictionsTable singlet_exact_table(int a_mul, int a_prime_mul, int b_mul, int b_prime_mul);

/// Same table at arbitrary angles in radians; entries are doubles and the
/// table is flagged approx.
PredictionsTable singlet_float_table(double theta_a, double theta_a_prime, double theta_b,
                                     double theta_b_prime);

/// Angle-based entry point: exact mode demands every angle be a multiple of
/// pi/4 (throws Error(UnsupportedAngle) otherwise); float mode accepts any
/// angles and returns an approx-flagged table.
PredictionsTable singlet_table_at(double theta_a, double theta_a_prime, double theta_b,
                                  double theta_b_prime, bool exact);

} // namespace hvcheck
