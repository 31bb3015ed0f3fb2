#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hvcheck/chsh.hpp"
#include "hvcheck/rational.hpp"
#include "hvcheck/spacetime.hpp"
#include "hvcheck/state.hpp"
#include "hvcheck/verdict.hpp"

namespace hvcheck {

enum class LawKind { LocalDeterministic, GlobalDeterministic, LocalStochastic, PredictionsOnly };

const char* law_kind_name(LawKind k);

/// Radius-1 deterministic rule: table indexed by neighborhood code
/// l*|S|^2 + c*|S| + r.
struct LocalRule {
    std::vector<Sym> table;

    std::size_t code(Sym l, Sym c, Sym r, std::size_t n) const { return (l * n + c) * n + r; }
    Sym next(Sym l, Sym c, Sym r, std::size_t n) const { return table[code(l, c, r, n)]; }
};

/// Radius-1 stochastic kernel: per neighborhood a distribution over symbols,
/// each summing to exactly 1. Entries with zero probability are omitted.
struct StochasticRule {
    std::vector<std::vector<std::pair<Sym, Rational>>> table;

    const std::vector<std::pair<Sym, Rational>>& dist(Sym l, Sym c, Sym r, std::size_t n) const {
        return table[(l * n + c) * n + r];
    }
};

/// Named whole-slice map; `step` receives the slice at time t (values for
/// x in [t, width-1-t]) and returns the slice at t+1.
struct GlobalRule {
    std::string name;
    std::function<std::vector<Sym>(const Lattice&, const std::vector<Sym>&, int)> step;
};

/// A finite hidden-variable model: lattice, local beable alphabet, one
/// dynamical law, and an exact-rational measure over initial-slice
/// configurations. PredictionsOnly models carry just an outcome table and
/// have no spacetime semantics.
struct HVTModel {
    std::string name;
    Lattice lattice;
    Alphabet alphabet;
    LawKind law_kind = LawKind::LocalDeterministic;
    LocalRule local_rule;
    StochasticRule stochastic_rule;
    GlobalRule global_rule;
    PredictionsTable predictions;
    /// Sorted by configuration; weights > 0 and summing to exactly 1.
    std::vector<std::pair<std::vector<Sym>, Rational>> initial_measure;
    /// Exogenous redraw of specific cells after the law has produced a slice:
    /// each listed cell branches uniformly over the listed symbols. Used only
    /// by the opt-in external-settings mode.
    std::vector<std::pair<SitePoint, std::vector<Sym>>> overrides;
};

/// Checks all structural invariants; throws Error(ValidationError).
void validate_model(const HVTModel& m);

/// Total assignment of symbols to the lattice with its exact weight.
/// Values are indexed by Lattice::point_index.
struct Solution {
    std::vector<Sym> values;
    Rational weight;

    Sym at(const Lattice& l, SitePoint p) const { return values[l.point_index(p)]; }
};

inline constexpr std::size_t kDefaultBudget = 2'000'000;

/// Exhaustively expands the model into weighted solutions, fanning out over
/// initial configurations and stochastic branches; result is sorted
/// lexicographically by assignment and weights sum to exactly 1.
/// Throws Error(EnumerationBudget) past `budget` solutions and
/// Error(UnsupportedLawKind) for PredictionsOnly models.
std::vector<Solution> enumerate_solutions(const HVTModel& m, std::size_t budget = kDefaultBudget);

RegionState restrict_to(const Solution& s, const Region& r, const Lattice& l);

bool compatible(const Solution& s, const RegionState& rs, const Lattice& l);

enum class Direction { Past, Future, Both };

/// Schedule of regions standing in for "any bounded region": all single cells
/// plus all axis-aligned rectangles up to the given size cap that fit in the
/// diamond.
struct RegionBounds {
    int max_rect_w = 2;
    int max_rect_h = 2;
};

std::vector<Region> region_schedule(const Lattice& l, const RegionBounds& bounds);

struct EnumeratedModel {
    HVTModel model;
    std::vector<Solution> solutions;
};

EnumeratedModel enumerate_model(const HVTModel& m, std::size_t budget = kDefaultBudget);

/// Determinism: for every time t0 and realized full-slice state, all
/// solutions sharing that state agree on the slice's entire domain of
/// dependence (everything at or above t0).
Verdict check_deterministic(const EnumeratedModel& em);

/// Local determinism: for every scheduled region R and admissible t0 in the
/// chosen direction(s), all solutions sharing the cone-slice state
/// Sigma_{R,t0} agree on R.
Verdict check_locally_deterministic(const EnumeratedModel& em, Direction dir,
                                    const RegionBounds& bounds = {});

} // namespace hvcheck
