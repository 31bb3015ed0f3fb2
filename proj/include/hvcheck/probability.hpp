#pragma once

#include <span>
#include <string>
#include <vector>

#include "hvcheck/event.hpp"
#include "hvcheck/model.hpp"

namespace hvcheck {

/// Probability space with whole solutions as elementary events.
class ProbSpace {
public:
    ProbSpace(Lattice lattice, Alphabet alphabet, std::vector<Solution> solutions);
    static ProbSpace from_model(const HVTModel& m, std::size_t budget = kDefaultBudget);
    static ProbSpace from_enumerated(const EnumeratedModel& em);

    const Lattice& lattice() const { return lattice_; }
    const Alphabet& alphabet() const { return alphabet_; }
    const std::vector<Solution>& solutions() const { return solutions_; }

    bool sat(const Solution& s, const CoarseEvent& e) const;
    bool sat_all(const Solution& s, std::span<const CoarseEvent> es) const;

    Rational prob(const CoarseEvent& e) const;
    Rational prob_all(std::span<const CoarseEvent> es) const;

    /// Exact P(lhs | given); throws Error(NullCondition) when the conditioning
    /// event has probability zero (the ill-defined case).
    Rational cond_prob(std::span<const CoarseEvent> lhs, std::span<const CoarseEvent> given) const;
    Rational cond_prob(const CoarseEvent& lhs, const CoarseEvent& given) const;

    /// Restricts the space to solutions satisfying `given`, renormalizing.
    ProbSpace conditioned(std::span<const CoarseEvent> given) const;

    /// Distinct realized (weight > 0) states of a region, sorted.
    std::vector<RegionState> realized_states(const Region& r) const;

private:
    Lattice lattice_;
    Alphabet alphabet_;
    std::vector<Solution> solutions_;
};

bool independent(const ProbSpace& space, const CoarseEvent& e, const CoarseEvent& f);

/// Consistency of the measure with determination: if every solution
/// compatible with lambda_ri is also compatible with lambda_rf, the
/// conditional probability must be exactly 1; if none is, exactly 0.
Verdict check_bridge_principle(const ProbSpace& space, const RegionState& lambda_ri,
                               const RegionState& lambda_rf);

/// Disjoint union preserves independence: given X, X' disjoint and each
/// independent of Y, X union X' must be independent of Y. Preconditions are
/// verified and their violation throws Error(PreconditionFailed).
Verdict coarse_union_independence_check(const ProbSpace& space, const CoarseEvent& x,
                                        const CoarseEvent& x_prime, const CoarseEvent& y);

/// Throws Error(ValidationError) if cells overlap or fail to cover the
/// realized states of the partition's region.
void validate_partition(const ProbSpace& space, const Partition& p);

} // namespace hvcheck
