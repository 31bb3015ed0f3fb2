#pragma once

#include <optional>

#include "hvcheck/wiring.hpp"

namespace hvcheck {

/// Factorizability: P(A,B | a,b,lambda) = P(A | a,lambda) * P(B | b,lambda)
/// exactly, for every outcome pair, settings pair and lambda cell with
/// nonzero conditioning weight. Null instantiations are skipped and counted.
Verdict check_factorizability(const ProbSpace& space, const BellWiring& w,
                              const LambdaSpec& spec);

/// Settings Independence: P(lambda | a,b) = P(lambda) for every lambda cell
/// and every settings pair of nonzero weight.
Verdict check_settings_independence(const ProbSpace& space, const BellWiring& w,
                                    const LambdaSpec& spec);

/// Settings Compatibility: every realized thick-slice pair state co-occurs
/// with every choice of settings. Much weaker than Settings Independence;
/// locally deterministic dynamics force exactly one pair per state.
Verdict check_settings_compatibility(const ProbSpace& space, const BellWiring& w);

/// Local Causality, fine-grained: for spacelike R, R' from the schedule and
/// admissible t' < t below R lying above the overlap of both past cones,
/// conditioning on the complete thick-slice state of R makes the complete
/// state of R' redundant: P(lam_R | lam_C, lam_R') = P(lam_R | lam_C).
Verdict check_local_causality_fine(const ProbSpace& space, const RegionBounds& bounds = {});

/// Coarse-grained variant: region states of R and R' are replaced by cells of
/// definable partitions; the thick-slice state stays complete.
Verdict check_local_causality_coarse(const ProbSpace& space,
                                     const std::vector<Partition>& families);

/// Definable partitions over scheduled multi-cell regions (leading-cell value
/// and parity classes), for models with no wiring attached.
std::vector<Partition> default_coarse_families(const ProbSpace& space,
                                               const RegionBounds& bounds = {});

/// The four wiring partitions as coarse families.
std::vector<Partition> wiring_families(const BellWiring& w);

/// Temporal locality: conditioning on the complete thick-slice state makes
/// any region wholly below t' redundant.
Verdict check_temporal_locality(const ProbSpace& space, const RegionBounds& bounds = {});

struct StepResult {
    std::string id;
    Verdict verdict;
};

struct StepReport {
    std::vector<StepResult> steps;

    Status overall() const;
    const StepResult* first_fail() const;
};

/// Evaluates, instantiation by instantiation, each identity used to derive
/// Factorizability over thick slices from Local Causality: the four
/// conditioning lemmas, then each equality of the chain, then the
/// factorized form itself. For models violating Local Causality the first
/// failing step identifies where the derivation breaks.
StepReport derive_factorizability_from_lc(const ProbSpace& space, const BellWiring& w);

/// Sufficiency of a coarse family: P(A | a,b,B,fam) = P(A | a,fam) and
/// P(B | a,b,A,fam) = P(B | b,fam), exactly.
Verdict check_sufficiency(const ProbSpace& space, const BellWiring& w, const Partition& family);

inline constexpr std::size_t kDefaultSearchStateCap = 8;

/// Exhaustive coarsest-first search over set partitions of the realized
/// thick-slice pair states for one passing both Factorizability and Settings
/// Independence. The search ranges over all partitions, not only
/// predicate-definable ones; reports flag this relaxation.
/// Throws Error(SearchBudget) when the realized state count exceeds the cap.
std::optional<Partition> search_coarse_graining(const ProbSpace& space, const BellWiring& w,
                                                std::size_t max_cells,
                                                std::size_t state_cap = kDefaultSearchStateCap);

/// (A1) The family's cell containing the system state is the same at every
/// time from preparation to first measurement, in every solution.
Verdict check_A1(const ProbSpace& space, const BellWiring& w, const TimeIndexedFamily& fam);

/// (A2) Outcome probabilities conditioned on the complete thick-slice pair
/// state depend on it only through the family cell, and the cell may be read
/// at t or at preparation interchangeably.
Verdict check_A2(const ProbSpace& space, const BellWiring& w, const TimeIndexedFamily& fam);

/// Factorizability with lambda = the family cell at preparation.
Verdict check_factorizability_tilde(const ProbSpace& space, const BellWiring& w,
                                    const TimeIndexedFamily& fam);

/// Extracts P(A,B | a,b) from the model through the wiring. Throws
/// Error(NullSettings) when some settings pair has probability zero.
PredictionsTable model_to_table(const ProbSpace& space, const BellWiring& w);

} // namespace hvcheck
