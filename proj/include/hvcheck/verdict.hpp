#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hvcheck/event.hpp"
#include "hvcheck/rational.hpp"
#include "hvcheck/spacetime.hpp"

namespace hvcheck {

enum class Status { Pass, Fail, Vacuous };

const char* status_name(Status s);

/// One re-verifiable conditional-probability evaluation: P(lhs | given),
/// with the exact value the checker computed.
struct CondQuery {
    std::vector<CoarseEvent> lhs;
    std::vector<CoarseEvent> given;
    std::string expect; // exact rational as "p/q"
};

/// Complete failure evidence: the instantiated quantifiers as text fields plus
/// the conditional probabilities needed to reproduce the violation.
struct Witness {
    std::string summary;
    std::vector<std::pair<std::string, std::string>> fields;
    std::vector<CondQuery> queries;
};

struct Verdict {
    Status status = Status::Vacuous;
    std::optional<Witness> witness;
    std::size_t checked = 0;
    std::size_t skipped = 0;
    /// True when every conditional probability evaluated was exactly 0 or 1.
    bool probs_all_01 = true;

    bool pass() const { return status == Status::Pass; }
    bool fail() const { return status == Status::Fail; }
};

Verdict verdict_pass(std::size_t checked, std::size_t skipped = 0);
Verdict verdict_fail(Witness w, std::size_t checked, std::size_t skipped = 0);
Verdict verdict_vacuous(std::size_t skipped = 0);

} // namespace hvcheck
