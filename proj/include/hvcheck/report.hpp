#pragma once

#include <json.hpp>

#include "hvcheck/conditions.hpp"

namespace hvcheck {

using OJson = nlohmann::ordered_json;

/// One checker run on one model, ready for serialization. Wall time is kept
/// out of the canonical JSON so identical inputs give byte-identical reports.
struct Report {
    std::string model;
    std::string checker;
    std::string lambda = "-";
    std::string law;
    Verdict verdict;
    std::string value;  // e.g. the CHSH combination, "" when not applicable
    std::string abs_value; // |S| for CHSH rows
    bool approx = false;   // value is a float-mode approximation, not exact
    std::string bounds; // quantifier bounds descriptor
    std::vector<StepResult> steps; // derivation reports
    std::string error;  // error code name when the run failed outright
    long long wall_ms = 0;

    int exit_code() const;
};

OJson witness_json(const Witness& w);
OJson report_json(const Report& r, bool timings = false);
/// Inverse of report_json: serialized reports reconstruct losslessly, so a
/// witness can be re-verified from its report alone.
Report report_from_json(const OJson& j);
std::string report_human(const Report& r);

/// Re-evaluates every conditional probability cited by a witness against the
/// space (conditioned on the experiment when a wiring is attached) and checks
/// the recorded exact values reproduce.
bool reverify_witness(const ProbSpace& space, const BellWiring* wiring, const Witness& w);

} // namespace hvcheck
