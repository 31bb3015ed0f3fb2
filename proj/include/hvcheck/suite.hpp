#pragma once

#include "hvcheck/parser.hpp"
#include "hvcheck/report.hpp"
#include "hvcheck/zoo.hpp"

namespace hvcheck {

struct CheckOptions {
    std::size_t budget = kDefaultBudget;
    RegionBounds bounds{};
    LambdaSpec lambda = LambdaSpec::thick_slices();
    Direction direction = Direction::Both;
    bool coarse = false; // local-causality variant
    std::optional<int> t_override, t_prime_override;
    bool external_settings = false;
    bool float_mode = false;
    std::size_t search_max_cells = 8;
    std::size_t search_state_cap = kDefaultSearchStateCap;
};

/// Opt-in exogenous settings: the wiring's setting cells are redrawn
/// uniformly after the law acts, overriding it there. This deliberately
/// exempts the settings from the model's own laws.
HVTModel with_external_settings(const HVTModel& m, const BellWiring& w);

/// Runs one named checker ("determinism", "local-determinism",
/// "local-causality", "temporal-locality", "settings-independence",
/// "factorizability", "settings-compatibility", "sufficiency", "derivation",
/// "coarse-search", "chsh") against a parsed model. Errors are captured in
/// the report rather than thrown.
Report run_check(const ParsedModel& pm, const std::string& checker, const CheckOptions& opt);

struct SuiteRow {
    Report report;
    std::optional<Status> expected;
    bool matched = true;
};

struct SuiteResult {
    std::vector<SuiteRow> rows;
    bool all_matched = true;

    OJson to_json(bool timings = false) const;
    std::string human() const;
};

/// Every applicable checker over every zoo entry, verdicts compared against
/// the entry's expected table.
SuiteResult run_zoo_suite(const CheckOptions& opt = {});

/// Every applicable checker over each model file; per-file errors are
/// reported and the suite continues.
SuiteResult run_file_suite(const std::vector<std::string>& paths, const CheckOptions& opt = {});

} // namespace hvcheck
