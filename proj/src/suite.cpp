#include "hvcheck/suite.hpp"

#include <chrono>
#include <cmath>
#include <set>

namespace hvcheck {

HVTModel with_external_settings(const HVTModel& m, const BellWiring& w) {
    HVTModel out = m;
    auto add = [&](const Partition& p) {
        for (const auto& pt : p.region.points()) {
            std::set<Sym> syms;
            for (const auto& c : p.cells)
                for (const auto& cons : c.desc.constraints)
                    if (cons.point == pt) syms.insert(cons.allowed.begin(), cons.allowed.end());
            if (!syms.empty())
                out.overrides.emplace_back(pt, std::vector<Sym>(syms.begin(), syms.end()));
        }
    };
    add(w.settings_left);
    add(w.settings_right);
    return out;
}

namespace {

std::string bounds_str(const RegionBounds& b) {
    return "cells+rects<=" + std::to_string(b.max_rect_w) + "x" + std::to_string(b.max_rect_h);
}

const BellWiring& need_wiring(const ParsedModel& pm, const char* checker) {
    if (!pm.wiring)
        throw Error(ErrorCode::ValidationError,
                    std::string(checker) + " needs a wiring section in the model");
    return *pm.wiring;
}

} // namespace

Report run_check(const ParsedModel& pm, const std::string& checker, const CheckOptions& opt) {
    Report r;
    r.model = pm.model.name;
    r.checker = checker;
    r.law = law_kind_name(pm.model.law_kind);
    auto t0 = std::chrono::steady_clock::now();
    try {
        HVTModel model = pm.model;
        std::optional<BellWiring> wiring = pm.wiring;
        if (wiring && (opt.t_override || opt.t_prime_override)) {
            if (opt.t_override) wiring->t = *opt.t_override;
            if (opt.t_prime_override) wiring->t_prime = *opt.t_prime_override;
            validate_wiring(model.lattice, *wiring);
        }
        if (opt.external_settings) {
            model = with_external_settings(model, need_wiring(pm, "external settings"));
        }

        if (model.law_kind == LawKind::PredictionsOnly) {
            if (checker == "chsh") {
                r.approx = opt.float_mode || model.predictions.is_approx;
                if (r.approx) {
                    double s = chsh_value_float(model.predictions);
                    r.value = std::to_string(s);
                    r.abs_value = std::to_string(std::abs(s));
                } else {
                    QuadVal s = chsh_value(model.predictions);
                    r.value = s.str();
                    r.abs_value = s.abs().str();
                }
                r.verdict = verdict_pass(1);
            } else if (checker == "settings-compatibility" || checker == "temporal-locality") {
                // No spacetime states to quantify over.
                r.verdict = verdict_vacuous();
            } else {
                throw Error(ErrorCode::UnsupportedLawKind,
                            "checker '" + checker + "' needs a spacetime model");
            }
        } else {
            EnumeratedModel em = enumerate_model(model, opt.budget);
            ProbSpace space = ProbSpace::from_enumerated(em);
            if (checker == "determinism" || checker == "deterministic") {
                r.checker = "deterministic";
                r.verdict = check_deterministic(em);
            } else if (checker == "local-determinism") {
                r.checker = opt.direction == Direction::Past   ? "locally-deterministic-past"
                            : opt.direction == Direction::Future ? "locally-deterministic-future"
                                                                  : "locally-deterministic-both";
                r.bounds = bounds_str(opt.bounds);
                r.verdict = check_locally_deterministic(em, opt.direction, opt.bounds);
            } else if (checker == "local-causality") {
                r.checker = opt.coarse ? "local-causality-coarse" : "local-causality-fine";
                r.bounds = bounds_str(opt.bounds);
                if (opt.coarse) {
                    std::vector<Partition> fams = default_coarse_families(space, opt.bounds);
                    if (wiring)
                        for (auto& f : wiring_families(*wiring)) fams.push_back(std::move(f));
                    r.verdict = check_local_causality_coarse(space, fams);
                } else {
                    r.verdict = check_local_causality_fine(space, opt.bounds);
                }
            } else if (checker == "temporal-locality") {
                r.bounds = bounds_str(opt.bounds);
                r.verdict = check_temporal_locality(space, opt.bounds);
            } else if (checker == "settings-independence") {
                r.lambda = opt.lambda.name();
                r.checker = "settings-independence@" + opt.lambda.name();
                r.verdict = check_settings_independence(space, need_wiring(pm, checker.c_str()),
                                                        opt.lambda);
            } else if (checker == "factorizability") {
                r.lambda = opt.lambda.name();
                r.checker = "factorizability@" + opt.lambda.name();
                r.verdict =
                    check_factorizability(space, need_wiring(pm, checker.c_str()), opt.lambda);
            } else if (checker == "settings-compatibility") {
                r.verdict = check_settings_compatibility(space, need_wiring(pm, checker.c_str()));
            } else if (checker == "sufficiency") {
                if (opt.lambda.kind != LambdaSpec::Kind::CoarseFamily || !opt.lambda.family)
                    throw Error(ErrorCode::BadFamily,
                                "sufficiency needs --lambda coarse:<file>");
                r.lambda = opt.lambda.name();
                r.verdict = check_sufficiency(space, need_wiring(pm, checker.c_str()),
                                              *opt.lambda.family);
            } else if (checker == "derivation") {
                StepReport sr =
                    derive_factorizability_from_lc(space, need_wiring(pm, checker.c_str()));
                r.steps = sr.steps;
                r.verdict.status = sr.overall();
                for (const auto& s : sr.steps) {
                    r.verdict.checked += s.verdict.checked;
                    r.verdict.skipped += s.verdict.skipped;
                    if (!s.verdict.probs_all_01) r.verdict.probs_all_01 = false;
                }
                if (const StepResult* ff = sr.first_fail()) {
                    r.value = "first-fail=" + ff->id;
                    r.verdict.witness = ff->verdict.witness;
                }
            } else if (checker == "coarse-search") {
                std::optional<Partition> found =
                    search_coarse_graining(space, need_wiring(pm, checker.c_str()),
                                           opt.search_max_cells, opt.search_state_cap);
                r.verdict = verdict_pass(1);
                if (found) {
                    r.value = "cells=" + std::to_string(found->cells.size());
                    Witness w;
                    w.summary = "coarse-graining satisfying both conditions "
                                "(search ranged over all partitions, not only definable ones)";
                    for (const auto& c : found->cells) {
                        std::string states;
                        for (const auto& st : c.desc.states) {
                            RegionState rs{found->region, st};
                            if (!states.empty()) states += " | ";
                            states += rs.str(space.alphabet());
                        }
                        w.fields.emplace_back(c.label, states);
                    }
                    r.verdict.witness = std::move(w);
                } else {
                    r.value = "none";
                }
            } else if (checker == "chsh") {
                PredictionsTable t = model_to_table(space, need_wiring(pm, checker.c_str()));
                r.approx = opt.float_mode;
                if (r.approx) {
                    double s = chsh_value_float(t);
                    r.value = std::to_string(s);
                    r.abs_value = std::to_string(std::abs(s));
                } else {
                    QuadVal s = chsh_value(t);
                    r.value = s.str();
                    r.abs_value = s.abs().str();
                }
                r.verdict = verdict_pass(1);
            } else {
                throw Error(ErrorCode::ValidationError, "unknown checker '" + checker + "'");
            }
        }
    } catch (const Error& e) {
        r.error = error_code_name(e.code());
        r.value = e.what();
    }
    r.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
    return r;
}

namespace {

struct PlannedCheck {
    std::string checker; // run_check name
    CheckOptions opt;
    std::string id; // canonical row id for matching expected verdicts
};

std::vector<PlannedCheck> plan_for(const ParsedModel& pm, const CheckOptions& base) {
    std::vector<PlannedCheck> plan;
    auto add = [&](const std::string& checker, const std::string& id,
                   auto mutate) {
        PlannedCheck pc{checker, base, id};
        mutate(pc.opt);
        plan.push_back(std::move(pc));
    };
    if (pm.model.law_kind == LawKind::PredictionsOnly) {
        add("chsh", "chsh", [](CheckOptions&) {});
        return plan;
    }
    add("determinism", "deterministic", [](CheckOptions&) {});
    add("local-determinism", "locally-deterministic-past",
        [](CheckOptions& o) { o.direction = Direction::Past; });
    add("local-determinism", "locally-deterministic-both",
        [](CheckOptions& o) { o.direction = Direction::Both; });
    add("local-causality", "local-causality-fine", [](CheckOptions& o) { o.coarse = false; });
    add("local-causality", "local-causality-coarse", [](CheckOptions& o) { o.coarse = true; });
    add("temporal-locality", "temporal-locality", [](CheckOptions&) {});
    if (pm.wiring) {
        add("settings-independence", "settings-independence@preparation",
            [](CheckOptions& o) { o.lambda = LambdaSpec::preparation(); });
        add("settings-independence", "settings-independence@thick-slices",
            [](CheckOptions& o) { o.lambda = LambdaSpec::thick_slices(); });
        add("factorizability", "factorizability@preparation",
            [](CheckOptions& o) { o.lambda = LambdaSpec::preparation(); });
        add("factorizability", "factorizability@thick-slices",
            [](CheckOptions& o) { o.lambda = LambdaSpec::thick_slices(); });
        add("settings-compatibility", "settings-compatibility", [](CheckOptions&) {});
        add("derivation", "derivation", [](CheckOptions&) {});
        add("chsh", "chsh", [](CheckOptions&) {});
    }
    return plan;
}

void append_rows(SuiteResult& out, const ParsedModel& pm,
                 const std::map<std::string, Status>& expected, const CheckOptions& base) {
    for (const auto& pc : plan_for(pm, base)) {
        SuiteRow row;
        row.report = run_check(pm, pc.checker, pc.opt);
        auto it = expected.find(pc.id);
        if (it != expected.end()) {
            row.expected = it->second;
            row.matched = row.report.error.empty() && row.report.verdict.status == it->second;
            if (!row.matched) out.all_matched = false;
        } else if (!row.report.error.empty() && pc.checker != "chsh") {
            // Unexpected hard error still counts as a mismatch.
            out.all_matched = false;
            row.matched = false;
        }
        out.rows.push_back(std::move(row));
    }
}

} // namespace

SuiteResult run_zoo_suite(const CheckOptions& opt) {
    SuiteResult out;
    for (const ZooEntry& z : full_zoo()) {
        ParsedModel pm{z.model, z.wiring};
        append_rows(out, pm, z.expected, opt);
    }
    return out;
}

SuiteResult run_file_suite(const std::vector<std::string>& paths, const CheckOptions& opt) {
    SuiteResult out;
    for (const std::string& path : paths) {
        try {
            ParsedModel pm = parse_model_file(path);
            append_rows(out, pm, {}, opt);
        } catch (const Error& e) {
            SuiteRow row;
            row.report.model = path;
            row.report.checker = "parse";
            row.report.error = error_code_name(e.code());
            row.report.value = e.what();
            row.matched = false;
            out.all_matched = false;
            out.rows.push_back(std::move(row));
        }
    }
    return out;
}

OJson SuiteResult::to_json(bool timings) const {
    OJson arr = OJson::array();
    for (const auto& row : rows) {
        OJson j = report_json(row.report, timings);
        if (row.expected) {
            j["expected"] = status_name(*row.expected);
            j["matched"] = row.matched;
        }
        arr.push_back(j);
    }
    return arr;
}

std::string SuiteResult::human() const {
    std::string out;
    std::size_t mismatches = 0;
    for (const auto& row : rows) {
        out += report_human(row.report);
        if (row.expected) {
            out += "  expected=" + std::string(status_name(*row.expected));
            out += row.matched ? " ok" : " MISMATCH";
        }
        if (!row.matched) ++mismatches;
        out += "\n";
    }
    out += "rows: " + std::to_string(rows.size()) + ", mismatches: " + std::to_string(mismatches) +
           "\n";
    return out;
}

} // namespace hvcheck
