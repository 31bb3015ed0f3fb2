#include "hvcheck/model.hpp"

#include <algorithm>
#include <map>

namespace hvcheck {

const char* status_name(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Vacuous: return "vacuous";
    }
    return "unknown";
}

Verdict verdict_pass(std::size_t checked, std::size_t skipped) {
    Verdict v;
    v.status = Status::Pass;
    v.checked = checked;
    v.skipped = skipped;
    return v;
}

Verdict verdict_fail(Witness w, std::size_t checked, std::size_t skipped) {
    Verdict v;
    v.status = Status::Fail;
    v.witness = std::move(w);
    v.checked = checked;
    v.skipped = skipped;
    return v;
}

Verdict verdict_vacuous(std::size_t skipped) {
    Verdict v;
    v.status = Status::Vacuous;
    v.skipped = skipped;
    return v;
}

const char* law_kind_name(LawKind k) {
    switch (k) {
        case LawKind::LocalDeterministic: return "local-deterministic";
        case LawKind::GlobalDeterministic: return "global-deterministic";
        case LawKind::LocalStochastic: return "local-stochastic";
        case LawKind::PredictionsOnly: return "predictions-only";
    }
    return "unknown";
}

Sym Alphabet::index_of(const std::string& n) const {
    for (std::size_t i = 0; i < symbols.size(); ++i)
        if (symbols[i] == n) return static_cast<Sym>(i);
    throw Error(ErrorCode::ValidationError, "unknown symbol '" + n + "'");
}

bool Alphabet::has(const std::string& n) const {
    for (const auto& s : symbols)
        if (s == n) return true;
    return false;
}

void validate_model(const HVTModel& m) {
    if (m.alphabet.symbols.empty())
        throw Error(ErrorCode::ValidationError, "alphabet must be nonempty");
    for (std::size_t i = 0; i < m.alphabet.symbols.size(); ++i)
        for (std::size_t j = i + 1; j < m.alphabet.symbols.size(); ++j)
            if (m.alphabet.symbols[i] == m.alphabet.symbols[j])
                throw Error(ErrorCode::ValidationError,
                            "duplicate symbol '" + m.alphabet.symbols[i] + "'");
    std::size_t n = m.alphabet.size();

    if (m.law_kind == LawKind::PredictionsOnly) {
        validate_table(m.predictions);
        if (!m.initial_measure.empty())
            throw Error(ErrorCode::ValidationError,
                        "predictions-only models carry no initial measure");
        return;
    }

    if (m.law_kind == LawKind::LocalDeterministic && m.local_rule.table.size() != n * n * n)
        throw Error(ErrorCode::ValidationError, "deterministic rule table is not total");
    if (m.law_kind == LawKind::LocalStochastic) {
        if (m.stochastic_rule.table.size() != n * n * n)
            throw Error(ErrorCode::ValidationError, "stochastic rule table is not total");
        for (const auto& dist : m.stochastic_rule.table) {
            Rational sum;
            for (const auto& [sym, p] : dist) {
                if (sym >= n)
                    throw Error(ErrorCode::ValidationError, "kernel symbol out of range");
                if (p.sign() <= 0)
                    throw Error(ErrorCode::ValidationError, "kernel entries must be positive");
                sum += p;
            }
            if (!sum.is_one())
                throw Error(ErrorCode::ValidationError, "kernel distribution must sum to exactly 1");
        }
    }
    if (m.law_kind == LawKind::GlobalDeterministic && !m.global_rule.step)
        throw Error(ErrorCode::ValidationError, "global rule missing");

    if (m.initial_measure.empty())
        throw Error(ErrorCode::ValidationError, "initial measure support is empty");
    Rational total;
    std::size_t w = static_cast<std::size_t>(m.lattice.width);
    for (std::size_t i = 0; i < m.initial_measure.size(); ++i) {
        const auto& [config, weight] = m.initial_measure[i];
        if (config.size() != w)
            throw Error(ErrorCode::ValidationError, "initial configuration has wrong width");
        for (Sym s : config)
            if (s >= n)
                throw Error(ErrorCode::ValidationError, "initial configuration symbol out of range");
        if (weight.sign() <= 0)
            throw Error(ErrorCode::ValidationError, "measure weights must be positive");
        if (i > 0 && !(m.initial_measure[i - 1].first < config))
            throw Error(ErrorCode::ValidationError, "initial measure must be sorted and duplicate-free");
        total += weight;
    }
    if (!total.is_one())
        throw Error(ErrorCode::ValidationError,
                    "measure weights sum to " + total.str() + ", expected 1");
    for (const auto& [p, syms] : m.overrides) {
        if (!m.lattice.valid(p))
            throw Error(ErrorCode::ValidationError, "override cell outside the diamond");
        if (syms.empty())
            throw Error(ErrorCode::ValidationError, "override symbol set is empty");
    }
}

std::string RegionState::str(const Alphabet& a) const {
    std::string out;
    for (std::size_t i = 0; i < region.points().size(); ++i) {
        const auto& p = region.points()[i];
        if (!out.empty()) out += " ";
        out += "(" + std::to_string(p.x) + "," + std::to_string(p.t) + ")=" + a.name(values[i]);
    }
    return out;
}

namespace {

struct PartialSolution {
    std::vector<Sym> values;
    Rational weight;
};

} // namespace

std::vector<Solution> enumerate_solutions(const HVTModel& m, std::size_t budget) {
    if (m.law_kind == LawKind::PredictionsOnly)
        throw Error(ErrorCode::UnsupportedLawKind,
                    "predictions-only models have no spacetime solutions");
    validate_model(m);

    const Lattice& l = m.lattice;
    const std::size_t n = m.alphabet.size();
    const std::size_t total_points = l.point_count();

    // Overrides grouped by target time.
    std::map<int, std::vector<std::pair<SitePoint, std::vector<Sym>>>> overrides_at;
    for (const auto& ov : m.overrides) overrides_at[ov.first.t].push_back(ov);

    std::vector<Solution> out;
    for (const auto& [config, weight] : m.initial_measure) {
        std::vector<PartialSolution> frontier;
        {
            PartialSolution p;
            p.values.assign(total_points, 0);
            std::copy(config.begin(), config.end(), p.values.begin());
            p.weight = weight;
            frontier.push_back(std::move(p));
        }
        // Exogenous overrides may also target the initial slice.
        if (auto it = overrides_at.find(0); it != overrides_at.end()) {
            std::vector<PartialSolution> next;
            for (const auto& ps : frontier) {
                std::vector<PartialSolution> alts{ps};
                for (const auto& [cell, syms] : it->second) {
                    std::vector<PartialSolution> grown;
                    Rational share(1, static_cast<std::int64_t>(syms.size()));
                    for (const auto& base : alts)
                        for (Sym s : syms) {
                            PartialSolution v = base;
                            v.values[l.point_index(cell)] = s;
                            v.weight = base.weight * share;
                            grown.push_back(std::move(v));
                        }
                    alts = std::move(grown);
                }
                for (auto& a : alts) next.push_back(std::move(a));
            }
            frontier = std::move(next);
        }

        for (int t = 0; t < l.height; ++t) {
            const int lo = l.slice_min_x(t + 1);
            const int hi = l.slice_max_x(t + 1);
            std::vector<PartialSolution> next;
            for (const auto& ps : frontier) {
                if (m.law_kind == LawKind::LocalDeterministic ||
                    m.law_kind == LawKind::GlobalDeterministic) {
                    PartialSolution grown = ps;
                    if (m.law_kind == LawKind::LocalDeterministic) {
                        for (int x = lo; x <= hi; ++x) {
                            Sym lft = ps.values[l.point_index({x - 1, t})];
                            Sym ctr = ps.values[l.point_index({x, t})];
                            Sym rgt = ps.values[l.point_index({x + 1, t})];
                            grown.values[l.point_index({x, t + 1})] =
                                m.local_rule.next(lft, ctr, rgt, n);
                        }
                    } else {
                        std::vector<Sym> slice(static_cast<std::size_t>(l.slice_size(t)));
                        for (int x = l.slice_min_x(t); x <= l.slice_max_x(t); ++x)
                            slice[static_cast<std::size_t>(x - l.slice_min_x(t))] =
                                ps.values[l.point_index({x, t})];
                        std::vector<Sym> nxt = m.global_rule.step(l, slice, t);
                        if (nxt.size() != static_cast<std::size_t>(l.slice_size(t + 1)))
                            throw Error(ErrorCode::ValidationError,
                                        "global rule produced a slice of the wrong size");
                        for (int x = lo; x <= hi; ++x)
                            grown.values[l.point_index({x, t + 1})] =
                                nxt[static_cast<std::size_t>(x - lo)];
                    }
                    next.push_back(std::move(grown));
                } else {
                    // Stochastic: expand the cartesian product of per-cell draws.
                    std::vector<PartialSolution> alts{ps};
                    for (int x = lo; x <= hi; ++x) {
                        Sym lft = ps.values[l.point_index({x - 1, t})];
                        Sym ctr = ps.values[l.point_index({x, t})];
                        Sym rgt = ps.values[l.point_index({x + 1, t})];
                        const auto& dist = m.stochastic_rule.dist(lft, ctr, rgt, n);
                        std::vector<PartialSolution> grown;
                        for (const auto& base : alts)
                            for (const auto& [sym, p] : dist) {
                                PartialSolution v = base;
                                v.values[l.point_index({x, t + 1})] = sym;
                                v.weight = base.weight * p;
                                grown.push_back(std::move(v));
                                if (grown.size() + out.size() > budget)
                                    throw Error(ErrorCode::EnumerationBudget,
                                                "enumeration budget exceeded");
                            }
                        alts = std::move(grown);
                    }
                    for (auto& a : alts) next.push_back(std::move(a));
                }
            }
            // Exogenous overrides at t+1 redraw cells after the law has acted.
            if (auto it = overrides_at.find(t + 1); it != overrides_at.end()) {
                std::vector<PartialSolution> redrawn;
                for (const auto& ps : next) {
                    std::vector<PartialSolution> alts{ps};
                    for (const auto& [cell, syms] : it->second) {
                        std::vector<PartialSolution> grown;
                        Rational share(1, static_cast<std::int64_t>(syms.size()));
                        for (const auto& base : alts)
                            for (Sym s : syms) {
                                PartialSolution v = base;
                                v.values[l.point_index(cell)] = s;
                                v.weight = base.weight * share;
                                grown.push_back(std::move(v));
                            }
                        alts = std::move(grown);
                    }
                    for (auto& a : alts) redrawn.push_back(std::move(a));
                }
                next = std::move(redrawn);
            }
            frontier = std::move(next);
            if (frontier.size() + out.size() > budget)
                throw Error(ErrorCode::EnumerationBudget, "enumeration budget exceeded");
        }
        for (auto& ps : frontier) out.push_back(Solution{std::move(ps.values), ps.weight});
        if (out.size() > budget)
            throw Error(ErrorCode::EnumerationBudget, "enumeration budget exceeded");
    }

    std::sort(out.begin(), out.end(),
              [](const Solution& a, const Solution& b) { return a.values < b.values; });

    Rational total;
    for (const auto& s : out) total += s.weight;
    if (!total.is_one())
        throw Error(ErrorCode::ValidationError,
                    "solution weights sum to " + total.str() + ", expected 1");
    return out;
}

EnumeratedModel enumerate_model(const HVTModel& m, std::size_t budget) {
    EnumeratedModel em;
    em.model = m;
    em.solutions = enumerate_solutions(m, budget);
    return em;
}

RegionState restrict_to(const Solution& s, const Region& r, const Lattice& l) {
    RegionState rs;
    rs.region = r;
    rs.values.reserve(r.size());
    for (const auto& p : r.points()) rs.values.push_back(s.values[l.point_index(p)]);
    return rs;
}

bool compatible(const Solution& s, const RegionState& rs, const Lattice& l) {
    for (std::size_t i = 0; i < rs.region.points().size(); ++i)
        if (s.values[l.point_index(rs.region.points()[i])] != rs.values[i]) return false;
    return true;
}

std::vector<Region> region_schedule(const Lattice& l, const RegionBounds& bounds) {
    std::vector<Region> out;
    for (const auto& p : l.all_points()) out.push_back(Region::single(p));
    for (int h = 1; h <= bounds.max_rect_h; ++h)
        for (int w = 1; w <= bounds.max_rect_w; ++w) {
            if (w == 1 && h == 1) continue;
            for (int t = 0; t + h - 1 <= l.height; ++t) {
                int x_lo = l.slice_min_x(t + h - 1);
                int x_hi = l.slice_max_x(t + h - 1);
                for (int x = x_lo; x + w - 1 <= x_hi; ++x)
                    out.push_back(Region::rect(x, x + w - 1, t, t + h - 1));
            }
        }
    return out;
}

Verdict check_deterministic(const EnumeratedModel& em) {
    const Lattice& l = em.model.lattice;
    std::size_t checked = 0;
    for (int t0 = 0; t0 <= l.height; ++t0) {
        // Points at or above t0 occupy a contiguous index suffix.
        std::size_t from = l.point_index({l.slice_min_x(t0), t0});
        std::size_t slice_len = static_cast<std::size_t>(l.slice_size(t0));
        std::map<std::vector<Sym>, std::size_t> first_with_state;
        for (std::size_t i = 0; i < em.solutions.size(); ++i) {
            const auto& s = em.solutions[i];
            std::vector<Sym> key(s.values.begin() + from, s.values.begin() + from + slice_len);
            auto [it, inserted] = first_with_state.emplace(std::move(key), i);
            ++checked;
            if (inserted) continue;
            const auto& rep = em.solutions[it->second];
            if (!std::equal(rep.values.begin() + from, rep.values.end(),
                            s.values.begin() + from)) {
                // Find a differing point above the slice.
                SitePoint diff{};
                for (const auto& p : l.all_points()) {
                    if (p.t <= t0) continue;
                    if (rep.values[l.point_index(p)] != s.values[l.point_index(p)]) {
                        diff = p;
                        break;
                    }
                }
                Witness w;
                w.summary = "two solutions share the full slice at t=" + std::to_string(t0) +
                            " but diverge above it";
                Region slice_region = Region::slice(l, t0);
                RegionState slice_state = restrict_to(rep, slice_region, l);
                Sym v1 = rep.values[l.point_index(diff)];
                Sym v2 = s.values[l.point_index(diff)];
                w.fields = {
                    {"t0", std::to_string(t0)},
                    {"slice_state", slice_state.str(em.model.alphabet)},
                    {"differs_at",
                     "(" + std::to_string(diff.x) + "," + std::to_string(diff.t) + ")"},
                    {"value_1", em.model.alphabet.name(v1)},
                    {"value_2", em.model.alphabet.name(v2)},
                };
                // Both continuations have positive probability given the slice.
                Region diff_region = Region::single(diff);
                Rational w_given, w1, w2;
                for (const auto& sol : em.solutions) {
                    if (!compatible(sol, slice_state, l)) continue;
                    w_given += sol.weight;
                    Sym v = sol.values[l.point_index(diff)];
                    if (v == v1) w1 += sol.weight;
                    if (v == v2) w2 += sol.weight;
                }
                CoarseEvent given = event_state(slice_state, "slice");
                w.queries = {
                    CondQuery{{event_cell_value(diff_region, diff, v1, "value_1")}, {given},
                              (w1 / w_given).str()},
                    CondQuery{{event_cell_value(diff_region, diff, v2, "value_2")}, {given},
                              (w2 / w_given).str()},
                };
                return verdict_fail(std::move(w), checked);
            }
        }
    }
    return verdict_pass(checked);
}

namespace {

Verdict check_locally_deterministic_dir(const EnumeratedModel& em, bool past,
                                        const RegionBounds& bounds, std::size_t& checked) {
    const Lattice& l = em.model.lattice;
    for (const auto& r : region_schedule(l, bounds)) {
        std::vector<int> times;
        if (past)
            for (int t0 = 0; t0 < r.min_t(); ++t0) times.push_back(t0);
        else
            for (int t0 = r.max_t() + 1; t0 <= l.height; ++t0) times.push_back(t0);
        for (int t0 : times) {
            Region cone_slice = sigma(r, t0, l);
            std::map<std::vector<Sym>, std::pair<std::size_t, std::vector<Sym>>> groups;
            for (std::size_t i = 0; i < em.solutions.size(); ++i) {
                const auto& s = em.solutions[i];
                std::vector<Sym> key;
                key.reserve(cone_slice.size());
                for (const auto& p : cone_slice.points()) key.push_back(s.values[l.point_index(p)]);
                std::vector<Sym> on_r;
                on_r.reserve(r.size());
                for (const auto& p : r.points()) on_r.push_back(s.values[l.point_index(p)]);
                auto [it, inserted] = groups.emplace(std::move(key), std::make_pair(i, on_r));
                ++checked;
                if (!inserted && it->second.second != on_r) {
                    const auto& rep = em.solutions[it->second.first];
                    Witness w;
                    w.summary = "cone-slice state does not determine the region state";
                    RegionState sigma_state = restrict_to(rep, cone_slice, l);
                    RegionState r1 = restrict_to(rep, r, l);
                    RegionState r2 = restrict_to(s, r, l);
                    w.fields = {
                        {"region", r.str()},
                        {"t0", std::to_string(t0)},
                        {"direction", past ? "past" : "future"},
                        {"cone_slice_state", sigma_state.str(em.model.alphabet)},
                        {"region_state_1", r1.str(em.model.alphabet)},
                        {"region_state_2", r2.str(em.model.alphabet)},
                    };
                    Rational w_given, w1, w2;
                    for (const auto& sol : em.solutions) {
                        if (!compatible(sol, sigma_state, l)) continue;
                        w_given += sol.weight;
                        if (compatible(sol, r1, l)) w1 += sol.weight;
                        if (compatible(sol, r2, l)) w2 += sol.weight;
                    }
                    CoarseEvent given = event_state(sigma_state, "cone_slice");
                    w.queries = {
                        CondQuery{{event_state(r1, "region_state_1")}, {given},
                                  (w1 / w_given).str()},
                        CondQuery{{event_state(r2, "region_state_2")}, {given},
                                  (w2 / w_given).str()},
                    };
                    return verdict_fail(std::move(w), checked);
                }
            }
        }
    }
    return verdict_pass(checked);
}

} // namespace

Verdict check_locally_deterministic(const EnumeratedModel& em, Direction dir,
                                    const RegionBounds& bounds) {
    std::size_t checked = 0;
    if (dir == Direction::Past || dir == Direction::Both) {
        Verdict v = check_locally_deterministic_dir(em, true, bounds, checked);
        if (v.fail()) return v;
    }
    if (dir == Direction::Future || dir == Direction::Both) {
        Verdict v = check_locally_deterministic_dir(em, false, bounds, checked);
        if (v.fail()) return v;
    }
    if (checked == 0) return verdict_vacuous(); // e.g. a single-slice lattice
    return verdict_pass(checked);
}

} // namespace hvcheck
