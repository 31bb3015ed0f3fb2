#include "hvcheck/conditions.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace hvcheck {

namespace {

// Dense joint weight table over a list of cell families; every solution must
// fall in exactly one cell per family.
struct Joint {
    std::vector<std::size_t> sizes;
    std::vector<Rational> w;

    std::size_t flat(std::initializer_list<std::size_t> ix) const {
        std::size_t f = 0;
        std::size_t d = 0;
        for (std::size_t i : ix) f = f * sizes[d++] + i;
        return f;
    }
};

std::size_t find_cell(const ProbSpace& space, const Solution& s,
                      const std::vector<CoarseEvent>& cells, const char* what) {
    std::size_t hit = cells.size();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (space.sat(s, cells[i])) {
            if (hit != cells.size())
                throw Error(ErrorCode::ValidationError,
                            std::string(what) + ": cells overlap on a realized state");
            hit = i;
        }
    }
    if (hit == cells.size())
        throw Error(ErrorCode::ValidationError,
                    std::string(what) + ": cells do not cover a realized state");
    return hit;
}

Joint classify(const ProbSpace& space, const std::vector<const std::vector<CoarseEvent>*>& dims,
               const char* what) {
    Joint j;
    std::size_t total = 1;
    for (const auto* d : dims) {
        j.sizes.push_back(d->size());
        total *= d->size();
    }
    j.w.assign(total, Rational());
    for (const auto& s : space.solutions()) {
        std::size_t f = 0;
        for (std::size_t d = 0; d < dims.size(); ++d)
            f = f * j.sizes[d] + find_cell(space, s, *dims[d], what);
        j.w[f] += s.weight;
    }
    return j;
}

// Sums out every dimension not listed in `keep` (ascending dim indices).
std::vector<Rational> marginalize(const Joint& j, const std::vector<int>& keep) {
    std::size_t out_size = 1;
    for (int d : keep) out_size *= j.sizes[static_cast<std::size_t>(d)];
    std::vector<Rational> out(out_size, Rational());
    std::vector<std::size_t> digits(j.sizes.size(), 0);
    for (std::size_t f = 0; f < j.w.size(); ++f) {
        if (!j.w[f].is_zero()) {
            std::size_t rest = f;
            for (std::size_t d = j.sizes.size(); d-- > 0;) {
                digits[d] = rest % j.sizes[d];
                rest /= j.sizes[d];
            }
            std::size_t of = 0;
            for (int d : keep) of = of * j.sizes[static_cast<std::size_t>(d)] + digits[static_cast<std::size_t>(d)];
            out[of] += j.w[f];
        }
    }
    return out;
}

bool is01(const Rational& r) { return r.is_zero() || r.is_one(); }

} // namespace

Verdict check_factorizability(const ProbSpace& space0, const BellWiring& w,
                              const LambdaSpec& spec) {
    ProbSpace space = condition_on_experiment(space0, w);
    std::vector<CoarseEvent> lam = lambda_cells(space, w, spec);
    if (lam.empty()) return verdict_vacuous();
    const auto& sl = w.settings_left.cells;
    const auto& sr = w.settings_right.cells;
    const auto& ol = w.outcomes_left.cells;
    const auto& orr = w.outcomes_right.cells;

    Joint j = classify(space, {&sl, &sr, &ol, &orr, &lam}, "factorizability");
    auto m_ab_l = marginalize(j, {0, 1, 4});
    auto m_aA_l = marginalize(j, {0, 2, 4});
    auto m_a_l = marginalize(j, {0, 4});
    auto m_bB_l = marginalize(j, {1, 3, 4});
    auto m_b_l = marginalize(j, {1, 4});

    std::size_t checked = 0, skipped = 0;
    bool probs01 = true;
    const std::size_t nl = lam.size();
    for (std::size_t l = 0; l < nl; ++l)
        for (std::size_t ia = 0; ia < sl.size(); ++ia)
            for (std::size_t ib = 0; ib < sr.size(); ++ib) {
                const Rational& den = m_ab_l[(ia * sr.size() + ib) * nl + l];
                if (den.is_zero()) {
                    skipped += ol.size() * orr.size();
                    continue;
                }
                for (std::size_t iA = 0; iA < ol.size(); ++iA)
                    for (std::size_t iB = 0; iB < orr.size(); ++iB) {
                        Rational lhs = j.w[j.flat({ia, ib, iA, iB, l})] / den;
                        Rational fa = m_aA_l[(ia * ol.size() + iA) * nl + l] /
                                      m_a_l[ia * nl + l];
                        Rational fb = m_bB_l[(ib * orr.size() + iB) * nl + l] /
                                      m_b_l[ib * nl + l];
                        ++checked;
                        if (!is01(lhs) || !is01(fa) || !is01(fb)) probs01 = false;
                        if (lhs != fa * fb) {
                            Witness wit;
                            wit.summary = "joint outcome probability fails to factorize";
                            wit.fields = {
                                {"A", ol[iA].label},           {"B", orr[iB].label},
                                {"a", sl[ia].label},           {"b", sr[ib].label},
                                {"lambda", lam[l].label},      {"lambda_spec", spec.name()},
                                {"P(A,B|a,b,lambda)", lhs.str()},
                                {"P(A|a,lambda)", fa.str()},
                                {"P(B|b,lambda)", fb.str()},
                                {"product", (fa * fb).str()},
                            };
                            wit.queries = {
                                CondQuery{{ol[iA], orr[iB]}, {sl[ia], sr[ib], lam[l]}, lhs.str()},
                                CondQuery{{ol[iA]}, {sl[ia], lam[l]}, fa.str()},
                                CondQuery{{orr[iB]}, {sr[ib], lam[l]}, fb.str()},
                            };
                            Verdict v = verdict_fail(std::move(wit), checked, skipped);
                            v.probs_all_01 = probs01;
                            return v;
                        }
                    }
            }
    if (checked == 0) return verdict_vacuous(skipped);
    Verdict v = verdict_pass(checked, skipped);
    v.probs_all_01 = probs01;
    return v;
}

Verdict check_settings_independence(const ProbSpace& space0, const BellWiring& w,
                                    const LambdaSpec& spec) {
    ProbSpace space = condition_on_experiment(space0, w);
    std::vector<CoarseEvent> lam = lambda_cells(space, w, spec);
    if (lam.empty()) return verdict_vacuous();
    const auto& sl = w.settings_left.cells;
    const auto& sr = w.settings_right.cells;

    Joint j = classify(space, {&sl, &sr, &lam}, "settings-independence");
    auto m_ab = marginalize(j, {0, 1});
    auto m_l = marginalize(j, {2});

    std::size_t checked = 0, skipped = 0;
    bool probs01 = true;
    for (std::size_t l = 0; l < lam.size(); ++l)
        for (std::size_t ia = 0; ia < sl.size(); ++ia)
            for (std::size_t ib = 0; ib < sr.size(); ++ib) {
                const Rational& den = m_ab[ia * sr.size() + ib];
                if (den.is_zero()) {
                    ++skipped;
                    continue;
                }
                Rational lhs = j.w[j.flat({ia, ib, l})] / den;
                const Rational& rhs = m_l[l];
                ++checked;
                if (!is01(lhs) || !is01(rhs)) probs01 = false;
                if (lhs != rhs) {
                    Witness wit;
                    wit.summary = "hidden state is correlated with the settings";
                    wit.fields = {
                        {"lambda", lam[l].label},  {"a", sl[ia].label},
                        {"b", sr[ib].label},       {"lambda_spec", spec.name()},
                        {"P(lambda|a,b)", lhs.str()}, {"P(lambda)", rhs.str()},
                    };
                    wit.queries = {
                        CondQuery{{lam[l]}, {sl[ia], sr[ib]}, lhs.str()},
                        CondQuery{{lam[l]}, {}, rhs.str()},
                    };
                    Verdict v = verdict_fail(std::move(wit), checked, skipped);
                    v.probs_all_01 = probs01;
                    return v;
                }
            }
    if (checked == 0) return verdict_vacuous(skipped);
    Verdict v = verdict_pass(checked, skipped);
    v.probs_all_01 = probs01;
    return v;
}

Verdict check_settings_compatibility(const ProbSpace& space0, const BellWiring& w) {
    ProbSpace space = condition_on_experiment(space0, w);
    std::vector<CoarseEvent> lam = lambda_cells(space, w, LambdaSpec::thick_slices());
    if (lam.empty()) return verdict_vacuous();
    const auto& sl = w.settings_left.cells;
    const auto& sr = w.settings_right.cells;
    Joint j = classify(space, {&sl, &sr, &lam}, "settings-compatibility");

    constexpr std::size_t kListedLambdas = 8;
    std::size_t min_pairs = sl.size() * sr.size();
    std::size_t max_pairs = 0;
    std::size_t bad = lam.size();
    std::vector<std::pair<std::string, std::string>> per_lambda;
    for (std::size_t l = 0; l < lam.size(); ++l) {
        std::size_t pairs = 0;
        std::string list;
        for (std::size_t ia = 0; ia < sl.size(); ++ia)
            for (std::size_t ib = 0; ib < sr.size(); ++ib)
                if (!j.w[j.flat({ia, ib, l})].is_zero()) {
                    ++pairs;
                    if (!list.empty()) list += " ";
                    list += "(" + sl[ia].label + "," + sr[ib].label + ")";
                }
        min_pairs = std::min(min_pairs, pairs);
        max_pairs = std::max(max_pairs, pairs);
        if (pairs < sl.size() * sr.size() && bad == lam.size()) bad = l;
        if (per_lambda.size() < kListedLambdas)
            per_lambda.emplace_back("pairs{" + lam[l].label + "}",
                                    list.empty() ? "(none)" : list);
    }
    if (bad == lam.size()) {
        Verdict v = verdict_pass(lam.size());
        Witness info;
        info.fields = {{"lambda_count", std::to_string(lam.size())},
                       {"min_compatible_pairs", std::to_string(min_pairs)},
                       {"max_compatible_pairs", std::to_string(max_pairs)}};
        v.witness = std::move(info);
        return v;
    }
    Witness wit;
    wit.summary = "a realized thick-slice state excludes some settings choice";
    wit.fields = {
        {"lambda", lam[bad].label},
        {"lambda_count", std::to_string(lam.size())},
        {"min_compatible_pairs", std::to_string(min_pairs)},
        {"max_compatible_pairs", std::to_string(max_pairs)},
    };
    // Per-state listing, truncated for large state spaces.
    for (auto& entry : per_lambda) wit.fields.push_back(std::move(entry));
    if (lam.size() > kListedLambdas)
        wit.fields.emplace_back("listed", std::to_string(kListedLambdas) + " of " +
                                              std::to_string(lam.size()) + " states");
    for (std::size_t ia = 0; ia < sl.size() && wit.queries.empty(); ++ia)
        for (std::size_t ib = 0; ib < sr.size() && wit.queries.empty(); ++ib)
            if (j.w[j.flat({ia, ib, bad})].is_zero())
                wit.queries = {CondQuery{{lam[bad], sl[ia], sr[ib]}, {}, "0"}};
    return verdict_fail(std::move(wit), lam.size());
}

namespace {

// Shared engine for the fine-grained screening checks. For every scheduled
// region R, admissible (t, t'), and partner region R'' accepted by `admit`,
// verifies P(lam_R | lam_C, lam_R'') = P(lam_R | lam_C) over all realized
// states, where C is the thick slice of R between t and t'.
template <typename AdmitPartner>
Verdict screening_check(const ProbSpace& space, const RegionBounds& bounds,
                        const char* what, AdmitPartner admit) {
    const Lattice& l = space.lattice();
    const auto& sols = space.solutions();
    std::vector<Region> sched = region_schedule(l, bounds);

    std::size_t checked = 0;
    bool probs01 = true;

    std::vector<std::size_t> c_id(sols.size()), r_id(sols.size()), p_id(sols.size());
    for (const auto& r : sched) {
        if (r.min_t() < 2) continue;
        for (int t = 1; t < r.min_t(); ++t) {
            for (int t_prime = 0; t_prime < t; ++t_prime) {
                Region c = thick_slice(r, t, t_prime, l);
                std::map<std::vector<Sym>, std::size_t> c_ids, r_ids;
                std::vector<std::vector<Sym>> c_states, r_states;
                for (std::size_t i = 0; i < sols.size(); ++i) {
                    std::vector<Sym> ck;
                    ck.reserve(c.size());
                    for (const auto& p : c.points()) ck.push_back(sols[i].values[l.point_index(p)]);
                    auto [cit, cnew] = c_ids.emplace(std::move(ck), c_states.size());
                    if (cnew) c_states.push_back(cit->first);
                    c_id[i] = cit->second;
                    std::vector<Sym> rk;
                    rk.reserve(r.size());
                    for (const auto& p : r.points()) rk.push_back(sols[i].values[l.point_index(p)]);
                    auto [rit, rnew] = r_ids.emplace(std::move(rk), r_states.size());
                    if (rnew) r_states.push_back(rit->first);
                    r_id[i] = rit->second;
                }
                std::vector<Rational> w_c(c_states.size());
                std::map<std::pair<std::size_t, std::size_t>, Rational> w_cr;
                for (std::size_t i = 0; i < sols.size(); ++i) {
                    w_c[c_id[i]] += sols[i].weight;
                    w_cr[{c_id[i], r_id[i]}] += sols[i].weight;
                }

                for (const auto& partner : sched) {
                    if (!admit(r, partner, t, t_prime)) continue;
                    std::map<std::vector<Sym>, std::size_t> p_ids;
                    std::vector<std::vector<Sym>> p_states;
                    for (std::size_t i = 0; i < sols.size(); ++i) {
                        std::vector<Sym> pk;
                        pk.reserve(partner.size());
                        for (const auto& p : partner.points())
                            pk.push_back(sols[i].values[l.point_index(p)]);
                        auto [pit, pnew] = p_ids.emplace(std::move(pk), p_states.size());
                        if (pnew) p_states.push_back(pit->first);
                        p_id[i] = pit->second;
                    }
                    std::map<std::pair<std::size_t, std::size_t>, Rational> w_cp;
                    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Rational> w_cpr;
                    for (std::size_t i = 0; i < sols.size(); ++i) {
                        w_cp[{c_id[i], p_id[i]}] += sols[i].weight;
                        w_cpr[{c_id[i], p_id[i], r_id[i]}] += sols[i].weight;
                    }
                    for (const auto& [cp, wcp] : w_cp) {
                        auto [ci, pi] = cp;
                        for (std::size_t ri = 0; ri < r_states.size(); ++ri) {
                            auto crit = w_cr.find({ci, ri});
                            if (crit == w_cr.end()) continue; // lam_R unrealized given lam_C
                            Rational rhs = crit->second / w_c[ci];
                            auto cprit = w_cpr.find({ci, pi, ri});
                            Rational lhs = cprit == w_cpr.end() ? Rational()
                                                                : cprit->second / wcp;
                            ++checked;
                            if (!is01(lhs) || !is01(rhs)) probs01 = false;
                            if (lhs != rhs) {
                                const Alphabet& al = space.alphabet();
                                RegionState cs{c, c_states[ci]};
                                RegionState ps{partner, p_states[pi]};
                                RegionState rs{r, r_states[ri]};
                                Witness wit;
                                wit.summary = std::string(what) +
                                              ": spacetime information beyond the thick slice "
                                              "shifted a conditional probability";
                                wit.fields = {
                                    {"R", r.str()},
                                    {"partner", partner.str()},
                                    {"t", std::to_string(t)},
                                    {"t'", std::to_string(t_prime)},
                                    {"lam_R", rs.str(al)},
                                    {"lam_C", cs.str(al)},
                                    {"lam_partner", ps.str(al)},
                                    {"P(lam_R|lam_C,lam_partner)", lhs.str()},
                                    {"P(lam_R|lam_C)", rhs.str()},
                                };
                                wit.queries = {
                                    CondQuery{{event_state(rs, "lam_R")},
                                              {event_state(cs, "lam_C"),
                                               event_state(ps, "lam_partner")},
                                              lhs.str()},
                                    CondQuery{{event_state(rs, "lam_R")},
                                              {event_state(cs, "lam_C")}, rhs.str()},
                                };
                                Verdict v = verdict_fail(std::move(wit), checked);
                                v.probs_all_01 = probs01;
                                return v;
                            }
                        }
                    }
                }
            }
        }
    }
    if (checked == 0) return verdict_vacuous();
    Verdict v = verdict_pass(checked);
    v.probs_all_01 = probs01;
    return v;
}

} // namespace

Verdict check_local_causality_fine(const ProbSpace& space, const RegionBounds& bounds) {
    const Lattice& l = space.lattice();
    std::map<std::pair<const Region*, const Region*>, int> tint_cache;
    return screening_check(space, bounds, "local causality (fine)",
                           [&](const Region& r, const Region& partner, int, int t_prime) {
                               if (!spacelike_separated(r, partner)) return false;
                               auto key = std::make_pair(&r, &partner);
                               auto it = tint_cache.find(key);
                               int tint;
                               if (it != tint_cache.end()) {
                                   tint = it->second;
                               } else {
                                   tint = cone_intersection_max_t(r, partner, l);
                                   tint_cache.emplace(key, tint);
                               }
                               return t_prime > tint;
                           });
}

Verdict check_temporal_locality(const ProbSpace& space, const RegionBounds& bounds) {
    return screening_check(space, bounds, "temporal locality",
                           [](const Region&, const Region& partner, int, int t_prime) {
                               return partner.max_t() < t_prime;
                           });
}

std::vector<Partition> default_coarse_families(const ProbSpace& space,
                                               const RegionBounds& bounds) {
    const Lattice& l = space.lattice();
    const Alphabet& al = space.alphabet();
    std::vector<Partition> fams;
    for (const auto& r : region_schedule(l, bounds)) {
        if (r.size() == 1) {
            Partition p;
            p.region = r;
            for (Sym s = 0; s < al.size(); ++s)
                p.cells.push_back(event_cell_value(r, r.points().front(), s,
                                                   "value=" + al.name(s)));
            fams.push_back(std::move(p));
        } else if (r.size() == 2) {
            Partition p;
            p.region = r;
            p.cells.push_back(event_parity(r, 0, "parity=even"));
            p.cells.push_back(event_parity(r, 1, "parity=odd"));
            fams.push_back(std::move(p));
        }
    }
    return fams;
}

std::vector<Partition> wiring_families(const BellWiring& w) {
    return {w.settings_left, w.settings_right, w.outcomes_left, w.outcomes_right};
}

Verdict check_local_causality_coarse(const ProbSpace& space,
                                     const std::vector<Partition>& families) {
    const Lattice& l = space.lattice();
    const auto& sols = space.solutions();
    std::size_t checked = 0;
    bool probs01 = true;

    std::vector<std::size_t> c_id(sols.size()), f_id(sols.size()), g_id(sols.size());
    for (const auto& fam : families) {
        const Region& r = fam.region;
        if (r.min_t() < 2) continue;
        for (const auto& gam : families) {
            if (&fam == &gam) continue;
            if (!spacelike_separated(r, gam.region)) continue;
            int tint = cone_intersection_max_t(r, gam.region, l);
            for (int t = 1; t < r.min_t(); ++t) {
                for (int t_prime = std::max(0, tint + 1); t_prime < t; ++t_prime) {
                    Region c = thick_slice(r, t, t_prime, l);
                    std::map<std::vector<Sym>, std::size_t> c_ids;
                    std::vector<std::vector<Sym>> c_states;
                    for (std::size_t i = 0; i < sols.size(); ++i) {
                        std::vector<Sym> ck;
                        ck.reserve(c.size());
                        for (const auto& p : c.points())
                            ck.push_back(sols[i].values[l.point_index(p)]);
                        auto [cit, cnew] = c_ids.emplace(std::move(ck), c_states.size());
                        if (cnew) c_states.push_back(cit->first);
                        c_id[i] = cit->second;
                        f_id[i] = find_cell(space, sols[i], fam.cells, "coarse family");
                        g_id[i] = find_cell(space, sols[i], gam.cells, "coarse family");
                    }
                    std::vector<Rational> w_c(c_states.size());
                    std::map<std::pair<std::size_t, std::size_t>, Rational> w_cf, w_cg;
                    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Rational> w_cgf;
                    for (std::size_t i = 0; i < sols.size(); ++i) {
                        w_c[c_id[i]] += sols[i].weight;
                        w_cf[{c_id[i], f_id[i]}] += sols[i].weight;
                        w_cg[{c_id[i], g_id[i]}] += sols[i].weight;
                        w_cgf[{c_id[i], g_id[i], f_id[i]}] += sols[i].weight;
                    }
                    for (const auto& [cg, wcg] : w_cg) {
                        auto [ci, gi] = cg;
                        for (std::size_t fi = 0; fi < fam.cells.size(); ++fi) {
                            auto cfit = w_cf.find({ci, fi});
                            Rational rhs = cfit == w_cf.end() ? Rational()
                                                              : cfit->second / w_c[ci];
                            auto cgfit = w_cgf.find({ci, gi, fi});
                            Rational lhs = cgfit == w_cgf.end() ? Rational()
                                                                : cgfit->second / wcg;
                            ++checked;
                            if (!is01(lhs) || !is01(rhs)) probs01 = false;
                            if (lhs != rhs) {
                                RegionState cs{c, c_states[ci]};
                                Witness wit;
                                wit.summary =
                                    "local causality (coarse): a definable far event shifted "
                                    "a conditional probability";
                                wit.fields = {
                                    {"R", r.str()},
                                    {"R'", gam.region.str()},
                                    {"t", std::to_string(t)},
                                    {"t'", std::to_string(t_prime)},
                                    {"event_R", fam.cells[fi].label},
                                    {"event_R'", gam.cells[gi].label},
                                    {"lam_C", cs.str(space.alphabet())},
                                    {"P(event_R|lam_C,event_R')", lhs.str()},
                                    {"P(event_R|lam_C)", rhs.str()},
                                };
                                wit.queries = {
                                    CondQuery{{fam.cells[fi]},
                                              {event_state(cs, "lam_C"), gam.cells[gi]},
                                              lhs.str()},
                                    CondQuery{{fam.cells[fi]}, {event_state(cs, "lam_C")},
                                              rhs.str()},
                                };
                                Verdict v = verdict_fail(std::move(wit), checked);
                                v.probs_all_01 = probs01;
                                return v;
                            }
                        }
                    }
                }
            }
        }
    }
    if (checked == 0) return verdict_vacuous();
    Verdict v = verdict_pass(checked);
    v.probs_all_01 = probs01;
    return v;
}

Status StepReport::overall() const {
    bool any_pass = false;
    for (const auto& s : steps) {
        if (s.verdict.fail()) return Status::Fail;
        if (s.verdict.pass()) any_pass = true;
    }
    return any_pass ? Status::Pass : Status::Vacuous;
}

const StepResult* StepReport::first_fail() const {
    for (const auto& s : steps)
        if (s.verdict.fail()) return &s;
    return nullptr;
}

namespace {

struct DeriveContext {
    const std::vector<CoarseEvent>*sl, *sr, *ol, *orr, *ca, *cb;
    Joint j;
    // Marginals; dims are (a,b,A,B,CA,CB) = (0..5).
    std::vector<Rational> m_ca, m_a_ca, m_aA_ca;
    std::vector<Rational> m_cacb, m_a_cacb, m_aA_cacb;
    std::vector<Rational> m_b_cacb, m_bB_cacb, m_ab_cacb;
    std::size_t na, nb, nA, nB, nca, ncb;

    std::size_t i_ca(std::size_t ca_) const { return ca_; }
    std::size_t i_a_ca(std::size_t a, std::size_t ca_) const { return a * nca + ca_; }
    std::size_t i_aA_ca(std::size_t a, std::size_t A, std::size_t ca_) const {
        return (a * nA + A) * nca + ca_;
    }
    std::size_t i_cacb(std::size_t ca_, std::size_t cb_) const { return ca_ * ncb + cb_; }
    std::size_t i_a_cacb(std::size_t a, std::size_t ca_, std::size_t cb_) const {
        return (a * nca + ca_) * ncb + cb_;
    }
    std::size_t i_aA_cacb(std::size_t a, std::size_t A, std::size_t ca_, std::size_t cb_) const {
        return ((a * nA + A) * nca + ca_) * ncb + cb_;
    }
    std::size_t i_b_cacb(std::size_t b, std::size_t ca_, std::size_t cb_) const {
        return (b * nca + ca_) * ncb + cb_;
    }
    std::size_t i_bB_cacb(std::size_t b, std::size_t B, std::size_t ca_, std::size_t cb_) const {
        return ((b * nB + B) * nca + ca_) * ncb + cb_;
    }
    std::size_t i_ab_cacb(std::size_t a, std::size_t b, std::size_t ca_, std::size_t cb_) const {
        return ((a * nb + b) * nca + ca_) * ncb + cb_;
    }
};

Witness derive_witness(const DeriveContext& cx, const char* claim, std::size_t a, std::size_t b,
                       std::size_t A, std::size_t B, std::size_t ca_, std::size_t cb_,
                       const Rational& lhs, const Rational& rhs) {
    Witness wit;
    wit.summary = claim;
    wit.fields = {
        {"a", (*cx.sl)[a].label},    {"b", (*cx.sr)[b].label},
        {"A", (*cx.ol)[A].label},    {"B", (*cx.orr)[B].label},
        {"lam_CA", (*cx.ca)[ca_].label}, {"lam_CB", (*cx.cb)[cb_].label},
        {"lhs", lhs.str()},          {"rhs", rhs.str()},
    };
    return wit;
}

} // namespace

StepReport derive_factorizability_from_lc(const ProbSpace& space0, const BellWiring& w) {
    ProbSpace space = condition_on_experiment(space0, w);
    const Lattice& l = space.lattice();
    std::vector<CoarseEvent> ca, cb;
    for (const auto& rs : space.realized_states(w.thick_left(l)))
        ca.push_back(event_state(rs, rs.str(space.alphabet())));
    for (const auto& rs : space.realized_states(w.thick_right(l)))
        cb.push_back(event_state(rs, rs.str(space.alphabet())));

    DeriveContext cx;
    cx.sl = &w.settings_left.cells;
    cx.sr = &w.settings_right.cells;
    cx.ol = &w.outcomes_left.cells;
    cx.orr = &w.outcomes_right.cells;
    cx.ca = &ca;
    cx.cb = &cb;
    cx.j = classify(space, {cx.sl, cx.sr, cx.ol, cx.orr, &ca, &cb}, "derivation");
    cx.na = cx.sl->size();
    cx.nb = cx.sr->size();
    cx.nA = cx.ol->size();
    cx.nB = cx.orr->size();
    cx.nca = ca.size();
    cx.ncb = cb.size();
    cx.m_ca = marginalize(cx.j, {4});
    cx.m_a_ca = marginalize(cx.j, {0, 4});
    cx.m_aA_ca = marginalize(cx.j, {0, 2, 4});
    cx.m_cacb = marginalize(cx.j, {4, 5});
    cx.m_a_cacb = marginalize(cx.j, {0, 4, 5});
    cx.m_aA_cacb = marginalize(cx.j, {0, 2, 4, 5});
    cx.m_b_cacb = marginalize(cx.j, {1, 4, 5});
    cx.m_bB_cacb = marginalize(cx.j, {1, 3, 4, 5});
    cx.m_ab_cacb = marginalize(cx.j, {0, 1, 4, 5});

    StepReport report;

    // Tri-state per instantiation: evaluate, skip because the conditioning
    // event is null, or not part of this identity's quantifier space.
    struct Eval {
        enum class Tag { Check, SkipNull, NotApplicable } tag;
        Rational lhs, rhs;
        static Eval check(Rational l, Rational r) { return {Tag::Check, std::move(l), std::move(r)}; }
        static Eval skip() { return {Tag::SkipNull, {}, {}}; }
        static Eval na() { return {Tag::NotApplicable, {}, {}}; }
    };
    using Sides = Eval;

    auto for_all = [&](auto body) {
        for (std::size_t ca_ = 0; ca_ < cx.nca; ++ca_)
            for (std::size_t cb_ = 0; cb_ < cx.ncb; ++cb_)
                for (std::size_t a = 0; a < cx.na; ++a)
                    for (std::size_t b = 0; b < cx.nb; ++b)
                        for (std::size_t A = 0; A < cx.nA; ++A)
                            for (std::size_t B = 0; B < cx.nB; ++B)
                                if (!body(a, b, A, B, ca_, cb_)) return false;
        return true;
    };
    using QueryFn = std::function<std::vector<CondQuery>(
        std::size_t, std::size_t, std::size_t, std::size_t, std::size_t, std::size_t,
        const Rational&, const Rational&)>;
    auto run_step = [&](const char* id, const char* claim, auto eval, QueryFn queries = {}) {
        Verdict v;
        std::size_t checked = 0, skipped = 0;
        bool probs01 = true;
        bool ok = for_all([&](std::size_t a, std::size_t b, std::size_t A, std::size_t B,
                              std::size_t ca_, std::size_t cb_) {
            Eval e = eval(a, b, A, B, ca_, cb_);
            if (e.tag == Eval::Tag::NotApplicable) return true;
            if (e.tag == Eval::Tag::SkipNull) {
                ++skipped;
                return true;
            }
            ++checked;
            if (!is01(e.lhs) || !is01(e.rhs)) probs01 = false;
            if (e.lhs != e.rhs) {
                Witness wit = derive_witness(cx, claim, a, b, A, B, ca_, cb_, e.lhs, e.rhs);
                if (queries) wit.queries = queries(a, b, A, B, ca_, cb_, e.lhs, e.rhs);
                v = verdict_fail(std::move(wit), checked, skipped);
                v.probs_all_01 = probs01;
                return false;
            }
            return true;
        });
        if (ok) {
            v = checked == 0 ? verdict_vacuous(skipped) : verdict_pass(checked, skipped);
            v.probs_all_01 = probs01;
        }
        report.steps.push_back(StepResult{id, std::move(v)});
    };

    // Lemma: conditioning on the far wing's outcome, setting and thick slice is
    // redundant for (A, a) given the near thick slice.
    run_step("remove-far-wing-for-outcome",
             "P(A,a | B,b,lam_CB,lam_CA) differs from P(A,a | lam_CA)",
             [&](std::size_t a, std::size_t b, std::size_t A, std::size_t B, std::size_t ca_,
                 std::size_t cb_) -> Sides {
                 const Rational& den = cx.m_bB_cacb[cx.i_bB_cacb(b, B, ca_, cb_)];
                 if (den.is_zero()) return Eval::skip();
                 Rational lhs = cx.j.w[cx.j.flat({a, b, A, B, ca_, cb_})] / den;
                 Rational rhs = cx.m_aA_ca[cx.i_aA_ca(a, A, ca_)] / cx.m_ca[ca_];
                 return Eval::check(std::move(lhs), std::move(rhs));
             },
             [&](std::size_t a, std::size_t b, std::size_t A, std::size_t B, std::size_t ca_,
                 std::size_t cb_, const Rational& lhs, const Rational& rhs) {
                 return std::vector<CondQuery>{
                     CondQuery{{(*cx.ol)[A], (*cx.sl)[a]},
                               {(*cx.orr)[B], (*cx.sr)[b], cb[cb_], ca[ca_]}, lhs.str()},
                     CondQuery{{(*cx.ol)[A], (*cx.sl)[a]}, {ca[ca_]}, rhs.str()},
                 };
             });
    run_step("remove-far-wing-for-setting",
             "P(a | b,lam_CA,lam_CB) differs from P(a | lam_CA)",
             [&](std::size_t a, std::size_t b, std::size_t A, std::size_t B, std::size_t ca_,
                 std::size_t cb_) -> Sides {
                 if (A != 0 || B != 0) return Eval::na(); // outcome-free identity
                 const Rational& den = cx.m_b_cacb[cx.i_b_cacb(b, ca_, cb_)];
                 if (den.is_zero()) return Eval::skip();
                 Rational lhs = cx.m_ab_cacb[cx.i_ab_cacb(a, b, ca_, cb_)] / den;
                 Rational rhs = cx.m_a_ca[cx.i_a_ca(a, ca_)] / cx.m_ca[ca_];
                 return Eval::check(std::move(lhs), std::move(rhs));
             },
             [&](std::size_t a, std::size_t b, std::size_t, std::size_t, std::size_t ca_,
                 std::size_t cb_, const Rational& lhs, const Rational& rhs) {
                 return std::vector<CondQuery>{
                     CondQuery{{(*cx.sl)[a]}, {(*cx.sr)[b], ca[ca_], cb[cb_]}, lhs.str()},
                     CondQuery{{(*cx.sl)[a]}, {ca[ca_]}, rhs.str()},
                 };
             });
    run_step("add-far-slice-for-outcome",
             "P(A,a | lam_CA) differs from P(A,a | lam_CA,lam_CB)",
             [&](std::size_t a, std::size_t b, std::size_t A, std::size_t B, std::size_t ca_,
                 std::size_t cb_) -> Sides {
                 if (b != 0 || B != 0) return Eval::na();
                 const Rational& joint = cx.m_cacb[cx.i_cacb(ca_, cb_)];
                 if (joint.is_zero() || cx.m_ca[ca_].is_zero()) return Eval::skip();
                 Rational lhs = cx.m_aA_ca[cx.i_aA_ca(a, A, ca_)] / cx.m_ca[ca_];
                 Rational rhs = cx.m_aA_cacb[cx.i_aA_cacb(a, A, ca_, cb_)] / joint;
                 return Eval::check(std::move(lhs), std::move(rhs));
             },
             [&](std::size_t a, std::size_t, std::size_t A, std::size_t, std::size_t ca_,
                 std::size_t cb_, const Rational& lhs, const Rational& rhs) {
                 return std::vector<CondQuery>{
                     CondQuery{{(*cx.ol)[A], (*cx.sl)[a]}, {ca[ca_]}, lhs.str()},
                     CondQuery{{(*cx.ol)[A], (*cx.sl)[a]}, {ca[ca_], cb[cb_]}, rhs.str()},
                 };
             });
    run_step("add-far-slice-for-setting",
             "P(a | lam_CA) differs from P(a | lam_CA,lam_CB)",
             [&](std::size_t a, std::size_t b, std::size_t A, std::size_t B, std::size_t ca_,
                 std::size_t cb_) -> Sides {
                 if (b != 0 || A != 0 || B != 0) return Eval::na();
                 const Rational& joint = cx.m_cacb[cx.i_cacb(ca_, cb_)];
                 if (joint.is_zero() || cx.m_ca[ca_].is_zero()) return Eval::skip();
                 Rational lhs = cx.m_a_ca[cx.i_a_ca(a, ca_)] / cx.m_ca[ca_];
                 Rational rhs = cx.m_a_cacb[cx.i_a_cacb(a, ca_, cb_)] / joint;
                 return Eval::check(std::move(lhs), std::move(rhs));
             },
             [&](std::size_t a, std::size_t, std::size_t, std::size_t, std::size_t ca_,
                 std::size_t cb_, const Rational& lhs, const Rational& rhs) {
                 return std::vector<CondQuery>{
                     CondQuery{{(*cx.sl)[a]}, {ca[ca_]}, lhs.str()},
                     CondQuery{{(*cx.sl)[a]}, {ca[ca_], cb[cb_]}, rhs.str()},
                 };
             });

    // The chain: seven expressions for P(A,B | a,b, lam_CA, lam_CB), each
    // consecutive pair evaluated as one step.
    struct Expr {
        bool defined;
        Rational value;
    };
    auto e_joint = [&](std::size_t a, std::size_t b, std::size_t A, std::size_t B,
                       std::size_t ca_, std::size_t cb_) -> Expr {
        const Rational& den = cx.m_ab_cacb[cx.i_ab_cacb(a, b, ca_, cb_)];
        if (den.is_zero()) return {false, Rational()};
        return {true, cx.j.w[cx.j.flat({a, b, A, B, ca_, cb_})] / den};
    };
    auto e_ratio_far = [&](std::size_t a, std::size_t b, std::size_t A, std::size_t B,
                           std::size_t ca_, std::size_t cb_) -> Expr {
        const Rational& wbB = cx.m_bB_cacb[cx.i_bB_cacb(b, B, ca_, cb_)];
        const Rational& wb = cx.m_b_cacb[cx.i_b_cacb(b, ca_, cb_)];
        if (wbB.is_zero() || wb.is_zero()) return {false, Rational()};
        Rational num = (cx.j.w[cx.j.flat({a, b, A, B, ca_, cb_})] / wbB) * wbB;
        Rational den = (cx.m_ab_cacb[cx.i_ab_cacb(a, b, ca_, cb_)] / wb) * wb;
        if (den.is_zero()) return {false, Rational()};
        return {true, num / den};
    };
    auto e_after_removal = [&](std::size_t a, std::size_t b, std::size_t A, std::size_t B,
                               std::size_t ca_, std::size_t cb_) -> Expr {
        const Rational& wbB = cx.m_bB_cacb[cx.i_bB_cacb(b, B, ca_, cb_)];
        const Rational& wb = cx.m_b_cacb[cx.i_b_cacb(b, ca_, cb_)];
        if (wbB.is_zero() || wb.is_zero() || cx.m_ca[ca_].is_zero()) return {false, Rational()};
        Rational num = (cx.m_aA_ca[cx.i_aA_ca(a, A, ca_)] / cx.m_ca[ca_]) * wbB;
        Rational den = (cx.m_a_ca[cx.i_a_ca(a, ca_)] / cx.m_ca[ca_]) * wb;
        if (den.is_zero()) return {false, Rational()};
        return {true, num / den};
    };
    auto e_after_addition = [&](std::size_t a, std::size_t b, std::size_t A, std::size_t B,
                                std::size_t ca_, std::size_t cb_) -> Expr {
        const Rational& joint = cx.m_cacb[cx.i_cacb(ca_, cb_)];
        const Rational& wbB = cx.m_bB_cacb[cx.i_bB_cacb(b, B, ca_, cb_)];
        const Rational& wb = cx.m_b_cacb[cx.i_b_cacb(b, ca_, cb_)];
        if (joint.is_zero() || wbB.is_zero() || wb.is_zero()) return {false, Rational()};
        Rational num = (cx.m_aA_cacb[cx.i_aA_cacb(a, A, ca_, cb_)] / joint) * wbB;
        Rational den = (cx.m_a_cacb[cx.i_a_cacb(a, ca_, cb_)] / joint) * wb;
        if (den.is_zero()) return {false, Rational()};
        return {true, num / den};
    };
    auto e_product = [&](std::size_t a, std::size_t b, std::size_t A, std::size_t B,
                         std::size_t ca_, std::size_t cb_) -> Expr {
        const Rational& wa = cx.m_a_cacb[cx.i_a_cacb(a, ca_, cb_)];
        const Rational& wb = cx.m_b_cacb[cx.i_b_cacb(b, ca_, cb_)];
        if (wa.is_zero() || wb.is_zero()) return {false, Rational()};
        Rational fa = cx.m_aA_cacb[cx.i_aA_cacb(a, A, ca_, cb_)] / wa;
        Rational fb = cx.m_bB_cacb[cx.i_bB_cacb(b, B, ca_, cb_)] / wb;
        return {true, fa * fb};
    };

    auto chain_step = [&](const char* id, const char* claim, auto left, auto right) {
        run_step(id, claim,
                 [&](std::size_t a, std::size_t b, std::size_t A, std::size_t B, std::size_t ca_,
                     std::size_t cb_) -> Sides {
                     Expr lv = left(a, b, A, B, ca_, cb_);
                     Expr rv = right(a, b, A, B, ca_, cb_);
                     if (!lv.defined || !rv.defined) return Eval::skip();
                     return Eval::check(std::move(lv.value), std::move(rv.value));
                 });
    };
    chain_step("chain-conditional-ratio",
               "definition of conditional probability broke in the chain", e_joint, e_ratio_far);
    chain_step("chain-apply-removal", "substituting the far-removal lemmas changed the value",
               e_ratio_far, e_after_removal);
    chain_step("chain-apply-addition", "substituting the far-addition lemmas changed the value",
               e_after_removal, e_after_addition);
    chain_step("chain-collect-product", "collecting the factors changed the value",
               e_after_addition, e_product);
    run_step("factorizability-thick-slices",
             "P(A,B|a,b,lam) differs from P(A|a,lam)*P(B|b,lam)",
             [&](std::size_t a, std::size_t b, std::size_t A, std::size_t B, std::size_t ca_,
                 std::size_t cb_) -> Sides {
                 Expr lv = e_joint(a, b, A, B, ca_, cb_);
                 Expr rv = e_product(a, b, A, B, ca_, cb_);
                 if (!lv.defined || !rv.defined) return Eval::skip();
                 return Eval::check(std::move(lv.value), std::move(rv.value));
             },
             [&](std::size_t a, std::size_t b, std::size_t A, std::size_t B, std::size_t ca_,
                 std::size_t cb_, const Rational& lhs, const Rational&) {
                 Rational fa = cx.m_aA_cacb[cx.i_aA_cacb(a, A, ca_, cb_)] /
                               cx.m_a_cacb[cx.i_a_cacb(a, ca_, cb_)];
                 Rational fb = cx.m_bB_cacb[cx.i_bB_cacb(b, B, ca_, cb_)] /
                               cx.m_b_cacb[cx.i_b_cacb(b, ca_, cb_)];
                 return std::vector<CondQuery>{
                     CondQuery{{(*cx.ol)[A], (*cx.orr)[B]},
                               {(*cx.sl)[a], (*cx.sr)[b], ca[ca_], cb[cb_]}, lhs.str()},
                     CondQuery{{(*cx.ol)[A]}, {(*cx.sl)[a], ca[ca_], cb[cb_]}, fa.str()},
                     CondQuery{{(*cx.orr)[B]}, {(*cx.sr)[b], ca[ca_], cb[cb_]}, fb.str()},
                 };
             });

    return report;
}

Verdict check_sufficiency(const ProbSpace& space0, const BellWiring& w, const Partition& family) {
    ProbSpace space = condition_on_experiment(space0, w);
    validate_partition(space, family);
    const auto& sl = w.settings_left.cells;
    const auto& sr = w.settings_right.cells;
    const auto& ol = w.outcomes_left.cells;
    const auto& orr = w.outcomes_right.cells;
    const auto& fam = family.cells;

    Joint j = classify(space, {&sl, &sr, &ol, &orr, &fam}, "sufficiency");
    std::size_t na = sl.size(), nb = sr.size(), nA = ol.size(), nB = orr.size(), nf = fam.size();
    auto m_abB_f = marginalize(j, {0, 1, 3, 4});
    auto m_abA_f = marginalize(j, {0, 1, 2, 4});
    auto m_aA_f = marginalize(j, {0, 2, 4});
    auto m_a_f = marginalize(j, {0, 4});
    auto m_bB_f = marginalize(j, {1, 3, 4});
    auto m_b_f = marginalize(j, {1, 4});
    auto m_abAB = j.w;

    std::size_t checked = 0, skipped = 0;
    bool probs01 = true;
    for (std::size_t f = 0; f < nf; ++f)
        for (std::size_t a = 0; a < na; ++a)
            for (std::size_t b = 0; b < nb; ++b)
                for (std::size_t A = 0; A < nA; ++A)
                    for (std::size_t B = 0; B < nB; ++B) {
                        // Near outcome given the far outcome.
                        const Rational& denB = m_abB_f[((a * nb + b) * nB + B) * nf + f];
                        if (denB.is_zero()) {
                            ++skipped;
                        } else {
                            Rational lhs = m_abAB[j.flat({a, b, A, B, f})] / denB;
                            Rational rhs = m_aA_f[(a * nA + A) * nf + f] / m_a_f[a * nf + f];
                            ++checked;
                            if (!is01(lhs) || !is01(rhs)) probs01 = false;
                            if (lhs != rhs) {
                                Witness wit;
                                wit.summary =
                                    "family is not sufficient: far outcome stays relevant for A";
                                wit.fields = {{"family_cell", fam[f].label},
                                              {"a", sl[a].label},
                                              {"b", sr[b].label},
                                              {"A", ol[A].label},
                                              {"B", orr[B].label},
                                              {"P(A|a,b,B,fam)", lhs.str()},
                                              {"P(A|a,fam)", rhs.str()}};
                                wit.queries = {
                                    CondQuery{{ol[A]}, {sl[a], sr[b], orr[B], fam[f]}, lhs.str()},
                                    CondQuery{{ol[A]}, {sl[a], fam[f]}, rhs.str()}};
                                Verdict v = verdict_fail(std::move(wit), checked, skipped);
                                v.probs_all_01 = probs01;
                                return v;
                            }
                        }
                        const Rational& denA = m_abA_f[((a * nb + b) * nA + A) * nf + f];
                        if (denA.is_zero()) {
                            ++skipped;
                        } else {
                            Rational lhs = m_abAB[j.flat({a, b, A, B, f})] / denA;
                            Rational rhs = m_bB_f[(b * nB + B) * nf + f] / m_b_f[b * nf + f];
                            ++checked;
                            if (!is01(lhs) || !is01(rhs)) probs01 = false;
                            if (lhs != rhs) {
                                Witness wit;
                                wit.summary =
                                    "family is not sufficient: far outcome stays relevant for B";
                                wit.fields = {{"family_cell", fam[f].label},
                                              {"a", sl[a].label},
                                              {"b", sr[b].label},
                                              {"A", ol[A].label},
                                              {"B", orr[B].label},
                                              {"P(B|a,b,A,fam)", lhs.str()},
                                              {"P(B|b,fam)", rhs.str()}};
                                wit.queries = {
                                    CondQuery{{orr[B]}, {sl[a], sr[b], ol[A], fam[f]}, lhs.str()},
                                    CondQuery{{orr[B]}, {sr[b], fam[f]}, rhs.str()}};
                                Verdict v = verdict_fail(std::move(wit), checked, skipped);
                                v.probs_all_01 = probs01;
                                return v;
                            }
                        }
                    }
    if (checked == 0) return verdict_vacuous(skipped);
    Verdict v = verdict_pass(checked, skipped);
    v.probs_all_01 = probs01;
    return v;
}

namespace {

// All restricted-growth strings over n items with at most max_blocks blocks,
// ordered coarsest first (fewest blocks), lexicographic within a block count.
std::vector<std::vector<int>> set_partitions(std::size_t n, std::size_t max_blocks) {
    auto blocks = [](const std::vector<int>& v) {
        int m = 0;
        for (int x : v) m = std::max(m, x + 1);
        return static_cast<std::size_t>(m);
    };
    std::vector<std::vector<int>> out;
    std::vector<int> a(n, 0);
    while (true) {
        if (blocks(a) <= max_blocks) out.push_back(a);
        bool advanced = false;
        for (std::size_t i = n; i-- > 1;) {
            int cap = 0;
            for (std::size_t k = 0; k < i; ++k) cap = std::max(cap, a[k]);
            if (a[i] <= cap) {
                ++a[i];
                for (std::size_t k = i + 1; k < n; ++k) a[k] = 0;
                advanced = true;
                break;
            }
        }
        if (!advanced) break;
    }
    std::stable_sort(out.begin(), out.end(),
                     [&](const std::vector<int>& x, const std::vector<int>& y) {
                         return blocks(x) < blocks(y);
                     });
    return out;
}

} // namespace

std::optional<Partition> search_coarse_graining(const ProbSpace& space0, const BellWiring& w,
                                                std::size_t max_cells, std::size_t state_cap) {
    ProbSpace space = condition_on_experiment(space0, w);
    Region pair = w.thick_pair(space.lattice());
    std::vector<RegionState> states = space.realized_states(pair);
    if (states.size() > state_cap)
        throw Error(ErrorCode::SearchBudget,
                    "realized thick-slice state count " + std::to_string(states.size()) +
                        " exceeds the partition search cap " + std::to_string(state_cap));
    if (states.empty()) return std::nullopt;

    std::vector<std::vector<int>> rgs = set_partitions(states.size(),
                                                       std::min(max_cells, states.size()));
    for (const auto& assign : rgs) {
        int nblocks = 0;
        for (int x : assign) nblocks = std::max(nblocks, x + 1);
        Partition part;
        part.region = pair;
        for (int blk = 0; blk < nblocks; ++blk) {
            std::vector<std::vector<Sym>> members;
            for (std::size_t i = 0; i < states.size(); ++i)
                if (assign[i] == blk) members.push_back(states[i].values);
            part.cells.push_back(
                event_state_union(pair, std::move(members), "class" + std::to_string(blk)));
        }
        LambdaSpec spec = LambdaSpec::coarse(part);
        if (check_factorizability(space, w, spec).pass() &&
            check_settings_independence(space, w, spec).pass())
            return part;
    }
    return std::nullopt;
}

namespace {

std::size_t family_cell_index(const ProbSpace& space, const Solution& s, const Partition& part) {
    return find_cell(space, s, part.cells, "time-indexed family");
}

} // namespace

Verdict check_A1(const ProbSpace& space0, const BellWiring& w, const TimeIndexedFamily& fam) {
    ProbSpace space = condition_on_experiment(space0, w);
    int tm = w.t_meas(space.lattice());
    for (int tau = w.t_prep; tau <= tm; ++tau) {
        auto it = fam.by_time.find(tau);
        if (it == fam.by_time.end())
            throw Error(ErrorCode::BadFamily,
                        "family not defined at t=" + std::to_string(tau));
        validate_partition(space, it->second);
    }
    std::size_t checked = 0;
    for (const auto& s : space.solutions()) {
        const Partition& prep = fam.by_time.at(w.t_prep);
        std::string base = prep.cells[family_cell_index(space, s, prep)].label;
        for (int tau = w.t_prep + 1; tau <= tm; ++tau) {
            const Partition& part = fam.by_time.at(tau);
            std::string label = part.cells[family_cell_index(space, s, part)].label;
            ++checked;
            if (label != base) {
                Witness wit;
                wit.summary = "coarse-grained system state changed between preparation "
                              "and measurement";
                wit.fields = {
                    {"family", fam.name},
                    {"t", std::to_string(tau)},
                    {"cell_at_preparation", base},
                    {"cell_at_t", label},
                    {"system_state",
                     restrict_to(s, part.region, space.lattice()).str(space.alphabet())},
                };
                const CoarseEvent& prep_cell =
                    prep.cells[family_cell_index(space, s, prep)];
                const CoarseEvent& tau_cell = part.cells[family_cell_index(space, s, part)];
                Rational joint;
                for (const auto& sol : space.solutions())
                    if (space.sat(sol, prep_cell) && space.sat(sol, tau_cell))
                        joint += sol.weight;
                wit.queries = {CondQuery{{prep_cell, tau_cell}, {}, joint.str()}};
                return verdict_fail(std::move(wit), checked);
            }
        }
    }
    if (checked == 0) return verdict_vacuous();
    return verdict_pass(checked);
}

Verdict check_A2(const ProbSpace& space0, const BellWiring& w, const TimeIndexedFamily& fam) {
    ProbSpace space = condition_on_experiment(space0, w);
    const Lattice& l = space.lattice();
    auto t_it = fam.by_time.find(w.t);
    auto p_it = fam.by_time.find(w.t_prep);
    if (t_it == fam.by_time.end() || p_it == fam.by_time.end())
        throw Error(ErrorCode::BadFamily, "family must be defined at t and at preparation");
    const Partition& fam_t = t_it->second;
    const Partition& fam_p = p_it->second;
    if (fam_t.cells.size() != fam_p.cells.size())
        throw Error(ErrorCode::BadFamily, "family cell labels must match across times");
    for (std::size_t i = 0; i < fam_t.cells.size(); ++i)
        if (fam_t.cells[i].label != fam_p.cells[i].label)
            throw Error(ErrorCode::BadFamily, "family cell labels must match across times");
    validate_partition(space, fam_t);
    validate_partition(space, fam_p);

    std::vector<CoarseEvent> css;
    for (const auto& rs : space.realized_states(w.thick_pair(l)))
        css.push_back(event_state(rs, rs.str(space.alphabet())));
    const auto& sl = w.settings_left.cells;
    const auto& sr = w.settings_right.cells;
    const auto& ol = w.outcomes_left.cells;
    const auto& orr = w.outcomes_right.cells;

    Joint jc = classify(space, {&sl, &sr, &ol, &orr, &css, &fam_t.cells}, "A2");
    Joint jp = classify(space, {&sl, &sr, &ol, &orr, &fam_t.cells, &fam_p.cells}, "A2");
    std::size_t na = sl.size(), nb = sr.size(), nA = ol.size(), nB = orr.size();
    std::size_t nc = css.size(), nf = fam_t.cells.size();

    std::size_t checked = 0, skipped = 0;
    bool probs01 = true;
    std::optional<Witness> bad;

    // Common driver: compare P(target | cond, dim5=v) against
    // P(target | cond, dim6=u). Pairs (v, u) are either co-occurring cells
    // (thick-slice state paired with the family cell it realizes) or
    // label-matched cells of the same family at two times (diagonal).
    auto compare = [&](const Joint& j, std::size_t n5, std::size_t n6,
                       const std::vector<CoarseEvent>& cells5,
                       const std::vector<CoarseEvent>& cells6, bool joint_outcomes,
                       bool left_only, bool diagonal, const char* what) {
        auto m_56 = marginalize(j, {4, 5});
        auto m_ab_5 = marginalize(j, {0, 1, 4});
        auto m_ab_6 = marginalize(j, {0, 1, 5});
        auto m_abAB_5 = marginalize(j, {0, 1, 2, 3, 4});
        auto m_abAB_6 = marginalize(j, {0, 1, 2, 3, 5});
        auto m_a_5 = marginalize(j, {0, 4});
        auto m_a_6 = marginalize(j, {0, 5});
        auto m_aA_5 = marginalize(j, {0, 2, 4});
        auto m_aA_6 = marginalize(j, {0, 2, 5});
        auto m_b_5 = marginalize(j, {1, 4});
        auto m_b_6 = marginalize(j, {1, 5});
        auto m_bB_5 = marginalize(j, {1, 3, 4});
        auto m_bB_6 = marginalize(j, {1, 3, 5});

        for (std::size_t v = 0; v < n5 && !bad; ++v)
            for (std::size_t u = 0; u < n6 && !bad; ++u) {
                if (diagonal && u != v) continue;
                if (!diagonal && m_56[v * n6 + u].is_zero()) continue; // never co-occur
                for (std::size_t a = 0; a < na && !bad; ++a)
                    for (std::size_t b = 0; b < nb && !bad; ++b)
                        for (std::size_t A = 0; A < nA && !bad; ++A)
                            for (std::size_t B = 0; B < nB && !bad; ++B) {
                                Rational lhs, rhs;
                                if (joint_outcomes) {
                                    const Rational& d5 = m_ab_5[(a * nb + b) * n5 + v];
                                    const Rational& d6 = m_ab_6[(a * nb + b) * n6 + u];
                                    if (d5.is_zero() || d6.is_zero()) {
                                        ++skipped;
                                        continue;
                                    }
                                    lhs = m_abAB_5[(((a * nb + b) * nA + A) * nB + B) * n5 + v] / d5;
                                    rhs = m_abAB_6[(((a * nb + b) * nA + A) * nB + B) * n6 + u] / d6;
                                } else if (left_only) {
                                    if (b != 0 || B != 0) continue;
                                    const Rational& d5 = m_a_5[a * n5 + v];
                                    const Rational& d6 = m_a_6[a * n6 + u];
                                    if (d5.is_zero() || d6.is_zero()) {
                                        ++skipped;
                                        continue;
                                    }
                                    lhs = m_aA_5[(a * nA + A) * n5 + v] / d5;
                                    rhs = m_aA_6[(a * nA + A) * n6 + u] / d6;
                                } else {
                                    if (a != 0 || A != 0) continue;
                                    const Rational& d5 = m_b_5[b * n5 + v];
                                    const Rational& d6 = m_b_6[b * n6 + u];
                                    if (d5.is_zero() || d6.is_zero()) {
                                        ++skipped;
                                        continue;
                                    }
                                    lhs = m_bB_5[(b * nB + B) * n5 + v] / d5;
                                    rhs = m_bB_6[(b * nB + B) * n6 + u] / d6;
                                }
                                ++checked;
                                if (!is01(lhs) || !is01(rhs)) probs01 = false;
                                if (lhs != rhs) {
                                    Witness wit;
                                    wit.summary = what;
                                    wit.fields = {{"family", fam.name},
                                                  {"cond_1", cells5[v].label},
                                                  {"cond_2", cells6[u].label},
                                                  {"a", sl[a].label},
                                                  {"b", sr[b].label},
                                                  {"A", ol[A].label},
                                                  {"B", orr[B].label},
                                                  {"lhs", lhs.str()},
                                                  {"rhs", rhs.str()}};
                                    bad = std::move(wit);
                                }
                            }
            }
    };

    // Thick-slice state vs family cell at t (three identities), then family
    // cell at t vs the equally labelled cell at preparation.
    const char* vs_slice = "thick-slice state carries outcome-relevant detail beyond the family cell";
    const char* vs_prep = "family cell at t and at preparation disagree on outcome probabilities";
    compare(jc, nc, nf, css, fam_t.cells, true, false, false, vs_slice);
    if (!bad) compare(jc, nc, nf, css, fam_t.cells, false, true, false, vs_slice);
    if (!bad) compare(jc, nc, nf, css, fam_t.cells, false, false, false, vs_slice);
    if (!bad) compare(jp, nf, nf, fam_t.cells, fam_p.cells, true, false, true, vs_prep);
    if (!bad) compare(jp, nf, nf, fam_t.cells, fam_p.cells, false, true, true, vs_prep);
    if (!bad) compare(jp, nf, nf, fam_t.cells, fam_p.cells, false, false, true, vs_prep);

    if (bad) {
        Verdict v = verdict_fail(std::move(*bad), checked, skipped);
        v.probs_all_01 = probs01;
        return v;
    }
    if (checked == 0) return verdict_vacuous(skipped);
    Verdict v = verdict_pass(checked, skipped);
    v.probs_all_01 = probs01;
    return v;
}

Verdict check_factorizability_tilde(const ProbSpace& space0, const BellWiring& w,
                                    const TimeIndexedFamily& fam) {
    auto p_it = fam.by_time.find(w.t_prep);
    if (p_it == fam.by_time.end())
        throw Error(ErrorCode::BadFamily, "family must be defined at preparation time");
    return check_factorizability(space0, w, LambdaSpec::coarse(p_it->second));
}

PredictionsTable model_to_table(const ProbSpace& space0, const BellWiring& w) {
    ProbSpace space = condition_on_experiment(space0, w);
    const auto& sl = w.settings_left.cells;
    const auto& sr = w.settings_right.cells;
    const auto& ol = w.outcomes_left.cells;
    const auto& orr = w.outcomes_right.cells;
    if (sl.size() != 2 || sr.size() != 2 || ol.size() != 2 || orr.size() != 2)
        throw Error(ErrorCode::BadTable, "table extraction needs binary settings and outcomes");
    Joint j = classify(space, {&sl, &sr, &ol, &orr}, "table extraction");
    auto m_ab = marginalize(j, {0, 1});
    PredictionsTable t;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const Rational& den = m_ab[static_cast<std::size_t>(a * 2 + b)];
            if (den.is_zero())
                throw Error(ErrorCode::NullSettings,
                            "settings pair (" + sl[static_cast<std::size_t>(a)].label + "," +
                                sr[static_cast<std::size_t>(b)].label +
                                ") has probability zero");
            for (int A = 0; A < 2; ++A)
                for (int B = 0; B < 2; ++B)
                    t.p(a, b, A, B) = QuadVal(
                        j.w[j.flat({static_cast<std::size_t>(a), static_cast<std::size_t>(b),
                                    static_cast<std::size_t>(A), static_cast<std::size_t>(B)})] /
                        den);
        }
    validate_table(t);
    return t;
}

} // namespace hvcheck
